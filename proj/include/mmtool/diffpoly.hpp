#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mmtool/ratfunc.hpp"

namespace mmtool {

// Monomial prod_i (u^(i))^[a_i] * (1/N)^nu. u^(i) is the plain i-th
// t-derivative of u. nu tracks the power of 1/N; even powers render as
// eps^(nu/2) with eps = N^-2. In operator coefficients nu can be odd.
struct DMonomial {
    std::vector<std::pair<int, int>> derivs;  // (deriv index, exp>0), sorted by index
    int nu = 0;

    int exponent(int idx) const {
        for (auto& [i, e] : derivs)
            if (i == idx) return e;
        return 0;
    }
    int max_deriv() const { return derivs.empty() ? -1 : derivs.back().first; }
    int total_u_power() const {
        int s = 0;
        for (auto& [i, e] : derivs) s += e;
        return s;
    }
    int deriv_count() const {
        int s = 0;
        for (auto& [i, e] : derivs) s += i * e;
        return s;
    }
    bool trivial() const { return derivs.empty() && nu == 0; }

    friend DMonomial operator*(const DMonomial& a, const DMonomial& b) {
        DMonomial r;
        r.nu = a.nu + b.nu;
        auto ia = a.derivs.begin(), ib = b.derivs.begin();
        while (ia != a.derivs.end() || ib != b.derivs.end()) {
            if (ib == b.derivs.end() || (ia != a.derivs.end() && ia->first < ib->first))
                r.derivs.push_back(*ia++);
            else if (ia == a.derivs.end() || ib->first < ia->first)
                r.derivs.push_back(*ib++);
            else {
                r.derivs.emplace_back(ia->first, ia->second + ib->second);
                ++ia, ++ib;
            }
        }
        return r;
    }
    bool operator==(const DMonomial& o) const { return derivs == o.derivs && nu == o.nu; }
};

// Order by derivative content from the highest index down; used both for the
// canonical map and for the integration algorithm's leading terms.
struct DMonLess {
    bool operator()(const DMonomial& a, const DMonomial& b) const {
        int ka = a.max_deriv(), kb = b.max_deriv();
        int k = std::max(ka, kb);
        for (int i = k; i >= 0; --i) {
            int ea = a.exponent(i), eb = b.exponent(i);
            if (ea != eb) return ea < eb;
        }
        return a.nu < b.nu;
    }
};

class DiffPoly {
  public:
    using Map = std::map<DMonomial, RatFunc, DMonLess>;

    DiffPoly() = default;
    explicit DiffPoly(const Rat& c) {
        if (!is_zero(c)) terms_[DMonomial{}] = RatFunc(c);
    }
    explicit DiffPoly(long c) : DiffPoly(Rat(c)) {}
    explicit DiffPoly(const RatFunc& c) {
        if (!c.is_zero_fn()) terms_[DMonomial{}] = c;
    }

    static DiffPoly u_deriv(int idx, int exp = 1) {
        DiffPoly p;
        DMonomial m;
        if (exp != 0) m.derivs.emplace_back(idx, exp);
        p.terms_[m] = RatFunc(Rat(1));
        return p;
    }
    static DiffPoly u() { return u_deriv(0); }

    const Map& terms() const { return terms_; }
    bool is_zero_poly() const { return terms_.empty(); }
    bool operator==(const DiffPoly& o) const {
        if (terms_.size() != o.terms_.size()) return false;
        auto ia = terms_.begin(), ib = o.terms_.begin();
        for (; ia != terms_.end(); ++ia, ++ib) {
            if (!(ia->first == ib->first) || !(ia->second == ib->second)) return false;
        }
        return true;
    }

    void add_term(const DMonomial& m, const RatFunc& c) {
        if (c.is_zero_fn()) return;
        auto [it, fresh] = terms_.emplace(m, c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero_fn()) terms_.erase(it);
        }
    }

    friend DiffPoly operator+(const DiffPoly& a, const DiffPoly& b) {
        DiffPoly r = a;
        for (auto& [m, c] : b.terms_) r.add_term(m, c);
        return r;
    }
    friend DiffPoly operator-(const DiffPoly& a, const DiffPoly& b) {
        DiffPoly r = a;
        for (auto& [m, c] : b.terms_) r.add_term(m, -c);
        return r;
    }
    friend DiffPoly operator-(const DiffPoly& a) {
        DiffPoly r;
        for (auto& [m, c] : a.terms_) r.terms_[m] = -c;
        return r;
    }
    friend DiffPoly operator*(const DiffPoly& a, const DiffPoly& b) {
        DiffPoly r;
        for (auto& [ma, ca] : a.terms_)
            for (auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
        return r;
    }
    friend DiffPoly operator*(const DiffPoly& a, const RatFunc& c) {
        DiffPoly r;
        if (c.is_zero_fn()) return r;
        for (auto& [m, q] : a.terms_) r.terms_[m] = q * c;
        return r;
    }
    friend DiffPoly operator*(const DiffPoly& a, const Rat& c) { return a * RatFunc(c); }
    friend DiffPoly operator*(const Rat& c, const DiffPoly& a) { return a * RatFunc(c); }
    DiffPoly& operator+=(const DiffPoly& o) { return *this = *this + o; }
    DiffPoly& operator-=(const DiffPoly& o) { return *this = *this - o; }
    DiffPoly& operator*=(const DiffPoly& o) { return *this = *this * o; }

    DiffPoly pow(int e) const {
        DiffPoly r(Rat(1)), b = *this;
        while (e > 0) {
            if (e & 1) r *= b;
            if (e >>= 1) b *= b;
        }
        return r;
    }

    // Multiply by (1/N)^k (k=2 per power of eps).
    DiffPoly shifted_nu(int k) const {
        DiffPoly r;
        for (auto& [m, c] : terms_) {
            DMonomial n = m;
            n.nu += k;
            if (n.nu < 0) throw std::domain_error("negative power of 1/N");
            r.terms_[n] = c;
        }
        return r;
    }
    DiffPoly times_eps(int k = 1) const { return shifted_nu(2 * k); }

    // Plain d/dt: Leibniz on the u-derivative factors plus d/dt of any
    // explicit t in the coefficients.
    DiffPoly diff_t() const {
        DiffPoly r;
        for (auto& [m, c] : terms_) {
            for (size_t f = 0; f < m.derivs.size(); ++f) {
                auto [idx, e] = m.derivs[f];
                DMonomial n = m;
                if (e == 1)
                    n.derivs.erase(n.derivs.begin() + static_cast<long>(f));
                else
                    n.derivs[f].second -= 1;
                DMonomial bump;
                bump.derivs.emplace_back(idx + 1, 1);
                r.add_term(n * bump, c * Rat(e));
            }
            RatFunc ct = c.derivative("t");
            if (!ct.is_zero_fn()) r.add_term(m, ct);
        }
        return r;
    }

    // (1/N) d/dt, the operator-side derivation.
    DiffPoly diff_t_over_N() const { return diff_t().shifted_nu(1); }

    DiffPoly diff_t_n(int n) const {
        DiffPoly r = *this;
        for (int i = 0; i < n; ++i) r = r.diff_t();
        return r;
    }

    // Value at u == 0 (keeps coefficient/nu structure of the constant part).
    DiffPoly at_u_zero() const {
        DiffPoly r;
        for (auto& [m, c] : terms_)
            if (m.derivs.empty()) r.add_term(m, c);
        return r;
    }

    // Every monomial obeys nu == number of derivative strokes (the paper's
    // d = (1/N) d/dt bookkeeping).
    bool nu_matches_derivative_count() const {
        for (auto& [m, c] : terms_)
            if (m.nu != m.deriv_count()) return false;
        return true;
    }

    // Weight under u -> L u, eps -> L eps (nu counts eps = nu/2); -1 if mixed.
    int homogeneous_weight() const {
        int w = -1;
        for (auto& [m, c] : terms_) {
            if (m.nu % 2) return -1;
            int mw = m.total_u_power() + m.nu / 2;
            if (w == -1)
                w = mw;
            else if (w != mw)
                return -1;
        }
        return w;
    }

    RatFunc coeff(const DMonomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? RatFunc() : it->second;
    }

  private:
    Map terms_;
};

// Antiderivative q with diff_t(q) = p and q(u==0) = 0. Throws with the
// non-integrable remainder's description when p is not a total derivative.
DiffPoly integrate_total_derivative(const DiffPoly& p);

std::string diffpoly_to_string(const DiffPoly& p, bool show_nu_as_eps = true);

}  // namespace mmtool
