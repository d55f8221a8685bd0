#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mmtool/rational.hpp"

namespace mmtool {

// Monomial in named symbols. Symbols are compared by name, so canonical
// forms do not depend on registration order. Exponent vector kept sorted.
struct Monomial {
    std::vector<std::pair<std::string, int>> factors;  // (name, exp>0), sorted by name

    int degree() const {
        int d = 0;
        for (auto& [n, e] : factors) d += e;
        return d;
    }
    int exponent(const std::string& name) const {
        for (auto& [n, e] : factors)
            if (n == name) return e;
        return 0;
    }
    bool trivial() const { return factors.empty(); }

    friend Monomial operator*(const Monomial& a, const Monomial& b) {
        Monomial r;
        auto ia = a.factors.begin(), ib = b.factors.begin();
        while (ia != a.factors.end() || ib != b.factors.end()) {
            if (ib == b.factors.end() || (ia != a.factors.end() && ia->first < ib->first))
                r.factors.push_back(*ia++);
            else if (ia == a.factors.end() || ib->first < ia->first)
                r.factors.push_back(*ib++);
            else {
                r.factors.emplace_back(ia->first, ia->second + ib->second);
                ++ia, ++ib;
            }
        }
        return r;
    }

    // true if every exponent of d fits under this; quotient returned via q
    bool divisible_by(const Monomial& d, Monomial* q = nullptr) const {
        Monomial out;
        auto it = factors.begin();
        for (auto& [n, e] : d.factors) {
            while (it != factors.end() && it->first < n) out.factors.push_back(*it++);
            if (it == factors.end() || it->first != n || it->second < e) return false;
            if (it->second > e) out.factors.emplace_back(n, it->second - e);
            ++it;
        }
        while (it != factors.end()) out.factors.push_back(*it++);
        if (q) *q = std::move(out);
        return true;
    }

    bool operator==(const Monomial& o) const { return factors == o.factors; }
};

// Graded lexicographic order (total degree first, then lex by symbol name).
struct GrLexLess {
    bool operator()(const Monomial& a, const Monomial& b) const {
        int da = a.degree(), db = b.degree();
        if (da != db) return da < db;
        // lex on the (name, exp) sequence: earlier name with larger exponent is "bigger"
        auto ia = a.factors.begin(), ib = b.factors.begin();
        while (ia != a.factors.end() && ib != b.factors.end()) {
            if (ia->first != ib->first) return ia->first > ib->first;  // later-starting name => smaller
            if (ia->second != ib->second) return ia->second < ib->second;
            ++ia, ++ib;
        }
        return ia == a.factors.end() && ib != b.factors.end();
    }
};

// Sparse multivariate polynomial over Rat, canonical by construction:
// ordered monomial map, no zero coefficients.
class MultiPoly {
  public:
    using Map = std::map<Monomial, Rat, GrLexLess>;

    MultiPoly() = default;
    explicit MultiPoly(const Rat& c) {
        if (!is_zero(c)) terms_[Monomial{}] = c;
    }
    explicit MultiPoly(long c) : MultiPoly(Rat(c)) {}

    static MultiPoly var(const std::string& name, int exp = 1) {
        MultiPoly p;
        if (exp == 0) return MultiPoly(Rat(1));
        Monomial m;
        m.factors.emplace_back(name, exp);
        p.terms_[m] = Rat(1);
        return p;
    }
    static MultiPoly term(const Rat& c, const Monomial& m) {
        MultiPoly p;
        if (!is_zero(c)) p.terms_[m] = c;
        return p;
    }

    const Map& terms() const { return terms_; }
    bool is_zero_poly() const { return terms_.empty(); }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.trivial()); }
    Rat constant_value() const {
        if (terms_.empty()) return Rat(0);
        auto it = terms_.find(Monomial{});
        return it == terms_.end() ? Rat(0) : it->second;
    }
    int total_degree() const {
        int d = -1;
        for (auto& [m, c] : terms_) d = std::max(d, m.degree());
        return d;
    }
    int degree_in(const std::string& name) const {
        int d = 0;
        for (auto& [m, c] : terms_) d = std::max(d, m.exponent(name));
        return d;
    }
    bool depends_on(const std::string& name) const {
        for (auto& [m, c] : terms_)
            if (m.exponent(name) != 0) return true;
        return false;
    }

    // Leading term under graded lex.
    const std::pair<const Monomial, Rat>& leading() const { return *terms_.rbegin(); }

    void add_term(const Monomial& m, const Rat& c) {
        if (is_zero(c)) return;
        auto [it, fresh] = terms_.emplace(m, c);
        if (!fresh) {
            it->second += c;
            if (is_zero(it->second)) terms_.erase(it);
        }
    }

    friend MultiPoly operator+(const MultiPoly& a, const MultiPoly& b) {
        MultiPoly r = a;
        for (auto& [m, c] : b.terms_) r.add_term(m, c);
        return r;
    }
    friend MultiPoly operator-(const MultiPoly& a, const MultiPoly& b) {
        MultiPoly r = a;
        for (auto& [m, c] : b.terms_) r.add_term(m, -c);
        return r;
    }
    friend MultiPoly operator-(const MultiPoly& a) {
        MultiPoly r;
        for (auto& [m, c] : a.terms_) r.terms_[m] = -c;
        return r;
    }
    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
        MultiPoly r;
        for (auto& [ma, ca] : a.terms_)
            for (auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
        return r;
    }
    friend MultiPoly operator*(const MultiPoly& a, const Rat& c) {
        MultiPoly r;
        if (is_zero(c)) return r;
        for (auto& [m, q] : a.terms_) r.terms_[m] = q * c;
        return r;
    }
    friend MultiPoly operator*(const Rat& c, const MultiPoly& a) { return a * c; }
    MultiPoly& operator+=(const MultiPoly& o) { return *this = *this + o; }
    MultiPoly& operator-=(const MultiPoly& o) { return *this = *this - o; }
    MultiPoly& operator*=(const MultiPoly& o) { return *this = *this * o; }

    bool operator==(const MultiPoly& o) const { return terms_ == o.terms_; }

    MultiPoly pow(int e) const {
        if (e < 0) throw std::domain_error("MultiPoly::pow negative");
        MultiPoly r(Rat(1)), b = *this;
        while (e > 0) {
            if (e & 1) r *= b;
            if (e >>= 1) b *= b;
        }
        return r;
    }

    // Exact division; nullopt if not divisible.
    std::optional<MultiPoly> divide_exact(const MultiPoly& d) const {
        if (d.is_zero_poly()) throw std::domain_error("division by zero polynomial");
        MultiPoly rem = *this, quot;
        const auto& dl = d.leading();
        while (!rem.is_zero_poly()) {
            const auto& rl = rem.leading();
            Monomial qm;
            if (!rl.first.divisible_by(dl.first, &qm)) return std::nullopt;
            Rat qc = rl.second / dl.second;
            MultiPoly t = MultiPoly::term(qc, qm);
            quot += t;
            rem -= t * d;
        }
        return quot;
    }

    MultiPoly derivative(const std::string& name) const {
        MultiPoly r;
        for (auto& [m, c] : terms_) {
            int e = m.exponent(name);
            if (e == 0) continue;
            Monomial q;
            Monomial d;
            d.factors.emplace_back(name, 1);
            m.divisible_by(d, &q);
            r.add_term(q, c * e);
        }
        return r;
    }

    // Substitute a polynomial for a symbol.
    MultiPoly substitute(const std::string& name, const MultiPoly& value) const {
        MultiPoly r;
        for (auto& [m, c] : terms_) {
            int e = m.exponent(name);
            Monomial rest;
            if (e > 0) {
                Monomial d;
                d.factors.emplace_back(name, e);
                m.divisible_by(d, &rest);
            } else {
                rest = m;
            }
            r += MultiPoly::term(c, rest) * value.pow(e);
        }
        return r;
    }

    std::vector<std::string> variables() const {
        std::vector<std::string> v;
        for (auto& [m, c] : terms_)
            for (auto& [n, e] : m.factors)
                if (std::find(v.begin(), v.end(), n) == v.end()) v.push_back(n);
        std::sort(v.begin(), v.end());
        return v;
    }

  private:
    Map terms_;
};

}  // namespace mmtool
