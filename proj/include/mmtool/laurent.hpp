#pragma once

#include <climits>
#include <stdexcept>
#include <string>
#include <vector>

#include "mmtool/ratfunc.hpp"

namespace mmtool {

// Thrown when a requested coefficient lies at or beyond the truncation order.
struct InsufficientPrecision : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Truncated Laurent series in one distinguished variable. Coefficients for
// exponents >= ord are unknown; ord == kExact means the series is an exact
// Laurent polynomial. Arithmetic propagates ord conservatively.
class LaurentSeries {
  public:
    static constexpr int kExact = INT_MAX;

    LaurentSeries() : var_("z"), lo_(0), ord_(kExact) {}
    explicit LaurentSeries(std::string var) : var_(std::move(var)), lo_(0), ord_(kExact) {}

    static LaurentSeries zero(const std::string& var, int ord = kExact) {
        LaurentSeries s(var);
        s.ord_ = ord;
        return s;
    }
    static LaurentSeries monomial(const std::string& var, const RatFunc& c, int exp, int ord = kExact) {
        LaurentSeries s(var);
        s.ord_ = ord;
        if (!c.is_zero_fn() && exp < ord) {
            s.lo_ = exp;
            s.coeffs_.push_back(c);
        }
        s.normalize();
        return s;
    }
    static LaurentSeries constant(const std::string& var, const RatFunc& c) {
        return monomial(var, c, 0);
    }

    const std::string& var() const { return var_; }
    int truncation_order() const { return ord_; }
    bool known_zero() const { return coeffs_.empty(); }
    int lowest_exponent() const {
        if (coeffs_.empty()) throw std::domain_error("LaurentSeries: zero series has no valuation");
        return lo_;
    }
    int highest_known() const { return lo_ + static_cast<int>(coeffs_.size()) - 1; }

    // Exact coefficient; throws if the exponent is not resolved.
    RatFunc coeff(int exp) const {
        if (ord_ != kExact && exp >= ord_)
            throw InsufficientPrecision("insufficient precision: coefficient of " + var_ + "^" +
                                        std::to_string(exp) + " beyond truncation order " +
                                        std::to_string(ord_));
        if (coeffs_.empty() || exp < lo_ || exp > highest_known()) return RatFunc();
        return coeffs_[static_cast<size_t>(exp - lo_)];
    }

    void set_coeff(int exp, const RatFunc& c) {
        if (ord_ != kExact && exp >= ord_) throw std::domain_error("set_coeff beyond truncation");
        if (coeffs_.empty()) {
            if (c.is_zero_fn()) return;
            lo_ = exp;
            coeffs_.assign(1, c);
            return;
        }
        if (exp < lo_) {
            coeffs_.insert(coeffs_.begin(), static_cast<size_t>(lo_ - exp), RatFunc());
            lo_ = exp;
        } else if (exp > highest_known()) {
            coeffs_.resize(static_cast<size_t>(exp - lo_ + 1));
        }
        coeffs_[static_cast<size_t>(exp - lo_)] = c;
        normalize();
    }

    LaurentSeries truncated(int ord) const {
        LaurentSeries r = *this;
        if (ord < r.ord_) {
            r.ord_ = ord;
            if (!r.coeffs_.empty() && r.highest_known() >= ord) {
                int keep = ord - r.lo_;
                r.coeffs_.resize(keep > 0 ? static_cast<size_t>(keep) : 0);
            }
            r.normalize();
        }
        return r;
    }

    friend LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b) {
        a.check_var(b);
        LaurentSeries r(a.var_);
        r.ord_ = std::min(a.ord_, b.ord_);
        int lo = std::min(a.coeffs_.empty() ? INT_MAX : a.lo_, b.coeffs_.empty() ? INT_MAX : b.lo_);
        if (lo == INT_MAX) {
            return zero(a.var_, r.ord_);
        }
        int hi = std::max(a.coeffs_.empty() ? INT_MIN : a.highest_known(),
                          b.coeffs_.empty() ? INT_MIN : b.highest_known());
        if (r.ord_ != kExact) hi = std::min(hi, r.ord_ - 1);
        for (int e = lo; e <= hi; ++e) {
            RatFunc c = a.raw(e) + b.raw(e);
            if (!c.is_zero_fn()) r.set_coeff(e, c);
        }
        return r;
    }
    friend LaurentSeries operator-(const LaurentSeries& a) {
        LaurentSeries r = a;
        for (auto& c : r.coeffs_) c = -c;
        return r;
    }
    friend LaurentSeries operator-(const LaurentSeries& a, const LaurentSeries& b) { return a + (-b); }
    friend LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b) {
        a.check_var(b);
        LaurentSeries r(a.var_);
        r.ord_ = mul_order(a, b);
        if (a.coeffs_.empty() || b.coeffs_.empty()) return zero(a.var_, r.ord_);
        int lo = a.lo_ + b.lo_;
        int hi = a.highest_known() + b.highest_known();
        if (r.ord_ != kExact) hi = std::min(hi, r.ord_ - 1);
        std::vector<RatFunc> acc(static_cast<size_t>(std::max(0, hi - lo + 1)));
        for (size_t i = 0; i < a.coeffs_.size(); ++i) {
            if (a.coeffs_[i].is_zero_fn()) continue;
            for (size_t j = 0; j < b.coeffs_.size(); ++j) {
                if (b.coeffs_[j].is_zero_fn()) continue;
                int e = a.lo_ + static_cast<int>(i) + b.lo_ + static_cast<int>(j);
                if (e > hi) continue;
                acc[static_cast<size_t>(e - lo)] += a.coeffs_[i] * b.coeffs_[j];
            }
        }
        r.lo_ = lo;
        r.coeffs_ = std::move(acc);
        r.normalize();
        return r;
    }
    friend LaurentSeries operator*(const LaurentSeries& a, const RatFunc& c) {
        LaurentSeries r = a;
        if (c.is_zero_fn()) {
            r.coeffs_.clear();
            return r;
        }
        for (auto& q : r.coeffs_) q = q * c;
        return r;
    }
    friend LaurentSeries operator*(const RatFunc& c, const LaurentSeries& a) { return a * c; }
    LaurentSeries& operator+=(const LaurentSeries& o) { return *this = *this + o; }
    LaurentSeries& operator-=(const LaurentSeries& o) { return *this = *this - o; }
    LaurentSeries& operator*=(const LaurentSeries& o) { return *this = *this * o; }

    LaurentSeries shifted(int k) const {  // multiply by var^k
        LaurentSeries r = *this;
        r.lo_ += k;
        if (r.ord_ != kExact) r.ord_ += k;
        return r;
    }

    // z -> -z
    LaurentSeries negated_var() const {
        LaurentSeries r = *this;
        for (size_t i = 0; i < r.coeffs_.size(); ++i) {
            int e = r.lo_ + static_cast<int>(i);
            if (e & 1) r.coeffs_[i] = -r.coeffs_[i];
        }
        return r;
    }

    LaurentSeries derivative() const {  // d/dvar
        LaurentSeries r(var_);
        r.ord_ = ord_ == kExact ? kExact : ord_ - 1;
        for (size_t i = 0; i < coeffs_.size(); ++i) {
            int e = lo_ + static_cast<int>(i);
            if (e == 0 || coeffs_[i].is_zero_fn()) continue;
            if (r.ord_ != kExact && e - 1 >= r.ord_) continue;
            r.set_coeff(e - 1, coeffs_[i] * Rat(e));
        }
        return r;
    }

    // Multiplicative inverse as a series to the requested truncation order.
    LaurentSeries inverted(int order) const {
        if (coeffs_.empty()) throw std::domain_error("series_invert: zero series");
        int v = lo_;
        while (v <= highest_known() && raw(v).is_zero_fn()) ++v;
        if (v > highest_known()) throw std::domain_error("series_invert: zero series");
        // f = var^v * u, u(0) != 0. Invert the unit by recursion.
        int need = order + v;  // coefficients of 1/u wanted up to exponent order+v-1
        if (ord_ != kExact && v + need > ord_)
            throw InsufficientPrecision("series_invert: input truncation too low");
        RatFunc u0 = raw(v);
        RatFunc u0inv = u0.inverse();
        std::vector<RatFunc> inv(static_cast<size_t>(std::max(1, need)));
        inv[0] = u0inv;
        for (int k = 1; k < need; ++k) {
            RatFunc s;
            for (int j = 1; j <= k; ++j) {
                RatFunc uj = raw(v + j);
                if (uj.is_zero_fn()) continue;
                s += uj * inv[static_cast<size_t>(k - j)];
            }
            inv[static_cast<size_t>(k)] = -(u0inv * s);
        }
        LaurentSeries r(var_);
        r.ord_ = order;
        for (int k = 0; k < need; ++k) {
            if (-v + k >= order) break;
            if (!inv[static_cast<size_t>(k)].is_zero_fn()) r.set_coeff(-v + k, inv[static_cast<size_t>(k)]);
        }
        if (r.coeffs_.empty()) r.ord_ = order;
        return r;
    }

    // log(s) for s = 1 + higher-order terms, to the series' own truncation.
    LaurentSeries log1_series(int order) const {
        if (coeffs_.empty() || lo_ != 0 || !(raw(0) == RatFunc(Rat(1))))
            throw std::domain_error("log1_series: constant term must be 1");
        LaurentSeries w = truncated(order) - constant(var_, RatFunc(Rat(1)));  // w = s-1, positive order
        LaurentSeries acc = zero(var_, order), p = w;
        int k = 1;
        while (!p.known_zero() && p.lowest_exponent() < order) {
            acc += p * RatFunc(Rat((k % 2 == 1) ? 1 : -1, k));
            p = (p * w).truncated(order);
            ++k;
        }
        acc.ord_ = order;
        return acc;
    }

    LaurentSeries exp_series(int order) const {
        if (!coeffs_.empty() && lo_ <= 0)
            throw std::domain_error("exp_series: argument must have positive valuation");
        LaurentSeries acc = constant(var_, RatFunc(Rat(1))).truncated(order);
        LaurentSeries p = truncated(order);
        Rat fact(1);
        int k = 1;
        LaurentSeries pw = p;
        while (!pw.known_zero() && pw.lowest_exponent() < order) {
            fact *= k;
            acc += pw * RatFunc(Rat(1) / fact);
            pw = (pw * p).truncated(order);
            ++k;
        }
        acc.ord_ = order;
        return acc;
    }

    // Residue at var = 0: the coefficient of var^-1, with an explicit
    // precision check (never a silent zero).
    RatFunc residue() const { return coeff(-1); }

    bool operator==(const LaurentSeries& o) const {
        if (var_ != o.var_) return false;
        int lo = std::min(coeffs_.empty() ? 0 : lo_, o.coeffs_.empty() ? 0 : o.lo_);
        int hi = std::max(coeffs_.empty() ? -1 : highest_known(), o.coeffs_.empty() ? -1 : o.highest_known());
        for (int e = lo; e <= hi; ++e)
            if (!(raw(e) == o.raw(e))) return false;
        return true;
    }

    // Unchecked coefficient (zero outside stored window); internal use and printing.
    RatFunc raw(int exp) const {
        if (coeffs_.empty() || exp < lo_ || exp > highest_known()) return RatFunc();
        return coeffs_[static_cast<size_t>(exp - lo_)];
    }

  private:
    void check_var(const LaurentSeries& o) const {
        if (var_ != o.var_) throw std::domain_error("LaurentSeries: variable mismatch");
    }
    static int mul_order(const LaurentSeries& a, const LaurentSeries& b) {
        if (a.ord_ == kExact && b.ord_ == kExact) return kExact;
        int best = INT_MAX;
        if (b.ord_ != kExact) best = std::min(best, (a.coeffs_.empty() ? 0 : a.lo_) + b.ord_);
        if (a.ord_ != kExact) best = std::min(best, (b.coeffs_.empty() ? 0 : b.lo_) + a.ord_);
        return best;
    }
    void normalize() {
        size_t lead = 0;
        while (lead < coeffs_.size() && coeffs_[lead].is_zero_fn()) ++lead;
        if (lead > 0) {
            coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<long>(lead));
            lo_ += static_cast<int>(lead);
        }
        while (!coeffs_.empty() && coeffs_.back().is_zero_fn()) coeffs_.pop_back();
        if (coeffs_.empty()) lo_ = 0;
    }

    std::string var_;
    int lo_;
    std::vector<RatFunc> coeffs_;
    int ord_;
};

}  // namespace mmtool
