#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mmtool/multipoly.hpp"

namespace mmtool {

// Rational function num / prod(factor_i^exp_i). Denominator factors are kept
// monic under the graded-lex order and sorted, so the reduced form is
// canonical given the factor split. Cancellation is by exact trial division
// against each factor; all denominators that arise in this toolkit are
// products of known small polynomials, so no general multivariate gcd is
// needed.
class RatFunc {
  public:
    struct Factor {
        MultiPoly base;  // monic, non-constant
        int exp;         // > 0
    };

    RatFunc() = default;
    explicit RatFunc(const Rat& c) : num_(c) {}
    explicit RatFunc(long c) : num_(Rat(c)) {}
    explicit RatFunc(MultiPoly p) : num_(std::move(p)) {}
    RatFunc(MultiPoly n, MultiPoly d) : num_(std::move(n)) { divide_by_poly(d); }

    static RatFunc var(const std::string& name, int exp = 1) {
        if (exp >= 0) return RatFunc(MultiPoly::var(name, exp));
        RatFunc r(Rat(1));
        r.divide_by_poly(MultiPoly::var(name, -exp));
        return r;
    }

    const MultiPoly& num() const { return num_; }
    const std::vector<Factor>& den_factors() const { return den_; }

    bool is_zero_fn() const { return num_.is_zero_poly(); }
    bool is_polynomial() const { return den_.empty(); }
    bool is_constant() const { return den_.empty() && num_.is_constant(); }
    Rat constant_value() const {
        if (!is_constant()) throw std::domain_error("RatFunc: not a constant");
        return num_.constant_value();
    }

    MultiPoly den_expanded() const {
        MultiPoly d(Rat(1));
        for (auto& f : den_) d *= f.base.pow(f.exp);
        return d;
    }

    friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
        if (a.is_zero_fn()) return b;
        if (b.is_zero_fn()) return a;
        RatFunc r;
        // union of factors with max exponents
        r.den_ = a.den_;
        for (auto& f : b.den_) {
            auto* g = r.find_factor(f.base);
            if (g)
                g->exp = std::max(g->exp, f.exp);
            else
                r.den_.push_back(f);
        }
        MultiPoly ma(Rat(1)), mb(Rat(1));
        for (auto& f : r.den_) {
            int ea = f.exp - a.exponent_of(f.base);
            int eb = f.exp - b.exponent_of(f.base);
            if (ea) ma *= f.base.pow(ea);
            if (eb) mb *= f.base.pow(eb);
        }
        r.num_ = a.num_ * ma + b.num_ * mb;
        r.cancel();
        return r;
    }
    friend RatFunc operator-(const RatFunc& a) {
        RatFunc r = a;
        r.num_ = -r.num_;
        return r;
    }
    friend RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }
    friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
        if (a.is_zero_fn() || b.is_zero_fn()) return RatFunc();
        RatFunc r;
        r.num_ = a.num_ * b.num_;
        r.den_ = a.den_;
        for (auto& f : b.den_) {
            auto* g = r.find_factor(f.base);
            if (g)
                g->exp += f.exp;
            else
                r.den_.push_back(f);
        }
        r.cancel();
        return r;
    }
    friend RatFunc operator*(const RatFunc& a, const Rat& c) {
        if (is_zero(c)) return RatFunc();
        RatFunc r = a;
        r.num_ = r.num_ * c;
        return r;
    }
    friend RatFunc operator*(const Rat& c, const RatFunc& a) { return a * c; }
    friend RatFunc operator/(const RatFunc& a, const RatFunc& b) { return a * b.inverse(); }
    RatFunc& operator+=(const RatFunc& o) { return *this = *this + o; }
    RatFunc& operator-=(const RatFunc& o) { return *this = *this - o; }
    RatFunc& operator*=(const RatFunc& o) { return *this = *this * o; }
    RatFunc& operator/=(const RatFunc& o) { return *this = *this / o; }

    RatFunc inverse() const {
        if (is_zero_fn()) throw std::domain_error("RatFunc: inverse of zero");
        RatFunc r;
        r.num_ = den_expanded();
        r.divide_by_poly(num_);
        return r;
    }

    RatFunc pow(int e) const {
        if (e < 0) return inverse().pow(-e);
        RatFunc r(Rat(1)), b = *this;
        while (e > 0) {
            if (e & 1) r *= b;
            if (e >>= 1) b *= b;
        }
        return r;
    }

    // Value equality via cross multiplication.
    bool operator==(const RatFunc& o) const {
        if (num_.is_zero_poly()) return o.num_.is_zero_poly();
        return num_ * o.den_expanded() == o.num_ * den_expanded();
    }
    bool operator!=(const RatFunc& o) const { return !(*this == o); }

    RatFunc derivative(const std::string& name) const {
        // d(n/D) = n'/D - n * sum_i e_i f_i'/ (D f_i)
        RatFunc r;
        r.num_ = num_.derivative(name);
        r.den_ = den_;
        r.cancel();
        for (auto& f : den_) {
            MultiPoly fp = f.base.derivative(name);
            if (fp.is_zero_poly()) continue;
            RatFunc piece;
            piece.num_ = num_ * fp * Rat(-f.exp);
            piece.den_ = den_;
            auto* g = piece.find_factor(f.base);
            g->exp += 1;
            piece.cancel();
            r += piece;
        }
        return r;
    }

    RatFunc substitute(const std::string& name, const RatFunc& value) const {
        RatFunc r(num_sub(num_, name, value));
        for (auto& f : den_) {
            RatFunc fs = num_sub(f.base, name, value);
            for (int e = 0; e < f.exp; ++e) r /= fs;  // keep factors fine-grained
        }
        return r;
    }

    std::vector<std::string> variables() const {
        std::vector<std::string> v = num_.variables();
        for (auto& f : den_)
            for (auto& n : f.base.variables())
                if (std::find(v.begin(), v.end(), n) == v.end()) v.push_back(n);
        std::sort(v.begin(), v.end());
        return v;
    }

    bool depends_on(const std::string& name) const {
        if (num_.depends_on(name)) return true;
        for (auto& f : den_)
            if (f.base.depends_on(name)) return true;
        return false;
    }

    int exponent_of(const MultiPoly& base) const {
        for (auto& f : den_)
            if (f.base == base) return f.exp;
        return 0;
    }

    // Append a polynomial divisor (splits off scalar, makes factor monic).
    // A monomial divisor is split into per-symbol factors so later
    // cancellation can proceed one power at a time.
    void divide_by_poly(const MultiPoly& p) {
        if (p.is_zero_poly()) throw std::domain_error("RatFunc: division by zero");
        if (p.is_constant()) {
            num_ = num_ * (Rat(1) / p.constant_value());
            return;
        }
        if (p.terms().size() == 1) {
            auto& [mono, c] = *p.terms().begin();
            num_ = num_ * (Rat(1) / c);
            for (auto& [name, e] : mono.factors) {
                MultiPoly v = MultiPoly::var(name);
                auto* g = find_factor(v);
                if (g)
                    g->exp += e;
                else
                    den_.push_back(Factor{v, e});
            }
            cancel();
            return;
        }
        Rat lc = p.leading().second;
        MultiPoly monic = p * (Rat(1) / lc);
        num_ = num_ * (Rat(1) / lc);
        auto* g = find_factor(monic);
        if (g)
            g->exp += 1;
        else
            den_.push_back(Factor{monic, 1});
        cancel();
    }

  private:
    static RatFunc num_sub(const MultiPoly& p, const std::string& name, const RatFunc& value) {
        RatFunc acc;
        for (auto& [m, c] : p.terms()) {
            int e = m.exponent(name);
            Monomial rest = m;
            if (e > 0) {
                Monomial d;
                d.factors.emplace_back(name, e);
                m.divisible_by(d, &rest);
            }
            acc += RatFunc(MultiPoly::term(c, rest)) * value.pow(e);
        }
        return acc;
    }

    Factor* find_factor(const MultiPoly& base) {
        for (auto& f : den_)
            if (f.base == base) return &f;
        return nullptr;
    }

    void cancel() {
        if (num_.is_zero_poly()) {
            den_.clear();
            return;
        }
        for (auto& f : den_) {
            while (f.exp > 0) {
                auto q = num_.divide_exact(f.base);
                if (!q) break;
                num_ = std::move(*q);
                --f.exp;
            }
        }
        den_.erase(std::remove_if(den_.begin(), den_.end(), [](const Factor& f) { return f.exp == 0; }),
                   den_.end());
        std::sort(den_.begin(), den_.end(), [](const Factor& a, const Factor& b) {
            GrLexLess less;
            if (a.base.terms().size() != b.base.terms().size())
                return a.base.terms().size() < b.base.terms().size();
            auto ia = a.base.terms().begin(), ib = b.base.terms().begin();
            for (; ia != a.base.terms().end() && ib != b.base.terms().end(); ++ia, ++ib) {
                if (less(ia->first, ib->first)) return true;
                if (less(ib->first, ia->first)) return false;
                if (ia->second != ib->second) return ia->second < ib->second;
            }
            return false;
        });
    }

    MultiPoly num_;
    std::vector<Factor> den_;
};

}  // namespace mmtool
