#pragma once

#include <vector>

#include "mmtool/diffpoly.hpp"

namespace mmtool {

// Differential operator sum_i a_i d^i with d = (1/N) d/dt and a_i DiffPoly.
class DiffOperator {
  public:
    DiffOperator() = default;
    explicit DiffOperator(std::vector<DiffPoly> coeffs) : c_(std::move(coeffs)) { trim(); }

    static DiffOperator d_power(int k) {
        std::vector<DiffPoly> c(static_cast<size_t>(k) + 1);
        c[static_cast<size_t>(k)] = DiffPoly(Rat(1));
        return DiffOperator(std::move(c));
    }
    static DiffOperator multiplication(const DiffPoly& a) { return DiffOperator({a}); }

    int order() const { return static_cast<int>(c_.size()) - 1; }
    const DiffPoly& coeff(int i) const {
        static const DiffPoly zero;
        return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[static_cast<size_t>(i)] : zero;
    }
    void set_coeff(int i, const DiffPoly& p) {
        if (i >= static_cast<int>(c_.size())) c_.resize(static_cast<size_t>(i) + 1);
        c_[static_cast<size_t>(i)] = p;
        trim();
    }
    bool is_zero_op() const { return c_.empty(); }

    friend DiffOperator operator+(const DiffOperator& a, const DiffOperator& b) {
        std::vector<DiffPoly> c(std::max(a.c_.size(), b.c_.size()));
        for (size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(static_cast<int>(i)) + b.coeff(static_cast<int>(i));
        return DiffOperator(std::move(c));
    }
    friend DiffOperator operator-(const DiffOperator& a, const DiffOperator& b) {
        std::vector<DiffPoly> c(std::max(a.c_.size(), b.c_.size()));
        for (size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(static_cast<int>(i)) - b.coeff(static_cast<int>(i));
        return DiffOperator(std::move(c));
    }
    friend DiffOperator operator*(const DiffOperator& a, const Rat& q) {
        std::vector<DiffPoly> c(a.c_.size());
        for (size_t i = 0; i < c.size(); ++i) c[i] = a.c_[i] * q;
        return DiffOperator(std::move(c));
    }

    // Composition: d^i (b f) expands by Leibniz, each d/dt paired with 1/N.
    friend DiffOperator operator*(const DiffOperator& a, const DiffOperator& b) {
        DiffOperator r;
        for (int i = 0; i <= a.order(); ++i) {
            const DiffPoly& ai = a.coeff(i);
            if (ai.is_zero_poly()) continue;
            for (int j = 0; j <= b.order(); ++j) {
                const DiffPoly& bj = b.coeff(j);
                if (bj.is_zero_poly()) continue;
                DiffPoly der = bj;  // (1/N d/dt)^k applied to bj
                for (int k = 0; k <= i; ++k) {
                    DiffPoly term = der * rat_binomial(i, k);
                    DiffPoly cur = ai * term;
                    int ord = i - k + j;
                    r.set_coeff(ord, r.coeff(ord) + cur);
                    if (k < i) der = der.diff_t_over_N();
                }
            }
        }
        return r;
    }

    friend DiffOperator commutator(const DiffOperator& a, const DiffOperator& b) { return a * b - b * a; }

    DiffOperator pow(int e) const {
        DiffOperator r = DiffOperator::multiplication(DiffPoly(Rat(1)));
        DiffOperator b = *this;
        while (e > 0) {
            if (e & 1) r = r * b;
            if (e >>= 1) b = b * b;
        }
        return r;
    }

    bool operator==(const DiffOperator& o) const {
        int n = std::max(order(), o.order());
        for (int i = 0; i <= n; ++i)
            if (!(coeff(i) == o.coeff(i))) return false;
        return true;
    }

  private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero_poly()) c_.pop_back();
    }
    std::vector<DiffPoly> c_;
};

}  // namespace mmtool
