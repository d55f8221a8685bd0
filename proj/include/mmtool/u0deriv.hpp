#pragma once

#include <stdexcept>

#include "mmtool/ratfunc.hpp"

namespace mmtool {

// Derivation d/dt on rational functions of u0 induced by the classical
// string polynomial P(u0) = t/4, i.e. du0/dt = 1/(4 P'(u0)).
class U0Derivation {
  public:
    U0Derivation() = default;
    explicit U0Derivation(MultiPoly string_poly) : P_(std::move(string_poly)) {
        Pprime_ = P_.derivative("u0");
        if (Pprime_.is_zero_poly()) throw std::domain_error("U0Derivation: P'(u0) vanishes identically");
        du0dt_ = RatFunc(Rat(1)) / RatFunc(Pprime_ * Rat(4));
    }

    const MultiPoly& string_poly() const { return P_; }
    const MultiPoly& string_poly_prime() const { return Pprime_; }
    const RatFunc& du0_dt() const { return du0dt_; }

    RatFunc ddt(const RatFunc& f) const { return f.derivative("u0") * du0dt_; }

    RatFunc ddt_n(const RatFunc& f, int n) const {
        RatFunc r = f;
        for (int i = 0; i < n; ++i) r = ddt(r);
        return r;
    }

  private:
    MultiPoly P_;
    MultiPoly Pprime_;
    RatFunc du0dt_;
};

}  // namespace mmtool
