#pragma once

#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "mmtool/curve.hpp"

namespace mmtool {

// W_n^(g) for 2g-2+n > 0 on a one-branch-point curve: a pure polynomial in
// the 1/z_i with even pole orders,
//   W = sum_d  c_d  prod_i z_i^-(2 d_i + 2).
// The exceptional W_2^(0) = 1/(z1-z2)^2 is kept implicit.
struct CorrelatorForm {
    int g = 0;
    int n = 0;
    std::map<std::vector<int>, RatFunc> terms;

    RatFunc coeff(const std::vector<int>& d) const {
        auto it = terms.find(d);
        return it == terms.end() ? RatFunc() : it->second;
    }
    int max_pole_index() const {
        int dmax = 0;
        for (auto& [d, c] : terms)
            for (int di : d) dmax = std::max(dmax, di);
        return dmax;
    }
    bool symmetric() const;
};

// Topological recursion engine with memoization and an on-disk cache of
// Expression JSON payloads keyed by the curve fingerprint.
class Recursion {
  public:
    explicit Recursion(SpectralCurve curve);

    const SpectralCurve& curve() const { return curve_; }

    // 2g-2+n > 0 (plus the implicit (0,2)); throws on a degenerate curve.
    const CorrelatorForm& correlator(int g, int n);

    // F_g for g >= 2: (2-2g) F_g = Res_0 W_1^(g)(z) Phi(z).
    RatFunc free_energy(int g);

    // True t_j-derivative (j = -1 means d/dt) via the residue pairing with
    // the variation fields.
    CorrelatorForm t_derivative(int g, int n, int j);
    RatFunc t_derivative_free_energy(int g, int j);

    // Direct-route derivatives of a coefficient function for cross checks:
    // explicit t_j plus the implicit u0(t; t_j) dependence.
    RatFunc direct_dt(const RatFunc& f) const;
    RatFunc direct_dtj(const RatFunc& f, int j) const;

    // homogeneity residual (2-2g-n) W - sum_j t_j dW/dt_j (direct route)
    CorrelatorForm homogeneity_residual(int g, int n);

  private:
    CorrelatorForm compute(int g, int n);
    SpectralCurve curve_;
    U0Derivation der_;
    LaurentSeries yinv_;  // cached 1/y to a working order
    int yinv_order_ = 0;
    std::map<std::pair<int, int>, CorrelatorForm> memo_;
    std::string fp_;
};

// Loop-equation polynomiality: assemble P_n^(g)(x; J) from x-form correlators
// and check there are no residual z-poles or (z^2 - z_j^2) denominators.
// Returns true when P is a polynomial in x.
bool loop_equation_polynomial(Recursion& rec, int g, int n);

}  // namespace mmtool
