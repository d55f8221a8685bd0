#pragma once

#include <string>
#include <vector>

#include "mmtool/kdv.hpp"
#include "mmtool/laurent.hpp"
#include "mmtool/u0deriv.hpp"

namespace mmtool {

// Classical spectral curve of the (2m+1,2) minimal model:
//   x(z) = z^2 - 2 u0,  y(z) = sum_k ycoef[k] z^(2k+1)
// with ycoef[k] rational in (u0, t_j). The same container also carries the
// Kontsevich curve (x = z^2, y = z - 1/2 sum tau_{j+2} z^j), which shares the
// involution z -> -z and the branch point z = 0.
struct SpectralCurve {
    enum class Family { MinimalModel, Kontsevich };
    Family family = Family::MinimalModel;
    int m = 0;
    Times times;                 // MinimalModel only
    MultiPoly classical_poly_P;  // MinimalModel only
    std::vector<RatFunc> ycoef;  // coefficient of z^(2k+1), k = 0..m

    const RatFunc& yprime0() const { return ycoef.at(0); }
    RatFunc y3rd0() const {  // y'''(0) = 6 ycoef[1]
        return ycoef.size() > 1 ? ycoef[1] * Rat(6) : RatFunc();
    }
    U0Derivation derivation() const { return U0Derivation(classical_poly_P); }
    LaurentSeries y_series(const std::string& var = "z") const;
    std::string fingerprint() const;
};

SpectralCurve minimal_curve(int m, const Times& times);

// Kontsevich curve from odd times tau_3, tau_5, ... (tau[k] = tau_{2k+3}).
SpectralCurve kontsevich_curve(const std::vector<RatFunc>& tau);

// Lambda_j derivative fields, odd polynomials; j >= 0 per the printed
// formula, j = -1 returns -2 u0dot y(z).
struct LambdaField {
    int j;
    std::vector<RatFunc> coef;  // coefficient of z^(2k+1)
    RatFunc prime0() const { return coef.at(0); }
};

LambdaField lambda_field(const SpectralCurve& curve, int j);

// Phi with Phi' = y x' = 2 z y: Phi = sum_j t_j Lambda_j.
LambdaField phi_field(const SpectralCurve& curve);

}  // namespace mmtool
