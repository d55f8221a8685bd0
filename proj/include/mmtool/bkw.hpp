#pragma once

#include <vector>

#include "mmtool/kdv.hpp"
#include "mmtool/laurent.hpp"

namespace mmtool {

// The 1/N expansion of the auxiliary function f in the wave-function ansatz
// psi = sqrt(f) exp(int dt/f):
//   f = -(1/N) z^-1 (1 + sum_k eps^k f_k),  z = sqrt(x + 2 u0(t)),
// each f_k a polynomial in 1/z with coefficients rational in u0, t_j.
struct BkwExpansion {
    int m;
    int kmax;
    std::vector<LaurentSeries> f;  // f[k], k = 1..kmax stored at indices 1..
};

// Solves the third-order linear equation (x+2u) fdot + udot f = (eps/2) fddot
// order by order in eps, using zdot = u0dot/z and the u-expansion.
BkwExpansion bkw_expansion(int m, const Times& times, int kmax);

// Residual of the nonlinear relation N^2 (x+2u) f^2 = (1/2) f fddot
// - (1/4) fdot^2 + 1 through eps^kmax; the independent oracle. Entries are
// the eps^k coefficients as Laurent series in z (all must vanish).
std::vector<LaurentSeries> bkw_nonlinear_residual(const BkwExpansion& bk, const Times& times);

}  // namespace mmtool
