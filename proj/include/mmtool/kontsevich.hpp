#pragma once

#include <vector>

#include "mmtool/curve.hpp"
#include "mmtool/laurent.hpp"

namespace mmtool {

// tau_{2k+3} as rational functions of (u0, t_j); tau_1 = 0 by construction.
struct KontsevichTimes {
    int m;
    std::vector<RatFunc> tau;  // tau[k] = tau_{2k+3}, k = 0..m
};

KontsevichTimes kontsevich_times(int m, const Times& times);

// Dual times: coefficients of gtilde(r) = -ln(1 - g(r)).
struct DualTimes {
    int kmax;
    std::vector<RatFunc> tau_tilde;  // index k >= 1; [0] unused
    LaurentSeries one_minus_g;       // the series 1 - g(r), exact
};

DualTimes dual_times(int m, const Times& times, int kmax);

struct IntersectionNumber {
    int g;
    std::vector<int> degrees;
    Rat value;
    bool dimension_ok;  // sum d_i == 3g - 3 + n
};

// Reads <prod psi^{d_i}> off the Airy-point correlator coefficients.
IntersectionNumber psi_intersection(int g, const std::vector<int>& degrees);

// Independent Virasoro/DVV recursion with string and dilaton equations,
// bases <tau_0^3>_0 = 1 and <tau_1>_1 = 1/24 (the L_0 central term).
IntersectionNumber dvv_oracle(int g, const std::vector<int>& degrees);

}  // namespace mmtool
