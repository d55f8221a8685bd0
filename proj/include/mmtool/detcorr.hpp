#pragma once

#include <vector>

#include "mmtool/airy.hpp"

namespace mmtool {

// Baker-Akhiezer matrix of the (1,2) model:
//   psi = Ai(X), psit = -Ai'(X), phi = -pi Bi(X), phit = pi Bi'(X),
// X = N^(2/3)(x - t); det Psi = 1 exactly. Plain x-derivatives are exact via
// the Airy ODE.
struct BAMatrix {
    double x, t, N;
    double psi, psit, phi, phit;       // entries
    double dpsi, dpsit, dphi, dphit;   // d/dx
    double d2psi, d2psit, d2phi, d2phit;
    double det() const { return psi * phit - phi * psit; }
};

BAMatrix ba_matrix(double x, double t, double N);

struct KernelSample {
    double x1, x2, t, N;
    double K;
};

KernelSample kernel(double x1, double x2, double t, double N);

// Connected correlators by the cyclic determinantal formula, n <= 4, in the
// convention rescaled so that P_0(x) = 4(x + 2u): every kernel carries 2/N.
double w1(double x, double t, double N);
double w2(double x1, double x2, double t, double N);
double w2_diagonal(double x, double t, double N);  // exact coincident limit
double w3(double x1, double x2, double x3, double t, double N);
double w3_coincident(double x, double x1, double t, double N);  // W3(x,x,x1)
double w4(double x1, double x2, double x3, double x4, double t, double N);
std::vector<double> correlators(const std::vector<double>& points, double t, double N, bool connected);

struct LoopCheckReport {
    double max_residual_P0;
    double max_residual_P1;
    double wronskian_dev;
};

// n=0: max |W2(x,x) + W1^2 - 4(x-t)| over the grid.
// n=1: max |W3(x,x,x1) + 2 W1(x) W2(x,x1) + d/dx1 [(W1(x)-W1(x1))/(x-x1)]|,
//      which vanishes identically for the Airy system.
LoopCheckReport loop_check(int n, const std::vector<double>& grid, double t, double N);

}  // namespace mmtool
