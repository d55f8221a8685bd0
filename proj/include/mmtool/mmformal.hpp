#pragma once

#include <map>
#include <string>
#include <vector>

#include "mmtool/laurent.hpp"
#include "mmtool/ratfunc.hpp"

namespace mmtool {

// Potential data: V(x) = x^2/(2s) - (1/s) sum_{j=3}^{d+1} s_j x^j / j.
struct FormalPotential {
    int d = 3;                  // top power of x in s V'(x) = x - sum s_{j+1} x^j
    std::map<int, RatFunc> s;   // s_j, j = 3..d+1 (symbols or numbers)
    RatFunc coeff(int j) const {
        auto it = s.find(j);
        return it == s.end() ? RatFunc() : it->second;
    }
};

// One-cut curve solved as truncated power series in the temperature s:
//   xhat = alpha + gamma (z + 1/z),  yhat = sum v_k (z^k - z^-k),
// stored with gamma-parity removed: G = gamma^2 and vhat_k = v_k / gamma^(k mod 2).
struct MMCurveSeries {
    int d;
    int order;                       // series truncated at O(s^order)
    LaurentSeries alpha;             // series in s
    LaurentSeries G;                 // gamma^2 as a series in s
    std::vector<LaurentSeries> vhat; // index k = 1..d
};

MMCurveSeries solve_curve(const FormalPotential& pot, int order);

// Exact quadrangulation data over Q(G, s4) with s = G - 3 s4 G^2 eliminated.
struct QuadCurve {
    RatFunc G;      // the symbol gamma^2
    RatFunc s4;     // the symbol s4
    RatFunc s;      // G - 3 s4 G^2
    RatFunc vhat1;  // v_1/gamma = 1 - 3 s4 G
    RatFunc vhat3;  // v_3/gamma = -s4 G
};

QuadCurve quad_curve();

// Closed-form free energies; log-bearing pieces split out.
struct ClosedForm {
    RatFunc rational;
    RatFunc log_coeff;
    RatFunc log_arg;
};

ClosedForm quad_closed_form(int g);

// Topological recursion on the quadrangulation curve (branch points z = ±1,
// involution z -> 1/z), exact over Q(G, s4). Points are the symbols p1..pn.
RatFunc formal_correlator(int g, int n);

// Free energy for g >= 2 via the residue formula at both branch points.
RatFunc formal_free_energy(int g);

// Chebyshev-type critical potential data for the (2m+1,2) point.
struct CriticalPotential {
    int m;
    std::vector<Rat> Tdiff;  // coefficients of T_{m+1}(w) - T_m(w)
    double alpha;            // root of T_{m+1}(-a) = T_m(-a) with -a-2 != 0
    double s_c;              // printed normalization (-a-2)^m (T'_{m+1} - T'_m)(-a)
};

CriticalPotential critical_potential(int m);

// Double-scaling comparison report for quadrangulations (m = 1).
struct DScaleReport {
    double exponent_fit;   // fitted power of (s_c - s) in fhat_2
    double prefactor;      // Richardson-extrapolated fhat_2 (s_c-s)^{5/2}
    double reference;      // F_2 of the limit curve built from c0, c1
    double rel_error;
    double c0, c1;
};

DScaleReport double_scaling_check(int g, double s4, const std::vector<double>& s_sequence);

// helpers shared with tests
double ratfunc_eval(const RatFunc& f, const std::map<std::string, double>& point);
RatFunc ratfunc_residue_at(const RatFunc& f, const std::string& var, const Rat& a);

}  // namespace mmtool
