#pragma once

#include <array>
#include <string>
#include <vector>

#include "mmtool/diffop.hpp"
#include "mmtool/diffpoly.hpp"
#include "mmtool/u0deriv.hpp"

namespace mmtool {

// Times t_0..t_m with t_m = 1. Entries are rational functions so the times
// can be left symbolic (t_j symbols) or pinned to numbers.
struct Times {
    int m = 0;
    std::vector<RatFunc> t;  // size m+1, t[m] == 1

    static Times symbolic(int m);
    static Times fully_symbolic(int m);
    static Times numeric(int m, const std::vector<Rat>& values);
    const RatFunc& operator[](int j) const { return t.at(static_cast<size_t>(j)); }
};

// Gelfand-Dikii differential polynomials R_0..R_jmax.
class GDSequence {
  public:
    explicit GDSequence(int jmax);
    int jmax() const { return static_cast<int>(r_.size()) - 1; }
    const DiffPoly& R(int j) const { return r_.at(static_cast<size_t>(j)); }

  private:
    std::vector<DiffPoly> r_;
};

struct StringEquation {
    int m;
    Times times;
    DiffPoly equation;  // sum_j t_j R_{j+1}(u) - t
};

struct ClassicalStringPoly {
    int m;
    MultiPoly P;  // P(u0) with parameters t_j; 4 P(u0) = eps->0 limit of the string equation + t
};

struct UExpansion {
    int m;
    int kmax;
    std::vector<RatFunc> u;  // u[0] = u0 symbol, u[k] rational in u0 for k >= 1
};

// 2x2 matrix with DiffPoly-in-x entries: entry(i,j) = sum_k x^k * DiffPoly.
struct PolyMat2 {
    std::array<std::array<std::vector<DiffPoly>, 2>, 2> e;  // e[i][j][k] = coeff of x^k

    const DiffPoly& at(int i, int j, int k) const;
    void add(int i, int j, int k, const DiffPoly& p);
    int deg(int i, int j) const;
    PolyMat2 operator+(const PolyMat2& o) const;
    PolyMat2 operator-(const PolyMat2& o) const;
    PolyMat2 scaled(const RatFunc& c) const;
    PolyMat2 mul(const PolyMat2& o) const;
    PolyMat2 map(const DiffPoly& (*f)(const DiffPoly&)) const;
    bool is_zero() const;
    std::vector<DiffPoly> det() const;   // coefficients in x
    std::vector<DiffPoly> trace() const;
};

struct LaxPair {
    enum class Family { KdV, MKdV };  // (2m+1,2) vs (2m,1)
    Family family;
    int m;
    Times times;
    PolyMat2 D;  // script D
    PolyMat2 R;  // script R
    std::vector<PolyMat2> Dk;  // per-k building blocks D_0..D_m
};

// Modified Gelfand-Dikii pair (hat R_k, check R_k), no 1/N grading.
struct MGDSequence {
    std::vector<DiffPoly> hat;
    std::vector<DiffPoly> chk;
};

GDSequence gd_sequence(int jmax);

// (Q^(j+1/2))_+ : odd operator of order 2j+1 with order((.)^2 - Q^(2j+1)) <= 2j.
DiffOperator q_half_power(int j);

StringEquation string_equation(int m, const Times& times);
ClassicalStringPoly classical_poly(int m, const Times& times);
U0Derivation u0_derivation(const ClassicalStringPoly& cp);

UExpansion u_expansion(int m, const Times& times, int kmax);

// Substitute u = u0 + sum_k eps^k u_k into a KdV-graded DiffPoly (nu even,
// nu == #derivative strokes) and expand through eps^kmax. Coefficients become
// rational functions of u0 via the classical derivation.
std::vector<RatFunc> substitute_u_expansion(const DiffPoly& p, const UExpansion& ux,
                                            const U0Derivation& der, int kmax);

LaxPair lax_pair(int m, const Times& times);

// Per-k Lax identity residual: (1/N) d_t D_k + [D_k, R] + (2/N) Rdot_{k+1} E21.
PolyMat2 lax_identity_residual(const PolyMat2& Dk, const PolyMat2& R, const DiffPoly& R_next);

MGDSequence mgd_sequence(int kmax);

LaxPair lax_pair_2m1(int m, const Times& times);

// Zero-curvature residual of the (2m,1) pair reduced modulo the string
// equation sum_k t_k hatR_k(u) + t u and its first t-derivative.
PolyMat2 mkdv_compatibility_residual(const LaxPair& lp);

// Substitute u^(top) using a relation S = 0 linear in u^(top).
DiffPoly reduce_linear_in_top(const DiffPoly& p, const DiffPoly& S, int top);

// d_t det D - 2B reduced modulo the differentiated string equation; zero iff
// the determinant identity holds.
DiffPoly kdv_det_identity_residual(const LaxPair& lp);

}  // namespace mmtool
