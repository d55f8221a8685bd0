#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>

#include "mmtool/mmformal.hpp"
#include "mmtool/render.hpp"

using namespace mmtool;

namespace {
struct CacheSandbox {
    CacheSandbox() { setenv("MMTOOL_CACHE_DIR", "./.mmtool-test-cache", 1); }
};
CacheSandbox sandbox;
}  // namespace

TEST_CASE("solve_curve: gaussian closes at first step") {
    FormalPotential pot;
    pot.d = 1;
    MMCurveSeries c = solve_curve(pot, 6);
    // G = s exactly, alpha = 0, vhat1 = s/G... v1 = s/gamma -> vhat1 = s/G = 1
    CHECK(c.alpha.known_zero());
    CHECK(c.G.raw(1) == RatFunc(Rat(1)));
    for (int k = 2; k <= 6; ++k) CHECK(c.G.raw(k).is_zero_fn());
}

TEST_CASE("solve_curve: quadrangulation series matches the closed form") {
    FormalPotential pot;
    pot.d = 3;
    pot.s[4] = RatFunc::var("s4");
    MMCurveSeries c = solve_curve(pot, 8);
    // gamma^2 = (1 - sqrt(1-12 s s4))/(6 s4) = s + 3 s4 s^2 + 18 s4^2 s^3 + ...
    // expand the closed form: sum_{n>=1} C_{n-1} 3^{n-1} s4^{n-1} s^n (Catalan-ish)
    RatFunc s4 = RatFunc::var("s4");
    CHECK(c.G.raw(1) == RatFunc(Rat(1)));
    CHECK(c.G.raw(2) == s4 * Rat(3));
    CHECK(c.G.raw(3) == s4 * s4 * Rat(18));
    // closed-form check through order 8: G satisfies 3 s4 G^2 - G + s = 0
    LaurentSeries s_series = LaurentSeries::monomial("s", RatFunc(Rat(1)), 1, 9);
    LaurentSeries resid = (c.G * c.G * (s4 * Rat(3)) - c.G + s_series).truncated(9);
    CHECK(resid.known_zero());
    // alpha = 0 and v2 = 0 at every order (even potential)
    CHECK(c.alpha.known_zero());
    CHECK(c.vhat[2].known_zero());
    // v1 = s/gamma: vhat1 * G = s
    LaurentSeries v1G = (c.vhat[1] * c.G).truncated(8);
    for (int k = 1; k < 8; ++k) CHECK(v1G.raw(k) == s_series.truncated(8).raw(k));
    // v3 = -s4 gamma^3: vhat3 = -s4 G
    LaurentSeries v3 = (c.vhat[3] + c.G * s4).truncated(8);
    CHECK(v3.known_zero());
}

TEST_CASE("solve_curve: random small potentials satisfy the constraints") {
    // degrees 3..5 with small rational coefficients; residual of the defining
    // constraint is checked through the parity identities inside solve_curve
    for (int d = 2; d <= 4; ++d) {
        FormalPotential pot;
        pot.d = d;
        pot.s[3] = RatFunc(rat(1, 5));
        if (d >= 3) pot.s[4] = RatFunc(rat(-1, 7));
        if (d >= 4) pot.s[5] = RatFunc(rat(1, 11));
        MMCurveSeries c = solve_curve(pot, 6);
        CHECK(c.G.raw(1) == RatFunc(Rat(1)));  // gamma^2 = s + O(s^2)
        // alpha = O(s)
        if (!c.alpha.known_zero()) CHECK(c.alpha.lowest_exponent() >= 1);
    }
}

TEST_CASE("quadrangulation closed forms") {
    QuadCurve q = quad_curve();
    // gamma^2 yh'(1) yh'(-1) = 4 (2s - G)^2, so fhat_1 via the general
    // (1/24) log formula equals (1/12) log(2(2s-G))
    RatFunc yp1 = q.vhat1 * Rat(2) - q.s4 * q.G * Rat(6);  // yhat'(1)/gamma... even combination:
    // yhat'(z) = gamma [ vh1 (1+z^-2) + vh3 (3z^2+3z^-4) ]; at z=1: gamma(2 vh1 + 6 vh3)
    RatFunc ypm = q.vhat1 * Rat(2) + q.vhat3 * Rat(6);
    RatFunc lhs = q.G * ypm * ypm;  // gamma^2 y'(1) y'(-1) with y'(1) = y'(-1)
    RatFunc rhs = (q.s * Rat(2) - q.G).pow(2) * Rat(4);
    CHECK(lhs == rhs);

    // s4 -> 0 structure of fhat_2: the printed denominator carries s4^2
    ClosedForm f2 = quad_closed_form(2);
    bool has_s4_sq = false;
    for (auto& f : f2.rational.den_factors())
        if (f.base == MultiPoly::var("s4")) has_s4_sq = (f.exp == 2);
    CHECK(has_s4_sq);
}

TEST_CASE("recursion on the quadrangulation curve reproduces the closed forms") {
    // fhat_2 from the residue formula equals the printed closed form exactly
    RatFunc f2rec = formal_free_energy(2);
    ClosedForm f2 = quad_closed_form(2);
    CHECK(f2rec == f2.rational);
}

TEST_CASE("omega_2^0 regression on the formal curve") {
    // W_2^(0)-form in z-coordinates is the Bergman kernel 1/(p1-p2)^2; the
    // engine starts from it, so check a derived object instead: W_1^(1)
    // must have poles only at p1 = +-1 and be odd under p1 -> 1/p1 together
    // with the dz-prefactor... structural sanity:
    RatFunc w11 = formal_correlator(1, 1);
    for (auto& f : w11.den_factors()) {
        if (!f.base.depends_on("p1")) continue;
        MultiPoly v = MultiPoly::var("p1");
        bool ok = f.base == v - MultiPoly(Rat(1)) || f.base == v + MultiPoly(Rat(1));
        CHECK(ok);
    }
}

TEST_CASE("critical potentials") {
    // m=1: ycrit = (z-1)^3 - (1/z-1)^3; the centered Chebyshev identity
    // (z+1/z-2)^m (T_{m+1}-T_m)(z+1/z) = (z-1)^(2m+1) (1 - z^-(2m+1))
    for (int m : {1, 2, 3}) {
        LaurentSeries z = LaurentSeries::monomial("z", RatFunc(Rat(1)), 1);
        LaurentSeries zi = LaurentSeries::monomial("z", RatFunc(Rat(1)), -1);
        LaurentSeries w = z + zi;
        LaurentSeries lhs = LaurentSeries::constant("z", RatFunc(Rat(1)));
        LaurentSeries base = w - LaurentSeries::constant("z", RatFunc(Rat(2)));
        for (int i = 0; i < m; ++i) lhs *= base;
        CriticalPotential cp = critical_potential(m);
        LaurentSeries tdiff = LaurentSeries::zero("z");
        {
            LaurentSeries acc = LaurentSeries::constant("z", RatFunc(Rat(1)));
            for (size_t i = 0; i < cp.Tdiff.size(); ++i) {
                if (cp.Tdiff[i] != 0) tdiff += acc * RatFunc(cp.Tdiff[i]);
                acc *= w;
            }
        }
        lhs *= tdiff;
        // rhs: (z-1)^(2m+1)(1 - z^-(2m+1))
        LaurentSeries zm1 = z - LaurentSeries::constant("z", RatFunc(Rat(1)));
        LaurentSeries rhs = LaurentSeries::constant("z", RatFunc(Rat(1)));
        for (int i = 0; i < 2 * m + 1; ++i) rhs *= zm1;
        rhs *= (LaurentSeries::constant("z", RatFunc(Rat(1))) -
                LaurentSeries::monomial("z", RatFunc(Rat(1)), -(2 * m + 1)));
        CHECK(lhs == rhs);
    }
    // quadrangulation s_c = 1/(12 s4) via the vanishing of yhat'(1):
    // yhat'(1) = gamma(2 vh1 + 6 vh3) = 0 with the closed form gives s = 1/(12 s4)
    QuadCurve q = quad_curve();
    RatFunc cond = q.vhat1 * Rat(2) + q.vhat3 * Rat(6);  // = 2 - 12 s4 G
    // cond = 0 <=> G = 1/(6 s4) <=> s = G - 3 s4 G^2 = 1/(12 s4)
    RatFunc Gc = RatFunc(Rat(1)) / (RatFunc::var("s4") * Rat(6));
    CHECK(cond.substitute("G", Gc).is_zero_fn());
    RatFunc sc = q.s.substitute("G", Gc);
    CHECK(sc == RatFunc(Rat(1)) / (RatFunc::var("s4") * Rat(12)));
    // m = 0: any s regular (T_1 - T_0 = w - 2 has the root w = 2 only, which
    // is the excluded degenerate point)
    CriticalPotential c0 = critical_potential(0);
    CHECK(c0.m == 0);
}

TEST_CASE("double scaling check at quadrangulation, g = 2") {
    double s4 = 1.0, sc = 1.0 / 12.0;
    std::vector<double> seq;
    for (int i = 0; i < 12; ++i) seq.push_back(sc * (1.0 - 2e-3 * std::pow(0.5, i)));
    DScaleReport rep = double_scaling_check(2, s4, seq);
    CHECK(std::fabs(rep.exponent_fit - (-2.5)) < 1e-3);
    CHECK(rep.rel_error < 1e-6);
}
