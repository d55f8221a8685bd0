#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "mmtool/diffpoly.hpp"
#include "mmtool/laurent.hpp"
#include "mmtool/ratfunc.hpp"
#include "mmtool/render.hpp"
#include "mmtool/u0deriv.hpp"

#include <nlohmann/json.hpp>

using namespace mmtool;

namespace {

std::mt19937 rng(20240915);

RatFunc random_ratfunc(int depth = 0) {
    std::uniform_int_distribution<int> coin(0, 5), coef(-4, 4), expo(1, 2);
    MultiPoly num;
    const char* vars[] = {"a", "b", "c"};
    for (int i = 0; i < 3; ++i) {
        Monomial m;
        for (int v = 0; v < 3; ++v)
            if (coin(rng) < 2) m.factors.emplace_back(vars[v], expo(rng));
        num.add_term(m, Rat(coef(rng)));
    }
    RatFunc r(num);
    if (depth == 0 && coin(rng) < 2) {
        RatFunc d = random_ratfunc(1);
        if (!d.is_zero_fn()) r /= d;
    }
    return r;
}

}  // namespace

TEST_CASE("rational basics") {
    CHECK(rat(2, 4) == rat(1, 2));
    CHECK(rat_parse("-6/4") == rat(-3, 2));
    CHECK(rat_str(rat(-3, 2)) == "-3/2");
    CHECK(rat_double_factorial_odd(3) == 15);
    CHECK(rat_double_factorial_odd(0) == 1);
    CHECK_THROWS(rat_parse("1/0"));
}

TEST_CASE("ratfunc field identities on random elements") {
    for (int trial = 0; trial < 40; ++trial) {
        RatFunc a = random_ratfunc(), b = random_ratfunc(), c = random_ratfunc();
        CHECK(a * (b + c) == a * b + a * c);
        CHECK((a + b) - b == a);
        if (!a.is_zero_fn()) {
            CHECK(a * a.inverse() == RatFunc(Rat(1)));
        }
    }
}

TEST_CASE("ratfunc cancellation and derivative") {
    RatFunc x = RatFunc::var("x"), y = RatFunc::var("y");
    RatFunc f = (x * x - y * y) / (x - y);
    CHECK(f == x + y);
    CHECK(f.is_polynomial());

    RatFunc g = RatFunc(Rat(1)) / (x * x);
    CHECK(g.derivative("x") == RatFunc(Rat(-2)) / (x * x * x));

    RatFunc h = x / (x + y);
    RatFunc dh = h.derivative("x");
    CHECK(dh == y / ((x + y) * (x + y)));
}

TEST_CASE("ratfunc json round trip") {
    for (int trial = 0; trial < 100; ++trial) {
        RatFunc a = random_ratfunc();
        auto j = ratfunc_to_json(a);
        RatFunc back = ratfunc_from_json(j);
        CHECK(back == a);
        // canonical serialization is deterministic
        CHECK(ratfunc_to_json(back).dump() == j.dump());
    }
}

TEST_CASE("laurent invert: spec examples") {
    // invert(z) = z^-1
    auto z = LaurentSeries::monomial("z", RatFunc(Rat(1)), 1);
    auto iz = z.inverted(5);
    CHECK(iz.coeff(-1) == RatFunc(Rat(1)));
    CHECK(iz.coeff(0).is_zero_fn());

    // invert(2 + 0 z) = 1/2
    auto two = LaurentSeries::constant("z", RatFunc(Rat(2)));
    CHECK(two.inverted(3).coeff(0) == RatFunc(rat(1, 2)));

    // invert(z - 3 u0 z^3) to order 5 = z^-1 (1 + 3 u0 z^2 + 9 u0^2 z^4)
    RatFunc u0 = RatFunc::var("u0");
    auto f = LaurentSeries::monomial("z", RatFunc(Rat(1)), 1) +
             LaurentSeries::monomial("z", RatFunc(Rat(-3)) * u0, 3);
    auto inv = f.inverted(5);
    CHECK(inv.coeff(-1) == RatFunc(Rat(1)));
    CHECK(inv.coeff(1) == RatFunc(Rat(3)) * u0);
    CHECK(inv.coeff(3) == RatFunc(Rat(9)) * u0 * u0);
    CHECK(inv.coeff(0).is_zero_fn());
    // geometric-series oracle: f * inv = 1 up to truncation
    auto prod = f * inv;
    CHECK(prod.coeff(0) == RatFunc(Rat(1)));
    CHECK(prod.coeff(1).is_zero_fn());
    CHECK(prod.coeff(2).is_zero_fn());
}

TEST_CASE("laurent residue: spec examples and precision guard") {
    // Res 1/z = 1
    auto iz = LaurentSeries::monomial("z", RatFunc(Rat(1)), -1);
    CHECK(iz.residue() == RatFunc(Rat(1)));

    // Res of 1/(z^2 (z1^2 - z^2)) = 0 (even integrand)
    RatFunc z1sq = RatFunc::var("z1", 2);
    auto den = LaurentSeries::monomial("z", z1sq, 2) - LaurentSeries::monomial("z", RatFunc(Rat(1)), 4);
    auto expr = den.inverted(2);
    CHECK(expr.residue().is_zero_fn());

    // residue beyond truncation must throw, never silently 0
    auto trunc = LaurentSeries::monomial("z", RatFunc(Rat(1)), 3).truncated(-2);
    CHECK_THROWS_AS(trunc.residue(), InsufficientPrecision);

    // residue of an exact derivative vanishes
    auto s = LaurentSeries::monomial("z", RatFunc(Rat(5)), -3) +
             LaurentSeries::monomial("z", RatFunc(Rat(2)), 4);
    CHECK(s.derivative().residue().is_zero_fn());

    // linearity spot check
    auto a = LaurentSeries::monomial("z", RatFunc(Rat(3)), -1);
    CHECK((a + iz).residue() == RatFunc(Rat(4)));
}

TEST_CASE("laurent log/exp round trip") {
    RatFunc c1 = RatFunc::var("c1"), c2 = RatFunc::var("c2");
    auto s = LaurentSeries::constant("r", RatFunc(Rat(1))) +
             LaurentSeries::monomial("r", c1, 1) + LaurentSeries::monomial("r", c2, 2);
    auto lg = s.log1_series(6);
    auto back = lg.exp_series(6);
    for (int e = 0; e < 6; ++e) CHECK(back.coeff(e) == s.truncated(6).coeff(e));
}

TEST_CASE("diffpoly diff_t Leibniz and spec examples") {
    DiffPoly u = DiffPoly::u();
    // diff_t(u^2) = 2 u u'
    DiffPoly usq = u * u;
    DiffPoly expect = DiffPoly(Rat(2)) * u * DiffPoly::u_deriv(1);
    CHECK(usq.diff_t() == expect);

    // Leibniz on random pairs
    std::uniform_int_distribution<int> idx(0, 3), ex(1, 2), cf(-3, 3);
    for (int trial = 0; trial < 30; ++trial) {
        DiffPoly a, b;
        for (int t = 0; t < 2; ++t) {
            DMonomial m;
            int i1 = idx(rng), i2 = idx(rng);
            m.derivs.emplace_back(i1, ex(rng));
            if (i2 != i1) m.derivs.emplace_back(i2, 1);
            std::sort(m.derivs.begin(), m.derivs.end());
            a.add_term(m, RatFunc(Rat(cf(rng))));
            DMonomial n;
            n.derivs.emplace_back(idx(rng), ex(rng));
            b.add_term(n, RatFunc(Rat(cf(rng))));
        }
        CHECK((a * b).diff_t() == a.diff_t() * b + a * b.diff_t());
    }
}

TEST_CASE("integrate_total_derivative: spec examples") {
    DiffPoly u = DiffPoly::u();
    // 6 u u' - (eps/2) u''' -> 3u^2 - (eps/2) u''  (this is R_2)
    DiffPoly p = DiffPoly(Rat(6)) * u * DiffPoly::u_deriv(1) -
                 DiffPoly::u_deriv(3).times_eps() * Rat(1, 2);
    DiffPoly q = integrate_total_derivative(p);
    DiffPoly expect = DiffPoly(Rat(3)) * u * u - DiffPoly::u_deriv(2).times_eps() * Rat(1, 2);
    CHECK(q == expect);
    CHECK(diffpoly_to_string(q) == "3*u^2 - (1/2)*eps*u''");

    // round trip diff_t(u^3)
    DiffPoly ucube = u * u * u;
    CHECK(integrate_total_derivative(ucube.diff_t()) == ucube);

    // u'^2 alone is not a total derivative
    DiffPoly bad = DiffPoly::u_deriv(1) * DiffPoly::u_deriv(1);
    CHECK_THROWS_AS(integrate_total_derivative(bad), std::domain_error);

    // integrate . diff_t = id on polynomials with zero constant term
    for (int trial = 0; trial < 20; ++trial) {
        std::uniform_int_distribution<int> idx(0, 2), ex(1, 3), cf(-3, 3);
        DiffPoly a;
        for (int t = 0; t < 3; ++t) {
            DMonomial m;
            m.derivs.emplace_back(idx(rng), ex(rng));
            a.add_term(m, RatFunc(Rat(cf(rng))));
        }
        CHECK(integrate_total_derivative(a.diff_t()) == a);
    }
}

TEST_CASE("u0 derivation: spec examples") {
    // P from Painleve I: 4P = 3u0^2 - 2t0 u0, so P' = (6u0 - 2t0)/4
    MultiPoly P = (MultiPoly::var("u0", 2) * Rat(3) - MultiPoly::var("t0") * MultiPoly::var("u0") * Rat(2)) *
                  rat(1, 4);
    U0Derivation der(P);

    RatFunc u0 = RatFunc::var("u0");
    // du0/dt = 1/(4 P')
    RatFunc expect1 = RatFunc(Rat(1)) / RatFunc((MultiPoly::var("u0") * Rat(6) - MultiPoly::var("t0") * Rat(2)));
    CHECK(der.ddt(u0) == expect1);

    // d2u0/dt2 = -P''/(16 P'^3)
    RatFunc Pp = RatFunc(P.derivative("u0"));
    RatFunc Ppp = RatFunc(P.derivative("u0").derivative("u0"));
    RatFunc expect2 = -(Ppp / (Pp * Pp * Pp * Rat(16)));
    CHECK(der.ddt_n(u0, 2) == expect2);

    // chain rule on a rational function
    RatFunc f = RatFunc(Rat(1)) / u0;
    CHECK(der.ddt(f) == -(der.du0_dt() / (u0 * u0)));
}

TEST_CASE("render matches spec formats") {
    RatFunc u0 = RatFunc::var("u0");
    MultiPoly p = MultiPoly::var("u0", 2) * Rat(3) - MultiPoly::var("t0") * Rat(2);
    CHECK(multipoly_to_string(p) == "3*u0^2 - 2*t0");
}
