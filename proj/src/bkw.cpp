#include "mmtool/bkw.hpp"

#include <map>
#include <stdexcept>

#include "mmtool/u0deriv.hpp"

namespace mmtool {

namespace {

// d/dt on a Laurent polynomial in z with coefficients rational in u0:
// coefficients move by u0dot d/du0, and zdot = u0dot / z.
LaurentSeries ddt_series(const LaurentSeries& s, const U0Derivation& der) {
    LaurentSeries r("z");
    if (s.known_zero()) return r;
    const RatFunc& du0 = der.du0_dt();
    for (int e = s.lowest_exponent(); e <= s.highest_known(); ++e) {
        RatFunc c = s.raw(e);
        if (c.is_zero_fn()) continue;
        RatFunc dc = der.ddt(c);
        if (!dc.is_zero_fn()) r.set_coeff(e, r.raw(e) + dc);
        if (e != 0) {
            RatFunc mv = c * du0 * Rat(e);
            r.set_coeff(e - 2, r.raw(e - 2) + mv);
        }
    }
    return r;
}

using EpsLaurent = std::vector<LaurentSeries>;  // index = eps power

EpsLaurent eps_zero(int kmax) {
    return EpsLaurent(static_cast<size_t>(kmax) + 1, LaurentSeries("z"));
}

EpsLaurent eps_mul(const EpsLaurent& a, const EpsLaurent& b, int kmax) {
    EpsLaurent r = eps_zero(kmax);
    for (int i = 0; i <= kmax; ++i)
        for (int j = 0; i + j <= kmax; ++j)
            r[static_cast<size_t>(i + j)] += a[static_cast<size_t>(i)] * b[static_cast<size_t>(j)];
    return r;
}

EpsLaurent eps_ddt(const EpsLaurent& a, const U0Derivation& der) {
    EpsLaurent r = a;
    for (auto& s : r) s = ddt_series(s, der);
    return r;
}

// L[F] = (x+2u) Fdot + udot F - (eps/4) Fdddot with x+2u = z^2 + 2 sum eps^k u_k.
// (The quarter is forced by differentiating the nonlinear parent relation
// N^2 (x+2u) f^2 = f fdd/2 - fdot^2/4 + 1 and dividing by 2 N^2 f.)
EpsLaurent apply_L(const EpsLaurent& F, const UExpansion& ux, const U0Derivation& der, int kmax) {
    EpsLaurent x2u = eps_zero(kmax);
    x2u[0] = LaurentSeries::monomial("z", RatFunc(Rat(1)), 2);
    for (int k = 1; k <= kmax && k <= ux.kmax; ++k)
        x2u[static_cast<size_t>(k)] = LaurentSeries::constant("z", ux.u[static_cast<size_t>(k)] * Rat(2));
    EpsLaurent udot = eps_zero(kmax);
    udot[0] = LaurentSeries::constant("z", der.du0_dt());
    for (int k = 1; k <= kmax && k <= ux.kmax; ++k)
        udot[static_cast<size_t>(k)] = LaurentSeries::constant("z", der.ddt(ux.u[static_cast<size_t>(k)]));

    EpsLaurent Fd = eps_ddt(F, der);
    EpsLaurent F3 = eps_ddt(eps_ddt(Fd, der), der);
    EpsLaurent out = eps_mul(x2u, Fd, kmax);
    EpsLaurent uf = eps_mul(udot, F, kmax);
    for (int k = 0; k <= kmax; ++k) out[static_cast<size_t>(k)] += uf[static_cast<size_t>(k)];
    for (int k = 1; k <= kmax; ++k)
        out[static_cast<size_t>(k)] -= F3[static_cast<size_t>(k) - 1] * RatFunc(rat(1, 4));
    return out;
}

}  // namespace

BkwExpansion bkw_expansion(int m, const Times& times, int kmax) {
    if (kmax < 1) throw std::invalid_argument("bkw_expansion: kmax >= 1");
    ClassicalStringPoly cp = classical_poly(m, times);
    U0Derivation der(cp.P);
    UExpansion ux = u_expansion(m, times, kmax);
    RatFunc du0 = der.du0_dt();

    BkwExpansion bk;
    bk.m = m;
    bk.kmax = kmax;
    bk.f.assign(static_cast<size_t>(kmax) + 1, LaurentSeries("z"));

    EpsLaurent F = eps_zero(kmax);
    F[0] = LaurentSeries::monomial("z", RatFunc(Rat(1)), -1);

    for (int k = 1; k <= kmax; ++k) {
        // residual with f_k = 0: the eps^k coefficient of L equals z f_k-dot + R_k
        EpsLaurent res = apply_L(F, ux, der, k);
        LaurentSeries R = res[static_cast<size_t>(k)];
        // solve z fdot = -R for a polynomial f in 1/z: with f = sum b_j z^-j,
        //   fdot = sum u0dot [b_j' - (j-2) b_{j-2}] z^-j,  -R/z =: sum t_j z^-j.
        // The finite 1/z tail makes the solve algebraic from the deepest pole:
        //   b_{j-2} = (u0dot b_j' - t_j) / ((j-2) u0dot), b_j = 0 above the top.
        LaurentSeries T = -(R.shifted(-1));
        if (T.known_zero()) continue;
        int deepest = -T.lowest_exponent();
        std::map<int, RatFunc> b;
        auto bval = [&](int j) {
            auto it = b.find(j);
            return it == b.end() ? RatFunc() : it->second;
        };
        for (int j = deepest; j >= 3; --j) {
            RatFunc tj = T.raw(-j);
            RatFunc num = du0 * bval(j).derivative("u0") - tj;
            RatFunc bj2 = num / (du0 * Rat(j - 2));
            if (!bj2.is_zero_fn()) b[j - 2] = bj2;
        }
        // bottom consistency: j = 2 has no new unknown; j = 1 and j = 0 would
        // force positive powers of z.
        RatFunc c2 = du0 * bval(2).derivative("u0") - T.raw(-2);
        RatFunc c1 = du0 * bval(1).derivative("u0") - T.raw(-1);
        RatFunc c0 = T.raw(0);
        if (!c2.is_zero_fn() || !c1.is_zero_fn() || !c0.is_zero_fn())
            throw std::domain_error("bkw_expansion: non-polynomial remainder in 1/z at order " +
                                    std::to_string(k));
        LaurentSeries fk("z");
        for (auto& [j, coeff] : b)
            if (!coeff.is_zero_fn()) fk.set_coeff(-j, coeff);
        bk.f[static_cast<size_t>(k)] = fk;
        F[static_cast<size_t>(k)] = fk.shifted(-1);  // z^-1 f_k
    }
    return bk;
}

std::vector<LaurentSeries> bkw_nonlinear_residual(const BkwExpansion& bk, const Times& times) {
    int kmax = bk.kmax;
    ClassicalStringPoly cp = classical_poly(bk.m, times);
    U0Derivation der(cp.P);
    UExpansion ux = u_expansion(bk.m, times, kmax);

    EpsLaurent F = eps_zero(kmax);
    F[0] = LaurentSeries::monomial("z", RatFunc(Rat(1)), -1);
    for (int k = 1; k <= kmax; ++k) F[static_cast<size_t>(k)] = bk.f[static_cast<size_t>(k)].shifted(-1);

    EpsLaurent x2u = eps_zero(kmax);
    x2u[0] = LaurentSeries::monomial("z", RatFunc(Rat(1)), 2);
    for (int k = 1; k <= kmax; ++k)
        x2u[static_cast<size_t>(k)] = LaurentSeries::constant("z", ux.u[static_cast<size_t>(k)] * Rat(2));

    // N^2 (x+2u) f^2 = (1/2) f fdd - (1/4) fd^2 + 1 with f = -(1/N) F becomes
    // (x+2u) F^2 - (eps/2) F Fdd + (eps/4) Fd^2 - 1 = 0
    EpsLaurent Fd = eps_ddt(F, der);
    EpsLaurent Fdd = eps_ddt(Fd, der);
    EpsLaurent out = eps_mul(x2u, eps_mul(F, F, kmax), kmax);
    EpsLaurent ffdd = eps_mul(F, Fdd, kmax);
    EpsLaurent fd2 = eps_mul(Fd, Fd, kmax);
    for (int k = 1; k <= kmax; ++k) {
        out[static_cast<size_t>(k)] -= ffdd[static_cast<size_t>(k) - 1] * RatFunc(rat(1, 2));
        out[static_cast<size_t>(k)] += fd2[static_cast<size_t>(k) - 1] * RatFunc(rat(1, 4));
    }
    out[0] -= LaurentSeries::constant("z", RatFunc(Rat(1)));
    return out;
}

}  // namespace mmtool
