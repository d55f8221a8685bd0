#include "mmtool/kdv.hpp"

#include <stdexcept>

namespace mmtool {

Times Times::symbolic(int m) {
    Times ts;
    ts.m = m;
    ts.t.resize(static_cast<size_t>(m) + 1);
    for (int j = 0; j < m; ++j) ts.t[static_cast<size_t>(j)] = RatFunc::var("t" + std::to_string(j));
    ts.t[static_cast<size_t>(m)] = RatFunc(Rat(1));
    return ts;
}

Times Times::fully_symbolic(int m) {
    // keeps t_m symbolic; used by property checks that differentiate in t_m
    Times ts;
    ts.m = m;
    ts.t.resize(static_cast<size_t>(m) + 1);
    for (int j = 0; j <= m; ++j) ts.t[static_cast<size_t>(j)] = RatFunc::var("t" + std::to_string(j));
    return ts;
}

Times Times::numeric(int m, const std::vector<Rat>& values) {
    if (static_cast<int>(values.size()) != m + 1) throw std::invalid_argument("Times: need m+1 values");
    if (values.back() != 1) throw std::invalid_argument("Times: t_m must equal 1");
    Times ts;
    ts.m = m;
    for (auto& v : values) ts.t.emplace_back(v);
    return ts;
}

GDSequence::GDSequence(int jmax) {
    if (jmax < 0) throw std::invalid_argument("gd_sequence: jmax must be >= 0");
    r_.reserve(static_cast<size_t>(jmax) + 1);
    r_.push_back(DiffPoly(Rat(2)));
    for (int j = 0; j < jmax; ++j) {
        const DiffPoly& Rj = r_.back();
        DiffPoly rhs = DiffPoly(Rat(-2)) * DiffPoly::u() * Rj.diff_t() -
                       DiffPoly::u().diff_t() * Rj +
                       Rj.diff_t_n(3).times_eps() * Rat(1, 4);
        r_.push_back(integrate_total_derivative(rhs));
    }
}

GDSequence gd_sequence(int jmax) { return GDSequence(jmax); }

DiffOperator q_half_power(int j) {
    if (j < 0) throw std::invalid_argument("q_half_power: j must be >= 0");
    DiffOperator Q = DiffOperator::d_power(2) - DiffOperator::multiplication(DiffPoly(Rat(2)) * DiffPoly::u());
    DiffOperator target = Q.pow(2 * j + 1);
    DiffOperator P = DiffOperator::d_power(2 * j + 1);
    // Fill unknown coefficients top-down; adding c_i d^i shifts P^2 by
    // 2 c_i d^(2j+1+i) + lower order.
    for (int i = 2 * j; i >= 0; --i) {
        DiffOperator res = P * P - target;
        DiffPoly top = res.coeff(2 * j + 1 + i);
        P.set_coeff(i, P.coeff(i) - top * Rat(1, 2));
    }
    DiffOperator res = P * P - target;
    if (res.order() > 2 * j) throw std::logic_error("q_half_power: elimination failed");
    return P;
}

StringEquation string_equation(int m, const Times& times) {
    if (times.m != m) throw std::invalid_argument("string_equation: times/m mismatch");
    GDSequence gd(m + 1);
    DiffPoly eq;
    for (int j = 0; j <= m; ++j) eq += gd.R(j + 1) * times[j];
    eq -= DiffPoly(RatFunc::var("t"));
    return StringEquation{m, times, eq};
}

ClassicalStringPoly classical_poly(int m, const Times& times) {
    // P(u0) = sum_j t_j (-u0/2)^(j+1) (2j+1)!/(j! (j+1)!)
    MultiPoly P;
    for (int j = 0; j <= m; ++j) {
        Rat coef = rat_factorial(2 * j + 1) / (rat_factorial(j) * rat_factorial(j + 1));
        coef *= rat_pow(rat(-1, 2), j + 1);
        RatFunc tj = times[j];
        if (!tj.is_polynomial()) throw std::invalid_argument("classical_poly: times must be polynomial");
        P += tj.num() * MultiPoly::var("u0", j + 1) * coef;
    }
    return ClassicalStringPoly{m, P};
}

U0Derivation u0_derivation(const ClassicalStringPoly& cp) { return U0Derivation(cp.P); }

std::vector<RatFunc> substitute_u_expansion(const DiffPoly& p, const UExpansion& ux,
                                            const U0Derivation& der, int kmax) {
    // eps-series of d^i u / dt^i, i up to the highest derivative present
    int imax = 0;
    for (auto& [m, c] : p.terms()) imax = std::max(imax, m.max_deriv());
    std::vector<std::vector<RatFunc>> udiff;  // udiff[i][k]
    std::vector<RatFunc> base(static_cast<size_t>(kmax) + 1);
    base[0] = RatFunc::var("u0");
    for (int k = 1; k <= kmax && k <= ux.kmax; ++k) base[static_cast<size_t>(k)] = ux.u[static_cast<size_t>(k)];
    udiff.push_back(base);
    for (int i = 1; i <= imax; ++i) {
        std::vector<RatFunc> next(static_cast<size_t>(kmax) + 1);
        for (int k = 0; k <= kmax; ++k) next[static_cast<size_t>(k)] = der.ddt(udiff.back()[static_cast<size_t>(k)]);
        udiff.push_back(next);
    }
    auto mul_series = [&](const std::vector<RatFunc>& a, const std::vector<RatFunc>& b) {
        std::vector<RatFunc> r(static_cast<size_t>(kmax) + 1);
        for (int i = 0; i <= kmax; ++i)
            for (int j = 0; i + j <= kmax; ++j) r[static_cast<size_t>(i + j)] += a[static_cast<size_t>(i)] * b[static_cast<size_t>(j)];
        return r;
    };
    std::vector<RatFunc> acc(static_cast<size_t>(kmax) + 1);
    for (auto& [m, c] : p.terms()) {
        if (m.nu % 2 != 0) throw std::domain_error("substitute_u_expansion: odd 1/N power");
        int eshift = m.nu / 2;
        if (eshift > kmax) continue;
        std::vector<RatFunc> term(static_cast<size_t>(kmax) + 1);
        term[0] = c;
        for (auto& [i, e] : m.derivs)
            for (int rep = 0; rep < e; ++rep) term = mul_series(term, udiff[static_cast<size_t>(i)]);
        for (int k = 0; k + eshift <= kmax; ++k) acc[static_cast<size_t>(k + eshift)] += term[static_cast<size_t>(k)];
    }
    return acc;
}

UExpansion u_expansion(int m, const Times& times, int kmax) {
    if (kmax < 1) throw std::invalid_argument("u_expansion: kmax must be >= 1");
    ClassicalStringPoly cp = classical_poly(m, times);
    U0Derivation der = u0_derivation(cp);
    if (cp.P.derivative("u0").is_zero_poly()) throw std::domain_error("u_expansion: degenerate times, P' == 0");
    StringEquation se = string_equation(m, times);
    RatFunc fourPp = RatFunc(cp.P.derivative("u0") * Rat(4));

    UExpansion ux;
    ux.m = m;
    ux.kmax = kmax;
    ux.u.assign(static_cast<size_t>(kmax) + 1, RatFunc());
    ux.u[0] = RatFunc::var("u0");
    for (int k = 1; k <= kmax; ++k) {
        // aside from 4P'(u0) u_k, the eps^k coefficient involves only u_1..u_{k-1}
        UExpansion partial = ux;
        partial.kmax = k - 1;
        std::vector<RatFunc> resid = substitute_u_expansion(se.equation, partial, der, k);
        // the -t term: t = 4P(u0); it sits at eps^0 and is cancelled there.
        if (k == 1) {
            RatFunc order0 = resid[0] + RatFunc(MultiPoly::var("t")) - RatFunc(cp.P * Rat(4));
            // substitute_u_expansion kept the symbol t; classical consistency:
            // order-0 residual must equal 4P(u0) - t.
            if (!order0.is_zero_fn()) throw std::logic_error("u_expansion: classical order inconsistent");
        }
        ux.u[static_cast<size_t>(k)] = -(resid[static_cast<size_t>(k)] / fourPp);
    }
    return ux;
}

const DiffPoly& PolyMat2::at(int i, int j, int k) const {
    static const DiffPoly zero;
    const auto& v = e[static_cast<size_t>(i)][static_cast<size_t>(j)];
    if (k < 0 || k >= static_cast<int>(v.size())) return zero;
    return v[static_cast<size_t>(k)];
}

void PolyMat2::add(int i, int j, int k, const DiffPoly& p) {
    auto& v = e[static_cast<size_t>(i)][static_cast<size_t>(j)];
    if (k >= static_cast<int>(v.size())) v.resize(static_cast<size_t>(k) + 1);
    v[static_cast<size_t>(k)] += p;
}

int PolyMat2::deg(int i, int j) const {
    const auto& v = e[static_cast<size_t>(i)][static_cast<size_t>(j)];
    for (int k = static_cast<int>(v.size()) - 1; k >= 0; --k)
        if (!v[static_cast<size_t>(k)].is_zero_poly()) return k;
    return -1;
}

PolyMat2 PolyMat2::operator+(const PolyMat2& o) const {
    PolyMat2 r = *this;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k <= o.deg(i, j); ++k) r.add(i, j, k, o.at(i, j, k));
    return r;
}

PolyMat2 PolyMat2::operator-(const PolyMat2& o) const {
    PolyMat2 r = *this;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k <= o.deg(i, j); ++k) r.add(i, j, k, -o.at(i, j, k));
    return r;
}

PolyMat2 PolyMat2::scaled(const RatFunc& c) const {
    PolyMat2 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k <= deg(i, j); ++k) r.add(i, j, k, at(i, j, k) * c);
    return r;
}

PolyMat2 PolyMat2::mul(const PolyMat2& o) const {
    PolyMat2 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int l = 0; l < 2; ++l)
                for (int ka = 0; ka <= deg(i, l); ++ka)
                    for (int kb = 0; kb <= o.deg(l, j); ++kb)
                        r.add(i, j, ka + kb, at(i, l, ka) * o.at(l, j, kb));
    return r;
}

bool PolyMat2::is_zero() const {
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            if (deg(i, j) >= 0) return false;
    return true;
}

std::vector<DiffPoly> PolyMat2::det() const {
    std::vector<DiffPoly> out;
    auto acc = [&out](int k, const DiffPoly& p) {
        if (k >= static_cast<int>(out.size())) out.resize(static_cast<size_t>(k) + 1);
        out[static_cast<size_t>(k)] += p;
    };
    for (int ka = 0; ka <= deg(0, 0); ++ka)
        for (int kb = 0; kb <= deg(1, 1); ++kb) acc(ka + kb, at(0, 0, ka) * at(1, 1, kb));
    for (int ka = 0; ka <= deg(0, 1); ++ka)
        for (int kb = 0; kb <= deg(1, 0); ++kb) acc(ka + kb, -(at(0, 1, ka) * at(1, 0, kb)));
    while (!out.empty() && out.back().is_zero_poly()) out.pop_back();
    return out;
}

std::vector<DiffPoly> PolyMat2::trace() const {
    std::vector<DiffPoly> out;
    int d = std::max(deg(0, 0), deg(1, 1));
    for (int k = 0; k <= d; ++k) out.push_back(at(0, 0, k) + at(1, 1, k));
    while (!out.empty() && out.back().is_zero_poly()) out.pop_back();
    return out;
}

namespace {

PolyMat2 diff_mat_over_N(const PolyMat2& m) {
    PolyMat2 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k <= m.deg(i, j); ++k) r.add(i, j, k, m.at(i, j, k).diff_t_over_N());
    return r;
}

PolyMat2 kdv_script_R() {
    PolyMat2 R;
    R.add(0, 1, 0, DiffPoly(Rat(1)));
    R.add(1, 0, 1, DiffPoly(Rat(1)));
    R.add(1, 0, 0, DiffPoly(Rat(2)) * DiffPoly::u());
    return R;
}

// D_k for the (2m+1,2) family: B_k = sum_j x^(k-j) R_j, A_k = -(1/2N) Bdot_k,
// C_k = (x+2u) B_k + (1/N) Adot_k.
PolyMat2 kdv_Dk(const GDSequence& gd, int k) {
    PolyMat2 Dk;
    for (int j = 0; j <= k; ++j) Dk.add(0, 1, k - j, gd.R(j));
    for (int kk = 0; kk <= Dk.deg(0, 1); ++kk) {
        DiffPoly A = Dk.at(0, 1, kk).diff_t_over_N() * Rat(-1, 2);
        Dk.add(0, 0, kk, A);
        Dk.add(1, 1, kk, -A);
    }
    for (int kk = 0; kk <= Dk.deg(0, 1); ++kk) {
        const DiffPoly& B = Dk.at(0, 1, kk);
        Dk.add(1, 0, kk + 1, B);
        Dk.add(1, 0, kk, DiffPoly(Rat(2)) * DiffPoly::u() * B);
        Dk.add(1, 0, kk, Dk.at(0, 0, kk).diff_t_over_N());
    }
    return Dk;
}

}  // namespace

LaxPair lax_pair(int m, const Times& times) {
    if (times.m != m) throw std::invalid_argument("lax_pair: times/m mismatch");
    GDSequence gd(m + 1);
    LaxPair lp;
    lp.family = LaxPair::Family::KdV;
    lp.m = m;
    lp.times = times;
    lp.R = kdv_script_R();
    PolyMat2 D;
    for (int k = 0; k <= m; ++k) {
        PolyMat2 Dk = kdv_Dk(gd, k);
        lp.Dk.push_back(Dk);
        D = D + Dk.scaled(times[k]);
    }
    lp.D = D;
    return lp;
}

PolyMat2 lax_identity_residual(const PolyMat2& Dk, const PolyMat2& R, const DiffPoly& R_next) {
    PolyMat2 res = diff_mat_over_N(Dk) + Dk.mul(R) - R.mul(Dk);
    res.add(1, 0, 0, R_next.diff_t_over_N() * Rat(2));
    return res;
}

MGDSequence mgd_sequence(int kmax) {
    if (kmax < 0) throw std::invalid_argument("mgd_sequence: kmax must be >= 0");
    MGDSequence s;
    s.hat.push_back(DiffPoly::u());
    s.chk.push_back(DiffPoly::u() * DiffPoly::u() * Rat(1, 2));
    for (int k = 0; k < kmax; ++k) {
        DiffPoly hat_next = DiffPoly::u() * s.chk.back() - s.hat.back().diff_t_n(2) * Rat(1, 4);
        s.hat.push_back(hat_next);
        s.chk.push_back(integrate_total_derivative(DiffPoly::u() * hat_next.diff_t()));
    }
    return s;
}

LaxPair lax_pair_2m1(int m, const Times& times) {
    if (times.m != m) throw std::invalid_argument("lax_pair_2m1: times/m mismatch");
    MGDSequence mgd = mgd_sequence(m);
    LaxPair lp;
    lp.family = LaxPair::Family::MKdV;
    lp.m = m;
    lp.times = times;
    // script R = [[0, x+u], [-x+u, 0]]
    lp.R.add(0, 1, 1, DiffPoly(Rat(1)));
    lp.R.add(0, 1, 0, DiffPoly::u());
    lp.R.add(1, 0, 1, DiffPoly(Rat(-1)));
    lp.R.add(1, 0, 0, DiffPoly::u());
    // A_0 = B_0 = 0, C_0 = 1, then X_{k+1} = x^2 X_k + (modified GD data)
    std::vector<DiffPoly> A{DiffPoly()}, B{DiffPoly()}, C{DiffPoly(Rat(1))};
    auto shift_x2 = [](const std::vector<DiffPoly>& v) {
        std::vector<DiffPoly> r(v.size() + 2);
        for (size_t i = 0; i < v.size(); ++i) r[i + 2] = v[i];
        return r;
    };
    std::vector<std::vector<DiffPoly>> Ak{A}, Bk{B}, Ck{C};
    for (int k = 0; k < m; ++k) {
        A = shift_x2(A);
        B = shift_x2(B);
        C = shift_x2(C);
        A[0] += mgd.hat[static_cast<size_t>(k)].diff_t() * Rat(1, 2);
        B[0] += mgd.hat[static_cast<size_t>(k)];
        C[0] += mgd.chk[static_cast<size_t>(k)];
        Ak.push_back(A);
        Bk.push_back(B);
        Ck.push_back(C);
    }
    PolyMat2 D;
    for (int k = 0; k <= m; ++k) {
        PolyMat2 Dk;
        for (size_t i = 0; i < Ak[static_cast<size_t>(k)].size(); ++i)
            Dk.add(0, 0, static_cast<int>(i), -Ak[static_cast<size_t>(k)][i]);
        for (size_t i = 0; i < Ak[static_cast<size_t>(k)].size(); ++i)
            Dk.add(1, 1, static_cast<int>(i), Ak[static_cast<size_t>(k)][i]);
        for (size_t i = 0; i < Bk[static_cast<size_t>(k)].size(); ++i) {
            Dk.add(0, 1, static_cast<int>(i) + 1, Bk[static_cast<size_t>(k)][i]);
            Dk.add(1, 0, static_cast<int>(i) + 1, Bk[static_cast<size_t>(k)][i]);
        }
        for (size_t i = 0; i < Ck[static_cast<size_t>(k)].size(); ++i) {
            Dk.add(0, 1, static_cast<int>(i), Ck[static_cast<size_t>(k)][i]);
            Dk.add(1, 0, static_cast<int>(i), -Ck[static_cast<size_t>(k)][i]);
        }
        lp.Dk.push_back(Dk);
        D = D + Dk.scaled(times[k]);
    }
    // t pairs with hatR_0 in the string equation sum_k t_k hatR_k = -t u, so
    // the full Lax matrix carries t D_0 on top of the explicit times.
    D = D + lp.Dk[0].scaled(RatFunc::var("t"));
    lp.D = D;
    return lp;
}

// Eliminate the highest derivative of u using a relation S = 0 that contains
// u^(top) linearly, as the single-factor monomial u^(top) * (1/N)^nu0. Each
// occurrence in p must carry at least nu0 powers of 1/N.
DiffPoly reduce_linear_in_top(const DiffPoly& p, const DiffPoly& S, int top) {
    int nu0 = -1;
    RatFunc lc;
    for (auto& [m, c] : S.terms()) {
        if (m.derivs.size() == 1 && m.derivs[0].first == top && m.derivs[0].second == 1) {
            nu0 = m.nu;
            lc = c;
        } else if (m.exponent(top) != 0) {
            throw std::domain_error("reduce_linear_in_top: relation not linear in the top derivative");
        }
    }
    if (nu0 < 0) throw std::domain_error("reduce_linear_in_top: relation lacks the top derivative");
    DMonomial mtop;
    mtop.derivs.emplace_back(top, 1);
    mtop.nu = nu0;
    DiffPoly ltop;
    ltop.add_term(mtop, lc);
    DiffPoly lower = (ltop - S) * lc.inverse();  // value of u^(top) (1/N)^nu0 under S = 0

    DiffPoly rem = p;
    while (true) {
        bool changed = false;
        DiffPoly next;
        for (auto& [m, c] : rem.terms()) {
            if (m.exponent(top) >= 1) {
                if (m.nu < nu0)
                    throw std::domain_error("reduce_linear_in_top: occurrence carries too few 1/N powers");
                DMonomial rest = m;
                rest.nu -= nu0;
                for (auto& f : rest.derivs)
                    if (f.first == top) f.second -= 1;
                rest.derivs.erase(std::remove_if(rest.derivs.begin(), rest.derivs.end(),
                                                 [](auto& f) { return f.second == 0; }),
                                  rest.derivs.end());
                DiffPoly rm;
                rm.add_term(rest, c);
                next += rm * lower;
                changed = true;
            } else {
                DiffPoly keep;
                keep.add_term(m, c);
                next += keep;
            }
        }
        rem = next;
        if (!changed) break;
    }
    return rem;
}

PolyMat2 mkdv_compatibility_residual(const LaxPair& lp) {
    if (lp.family != LaxPair::Family::MKdV) throw std::invalid_argument("expects a (2m,1) pair");
    // d_t D - d_x R + [D, R] with the section-5 normalization (no 1/N)
    PolyMat2 res;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k <= lp.D.deg(i, j); ++k) res.add(i, j, k, lp.D.at(i, j, k).diff_t());
    // d_x R = [[0,1],[-1,0]]
    res.add(0, 1, 0, DiffPoly(Rat(-1)));
    res.add(1, 0, 0, DiffPoly(Rat(1)));
    res = res + lp.D.mul(lp.R) - lp.R.mul(lp.D);

    // string equation S = sum_k t_k hatR_k(u) + t u, top derivative u^(2m)
    MGDSequence mgd = mgd_sequence(lp.m);
    DiffPoly S;
    for (int k = 0; k <= lp.m; ++k) S += mgd.hat[static_cast<size_t>(k)] * lp.times[k];
    S += DiffPoly::u() * RatFunc::var("t");
    DiffPoly Sdot = S.diff_t();
    int top = 2 * lp.m;

    PolyMat2 reduced;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k <= res.deg(i, j); ++k) {
                DiffPoly p = res.at(i, j, k);
                p = reduce_linear_in_top(p, Sdot, top + 1);
                p = reduce_linear_in_top(p, S, top);
                reduced.add(i, j, k, p);
            }
    return reduced;
}

DiffPoly kdv_det_identity_residual(const LaxPair& lp) {
    if (lp.family != LaxPair::Family::KdV) throw std::invalid_argument("expects a (2m+1,2) pair");
    // plain d/dt of det D equals 2B modulo the differentiated string equation
    // sum_j t_j d_t R_{j+1} = 1 (the paper states it with the 1/N absorbed).
    GDSequence gd(lp.m + 1);
    DiffPoly Sdot;
    for (int j = 0; j <= lp.m; ++j) Sdot += gd.R(j + 1).diff_t() * lp.times[j];
    Sdot -= DiffPoly(Rat(1));
    auto det = lp.D.det();
    int top = 2 * lp.m + 1;
    int kmax = std::max(static_cast<int>(det.size()) - 1, lp.D.deg(0, 1));
    for (int k = 0; k <= kmax; ++k) {
        DiffPoly dk = k < static_cast<int>(det.size()) ? det[static_cast<size_t>(k)] : DiffPoly();
        DiffPoly p = dk.diff_t() - lp.D.at(0, 1, k) * Rat(2);
        p = reduce_linear_in_top(p, Sdot, top);
        if (!p.is_zero_poly()) return p;
    }
    return DiffPoly();
}

}  // namespace mmtool
