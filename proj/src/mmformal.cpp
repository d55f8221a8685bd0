#include "mmtool/mmformal.hpp"

#include <cmath>
#include <stdexcept>

#include "mmtool/kdv.hpp"
#include "mmtool/render.hpp"
#include "mmtool/toprec.hpp"

namespace mmtool {

namespace {

// Coefficients e + o*gamma with gamma^2 = G; e, o are series in s.
struct GPair {
    LaurentSeries e{"s"}, o{"s"};
};

GPair gp_mul(const GPair& a, const GPair& b, const LaurentSeries& G, int ord) {
    GPair r;
    r.e = (a.e * b.e + ((a.o * b.o) * G).truncated(ord)).truncated(ord);
    r.o = (a.e * b.o + a.o * b.e).truncated(ord);
    return r;
}

// symmetric Laurent polynomial sum c_k (z^k + z^-k), c_0 the constant
using SymPoly = std::vector<GPair>;

// multiply by xhat = alpha + gamma (z + 1/z)
SymPoly mul_xhat(const SymPoly& p, const GPair& alpha, const LaurentSeries& G, int ord) {
    SymPoly r(p.size() + 1);
    auto add_e = [&](size_t k, const GPair& v) {
        if (k >= r.size()) r.resize(k + 1);
        r[k].e += v.e;
        r[k].o += v.o;
    };
    GPair gamma;  // the element gamma itself: e = 0, o = 1
    gamma.o = LaurentSeries::constant("s", RatFunc(Rat(1)));
    for (size_t k = 0; k < p.size(); ++k) {
        add_e(k, gp_mul(p[k], alpha, G, ord));
        GPair gk = gp_mul(p[k], gamma, G, ord);
        if (k == 0) {
            add_e(1, gk);
        } else if (k == 1) {
            add_e(2, gk);
            GPair twice = gk;
            twice.e = gk.e * RatFunc(Rat(2));
            twice.o = gk.o * RatFunc(Rat(2));
            add_e(0, twice);
        } else {
            add_e(k + 1, gk);
            add_e(k - 1, gk);
        }
    }
    return r;
}

}  // namespace

MMCurveSeries solve_curve(const FormalPotential& pot, int order) {
    if (order < 1) throw std::invalid_argument("solve_curve: order >= 1");
    const int ord = order + 1;  // work to O(s^(order+1)) exclusive
    LaurentSeries s_series = LaurentSeries::monomial("s", RatFunc(Rat(1)), 1, ord);
    GPair alpha;  // starts 0
    alpha.e = LaurentSeries::zero("s", ord);
    LaurentSeries G = s_series;  // gamma^2 = s + O(s^2)

    SymPoly L;
    for (int pass = 0; pass < order + 3; ++pass) {
        // L(z) = xhat - sum_{j=2}^{d} s_{j+1} xhat^j
        SymPoly xpow(1);
        xpow[0].e = LaurentSeries::constant("s", RatFunc(Rat(1))).truncated(ord);
        SymPoly acc;  // accumulates L
        for (int j = 1; j <= pot.d; ++j) {
            xpow = mul_xhat(xpow, alpha, G, ord);
            RatFunc coef = j == 1 ? RatFunc(Rat(1)) : -pot.coeff(j + 1);
            if (coef.is_zero_fn()) continue;
            if (acc.size() < xpow.size()) acc.resize(xpow.size());
            for (size_t k = 0; k < xpow.size(); ++k) {
                acc[k].e += xpow[k].e * coef;
                acc[k].o += xpow[k].o * coef;
            }
        }
        L = acc;
        // residuals: F1 = [c_0].e, F2 = G*[c_1].o - s; parity parts that must
        // vanish identically do so by construction
        LaurentSeries F1 = L[0].e.truncated(ord);
        LaurentSeries F2 = ((L.size() > 1 ? L[1].o : LaurentSeries::zero("s", ord)) * G - s_series).truncated(ord);
        if (F1.known_zero() && F2.known_zero()) break;
        alpha.e = (alpha.e - F1).truncated(ord);
        G = (G - F2).truncated(ord);
    }

    MMCurveSeries out;
    out.d = pot.d;
    out.order = order;
    out.alpha = alpha.e;
    out.G = G;
    out.vhat.assign(static_cast<size_t>(pot.d) + 1, LaurentSeries::zero("s", ord));
    for (int k = 1; k <= pot.d; ++k) {
        if (static_cast<size_t>(k) >= L.size()) break;
        out.vhat[static_cast<size_t>(k)] = (k % 2 == 1) ? L[static_cast<size_t>(k)].o : L[static_cast<size_t>(k)].e;
    }
    // consistency: odd coefficients must be pure gamma-type and even pure
    for (int k = 0; k <= pot.d && static_cast<size_t>(k) < L.size(); ++k) {
        const LaurentSeries& bad = (k % 2 == 1) ? L[static_cast<size_t>(k)].e : L[static_cast<size_t>(k)].o;
        if (!bad.known_zero()) throw std::logic_error("solve_curve: parity leak in the constraint expansion");
    }
    return out;
}

QuadCurve quad_curve() {
    QuadCurve q;
    q.G = RatFunc::var("G");
    q.s4 = RatFunc::var("s4");
    q.s = q.G - q.s4 * q.G * q.G * Rat(3);
    q.vhat1 = RatFunc(Rat(1)) - q.s4 * q.G * Rat(3);
    q.vhat3 = -(q.s4 * q.G);
    return q;
}

ClosedForm quad_closed_form(int g) {
    QuadCurve q = quad_curve();
    ClosedForm f;
    if (g == 0) {
        // general f0 sum evaluated on the quadrangulation data:
        // f0 = 1/2 [ sum_j (G/j)(v_{j+1}-v_{j-1})^2 + (2 s gamma / j)(-1)^j (v_{2j-1}-v_{2j+1})
        //            + 3 s^2/2 + s^2 ln(G/s) ]
        // gamma-parity: v_{j+1}-v_{j-1} same parity; products land in Q(G,s4).
        RatFunc sum;
        // v as vhat with parity: v1 = g*vh1, v2 = 0, v3 = g*vh3, v0 = 0
        // first sum, j = 1..4: (v2-v0)^2 = 0; j=2: (G/2)(v3-v1)^2 = (G/2) G (vh3-vh1)^2
        sum += q.G * q.G * (q.vhat3 - q.vhat1).pow(2) * rat(1, 2);
        // j=4: (G/4)(v5-v3)^2 = (G/4) G vh3^2
        sum += q.G * q.G * q.vhat3.pow(2) * rat(1, 4);
        // second sum: j=1: -2 s gamma (v1 - v3) = -2 s G (vh1 - vh3);
        sum += q.s * q.G * (q.vhat1 - q.vhat3) * Rat(-2);
        // j=2: (2 s gamma/2)(v3 - v5) = s G vh3
        sum += q.s * q.G * q.vhat3;
        sum += q.s * q.s * rat(3, 2);
        f.rational = sum * rat(1, 2);
        f.log_coeff = q.s * q.s * rat(1, 2);
        f.log_arg = q.G / q.s;
        return f;
    }
    if (g == 1) {
        f.log_coeff = RatFunc(rat(1, 12));
        f.log_arg = (q.s * Rat(2) - q.G) * Rat(2);
        return f;
    }
    if (g == 2) {
        RatFunc num = q.s.pow(3) * Rat(178) - q.s.pow(2) * q.G * Rat(465) + q.s * q.G.pow(2) * Rat(420) -
                      q.G.pow(3) * Rat(130);
        RatFunc den = q.s4.pow(2) * (q.G - q.s * Rat(2)).pow(5) * rat_factorial(6);
        f.rational = num / den;
        return f;
    }
    throw std::invalid_argument("quad_closed_form: g in {0,1,2}");
}

double ratfunc_eval(const RatFunc& f, const std::map<std::string, double>& point) {
    auto poly_eval = [&](const MultiPoly& p) {
        double acc = 0;
        for (auto& [m, c] : p.terms()) {
            double t = rat_double(c);
            for (auto& [name, e] : m.factors) {
                auto it = point.find(name);
                if (it == point.end()) throw std::invalid_argument("ratfunc_eval: missing " + name);
                t *= std::pow(it->second, e);
            }
            acc += t;
        }
        return acc;
    };
    double num = poly_eval(f.num());
    for (auto& fac : f.den_factors()) num /= std::pow(poly_eval(fac.base), fac.exp);
    return num;
}

RatFunc ratfunc_residue_at(const RatFunc& f, const std::string& var, const Rat& a) {
    MultiPoly lin = MultiPoly::var(var) - MultiPoly(a);
    int k = 0;
    for (auto& fac : f.den_factors())
        if (fac.base == lin) k = fac.exp;
    if (k == 0) return RatFunc();
    RatFunc g = f * RatFunc(lin).pow(k);
    for (int i = 0; i < k - 1; ++i) g = g.derivative(var);
    g = g * (Rat(1) / rat_factorial(k - 1));
    return g.substitute(var, RatFunc(a));
}

namespace {

std::string pvar(int i) { return "p" + std::to_string(i); }

// M(z) = vh1 + vh3 (z^2 + 1 + z^-2), cleared: z^2 M = vh3 z^4 + (vh1+vh3) z^2 + vh3
MultiPoly quad_M_cleared(const std::string& v) {
    QuadCurve q = quad_curve();
    MultiPoly z2 = MultiPoly::var(v, 2);
    MultiPoly out;
    out += q.vhat3.num() * MultiPoly::var(v, 4);
    out += (q.vhat1 + q.vhat3).num() * z2;
    out += q.vhat3.num();
    return out;
}

// memoized quadrangulation correlators, stored on symbols p1..pn
std::map<std::pair<int, int>, RatFunc>& qmemo() {
    static std::map<std::pair<int, int>, RatFunc> m;
    return m;
}

RatFunc formal_corr(int g, int n);

// W_k^(h) with the active slot at zz (inv=false) or 1/zz (inv=true) and the
// given spectator symbols. The (0,2) factor keeps linear denominators.
RatFunc eval_w(int h, bool inv, const std::vector<std::string>& spect) {
    int k = static_cast<int>(spect.size()) + 1;
    const std::string az = "zz";
    if (h == 0 && k == 2) {
        if (!inv) {
            MultiPoly diff = MultiPoly::var(az) - MultiPoly::var(spect[0]);
            RatFunc r(Rat(1));
            r.divide_by_poly(diff);
            r.divide_by_poly(diff);
            return r;
        }
        // 1/(1/z - p)^2 = z^2/(z p - 1)^2
        MultiPoly diff = MultiPoly::var(az) * MultiPoly::var(spect[0]) - MultiPoly(Rat(1));
        RatFunc r(MultiPoly::var(az, 2));
        r.divide_by_poly(diff);
        r.divide_by_poly(diff);
        return r;
    }
    RatFunc w = formal_corr(h, k);
    RatFunc slot = inv ? RatFunc::var(az, -1) : RatFunc::var(az);
    RatFunc r = w.substitute(pvar(1), slot);
    for (size_t q = 0; q < spect.size(); ++q)
        r = r.substitute(pvar(static_cast<int>(q) + 2), RatFunc::var("tmp_" + spect[q]));
    for (auto& s : spect) r = r.substitute("tmp_" + s, RatFunc::var(s));
    return r;
}

RatFunc formal_corr(int g, int n) {
    if (2 * g - 2 + n <= 0) throw std::invalid_argument("formal_corr: 2g-2+n > 0");
    auto key = std::make_pair(g, n);
    auto it = qmemo().find(key);
    if (it != qmemo().end()) return it->second;

    QuadCurve q = quad_curve();
    const std::string az = "zz";
    RatFunc z = RatFunc::var(az);
    RatFunc zinv = RatFunc::var(az, -1);

    std::vector<std::string> J;
    for (int i = 1; i < n; ++i) J.push_back(pvar(i));

    // bracket: W_{n+1}^{(g-1)}(J, z, 1/z) + sum' W(z, I) W(1/z, J\I)
    RatFunc bracket;
    if (g >= 1) {
        if (g == 1 && n == 1) {
            // B(z, 1/z) = 1/(z - 1/z)^2 = z^2/(z^2-1)^2
            RatFunc b(MultiPoly::var(az, 2));
            b.divide_by_poly(MultiPoly::var(az) - MultiPoly(Rat(1)));
            b.divide_by_poly(MultiPoly::var(az) - MultiPoly(Rat(1)));
            b.divide_by_poly(MultiPoly::var(az) + MultiPoly(Rat(1)));
            b.divide_by_poly(MultiPoly::var(az) + MultiPoly(Rat(1)));
            bracket += b;
        } else {
            RatFunc w = formal_corr(g - 1, n + 1);
            RatFunc r = w.substitute(pvar(n), z);
            r = r.substitute(pvar(n + 1), zinv);
            bracket += r;
        }
    }
    int nspec = n - 1;
    for (int h = 0; h <= g; ++h)
        for (int mask = 0; mask < (1 << nspec); ++mask) {
            int isz = __builtin_popcount(static_cast<unsigned>(mask));
            if (h == 0 && isz == 0) continue;
            if (h == g && isz == nspec) continue;
            int g2 = g - h;
            int n1 = 1 + isz, n2 = 1 + nspec - isz;
            if ((h == 0 && n1 == 1) || (g2 == 0 && n2 == 1)) continue;
            std::vector<std::string> i1, i2;
            for (int b = 0; b < nspec; ++b) ((mask >> b) & 1 ? i1 : i2).push_back(J[static_cast<size_t>(b)]);
            bracket += eval_w(h, false, i1) * eval_w(g2, true, i2);
        }

    // kernel K(z0, z) = z^5 / (4 G (z-1)(z+1) Mc(z) (z0 - z)(z z0 - 1))
    MultiPoly Mc = quad_M_cleared(az);
    RatFunc integrand = RatFunc(MultiPoly::var(az, 5)) * rat(1, 4) * bracket;
    integrand.divide_by_poly(q.G.num());
    integrand.divide_by_poly(MultiPoly::var(az) - MultiPoly(Rat(1)));
    integrand.divide_by_poly(MultiPoly::var(az) + MultiPoly(Rat(1)));
    integrand.divide_by_poly(Mc);
    integrand.divide_by_poly(MultiPoly::var(pvar(n)) - MultiPoly::var(az));
    integrand.divide_by_poly(MultiPoly::var(az) * MultiPoly::var(pvar(n)) - MultiPoly(Rat(1)));

    RatFunc res = ratfunc_residue_at(integrand, az, Rat(1)) + ratfunc_residue_at(integrand, az, Rat(-1));

    for (auto& f : res.den_factors()) {
        for (int i = 1; i <= n; ++i) {
            if (!f.base.depends_on(pvar(i))) continue;
            MultiPoly vm = MultiPoly::var(pvar(i));
            bool ok = f.base == vm - MultiPoly(Rat(1)) || f.base == vm + MultiPoly(Rat(1));
            if (!ok)
                throw std::logic_error("formal_corr: pole away from the branch points: " +
                                       multipoly_to_string(f.base));
        }
    }
    qmemo()[key] = res;
    return res;
}

}  // namespace

RatFunc formal_correlator(int g, int n) { return formal_corr(g, n); }

RatFunc formal_free_energy(int g) {
    if (g < 2) throw std::invalid_argument("formal_free_energy: g >= 2");
    QuadCurve q = quad_curve();
    RatFunc w1 = formal_corr(g, 1);  // on p1
    const std::string v = pvar(1);
    // Phihat = G [ vh1 z^2/2 - vh1 z^-2/2 + vh3 z^4/4 - vh3 z^2/2 + vh3 z^-2/2 - vh3 z^-4/4 ]
    //          - 2 s ln z
    RatFunc zz = RatFunc::var(v);
    RatFunc phi_rat = q.G * (q.vhat1 * (zz.pow(2) - zz.pow(-2)) * rat(1, 2) +
                             q.vhat3 * (zz.pow(4) - zz.pow(-4)) * rat(1, 4) -
                             q.vhat3 * (zz.pow(2) - zz.pow(-2)) * rat(1, 2));
    RatFunc log_coeff = q.s * Rat(-2);

    // sum of residues of W1 alone must vanish (no other poles); the ln(-1)
    // constant then drops from the pairing
    RatFunc sumres = ratfunc_residue_at(w1, v, Rat(1)) + ratfunc_residue_at(w1, v, Rat(-1));
    if (!sumres.is_zero_fn()) throw std::logic_error("formal_free_energy: residues of W1 do not cancel");

    RatFunc total = ratfunc_residue_at(w1 * phi_rat, v, Rat(1)) + ratfunc_residue_at(w1 * phi_rat, v, Rat(-1));

    // log part: Res_a [ W1 * ln z ] with the local expansion of ln z
    for (int a : {1, -1}) {
        MultiPoly lin = MultiPoly::var(v) - MultiPoly(Rat(a));
        int k = 0;
        for (auto& fac : w1.den_factors())
            if (fac.base == lin) k = fac.exp;
        if (k == 0) continue;
        RatFunc gfun = w1 * RatFunc(lin).pow(k);
        // ln z = sum_{j>=1} c_j (z-a)^j locally (constant dropped):
        // a=+1: c_j = (-1)^(j+1)/j ; a=-1: c_j = -1/j
        RatFunc resacc;
        RatFunc gj = gfun;  // j-th derivative iteratively
        // need coefficients of (z-a)^(k-1-j) in g's Taylor series: use derivatives
        std::vector<RatFunc> taylor(static_cast<size_t>(k));
        RatFunc cur = gfun;
        for (int i = 0; i < k; ++i) {
            taylor[static_cast<size_t>(i)] = cur.substitute(v, RatFunc(Rat(a))) * (Rat(1) / rat_factorial(i));
            if (i + 1 < k) cur = cur.derivative(v);
        }
        for (int j = 1; j <= k - 1; ++j) {
            Rat cj = (a == 1) ? (j % 2 == 1 ? rat(1, j) : rat(-1, j)) : rat(-1, j);
            resacc += taylor[static_cast<size_t>(k - 1 - j)] * cj;
        }
        total += log_coeff * resacc;
    }
    return total * (Rat(1) / Rat(2 - 2 * g));
}

CriticalPotential critical_potential(int m) {
    if (m < 0) throw std::invalid_argument("critical_potential: m >= 0");
    // normalized Chebyshev: T_m(z + 1/z) = z^m + z^-m; T0 = 2, T1 = w
    std::vector<std::vector<Rat>> T{{Rat(2)}, {Rat(0), Rat(1)}};
    for (int k = 2; k <= m + 1; ++k) {
        std::vector<Rat> next(static_cast<size_t>(k) + 1, Rat(0));
        for (size_t i = 0; i < T[static_cast<size_t>(k - 1)].size(); ++i)
            next[i + 1] += T[static_cast<size_t>(k - 1)][i];
        for (size_t i = 0; i < T[static_cast<size_t>(k - 2)].size(); ++i)
            next[i] -= T[static_cast<size_t>(k - 2)][i];
        T.push_back(next);
    }
    CriticalPotential out;
    out.m = m;
    size_t top = T[static_cast<size_t>(m + 1)].size();
    out.Tdiff.assign(top, Rat(0));
    for (size_t i = 0; i < top; ++i) {
        out.Tdiff[i] = T[static_cast<size_t>(m + 1)][i];
        if (i < T[static_cast<size_t>(m)].size()) out.Tdiff[i] -= T[static_cast<size_t>(m)][i];
    }
    // alpha: root of Tdiff(-a) = 0 with -a - 2 != 0, found numerically
    auto eval = [&](double w) {
        double acc = 0, p = 1;
        for (auto& c : out.Tdiff) {
            acc += rat_double(c) * p;
            p *= w;
        }
        return acc;
    };
    double root = 0;
    bool found = false;
    for (double w0 = -3.0; w0 <= 3.0 && !found; w0 += 0.05) {
        double w1 = w0 + 0.05;
        if (eval(w0) == 0.0 && std::fabs(w0 - 2.0) > 1e-9) { root = w0; found = true; break; }
        if (eval(w0) * eval(w1) < 0) {
            double lo = w0, hi = w1;
            for (int it = 0; it < 200; ++it) {
                double mid = (lo + hi) / 2;
                if (eval(lo) * eval(mid) <= 0) hi = mid; else lo = mid;
            }
            double r = (lo + hi) / 2;
            if (std::fabs(r - 2.0) > 1e-6) { root = r; found = true; }
        }
    }
    if (!found && m == 0) { root = 0; found = true; }  // m=0: V' = T1 - T0, any point regular
    out.alpha = -root;  // w = -alpha
    // s_c = (-alpha - 2)^m (T'_{m+1}(-alpha) - T'_m(-alpha))
    double dv = 0, p = 1;
    for (size_t i = 1; i < out.Tdiff.size(); ++i) {
        dv += rat_double(out.Tdiff[i]) * static_cast<double>(i) * p;
        p *= root;
    }
    out.s_c = std::pow(root - 2.0, m) * dv;
    return out;
}

DScaleReport double_scaling_check(int g, double s4, const std::vector<double>& s_sequence) {
    if (g != 2) throw std::invalid_argument("double_scaling_check: g = 2 supported");
    double sc = 1.0 / (12.0 * s4);
    ClosedForm f2 = quad_closed_form(2);

    auto Gof = [&](double s) { return (1.0 - std::sqrt(1.0 - 12.0 * s * s4)) / (6.0 * s4); };
    auto f2of = [&](double s) {
        return ratfunc_eval(f2.rational, {{"G", Gof(s)}, {"s4", s4}});
    };

    // local expansion of yhat in zeta = sqrt(xhat - xhat(1)) at z = 1 + eta
    auto dcoef = [&](double s, double& d0, double& d1) {
        double G = Gof(s), gam = std::sqrt(G);
        // series in eta to order 4: zeta = sqrt(gam) eta / sqrt(1+eta)
        // yhat(1+eta) as polynomial in eta; v1 = s/gam, v3 = -s4 gam^3
        double v1 = s / gam, v3 = -s4 * gam * gam * gam;
        const int N = 6;
        std::vector<double> yh(N, 0.0), zexp(N, 0.0);
        // z^k - z^-k around z = 1+eta: compute numerically via derivatives is
        // messy; use the eta-polynomial of z = 1+eta and long division for z^-k
        auto zpow = [&](int k) {
            std::vector<double> num(N, 0.0);
            num[0] = 1;
            for (int i = 0; i < std::abs(k); ++i) {
                std::vector<double> nx(N, 0.0);
                for (int a = 0; a < N; ++a) {
                    nx[a] += num[a];
                    if (a + 1 < N) nx[a + 1] += num[a];
                }
                num = nx;
            }
            if (k >= 0) return num;
            // invert the series (1+eta)^|k|
            std::vector<double> inv(N, 0.0);
            inv[0] = 1.0;
            for (int a = 1; a < N; ++a) {
                double acc = 0;
                for (int b = 1; b <= a; ++b) acc += num[b] * inv[a - b];
                inv[a] = -acc;
            }
            return inv;
        };
        auto sub = [&](std::vector<double> x, const std::vector<double>& y) {
            for (int i = 0; i < N; ++i) x[i] -= y[i];
            return x;
        };
        std::vector<double> y1 = sub(zpow(1), zpow(-1)), y3 = sub(zpow(3), zpow(-3));
        for (int i = 0; i < N; ++i) yh[i] = v1 * y1[i] + v3 * y3[i];
        // zeta(eta) = sqrt(gam) * eta * (1+eta)^(-1/2): expand binomially
        std::vector<double> half(N, 0.0);
        half[0] = 1.0;
        double binom = 1.0;
        for (int a = 1; a < N; ++a) {
            binom *= (-0.5 - (a - 1)) / a;
            half[a] = binom;
        }
        std::vector<double> zeta(N, 0.0);
        for (int a = 0; a + 1 < N; ++a) zeta[a + 1] = std::sqrt(gam) * half[a];
        // series reversion: eta(zeta) to enough orders, then compose yh
        std::vector<double> etaz(N, 0.0);  // eta as series in zeta
        etaz[1] = 1.0 / zeta[1];
        for (int a = 2; a < N; ++a) {
            // impose zeta(eta(z)) = z order by order
            std::vector<double> comp(N, 0.0);
            // compute zeta(etaz) up to order a
            std::vector<double> pw(N, 0.0);
            pw[0] = 1.0;
            for (int k = 1; k < N; ++k) {
                // pw = etaz^k progressively
                std::vector<double> nx(N, 0.0);
                for (int i = 0; i < N; ++i)
                    for (int j = 0; i + j < N; ++j) nx[i + j] += pw[i] * etaz[j];
                pw = nx;
                for (int i = 0; i < N; ++i) comp[i] += zeta[k] * pw[i];
            }
            etaz[a] -= comp[a] / zeta[1];
            // recompute is cheap; proceed
        }
        // y(zeta) = yh(eta(zeta))
        std::vector<double> yz(N, 0.0), pw(N, 0.0);
        pw[0] = 1.0;
        for (int k = 1; k < N; ++k) {
            std::vector<double> nx(N, 0.0);
            for (int i = 0; i < N; ++i)
                for (int j = 0; i + j < N; ++j) nx[i + j] += pw[i] * etaz[j];
            pw = nx;
            for (int i = 0; i < N; ++i) yz[i] += yh[k] * pw[i];
        }
        d0 = yz[1];
        d1 = yz[3];
    };

    // Richardson in sqrt(delta) for c0 = d0/sqrt(delta), c1 = d1, and the
    // scaled prefactor f2 * delta^(5/2)
    std::vector<double> c0s, c1s, pref, expo;
    for (size_t i = 0; i < s_sequence.size(); ++i) {
        double s = s_sequence[i];
        double delta = sc - s;
        double d0, d1;
        dcoef(s, d0, d1);
        c0s.push_back(d0 / std::sqrt(delta));
        c1s.push_back(d1);
        pref.push_back(f2of(s) * std::pow(delta, 2.5));
    }
    for (size_t i = 0; i + 1 < s_sequence.size(); ++i) {
        double d1 = sc - s_sequence[i], d2 = sc - s_sequence[i + 1];
        expo.push_back(std::log(std::fabs(f2of(s_sequence[i + 1]) / f2of(s_sequence[i]))) /
                       std::log(d2 / d1));
    }
    auto richardson = [](std::vector<double> v, double ratio) {
        // one column per power of sqrt(ratio)
        double r = std::sqrt(ratio);
        for (int col = 1; col < static_cast<int>(v.size()); ++col) {
            double f = std::pow(r, col);
            for (size_t i = 0; i + static_cast<size_t>(col) < v.size(); ++i)
                v[i] = (v[i + 1] - f * v[i]) / (1.0 - f);
        }
        return v.empty() ? 0.0 : v[0];
    };
    double ratio = (sc - s_sequence[1]) / (sc - s_sequence[0]);
    DScaleReport rep;
    rep.c0 = richardson(c0s, ratio);
    rep.c1 = richardson(c1s, ratio);
    rep.prefactor = richardson(pref, ratio);
    rep.exponent_fit = richardson(expo, ratio);

    // reference: F2 of the limit curve y = c0 z + c1 z^3 (u0 = 0)
    static RatFunc F2sym = [] {
        Recursion rec(minimal_curve(1, Times::fully_symbolic(1)));
        return rec.free_energy(2);
    }();
    rep.reference = ratfunc_eval(F2sym, {{"u0", 0.0}, {"t0", rep.c0}, {"t1", rep.c1}});
    rep.rel_error = std::fabs(rep.prefactor - rep.reference) / std::fabs(rep.reference);
    return rep;
}

}  // namespace mmtool
