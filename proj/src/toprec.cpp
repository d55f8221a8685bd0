#include "mmtool/toprec.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "mmtool/cache.hpp"
#include "mmtool/render.hpp"

namespace mmtool {

namespace {

// Decorated Laurent series: spectator exponent vector (raw powers of the
// z_j's, odd ones must cancel before extraction) -> series in the active z.
using Decorated = std::map<std::vector<int>, LaurentSeries>;

void dadd(Decorated& acc, const std::vector<int>& spec, const LaurentSeries& s) {
    auto [it, fresh] = acc.emplace(spec, s);
    if (!fresh) it->second += s;
}

std::vector<int> merge_spec(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

}  // namespace

bool CorrelatorForm::symmetric() const {
    for (auto& [d, c] : terms) {
        std::vector<int> s = d;
        std::sort(s.begin(), s.end());
        std::vector<int> perm = s;
        do {
            auto it = terms.find(perm);
            if (it == terms.end()) {
                if (!c.is_zero_fn()) return false;
            } else if (!(it->second == c)) {
                return false;
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    return true;
}

Recursion::Recursion(SpectralCurve curve)
    : curve_(std::move(curve)),
      der_(curve_.family == SpectralCurve::Family::MinimalModel
               ? U0Derivation(curve_.classical_poly_P)
               : U0Derivation(MultiPoly::var("u0"))),
      fp_(curve_.fingerprint()) {
    if (curve_.yprime0().is_zero_fn())
        throw std::domain_error("singular curve: y'(0) = 0 (degenerate branch point)");
}

const CorrelatorForm& Recursion::correlator(int g, int n) {
    if (g < 0 || n < 1 || (2 * g - 2 + n <= 0))
        throw std::invalid_argument("correlator: need 2g-2+n > 0 (W_2^(0) is implicit)");
    auto key = std::make_pair(g, n);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;

    if (auto cached = cache_get(fp_, g, n)) {
        CorrelatorForm w;
        w.g = g;
        w.n = n;
        for (auto& t : (*cached).at("terms")) {
            std::vector<int> d = t.at("d").get<std::vector<int>>();
            w.terms[d] = ratfunc_from_json(t.at("c"));
        }
        return memo_.emplace(key, std::move(w)).first->second;
    }

    CorrelatorForm w = compute(g, n);
    nlohmann::json payload;
    payload["type"] = "correlator";
    payload["g"] = g;
    payload["n"] = n;
    nlohmann::json terms = nlohmann::json::array();
    for (auto& [d, c] : w.terms) terms.push_back({{"d", d}, {"c", ratfunc_to_json(c)}});
    payload["terms"] = terms;
    cache_put(fp_, g, n, payload);
    return memo_.emplace(key, std::move(w)).first->second;
}

CorrelatorForm Recursion::compute(int g, int n) {
    // working truncation: pole orders are bounded by 2(3g-3+n)+2; margin 2
    const int dmax_target = 3 * g - 3 + n;
    const int ord = 2 * dmax_target + 2 * (2 * curve_.m + 1) + 6;
    if (yinv_order_ < ord) {
        yinv_ = curve_.y_series("z").inverted(ord);
        yinv_order_ = ord;
    }

    const int nspec = n - 1;  // spectator count
    Decorated bracket;

    // (g-1) term: W_{n+1}^(g-1)(z, -z, J)
    if (g == 1 && nspec == 0) {
        dadd(bracket, {}, LaurentSeries::monomial("z", RatFunc(rat(1, 4)), -2, ord));
    } else if (g >= 1) {
        const CorrelatorForm& sub = correlator(g - 1, nspec + 2);
        for (auto& [d, c] : sub.terms) {
            // arguments ordered (J..., z, -z): spectators first
            std::vector<int> spec(d.begin(), d.begin() + nspec);
            for (auto& e : spec) e = -(2 * e + 2);
            int da = d[static_cast<size_t>(nspec)], db = d[static_cast<size_t>(nspec) + 1];
            dadd(bracket, spec, LaurentSeries::monomial("z", c, -(2 * da + 2) - (2 * db + 2), ord));
        }
    }

    // product terms, ordered sum over (h, I) excluding (0,empty) and (g,J)
    const int nsub = 1 << nspec;
    for (int h = 0; h <= g; ++h) {
        for (int mask = 0; mask < nsub; ++mask) {
            int isz = __builtin_popcount(static_cast<unsigned>(mask));
            if (h == 0 && isz == 0) continue;
            if (h == g && isz == nspec) continue;
            int n1 = 1 + isz, n2 = 1 + nspec - isz;
            int g2 = g - h;
            bool f1_is02 = (h == 0 && n1 == 2), f2_is02 = (g2 == 0 && n2 == 2);
            if ((h == 0 && n1 == 1) || (g2 == 0 && n2 == 1)) continue;  // excluded W_1^(0)

            // factor 1 at +z with spectators I; factor 2 at -z with J\I
            std::vector<int> idx1, idx2;
            for (int b = 0; b < nspec; ++b) ((mask >> b) & 1 ? idx1 : idx2).push_back(b);

            auto expand = [&](bool is02, int fg, const std::vector<int>& idx, int sign) {
                Decorated out;
                std::vector<int> zero(static_cast<size_t>(nspec), 0);
                if (is02) {
                    // W_2^(0)(sz, z_j) = 1/(sz - z_j)^2 = sum_k (k+1) (sz)^k z_j^{-k-2}
                    int jslot = idx[0];
                    for (int k = 0; k < ord; ++k) {
                        std::vector<int> spec = zero;
                        spec[static_cast<size_t>(jslot)] = -(k + 2);
                        Rat c((k + 1) * ((sign < 0 && (k & 1)) ? -1 : 1));
                        dadd(out, spec, LaurentSeries::monomial("z", RatFunc(c), k, ord));
                    }
                    return out;
                }
                const CorrelatorForm& sub = correlator(fg, static_cast<int>(idx.size()) + 1);
                for (auto& [d, c] : sub.terms) {
                    // arguments ordered (z-slot first, then the chosen spectators)
                    std::vector<int> spec = zero;
                    for (size_t q = 0; q < idx.size(); ++q)
                        spec[static_cast<size_t>(idx[q])] = -(2 * d[q + 1] + 2);
                    int zexp = -(2 * d[0] + 2);  // even: the sign of z drops
                    dadd(out, spec, LaurentSeries::monomial("z", c, zexp, ord));
                }
                return out;
            };

            Decorated f1 = expand(f1_is02, h, idx1, +1);
            Decorated f2 = expand(f2_is02, g2, idx2, -1);
            for (auto& [s1, ser1] : f1)
                for (auto& [s2, ser2] : f2) dadd(bracket, merge_spec(s1, s2), ser1 * ser2);
        }
    }

    // kernel: W(z0, J) = (1/4) sum_k z0^{-2k-2} [coeff of z^{-2k-1} in bracket/y]
    CorrelatorForm w;
    w.g = g;
    w.n = n;
    for (auto& [spec, ser] : bracket) {
        bool odd = false;
        for (int e : spec)
            if ((-e) & 1) odd = true;
        if (odd) {
            // odd spectator powers survive only at non-negative z-exponents
            // (even-even W_2^(0) cross terms); they cannot reach the residue
            if (!ser.known_zero() && ser.lowest_exponent() < 0)
                throw std::logic_error("recursion: odd spectator power at a z-pole");
            continue;
        }
        // parity: the bracket must be even in z
        if (!ser.known_zero())
            for (int e = ser.lowest_exponent(); e <= ser.highest_known(); ++e)
                if ((e & 1) && !ser.raw(e).is_zero_fn())
                    throw std::logic_error("recursion: parity violation in the bracket");
        LaurentSeries s = ser * yinv_;
        for (int k = 0; k <= dmax_target; ++k) {
            RatFunc c = s.coeff(-2 * k - 1);
            if (c.is_zero_fn()) continue;
            std::vector<int> d(static_cast<size_t>(n), 0);
            for (int q = 0; q < nspec; ++q) {
                int pole = -spec[static_cast<size_t>(q)];
                if (pole % 2 || pole < 2) throw std::logic_error("recursion: bad spectator pole");
                d[static_cast<size_t>(q)] = (pole - 2) / 2;
            }
            d[static_cast<size_t>(nspec)] = k;
            auto [it, fresh] = w.terms.emplace(d, c * rat(1, 4));
            if (!fresh) it->second += c * rat(1, 4);
        }
    }
    for (auto it = w.terms.begin(); it != w.terms.end();) {
        if (it->second.is_zero_fn())
            it = w.terms.erase(it);
        else
            ++it;
    }
    // structural invariants: even poles with d_i <= 3g-3+n
    for (auto& [d, c] : w.terms)
        for (int di : d)
            if (di < 0 || di > dmax_target) throw std::logic_error("recursion: pole bound violated");
    return w;
}

RatFunc Recursion::free_energy(int g) {
    if (g < 2) throw std::invalid_argument("free_energy: residue formula needs g >= 2");
    if (curve_.family != SpectralCurve::Family::MinimalModel)
        throw std::invalid_argument("free_energy: minimal-model curves only here");
    const CorrelatorForm& w1 = correlator(g, 1);
    LambdaField phi = phi_field(curve_);
    RatFunc acc;
    for (auto& [d, c] : w1.terms) {
        size_t k = static_cast<size_t>(d[0]);
        if (k < phi.coef.size()) acc += c * phi.coef[k];
    }
    return acc * (Rat(1) / Rat(2 - 2 * g));
}

CorrelatorForm Recursion::t_derivative(int g, int n, int j) {
    // Derivative at fixed z-arguments: the coefficients move with t_j both
    // explicitly and through u0(t; t_j). (The n+1-point residue pairing
    // reproduces the fixed-x-frame variation instead; the fixed-z derivative
    // is the one entering homogeneity and the F-double-dot cross checks.)
    if (j < -1 || j > curve_.m) throw std::invalid_argument("t_derivative: j out of range");
    const CorrelatorForm& w = correlator(g, n);
    CorrelatorForm out;
    out.g = g;
    out.n = n;
    for (auto& [d, c] : w.terms) {
        RatFunc dc = (j == -1) ? direct_dt(c) : direct_dtj(c, j);
        if (!dc.is_zero_fn()) out.terms[d] = dc;
    }
    return out;
}

RatFunc Recursion::t_derivative_free_energy(int g, int j) {
    if (g < 1) throw std::invalid_argument("t_derivative_free_energy: g >= 1");
    const CorrelatorForm& w1 = correlator(g, 1);
    std::vector<RatFunc> lam;
    if (j >= 0)
        lam = lambda_field(curve_, j).coef;
    else
        lam.assign(1, RatFunc(Rat(-1)));
    RatFunc acc;
    for (auto& [d, c] : w1.terms) {
        size_t k = static_cast<size_t>(d[0]);
        if (k < lam.size()) acc += c * lam[k];
    }
    return acc;
}

RatFunc Recursion::direct_dt(const RatFunc& f) const { return der_.ddt(f); }

RatFunc Recursion::direct_dtj(const RatFunc& f, int j) const {
    // explicit t_j dependence plus the implicit one through u0(t; t_j):
    // du0/dt_j = -P_{t_j}/P'
    std::string tj = "t" + std::to_string(j);
    RatFunc expl = f.derivative(tj);
    MultiPoly Ptj = curve_.classical_poly_P.derivative(tj);
    RatFunc du0 = -(RatFunc(Ptj) / RatFunc(curve_.classical_poly_P.derivative("u0")));
    return expl + f.derivative("u0") * du0;
}

CorrelatorForm Recursion::homogeneity_residual(int g, int n) {
    // (2-2g-n) W = sum_j t_j dW/dt_j at fixed u0 (the t-direction completes
    // the Euler operator and cancels the implicit u0 motion on shell, so the
    // clean off-shell statement is t-homogeneity of the coefficients). Use a
    // fully symbolic curve (t_m kept as a symbol) for a meaningful check.
    const CorrelatorForm& w = correlator(g, n);
    CorrelatorForm res;
    res.g = g;
    res.n = n;
    Rat weight(2 - 2 * g - n);
    for (auto& [d, c] : w.terms) {
        RatFunc acc = c * weight;
        for (int j = 0; j <= curve_.m; ++j)
            acc -= curve_.times[j] * c.derivative("t" + std::to_string(j));
        if (!acc.is_zero_fn()) res.terms[d] = acc;
    }
    return res;
}

bool loop_equation_polynomial(Recursion& rec, int g, int n) {
    // Loop-equation check in the parametrizing variable. For (g,n) != (0,1):
    // with Bracket(z) the full quadratic/genus-reduced sum of eq-(loopeq),
    //   Q(z) := Bracket(z) - 4 z y(z) W_{n+1}^(g)(z, J)
    // must carry no negative powers of z and vanish at z = 0 -- all polar
    // parts of the combination at the branch point match, which is the
    // x-polynomiality statement there. Spectator poles are the removable
    // x_j-denominator bookkeeping and stay unconstrained.
    const int nspec = n;
    auto zvar = [](int i) { return "w" + std::to_string(i); };

    // y(z) as a polynomial in a given symbol
    auto ypoly_in = [&](const std::string& v) {
        MultiPoly p;
        for (size_t q = 0; q < rec.curve().ycoef.size(); ++q) {
            const RatFunc& c = rec.curve().ycoef[q];
            if (c.is_zero_fn()) continue;
            if (!c.is_polynomial()) throw std::logic_error("loop check expects polynomial y-coefficients");
            p += c.num() * MultiPoly::var(v, 2 * static_cast<int>(q) + 1);
        }
        return p;
    };

    if (g == 0 && n == 1) {
        // directly the printed x-form equation: 2 y W_2^(0),x-form + d/dx_1
        // of the subtracted difference quotient is a polynomial in x
        RatFunc z0 = RatFunc::var(zvar(0)), z1 = RatFunc::var(zvar(1));
        RatFunc y0 = RatFunc(ypoly_in(zvar(0))), y1 = RatFunc(ypoly_in(zvar(1)));
        MultiPoly sum = MultiPoly::var(zvar(0)) + MultiPoly::var(zvar(1));
        RatFunc w2x(rat(1, 4));
        w2x.divide_by_poly(MultiPoly::var(zvar(0)));
        w2x.divide_by_poly(MultiPoly::var(zvar(1)));
        w2x.divide_by_poly(sum);
        w2x.divide_by_poly(sum);
        RatFunc P = y0 * w2x * Rat(2);
        RatFunc frac = y0 - y1;
        frac.divide_by_poly(MultiPoly::var(zvar(0)) - MultiPoly::var(zvar(1)));
        frac.divide_by_poly(sum);
        RatFunc dterm = frac.derivative(zvar(1)) * rat(1, 2);
        dterm.divide_by_poly(MultiPoly::var(zvar(1)));
        P += dterm;
        RatFunc podd = (P - P.substitute(zvar(0), -z0)) * rat(1, 2);
        if (!podd.is_zero_fn()) return false;
        for (auto& f : P.den_factors())
            if (f.base.depends_on(zvar(0))) return false;
        return true;
    }

    // Bracket assembled as an exact rational function of the active z
    auto wval = [&](int h, int sign, const std::vector<int>& idx) -> RatFunc {
        int k = static_cast<int>(idx.size()) + 1;
        if (h == 0 && k == 2) {
            MultiPoly diff = (sign > 0 ? MultiPoly::var(zvar(0)) : -MultiPoly::var(zvar(0))) -
                             MultiPoly::var(zvar(idx[0]));
            RatFunc r(Rat(1));
            r.divide_by_poly(diff);
            r.divide_by_poly(diff);
            return r;
        }
        const CorrelatorForm& w = rec.correlator(h, k);
        RatFunc acc;
        for (auto& [d, c] : w.terms) {
            RatFunc term = c * RatFunc::var(zvar(0), -(2 * d[0] + 2));
            for (size_t q = 0; q < idx.size(); ++q)
                term *= RatFunc::var(zvar(idx[q]), -(2 * d[q + 1] + 2));
            acc += term;
        }
        return acc;
    };

    RatFunc bracket;
    if (g == 1 && nspec == 0) {
        bracket += RatFunc::var(zvar(0), -2) * rat(1, 4);
    } else if (g >= 1) {
        const CorrelatorForm& sub = rec.correlator(g - 1, nspec + 2);
        for (auto& [d, c] : sub.terms) {
            RatFunc term = c * RatFunc::var(zvar(0), -(2 * d[static_cast<size_t>(nspec)] + 2) -
                                                        (2 * d[static_cast<size_t>(nspec) + 1] + 2));
            for (int q = 0; q < nspec; ++q)
                term *= RatFunc::var(zvar(q + 1), -(2 * d[static_cast<size_t>(q)] + 2));
            bracket += term;
        }
    }
    for (int h = 0; h <= g; ++h) {
        for (int mask = 0; mask < (1 << nspec); ++mask) {
            int isz = __builtin_popcount(static_cast<unsigned>(mask));
            if (h == 0 && isz == 0) continue;
            if (h == g && isz == nspec) continue;
            int g2 = g - h;
            int n1 = 1 + isz, n2 = 1 + nspec - isz;
            if ((h == 0 && n1 == 1) || (g2 == 0 && n2 == 1)) continue;
            std::vector<int> idx1, idx2;
            for (int b = 0; b < nspec; ++b) ((mask >> b) & 1 ? idx1 : idx2).push_back(b + 1);
            bracket += wval(h, +1, idx1) * wval(g2, -1, idx2);
        }
    }

    std::vector<int> all;
    for (int q = 1; q <= nspec; ++q) all.push_back(q);
    RatFunc Q = bracket - RatFunc(MultiPoly::var(zvar(0))) * RatFunc(ypoly_in(zvar(0))) * Rat(4) *
                              wval(g, +1, all);

    // no pure z-denominators may survive
    for (auto& f : Q.den_factors()) {
        if (!f.base.depends_on(zvar(0))) continue;
        bool spectator = false;
        for (int q = 1; q <= nspec; ++q)
            if (f.base.depends_on(zvar(q))) spectator = true;
        if (!spectator) return false;
    }
    // parity and the z = 0 zero
    RatFunc qodd = (Q - Q.substitute(zvar(0), -RatFunc::var(zvar(0)))) * rat(1, 2);
    if (!qodd.is_zero_fn()) return false;
    RatFunc at0 = Q.substitute(zvar(0), RatFunc(Rat(0)));
    return at0.is_zero_fn();
}

}  // namespace mmtool
