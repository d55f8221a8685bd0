#include "mmtool/kontsevich.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "mmtool/toprec.hpp"

namespace mmtool {

KontsevichTimes kontsevich_times(int m, const Times& times) {
    // delta_{k,0} - tau_{2k+3}/2 equals the z^(2k+1) coefficient of y, so
    // tau_{2k+3} = 2 (delta_{k,0} - ycoef_k).
    SpectralCurve c = minimal_curve(m, times);
    KontsevichTimes kt;
    kt.m = m;
    kt.tau.resize(static_cast<size_t>(m) + 1);
    for (int k = 0; k <= m; ++k) {
        RatFunc delta = k == 0 ? RatFunc(Rat(1)) : RatFunc();
        kt.tau[static_cast<size_t>(k)] = (delta - c.ycoef[static_cast<size_t>(k)]) * Rat(2);
    }
    return kt;
}

DualTimes dual_times(int m, const Times& times, int kmax) {
    // 1 - g(r) = -2 u0dot sum_j t_j (2j+1)!/j! (r^j e^{-u0/2r})_+, the plus
    // part keeping non-negative powers of r. Constant term is 1 exactly.
    ClassicalStringPoly cp = classical_poly(m, times);
    U0Derivation der(cp.P);
    RatFunc du0 = der.du0_dt();
    RatFunc u0 = RatFunc::var("u0");
    LaurentSeries s("r");
    for (int k = 0; k <= std::min(m, kmax); ++k) {
        RatFunc acc;
        for (int j = k; j <= m; ++j) {
            int l = j - k;
            Rat coef = rat_factorial(2 * j + 1) / (rat_factorial(j) * rat_factorial(l));
            acc += times[j] * coef * (u0 * rat(-1, 2)).pow(l);
        }
        acc = acc * du0 * Rat(-2);
        if (!acc.is_zero_fn()) s.set_coeff(k, acc);
    }
    if (!(s.raw(0) == RatFunc(Rat(1))))
        throw std::domain_error("dual_times: constant term of 1-g is not 1 (u0dot normalization)");
    DualTimes dt;
    dt.kmax = kmax;
    dt.one_minus_g = s;
    LaurentSeries gt = -(s.log1_series(kmax + 1));
    dt.tau_tilde.assign(static_cast<size_t>(kmax) + 1, RatFunc());
    for (int k = 1; k <= kmax; ++k) dt.tau_tilde[static_cast<size_t>(k)] = gt.raw(k);
    return dt;
}

IntersectionNumber psi_intersection(int g, const std::vector<int>& degrees) {
    int n = static_cast<int>(degrees.size());
    IntersectionNumber out{g, degrees, Rat(0), true};
    int total = 0;
    for (int d : degrees) total += d;
    if (total != 3 * g - 3 + n) {
        out.dimension_ok = false;
        return out;
    }
    static Recursion airy(minimal_curve(0, Times::numeric(0, {Rat(1)})));
    const CorrelatorForm& w = airy.correlator(g, n);
    RatFunc c = w.coeff(degrees);
    if (c.is_zero_fn()) return out;
    if (!c.is_constant()) throw std::logic_error("psi_intersection: non-constant Airy coefficient");
    // W = 2^-(3g-3+n) (2 - tau_3)^(2-2g-n) sum <prod psi^d> prod (2d_i+1)!/d_i! z^-(2d_i+2)
    // with tau_3 = 0 at the Airy point.
    Rat pref = rat_pow(rat(1, 2), 3 * g - 3 + n) * rat_pow(Rat(2), 2 - 2 * g - n);
    Rat fac(1);
    for (int d : degrees) fac *= rat_factorial(2 * d + 1) / rat_factorial(d);
    out.value = c.constant_value() / (pref * fac);
    return out;
}

namespace {

Rat dfact_odd(int k) { return rat_double_factorial_odd(k + 1); }  // (2k+1)!!

struct Key {
    int g;
    std::vector<int> d;
    bool operator<(const Key& o) const { return std::tie(g, d) < std::tie(o.g, o.d); }
};

std::map<Key, Rat>& memo() {
    static std::map<Key, Rat> m;
    return m;
}

Rat dvv(int g, std::vector<int> d);

Rat dvv_sorted(int g, std::vector<int> d) {
    std::sort(d.begin(), d.end());
    int n = static_cast<int>(d.size());
    int total = 0;
    for (int x : d) total += x;
    if (g < 0 || total != 3 * g - 3 + n) return Rat(0);
    if (2 * g - 2 + n <= 0) return Rat(0);  // unstable
    if (g == 0 && n == 3) return Rat(1);    // <tau_0^3>
    if (g == 1 && n == 1) return rat(1, 24);  // L_0 central term
    Key key{g, d};
    auto it = memo().find(key);
    if (it != memo().end()) return it->second;

    Rat val(0);
    if (d.front() == 0 && n >= 2) {
        // string equation
        std::vector<int> rest(d.begin() + 1, d.end());
        for (size_t j = 0; j < rest.size(); ++j) {
            if (rest[j] == 0) continue;
            std::vector<int> nd = rest;
            nd[j] -= 1;
            val += dvv(g, nd);
        }
    } else if (d.front() >= 1 && d.front() <= 1 && n >= 2) {
        // dilaton equation
        std::vector<int> rest(d.begin() + 1, d.end());
        val = Rat(2 * g - 2 + (n - 1)) * dvv(g, rest);
    } else {
        // DVV step on the largest index: k+1 = d.back() >= 2
        int k = d.back() - 1;
        std::vector<int> S(d.begin(), d.end() - 1);
        Rat acc(0);
        for (size_t j = 0; j < S.size(); ++j) {
            std::vector<int> nd = S;
            nd[j] = S[j] + k;
            acc += dfact_odd(k + S[j]) / rat_double_factorial_odd(S[j]) * dvv(g, nd);
        }
        for (int a = 0; a <= k - 1; ++a) {
            int b = k - 1 - a;
            Rat w = dfact_odd(a) * dfact_odd(b) * rat(1, 2);
            std::vector<int> nd = S;
            nd.push_back(a);
            nd.push_back(b);
            acc += w * dvv(g - 1, nd);
            int ns = static_cast<int>(S.size());
            for (int g1 = 0; g1 <= g; ++g1)
                for (int mask = 0; mask < (1 << ns); ++mask) {
                    std::vector<int> d1{a}, d2{b};
                    for (int q = 0; q < ns; ++q) ((mask >> q) & 1 ? d1 : d2).push_back(S[static_cast<size_t>(q)]);
                    acc += w * dvv(g1, d1) * dvv(g - g1, d2);
                }
        }
        val = acc / dfact_odd(k + 1);
    }
    memo()[key] = val;
    return val;
}

Rat dvv(int g, std::vector<int> d) { return dvv_sorted(g, std::move(d)); }

}  // namespace

IntersectionNumber dvv_oracle(int g, const std::vector<int>& degrees) {
    IntersectionNumber out{g, degrees, Rat(0), true};
    int n = static_cast<int>(degrees.size());
    int total = 0;
    for (int x : degrees) total += x;
    if (total != 3 * g - 3 + n) {
        out.dimension_ok = false;
        return out;
    }
    out.value = dvv(g, degrees);
    return out;
}

}  // namespace mmtool
