#include "mmtool/airy.hpp"

#include <mpfr.h>

#include <cmath>

namespace mmtool {

namespace {

constexpr double kSeriesCut = 9.0;
constexpr int kPrec = 320;  // bits; cancellation at |X| = 9 costs ~ e^36

struct MpfrVal {
    mpfr_t v;
    MpfrVal() { mpfr_init2(v, kPrec); }
    explicit MpfrVal(double d) {
        mpfr_init2(v, kPrec);
        mpfr_set_d(v, d, MPFR_RNDN);
    }
    ~MpfrVal() { mpfr_clear(v); }
    MpfrVal(const MpfrVal&) = delete;
    MpfrVal& operator=(const MpfrVal&) = delete;
};

// Ai = c1 f - c2 g, Bi = sqrt(3)(c1 f + c2 g) with the standard Maclaurin
// pair f, g; derivatives termwise. c1 = Ai(0), c2 = -Ai'(0).
void airy_series(double X, double out[4]) {
    MpfrVal x(X), f, g, fp, gp, term, tmp, c1, c2;
    // c1 = 3^(-2/3)/Gamma(2/3), c2 = 3^(-1/3)/Gamma(1/3)
    mpfr_set_d(tmp.v, 2.0 / 3.0, MPFR_RNDN);
    mpfr_gamma(c1.v, tmp.v, MPFR_RNDN);
    mpfr_set_d(tmp.v, 3.0, MPFR_RNDN);
    mpfr_pow_si(term.v, tmp.v, 2, MPFR_RNDN);
    mpfr_cbrt(term.v, term.v, MPFR_RNDN);  // 3^(2/3)
    mpfr_mul(c1.v, c1.v, term.v, MPFR_RNDN);
    mpfr_ui_div(c1.v, 1, c1.v, MPFR_RNDN);

    mpfr_set_d(tmp.v, 1.0 / 3.0, MPFR_RNDN);
    mpfr_gamma(c2.v, tmp.v, MPFR_RNDN);
    mpfr_set_d(tmp.v, 3.0, MPFR_RNDN);
    mpfr_cbrt(term.v, tmp.v, MPFR_RNDN);  // 3^(1/3)
    mpfr_mul(c2.v, c2.v, term.v, MPFR_RNDN);
    mpfr_ui_div(c2.v, 1, c2.v, MPFR_RNDN);

    // f = sum a_k, a_0 = 1, a_{k+1} = a_k X^3 (3k+1)/((3k+3)(3k+2)(3k+1)) -> X^3/( (3k+2)(3k+3) ) * ... 
    // use the ODE recurrence y'' = X y: f-series term ratio: a_{k+1} = a_k X^3 / ((3k+2)(3k+3))
    // g-series: b_0 = X, b_{k+1} = b_k X^3 / ((3k+3)(3k+4))
    // f' series: termwise derivative: f' = sum a_k * 3k/X ... safer: separate sums
    MpfrVal x3;
    mpfr_pow_si(x3.v, x.v, 3, MPFR_RNDN);

    // f and f'
    mpfr_set_ui(term.v, 1, MPFR_RNDN);
    mpfr_set_ui(f.v, 1, MPFR_RNDN);
    mpfr_set_ui(fp.v, 0, MPFR_RNDN);
    for (int k = 0; k < 400; ++k) {
        // term currently a_k = X^{3k} prod; add derivative 3k X^{3k-1}...
        mpfr_mul(tmp.v, term.v, x3.v, MPFR_RNDN);
        mpfr_div_ui(tmp.v, tmp.v, static_cast<unsigned>((3 * k + 2) * (3 * k + 3)), MPFR_RNDN);
        mpfr_swap(term.v, tmp.v);
        mpfr_add(f.v, f.v, term.v, MPFR_RNDN);
        // derivative term: d/dX a_{k+1} = (3k+3) a_{k+1}/X
        MpfrVal dterm;
        mpfr_mul_ui(dterm.v, term.v, static_cast<unsigned>(3 * k + 3), MPFR_RNDN);
        if (X != 0.0) {
            mpfr_div(dterm.v, dterm.v, x.v, MPFR_RNDN);
            mpfr_add(fp.v, fp.v, dterm.v, MPFR_RNDN);
        }
        if (mpfr_get_d(term.v, MPFR_RNDN) == 0.0 && k > 8) break;
    }
    // handle X == 0 derivative of f: f = 1 + X^3/6 + ... -> f'(0) = 0
    // g and g'
    mpfr_set(term.v, x.v, MPFR_RNDN);
    mpfr_set(g.v, x.v, MPFR_RNDN);
    mpfr_set_ui(gp.v, 1, MPFR_RNDN);
    for (int k = 0; k < 400; ++k) {
        mpfr_mul(tmp.v, term.v, x3.v, MPFR_RNDN);
        mpfr_div_ui(tmp.v, tmp.v, static_cast<unsigned>((3 * k + 3) * (3 * k + 4)), MPFR_RNDN);
        mpfr_swap(term.v, tmp.v);
        mpfr_add(g.v, g.v, term.v, MPFR_RNDN);
        MpfrVal dterm;
        mpfr_mul_ui(dterm.v, term.v, static_cast<unsigned>(3 * k + 4), MPFR_RNDN);
        if (X != 0.0) {
            mpfr_div(dterm.v, dterm.v, x.v, MPFR_RNDN);
            mpfr_add(gp.v, gp.v, dterm.v, MPFR_RNDN);
        }
        if (mpfr_get_d(term.v, MPFR_RNDN) == 0.0 && k > 8) break;
    }

    MpfrVal ai, bi, aip, bip, s3;
    mpfr_set_ui(s3.v, 3, MPFR_RNDN);
    mpfr_sqrt(s3.v, s3.v, MPFR_RNDN);

    mpfr_mul(tmp.v, c1.v, f.v, MPFR_RNDN);
    mpfr_mul(term.v, c2.v, g.v, MPFR_RNDN);
    mpfr_sub(ai.v, tmp.v, term.v, MPFR_RNDN);
    mpfr_add(bi.v, tmp.v, term.v, MPFR_RNDN);
    mpfr_mul(bi.v, bi.v, s3.v, MPFR_RNDN);

    mpfr_mul(tmp.v, c1.v, fp.v, MPFR_RNDN);
    mpfr_mul(term.v, c2.v, gp.v, MPFR_RNDN);
    mpfr_sub(aip.v, tmp.v, term.v, MPFR_RNDN);
    mpfr_add(bip.v, tmp.v, term.v, MPFR_RNDN);
    mpfr_mul(bip.v, bip.v, s3.v, MPFR_RNDN);

    out[0] = mpfr_get_d(ai.v, MPFR_RNDN);
    out[1] = mpfr_get_d(bi.v, MPFR_RNDN);
    out[2] = mpfr_get_d(aip.v, MPFR_RNDN);
    out[3] = mpfr_get_d(bip.v, MPFR_RNDN);
}

// Asymptotic expansions for X > 9 (monotone regime) and X < -9 (oscillatory).
void airy_asymptotic(double X, double out[4]) {
    const double ax = std::fabs(X);
    const double zeta = 2.0 / 3.0 * std::pow(ax, 1.5);
    const int nterms = 40;
    double u[nterms], v[nterms];
    u[0] = v[0] = 1.0;
    for (int k = 0; k + 1 < nterms; ++k) {
        double kk = k;
        u[k + 1] = u[k] * (6 * kk + 5) * (6 * kk + 3) * (6 * kk + 1) / (216.0 * (kk + 1) * (2 * kk + 1));
        v[k + 1] = u[k + 1] * (6 * (kk + 1) + 1) / (1.0 - 6 * (kk + 1));
    }
    auto sum_alt = [&](const double* c, double sgn) {
        double acc = 0, p = 1, best = 1e300;
        for (int k = 0; k < nterms; ++k) {
            double term = c[k] * p;
            if (std::fabs(term) > best) break;  // optimal truncation
            acc += term;
            best = std::fabs(term);
            p *= sgn / zeta;
        }
        return acc;
    };
    const double spi = std::sqrt(M_PI);
    const double q = std::pow(ax, 0.25);
    if (X > 0) {
        double su_m = sum_alt(u, -1.0), su_p = sum_alt(u, +1.0);
        double sv_m = sum_alt(v, -1.0), sv_p = sum_alt(v, +1.0);
        out[0] = std::exp(-zeta) / (2 * spi * q) * su_m;
        out[2] = -q * std::exp(-zeta) / (2 * spi) * sv_m;
        out[1] = std::exp(zeta) / (spi * q) * su_p;
        out[3] = q * std::exp(zeta) / spi * sv_p;
        return;
    }
    // X < 0: Ai(-ax) = (cos(zeta - pi/4) P + sin(zeta - pi/4) Q)/(spi q) ...
    double P = 0, Qs = 0, Pv = 0, Qv = 0, p = 1;
    for (int k = 0; 2 * k < nterms; ++k) {
        double even = u[2 * k] * p;
        P += (k % 2 == 0 ? even : -even);
        double evenv = v[2 * k] * p;
        Pv += (k % 2 == 0 ? evenv : -evenv);
        if (2 * k + 1 < nterms) {
            double odd = u[2 * k + 1] * p / zeta;
            Qs += (k % 2 == 0 ? odd : -odd);
            double oddv = v[2 * k + 1] * p / zeta;
            Qv += (k % 2 == 0 ? oddv : -oddv);
        }
        p /= zeta * zeta;
        if (p * u[std::min(2 * k + 2, nterms - 1)] > 1.0) break;
    }
    double c = std::cos(zeta - M_PI / 4), s = std::sin(zeta - M_PI / 4);
    out[0] = (s * P - c * Qs) / (spi * q);
    out[1] = (c * P + s * Qs) / (spi * q);
    out[2] = -q * (c * Pv + s * Qv) / spi;
    out[3] = q * (s * Pv - c * Qv) / spi;
}

}  // namespace

AiryValues airy_eval(double X) {
    if (std::fabs(X) > 12.0) throw std::domain_error("airy_eval: |X| <= 12 supported");
    double out[4];
    if (std::fabs(X) <= kSeriesCut)
        airy_series(X, out);
    else
        airy_asymptotic(X, out);
    return AiryValues{X, out[0], out[1], out[2], out[3]};
}

double airy_wronskian_deviation(double X) {
    AiryValues a = airy_eval(X);
    return std::fabs(a.Ai * a.Bip - a.Aip * a.Bi - 1.0 / M_PI);
}

}  // namespace mmtool
