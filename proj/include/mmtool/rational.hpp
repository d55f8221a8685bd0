#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mmtool {

// Exact rational scalar. mpq_class keeps gcd-reduced canonical form with
// positive denominator, which is exactly the invariant the toolkit needs.
using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
    Rat q(num, den);
    q.canonicalize();
    return q;
}

inline bool is_zero(const Rat& q) { return sgn(q) == 0; }

inline Rat rat_pow(const Rat& base, long e) {
    if (e < 0) {
        if (is_zero(base)) throw std::domain_error("rat_pow: 0^negative");
        return Rat(1) / rat_pow(base, -e);
    }
    Rat r(1), b = base;
    long k = e;
    while (k > 0) {
        if (k & 1) r *= b;
        b *= b;
        k >>= 1;
    }
    return r;
}

inline Rat rat_factorial(long n) {
    if (n < 0) throw std::domain_error("factorial of negative");
    mpz_class z;
    mpz_fac_ui(z.get_mpz_t(), static_cast<unsigned long>(n));
    return Rat(z);
}

// (2n-1)!! with (-1)!! = 1.
inline Rat rat_double_factorial_odd(long n) {
    Rat r(1);
    for (long k = 2 * n - 1; k > 1; k -= 2) r *= k;
    return r;
}

inline Rat rat_binomial(long n, long k) {
    if (k < 0 || k > n) return Rat(0);
    mpz_class z;
    mpz_bin_uiui(z.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return Rat(z);
}

// "p/q" or "p"; used by the CLI --times parser and JSON loader.
inline Rat rat_parse(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    Rat q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational literal: " + s);
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
    q.canonicalize();
    return q;
}

inline std::string rat_str(const Rat& q) { return q.get_str(); }

inline double rat_double(const Rat& q) { return q.get_d(); }

}  // namespace mmtool
