#pragma once

// binom(D, n) * (3/4)^(c' n^2) at 256-bit precision, for checking the
// library's double-precision log-space evaluation.

#include <gmp.h>
#include <mpfr.h>

#include <cstdint>

namespace oracle {

inline double failure_bound_mpfr(std::uint64_t D, std::uint64_t n, double c_prime) {
    mpz_t binom;
    mpz_init(binom);
    mpz_bin_uiui(binom, D, n);

    mpfr_t acc, base, expo;
    mpfr_inits2(256, acc, base, expo, static_cast<mpfr_ptr>(nullptr));
    mpfr_set_z(acc, binom, MPFR_RNDN);
    mpfr_set_ui(base, 3, MPFR_RNDN);
    mpfr_div_ui(base, base, 4, MPFR_RNDN);
    mpfr_set_d(expo, c_prime, MPFR_RNDN);
    mpfr_mul_ui(expo, expo, n * n, MPFR_RNDN);
    mpfr_pow(base, base, expo, MPFR_RNDN);
    mpfr_mul(acc, acc, base, MPFR_RNDN);
    const double out = mpfr_get_d(acc, MPFR_RNDN);

    mpfr_clears(acc, base, expo, static_cast<mpfr_ptr>(nullptr));
    mpz_clear(binom);
    return out;
}

} // namespace oracle
