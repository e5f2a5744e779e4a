#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <vector>

namespace mfq {

/// First `len` coefficients of the product of two integer polynomials.
///
/// Large inputs go through Kronecker substitution: both operands are packed
/// into single big integers with word-aligned slots wide enough for any
/// signed output coefficient, multiplied once by GMP, and unpacked with a
/// balanced-digit carry pass. Small inputs use the schoolbook product.
std::vector<mpz_class> mul_trunc(const std::vector<mpz_class>& a,
                                 const std::vector<mpz_class>& b, size_t len);

/// Reference O(len^2) product; kept separate so tests can compare routes.
std::vector<mpz_class> mul_trunc_schoolbook(const std::vector<mpz_class>& a,
                                            const std::vector<mpz_class>& b, size_t len);

}  // namespace mfq
