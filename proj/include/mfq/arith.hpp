#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <vector>

namespace mfq {

/// Primes p <= n in increasing order.
std::vector<int> primes_up_to(int n);

bool is_prime(long n);

/// sigma_j(n) for 0 <= n <= N (sigma_j(0) is set to 0).
std::vector<mpz_class> divisor_sums(int j, int N);

/// Exact rank of an integer matrix (fraction-free Bareiss elimination).
int exact_rank(std::vector<std::vector<mpz_class>> rows);

/// Number of divisors of n.
int divisor_count(long n);

}  // namespace mfq
