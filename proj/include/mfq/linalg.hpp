#pragma once

#include "mfq/real.hpp"

#include <vector>

namespace mfq {

/// LU with partial pivoting, in place; returns the row permutation. An
/// exactly zero pivot is replaced by max|a| * 2^{-prec}.
std::vector<size_t> lu_decompose(std::vector<std::vector<Real>>& a);

/// Solves A x = b from the factors produced by lu_decompose.
std::vector<Real> lu_solve(const std::vector<std::vector<Real>>& lu, const std::vector<size_t>& perm,
                           const std::vector<Real>& b);

}  // namespace mfq
