#include "mfq/linalg.hpp"

#include <numeric>

namespace mfq {

std::vector<size_t> lu_decompose(std::vector<std::vector<Real>>& a) {
    const size_t n = a.size();
    std::vector<size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    Real scale(a[0][0].prec());
    for (const auto& row : a)
        for (const auto& x : row)
            if (abs(x) > scale) scale = abs(x);
    if (scale.is_zero()) scale = Real(1L, scale.prec());
    for (size_t c = 0; c < n; ++c) {
        size_t piv = c;
        for (size_t r = c + 1; r < n; ++r)
            if (abs(a[r][c]) > abs(a[piv][c])) piv = r;
        std::swap(a[piv], a[c]);
        std::swap(perm[piv], perm[c]);
        if (a[c][c].is_zero()) {
            // Exactly singular at this precision: perturb at the rounding level.
            a[c][c] = scale;
            mpfr_mul_2si(a[c][c].get(), a[c][c].get(), -a[c][c].prec(), MPFR_RNDN);
        }
        for (size_t r = c + 1; r < n; ++r) {
            if (a[r][c].is_zero()) continue;
            a[r][c] /= a[c][c];
            for (size_t j = c + 1; j < n; ++j) {
                Real t = a[r][c] * a[c][j];
                a[r][j] -= t;
            }
        }
    }
    return perm;
}

std::vector<Real> lu_solve(const std::vector<std::vector<Real>>& lu, const std::vector<size_t>& perm,
                           const std::vector<Real>& b) {
    const size_t n = lu.size();
    std::vector<Real> y;
    y.reserve(n);
    for (size_t i = 0; i < n; ++i) y.push_back(b[perm[i]]);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < i; ++j) y[i] -= lu[i][j] * y[j];
    for (size_t i = n; i-- > 0;) {
        for (size_t j = i + 1; j < n; ++j) y[i] -= lu[i][j] * y[j];
        y[i] /= lu[i][i];
    }
    return y;
}

}  // namespace mfq
