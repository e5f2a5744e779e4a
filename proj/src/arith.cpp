#include "mfq/arith.hpp"

#include <stdexcept>
#include <utility>

namespace mfq {

std::vector<int> primes_up_to(int n) {
    std::vector<int> out;
    if (n < 2) return out;
    std::vector<bool> composite(static_cast<size_t>(n) + 1, false);
    for (long i = 2; i <= n; ++i) {
        if (composite[i]) continue;
        out.push_back(static_cast<int>(i));
        for (long j = i * i; j <= n; j += i) composite[j] = true;
    }
    return out;
}

bool is_prime(long n) {
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::vector<mpz_class> divisor_sums(int j, int N) {
    if (N < 0 || j < 0) throw std::invalid_argument("divisor_sums: negative argument");
    std::vector<mpz_class> sigma(static_cast<size_t>(N) + 1, 0);
    mpz_class dj;
    for (int d = 1; d <= N; ++d) {
        mpz_ui_pow_ui(dj.get_mpz_t(), static_cast<unsigned long>(d), static_cast<unsigned long>(j));
        for (int m = d; m <= N; m += d) sigma[m] += dj;
    }
    return sigma;
}

int exact_rank(std::vector<std::vector<mpz_class>> rows) {
    if (rows.empty()) return 0;
    const size_t ncols = rows.front().size();
    const size_t nrows = rows.size();
    mpz_class prev = 1;
    size_t rank = 0;
    for (size_t col = 0; col < ncols && rank < nrows; ++col) {
        size_t piv = rank;
        while (piv < nrows && rows[piv][col] == 0) ++piv;
        if (piv == nrows) continue;
        std::swap(rows[piv], rows[rank]);
        for (size_t r = rank + 1; r < nrows; ++r) {
            for (size_t c = col + 1; c < ncols; ++c) {
                rows[r][c] = rows[rank][col] * rows[r][c] - rows[r][col] * rows[rank][c];
                mpz_divexact(rows[r][c].get_mpz_t(), rows[r][c].get_mpz_t(), prev.get_mpz_t());
            }
            rows[r][col] = 0;
        }
        prev = rows[rank][col];
        ++rank;
    }
    return static_cast<int>(rank);
}

int divisor_count(long n) {
    int count = 0;
    for (long d = 1; d * d <= n; ++d) {
        if (n % d) continue;
        count += (d * d == n) ? 1 : 2;
    }
    return count;
}

}  // namespace mfq
