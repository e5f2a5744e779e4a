#include "mfq/arith.hpp"
#include "mfq/polymul.hpp"
#include "mfq/qseries.hpp"
#include "mfq/space.hpp"

#include <doctest.h>

#include <random>

using namespace mfq;

namespace {

// q prod (1 - q^n)^24 by repeated multiplication with (1 - q^n).
std::vector<mpz_class> delta_by_product(int N) {
    std::vector<mpz_class> c(N + 1, 0);
    c[0] = 1;
    for (int n = 1; n <= N; ++n)
        for (int rep = 0; rep < 24; ++rep)
            for (int m = N; m >= n; --m) c[m] -= c[m - n];
    std::vector<mpz_class> out(N + 1, 0);
    for (int m = 1; m <= N; ++m) out[m] = c[m - 1];
    return out;
}

// dim S_k by counting monomials E4^a E6^b of weight k - 12.
int dim_by_counting(int k) {
    if (k < 12) return 0;
    int count = 0;
    for (int a = 0; 4 * a <= k - 12; ++a)
        if ((k - 12 - 4 * a) % 6 == 0) ++count;
    return count;
}

}  // namespace

TEST_CASE("delta matches the product expansion") {
    const int N = 60;
    const QSeries d = delta(N);
    const auto ref = delta_by_product(N);
    for (int n = 0; n <= N; ++n) CHECK(d.coeff(n) == mpq_class(ref[n]));
    CHECK(d.coeff(2) == -24);
    CHECK(d.coeff(3) == 252);
    CHECK(d.coeff(6) == d.coeff(2) * d.coeff(3));
}

TEST_CASE("Eisenstein series use sigma_{k-1}") {
    const QSeries e4 = eisenstein(4, 20);
    const auto s3 = divisor_sums(3, 20);
    CHECK(e4.coeff(0) == 1);
    for (int n = 1; n <= 20; ++n) CHECK(e4.coeff(n) == 240 * s3[n]);
    const QSeries e6 = eisenstein(6, 5);
    CHECK(e6.coeff(1) == -504);
    // E4^3 - E6^2 = 1728 Delta
    const QSeries e4c = series_pow(eisenstein(4, 30), 3), e6s = series_pow(eisenstein(6, 30), 2);
    const QSeries diff = series_linear({{mpq_class(1, 1728), std::cref(e4c)}, {mpq_class(-1, 1728), std::cref(e6s)}});
    const QSeries d = delta(30);
    for (int n = 0; n <= 30; ++n) CHECK(diff.coeff(n) == d.coeff(n));
}

TEST_CASE("fast truncated product agrees with schoolbook") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<long> dist(-1000000, 1000000);
    for (int len : {1, 5, 40, 200}) {
        std::vector<mpz_class> a(len), b(len);
        for (auto& x : a) x = dist(rng) * mpz_class(dist(rng));
        for (auto& x : b) x = dist(rng);
        CHECK(mul_trunc(a, b, 2 * len - 1) == mul_trunc_schoolbook(a, b, 2 * len - 1));
        CHECK(mul_trunc(a, b, len) == mul_trunc_schoolbook(a, b, len));
    }
}

TEST_CASE("dimension formula") {
    for (int k = 0; k <= 200; k += 2) CHECK(dim_cusp(k) == dim_by_counting(k));
    CHECK(dim_cusp(12) == 1);
    CHECK(dim_cusp(14) == 0);
    CHECK(dim_cusp(24) == 2);
    CHECK_THROWS_AS(dim_cusp(13), std::invalid_argument);
}

TEST_CASE("Miller basis is echelonized with integral coefficients") {
    for (int k = 12; k <= 60; k += 2) {
        const int d = dim_cusp(k);
        const CuspSpace s = miller_basis(k, miller_min_trunc(k) + 5);
        REQUIRE(s.dim == d);
        for (int i = 0; i < d; ++i) {
            CHECK(s.miller[i].is_integral());
            CHECK(s.miller[i].coeff(0) == 0);
            for (int j = 1; j <= d; ++j) CHECK(s.miller[i].coeff(j) == (i + 1 == j ? 1 : 0));
        }
    }
    CHECK(miller_basis(12, 5).miller[0].coeff(2) == -24);
}

TEST_CASE("q-series JSON round trip") {
    const QSeries d = delta(25);
    CHECK(qseries_from_json(to_json(d)).coeff(25) == d.coeff(25));
    const CuspSpace s = miller_basis(36, 20);
    const CuspSpace t = cusp_space_from_json(to_json(s));
    REQUIRE(t.dim == s.dim);
    for (int i = 0; i < s.dim; ++i)
        for (int n = 0; n <= 20; ++n) CHECK(t.miller[i].coeff(n) == s.miller[i].coeff(n));
}
