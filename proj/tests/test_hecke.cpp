#include "mfq/hecke.hpp"
#include "mfq/qseries.hpp"
#include "mfq/space.hpp"

#include <doctest.h>

#include <cmath>

using namespace mfq;

namespace {

// T_2 on the Miller basis straight from q-expansions:
// a_{T_2 f}(m) = a_f(2m) + 2^{k-1} a_f(m/2), read off at q^1..q^d.
std::vector<std::vector<mpz_class>> t2_from_series(int k) {
    const int d = dim_cusp(k);
    const CuspSpace s = miller_basis(k, 2 * d + 2);
    mpz_class p2;
    mpz_ui_pow_ui(p2.get_mpz_t(), 2, static_cast<unsigned long>(k - 1));
    std::vector<std::vector<mpz_class>> m(d, std::vector<mpz_class>(d));
    for (int j = 0; j < d; ++j)
        for (int i = 1; i <= d; ++i) {
            mpq_class v = s.miller[j].coeff(2 * i);
            if (i % 2 == 0) v += p2 * s.miller[j].coeff(i / 2);
            m[i - 1][j] = v.get_num();
        }
    return m;
}

}  // namespace

TEST_CASE("T_2 matches the direct q-expansion action") {
    for (int k : {24, 36, 48}) {
        const CuspSpace s = miller_basis(k, hecke_min_trunc(miller_basis(k, miller_min_trunc(k)), 2));
        CHECK(hecke_matrix(s, 2).entries == t2_from_series(k));
    }
}

TEST_CASE("k=24: eigenvalues of T_2 are the char-poly roots summing to the trace") {
    const auto t2 = t2_from_series(24);
    const mpz_class trace = t2[0][0] + t2[1][1];
    const mpz_class det = t2[0][0] * t2[1][1] - t2[0][1] * t2[1][0];
    const CuspSpace s = miller_basis(24, 60);
    const auto cp = charpoly(hecke_matrix(s, 2));
    REQUIRE(cp.size() == 3);
    CHECK(cp[2] == 1);
    CHECK(cp[1] == -trace);
    CHECK(cp[0] == det);
    CHECK(trace == 1080);
    CHECK(certified_squarefree(cp));
    const EigenBasis b = eigenforms(s, default_precision(24));
    REQUIRE(b.dim() == 2);
    const double a0 = b.forms[0].a[2].to_double(), a1 = b.forms[1].a[2].to_double();
    CHECK(a0 > a1);
    CHECK(a0 + a1 == doctest::Approx(1080).epsilon(1e-14));
    CHECK(a0 * a1 == doctest::Approx(det.get_d()).epsilon(1e-14));
    CHECK(a0 == doctest::Approx(540 + 12 * std::sqrt(144169.0)).epsilon(1e-14));
}

TEST_CASE("Hecke operators commute and multiply") {
    for (int k = 12; k <= 40; k += 2) {
        if (dim_cusp(k) == 0) continue;
        const CuspSpace s = miller_basis(k, 6 * dim_cusp(k) + 2);
        const HeckeMatrix t2 = hecke_matrix(s, 2), t3 = hecke_matrix(s, 3), t6 = hecke_matrix(s, 6);
        CHECK(t2 * t3 == t3 * t2);
        CHECK(t2 * t3 == t6);
    }
}

TEST_CASE("short truncation names the needed N") {
    const CuspSpace s = miller_basis(36, 5);
    CHECK_THROWS_WITH_AS(hecke_matrix(s, 2), doctest::Contains("6"), std::invalid_argument);
}

TEST_CASE("Delta: lambda(2) and multiplicativity") {
    const EigenBasis b = eigenforms(miller_basis(12, 40), default_precision(12));
    REQUIRE(b.dim() == 1);
    const auto& h = b.forms[0];
    CHECK(h.lambda[2] == doctest::Approx(-24 / std::pow(2.0, 5.5)).epsilon(1e-14));
    CHECK(h.lambda[2] == doctest::Approx(-0.5303300859).epsilon(1e-9));
    CHECK(h.a[2].to_double() == -24);
    CHECK(h.a[3].to_double() == 252);
}

TEST_CASE("eigenforms: multiplicativity and residual at the working precision") {
    for (int k : {36, 60, 96}) {
        const Precision bits = default_precision(k);
        const EigenBasis b = eigenforms(miller_basis(k, 40), bits);
        CHECK(b.max_residual_log2 <= -bits / 2.0);
        for (const auto& h : b.forms) {
            const Real lhs = h.lambda_real(6), rhs = h.lambda_real(2) * h.lambda_real(3);
            CHECK(abs(lhs - rhs).log_abs() / std::log(2.0) < -bits / 4.0);
            // lambda(4) = lambda(2)^2 - 1
            CHECK(h.lambda[4] == doctest::Approx(h.lambda[2] * h.lambda[2] - 1).epsilon(1e-12));
            for (int p : {2, 3, 5, 7, 11, 13}) CHECK(std::fabs(h.lambda[p]) <= 2.0);
        }
    }
}

TEST_CASE("Satake parameters") {
    for (double l : {-2.0, -1.3, 0.0, 0.4, 1.99, 2.0}) {
        const Satake s = satake(l);
        CHECK(std::abs(s.alpha + s.beta - l) < 1e-14);
        CHECK(std::abs(s.alpha * s.beta - 1.0) < 1e-14);
        CHECK(std::abs(std::abs(s.alpha) - 1) < 1e-7);
        CHECK(s.alpha.imag() >= 0);
    }
    const Satake r = satake(2.5);
    CHECK(r.alpha.real() >= r.beta.real());
    CHECK(lambda_prime_power(1.5, 0) == 1);
    CHECK(lambda_prime_power(1.5, 2) == doctest::Approx(1.25));
    // alpha = beta = 1 gives lambda(p^l) = l + 1
    CHECK(lambda_prime_power(2.0, 7) == doctest::Approx(8));
}

TEST_CASE("eigenbasis JSON round trip") {
    const EigenBasis b = eigenforms(miller_basis(36, 30), default_precision(36));
    const EigenBasis c = eigen_basis_from_json(to_json(b));
    REQUIRE(c.dim() == b.dim());
    CHECK(c.charpoly == b.charpoly);
    for (int r = 0; r < b.dim(); ++r)
        for (int n : {1, 2, 17, 30}) CHECK(c.forms[r].a[n] == b.forms[r].a[n]);
}
