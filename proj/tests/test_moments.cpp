#include "mfq/analytic.hpp"
#include "mfq/arith.hpp"
#include "mfq/moments.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

using namespace mfq;

namespace {

EigenStore& store() {
    static EigenStore s;
    return s;
}

// D_{k,l} from the defining recursion, independent of the closed form:
// D_{k,l} = binom(k, (k+l)/2) - sum_{0 < m <= (k-l)/2} D_{k,l+2m}.
mpq_class D_recursive(int k, int l) {
    if (l == k) return 1;
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), k, (k + l) / 2);
    mpq_class r(b);
    for (int m = 1; 2 * m <= k - l; ++m) r -= D_recursive(k, l + 2 * m);
    return r;
}

}  // namespace

TEST_CASE("D_{k,l}: closed form, recursion and anchors") {
    for (int k = 0; k <= 20; ++k) {
        CHECK(D_coeff(k, k) == 1);
        for (int l = k % 2; l <= k; l += 2) CHECK(D_coeff(k, l) == D_recursive(k, l));
    }
    CHECK(D_coeff(4, 0) == 2);
    CHECK(D_coeff(2, 0) == 1);
    CHECK(D_coeff(4, 2) == 3);
    CHECK_THROWS_AS(D_coeff(5, 2), std::invalid_argument);
}

TEST_CASE("lambda^k expansion in lambda(p^l)") {
    // lambda^4 = lambda(p^4) + 3 lambda(p^2) + 2 by the Hecke recurrence
    const double lam = 0.7;
    CHECK(std::pow(lam, 4) == doctest::Approx(lambda_prime_power(lam, 4) + 3 * lambda_prime_power(lam, 2) + 2));
    for (int k = 0; k <= 12; ++k)
        for (int num = -7; num <= 7; num += 3) CHECK(lambda_power_expand_check(k, mpq_class(num, 5)) == 0);
    CHECK(lambda_power_expand_check(2, mpq_class(13, 7)) == 0);
    CHECK(lambda_power_expand_check(5, mpq_class(2)) == 0);
    // 2^5 = sum_l D_{5,l} (l+1)
    mpq_class s = 0;
    for (int l = 1; l <= 5; l += 2) s += D_coeff(5, l) * (l + 1);
    CHECK(s == 32);
    CHECK(lambda_power_expand_check(12, Real(1.2, 128)).to_double() <= 1e-20);
    CHECK_THROWS_AS(lambda_power_expand_check(31, mpq_class(1)), std::invalid_argument);
}

TEST_CASE("triple coefficients and the Hecke relation at p^2") {
    auto f = store().get({12, 1000, false, 0});
    auto g = store().get({16, 1000, false, 0});
    auto H = store().get({28, 1000, false, 0});
    const auto& F = f->forms[0];
    const auto& G = g->forms[0];
    for (const auto& h : H->forms)
        for (int p : primes_up_to(997)) {
            CHECK(lambda_triple(F, G, h, p, 1) == doctest::Approx(F.lambda[p] * G.lambda[p] * h.lambda[p]).epsilon(1e-12));
            const double rel = (sym2_lambda(F, p) - 1) * (sym2_lambda(G, p) - 1) * (sym2_lambda(h, p) - 1);
            CHECK(std::fabs(lambda_triple(F, G, h, p, 2) - rel) <= 1e-12);
        }
}

TEST_CASE("Chandee sum: support and summation order") {
    auto f = store().get({12, 200, false, 0});
    auto g = store().get({16, 200, false, 0});
    auto H = store().get({28, 200, false, 0});
    const TripleContext ctx{&f->forms[0], &g->forms[0], 10.5, 1.0};
    const auto& h = H->forms[0];
    // prime powers <= 10.5: 2, 3, 4, 5, 7, 8, 9
    const std::vector<std::pair<int, int>> pp = {{2, 1}, {3, 1}, {2, 2}, {5, 1}, {7, 1}, {2, 3}, {3, 2}};
    const double lx = std::log(10.5);
    std::vector<double> terms;
    for (auto [p, n] : pp) {
        const double q = std::pow(p, n);
        terms.push_back(lambda_triple(*ctx.f, *ctx.g, h, p, n) / (n * std::pow(q, 0.5 + 1 / lx)) * std::log(10.5 / q) / lx);
    }
    std::reverse(terms.begin(), terms.end());
    const double oracle = std::accumulate(terms.begin(), terms.end(), 0.0);
    CHECK(std::fabs(chandee_sum(ctx, h) - oracle) <= 1e-12 * std::max(1.0, std::fabs(oracle)));
    const TripleContext small{&f->forms[0], &g->forms[0], 9.0, 1.0};
    CHECK_THROWS_AS(chandee_sum(small, h), std::invalid_argument);
    const TripleContext wide{&f->forms[0], &g->forms[0], 100.0, 1.0};
    CHECK(std::isfinite(chandee_sum(wide, h)));
}

TEST_CASE("P(h; x, y): range, linearity") {
    auto f = store().get({12, 200, false, 0});
    auto g = store().get({16, 200, false, 0});
    auto H = store().get({28, 200, false, 0});
    TripleContext c1{&f->forms[0], &g->forms[0], 50.0, 1.0};
    TripleContext c2 = c1, c0 = c1;
    c2.l = 2.0;
    c0.l = 0.0;
    const auto& h = H->forms[0];
    CHECK(soundararajan_P(h, c2, 50) == doctest::Approx(2 * soundararajan_P(h, c1, 50)));
    CHECK(soundararajan_P(h, c0, 50) == 0);
    CHECK(soundararajan_P(h, c1, 2.5) == doctest::Approx(f->forms[0].lambda[2] * g->forms[0].lambda[2] * h.lambda[2] *
                                                          std::pow(2.0, -0.5 - 1 / std::log(50.0)) *
                                                          (1 - std::log(2.0) / std::log(50.0))));
    CHECK_THROWS_AS(soundararajan_P(h, c1, 1.9), std::invalid_argument);
    CHECK_THROWS_AS(soundararajan_P(h, c1, 60), std::invalid_argument);
}

TEST_CASE("distribution report") {
    auto f = store().get({12, 100, false, 0});
    auto g = store().get({108, 100, false, 0});
    auto H = store().get({120, 0, true, 0});
    const TripleContext ctx{&f->forms[0], &g->forms[0], std::sqrt(120.0), 1.0};
    const DistReport r = dist_report(ctx, *H, 3.0, default_v_grid(120));
    CHECK(r.samples.size() == static_cast<size_t>(H->dim()));
    CHECK(r.weighting == "quadrature");
    CHECK(r.weight_sum == doctest::Approx(1).epsilon(1e-3));
    int prev = H->dim();
    for (const auto& [V, c] : r.tail_counts) {
        CHECK(c <= prev);
        prev = c;
    }
    CHECK(tail_count(r.samples, -1e300) == H->dim());
    CHECK(r.variance == doctest::Approx(r.predicted_variance).epsilon(0.25));
    CHECK(r.window_reference == doctest::Approx(std::log(std::log(std::sqrt(120.0)) / std::log(3.0))));
    CHECK(r.sigma2 == doctest::Approx(std::log(std::log(120.0))));
    CHECK_FALSE(r.degenerate);
}

TEST_CASE("prime sums") {
    auto f = store().get({12, 100, false, 0});
    auto g = store().get({16, 100, false, 0});
    auto H = store().get({28, 100, false, 0});
    const auto& F = f->forms[0];
    const PrimeSums two = prime_sums_report(F, g->forms[0], H->forms[0], 2.0);
    const double a = sym2_lambda(F, 2), b = sym2_lambda(g->forms[0], 2), c = sym2_lambda(H->forms[0], 2);
    CHECK(two.sums[0] == doctest::Approx(a * b * c / 2));
    CHECK(two.sums[4] == doctest::Approx(a / 2));
    CHECK(two.distinct);
    const PrimeSums same = prime_sums_report(F, F, F, 50.0);
    CHECK_FALSE(same.distinct);
    double cube = 0;
    for (int p : primes_up_to(50)) cube += std::pow(sym2_lambda(F, p), 3) / p;
    CHECK(same.sums[0] == doctest::Approx(cube));

    // doubled precision eigenbasis gives the same sums
    const EigenBasis hi = eigenforms(miller_basis(28, 100), 2 * default_precision(28));
    const PrimeSums p1 = prime_sums_report(F, g->forms[0], H->forms[0], 97.0);
    const PrimeSums p2 = prime_sums_report(F, g->forms[0], hi.forms[0], 97.0);
    for (int i = 0; i < 7; ++i) CHECK(std::fabs(p1.sums[i] - p2.sums[i]) <= 1e-12);
}

TEST_CASE("Watson surrogate") {
    CHECK(watson_surrogate(28, {0.0, 0.0}, 1, 1, 1) == 0);
    CHECK(watson_surrogate(28, {0.3, 0.4}, 1, 2, 3) == doctest::Approx(28 * 0.25 * 6));
    CHECK(watson_surrogate(28, std::polar(0.5, 1.0), 1, 1, 1) == doctest::Approx(watson_surrogate(28, 0.5, 1, 1, 1)));
    auto f = store().get({12, 0, true, 1000});
    auto g = store().get({24, 0, true, 1000});
    auto H = store().get({36, 0, true, 1000});
    for (double s : watson_surrogates(f->forms[0], g->forms[1], H)) CHECK(s >= 0);
}

TEST_CASE("moment table") {
    const auto rows = moment_sum(1.0, {24, 26, 36}, store());
    REQUIRE(rows.size() == 2);  // 26 - 12 = 14 has no cusp forms
    for (const auto& r : rows) {
        CHECK(r.moment >= 0);
        CHECK(std::accumulate(r.histogram.begin(), r.histogram.end(), 0) == r.dim);
        CHECK(r.ibp_integral == doctest::Approx(r.sum_L).epsilon(1e-12));
        CHECK(r.reference == 1);
        CHECK(r.mu == doctest::Approx((-0.5 + 0.05) * std::log(std::log(double(r.k)))));
    }
    CHECK(rows[0].degenerate);
    CHECK_FALSE(rows[1].degenerate);
}

TEST_CASE("Gaussian identity") {
    CHECK(gaussian_identity_check(1.0).rel_error <= 1e-8);
    CHECK(gaussian_identity_check(1.0).closed_form == doctest::Approx(std::sqrt(2 * M_PI) * std::exp(0.5)));
    CHECK(gaussian_identity_check(2.5).rel_error <= 1e-8);
}

TEST_CASE("2r-th moment of prime sums") {
    auto H = store().get({100, 0, false, 1000});
    // a_p = 1 at p = 2 only, r = 1: weighted sum is the harmonic average of lambda(2)^2 / 2
    const Moment2r m = moment_2r_check(1, *H, 2.0, [](int p) { return p == 2 ? 1.0 : 0.0; }, false);
    const DeltaCheck d = petersson_delta_check(*H, 2, 2, false);
    CHECK(m.lhs_weighted * 2 * M_PI * M_PI / 99 == doctest::Approx(d.value / 2).epsilon(1e-12));
    double direct = 0;
    for (const auto& h : H->forms) direct += h.lambda[2] * h.lambda[2] / 2;
    CHECK(m.lhs == doctest::Approx(direct));
    const Moment2r z = moment_2r_check(2, *H, 30.0, [](int) { return 0.0; }, false);
    CHECK(z.lhs == 0);
    CHECK(z.ratio == 0);
    CHECK_THROWS_AS(moment_2r_check(1, *H, 30.0, [](int) { return 1.0; }), std::invalid_argument);
    CHECK_THROWS_AS(moment_2r_check(1, *H, 30.0, [](int) { return 50.0; }, false), std::invalid_argument);

    // prime order does not matter
    const Moment2r w = moment_2r_check(3, *H, 30.0, [&](int p) { return std::sin(p); }, false);
    double rev = 0;
    for (const auto& h : H->forms) {
        auto ps = primes_up_to(30);
        std::reverse(ps.begin(), ps.end());
        double s = 0;
        for (int p : ps) s += std::sin(p) * h.lambda[p] / std::sqrt(double(p));
        rev += std::pow(s, 6);
    }
    CHECK(std::fabs(w.lhs - rev) <= 1e-12 * rev);
}
