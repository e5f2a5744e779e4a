#include "mfq/analytic.hpp"
#include "mfq/decomp.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace mfq;

namespace {

EigenStore& store() {
    static EigenStore s;
    return s;
}

QuadraticFormSpec delta_square() {
    QuadraticFormSpec s;
    s.N = 1;
    s.target_weight = 24;
    s.weights = {12};
    s.a = {{1.0}};
    s.combos = {{{0, 1.0}}};
    return s;
}

// sum_r c_r h_r as a NumSeries of length N.
NumSeries synthesize(const EigenBasis& b, const std::vector<cplx>& c, int N) {
    NumSeries s = NumSeries::zero(b.k, N, b.precision);
    for (size_t r = 0; r < c.size(); ++r) {
        const Real re(c[r].real(), b.precision), im(c[r].imag(), b.precision);
        for (int n = 1; n <= N; ++n) {
            s.coeffs[n].re.add_mul(b.forms[r].a[n], re);
            s.coeffs[n].im.add_mul(b.forms[r].a[n], im);
        }
    }
    return s;
}

}  // namespace

TEST_CASE("Delta^2 by Cauchy product: a_2 = 1, a_3 = -48") {
    const NumSeries q = build_quadratic(delta_square(), 30, store_getter(store()));
    CHECK(q.coeffs[0].re.to_double() == 0);
    CHECK(q.coeffs[1].re.to_double() == 0);
    CHECK(q.coeffs[2].re.to_double() == 1);
    CHECK(q.coeffs[3].re.to_double() == -48);
    // (tau * tau)(n) by hand for n = 4: tau(1)tau(3) + tau(2)^2 + tau(3)tau(1)
    CHECK(q.coeffs[4].re.to_double() == 2 * 252 + 576);
    const SecondCoeff sc = second_coeff_and_bounds(delta_square());
    CHECK(sc.a == cplx(1.0));
    CHECK(sc.B_val == 1.0);
}

TEST_CASE("cancelling spec gives the zero form") {
    QuadraticFormSpec s;
    s.N = 2;
    s.target_weight = 24;
    s.weights = {12, 12};
    s.a = {{1.0, 0.0}, {0.0, -1.0}};
    s.combos = {{{0, 1.0}}, {{0, 1.0}}};
    CHECK(build_quadratic(s, 30, store_getter(store())).is_zero());
    CHECK(second_coeff_and_bounds(s).a == cplx(0.0));
    auto H = store().get({24, 60, true, 0});
    const Decomposition d = hecke_decompose(build_quadratic(s, 60, store_getter(store())), H);
    const SparsityReport rep = sparsity_certificate(d, *H, 1, 0.5);
    CHECK(rep.nnz == 0);
}

TEST_CASE("spec validation") {
    QuadraticFormSpec s = delta_square();
    s.target_weight = 26;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = delta_square();
    s.combos = {{{5, 1.0}}};
    CHECK_THROWS_AS(build_quadratic(s, 30, store_getter(store())), std::invalid_argument);
    s = delta_square();
    s.N = 2;
    s.weights = {12, 12};
    s.a = {{1.0, 2.0}, {3.0, 1.0}};
    s.combos = {{{0, 1.0}}, {{0, 1.0}}};
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    CHECK_THROWS_AS(quadratic_spec_from_json(nlohmann::json::parse(R"({"weights": [12]})")), std::invalid_argument);
    const QuadraticFormSpec r = quadratic_spec_from_json(to_json(delta_square()));
    CHECK(r.target_weight == 24);
    CHECK(r.combos[0][0].b == cplx(1.0));
}

TEST_CASE("Delta^2 decomposition, Parseval and sparsity") {
    auto H = store().get({24, 0, true, 0});
    const int N = H->trunc;
    const NumSeries q = build_quadratic(delta_square(), N, store_getter(store()));
    DecomposeOptions opt;
    opt.want_inner = false;
    const Decomposition d = hecke_decompose(q, H, opt);
    REQUIRE(d.c.size() == 2);
    CHECK(std::abs(d.c[0] + d.c[1]) <= 1e-10 * std::abs(d.c[0]));
    CHECK(d.residual <= 1e-10);

    const NumSeries qh = build_quadratic(delta_square(), N, store_getter(store()), true);
    DecomposeOptions o2;
    o2.p_list = {0.5, 1, 2};
    const Decomposition u = hecke_decompose(qh, H, o2);
    CHECK(u.lp.at(0.5) >= u.lp.at(1));
    CHECK(u.lp.at(1) >= u.lp.at(2));
    const double quad = petersson_norm_quadrature(NormalizedCoeffs::from_series(qh)).value();
    CHECK(u.lp.at(2) * u.lp.at(2) == doctest::Approx(quad).epsilon(0.02));

    CHECK(sparsity_certificate(d, *H, 1, 0.5).nnz == 2);
    CHECK_FALSE(sparsity_certificate(d, *H, 1, 0.5).sparse_representation_exists);
    const SparsityReport two = sparsity_certificate(d, *H, 2, 0.5);
    CHECK(two.sparse_representation_exists);
    CHECK(two.witness_normalized);
    CHECK(std::abs(two.a - cplx(1.0)) < 1e-20);
    CHECK(two.a_normalized.real() == doctest::Approx(std::pow(2.0, -11.5)).epsilon(1e-12));
}

TEST_CASE("eigenform decomposes to a unit vector; lp of one term") {
    auto H = store().get({36, 0, true, 0});
    const NumSeries f = eigen_series(H->forms[1], H->trunc);
    DecomposeOptions o;
    o.log_unit_scale = 0.5 * log_norm_sq(H->forms[1]);
    o.p_list = {1};
    const Decomposition d = hecke_decompose(f, H, o);
    CHECK(std::abs(d.c[1] - cplx(1.0)) < 1e-20);
    CHECK(std::abs(d.c[0]) < 1e-20);
    CHECK(d.lp.at(1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(lp_norm(d, 0.0), std::invalid_argument);
}

TEST_CASE("round trip: L-term combinations recover their support; uniqueness") {
    std::mt19937 rng(11);
    for (int k : {48, 72}) {
        auto H = store().get({k, 0, false, 0});
        const int dim = H->dim();
        for (int L = 1; L <= dim; ++L) {
            std::vector<cplx> c(dim, 0.0);
            std::vector<int> idx(dim);
            for (int i = 0; i < dim; ++i) idx[i] = i;
            std::shuffle(idx.begin(), idx.end(), rng);
            std::uniform_int_distribution<int> coef(1, 9);
            for (int i = 0; i < L; ++i) c[idx[i]] = cplx(coef(rng), -coef(rng));
            const NumSeries F = synthesize(*H, c, H->trunc);
            DecomposeOptions o;
            o.want_inner = false;
            const Decomposition d = hecke_decompose(F, H, o);
            const SparsityReport rep = sparsity_certificate(d, *H, L, 0.0);
            CHECK(rep.nnz == L);
            CHECK(d.residual <= 1e-10);
            const Decomposition again = hecke_decompose(synthesize(*H, d.c, H->trunc), H, o);
            for (int r = 0; r < dim; ++r)
                CHECK(std::abs(again.c[r] - d.c[r]) <= std::pow(2.0, -H->precision / 4.0) * std::max(1.0, std::abs(d.c[r])));
        }
    }
}

TEST_CASE("scan shape and skips") {
    const auto rows = lp_scan({24, 26, 28, 32}, {1.0, 2.0}, ScanMode::squares, store());
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].k == 24);
    CHECK(rows[2].k == 32);
    auto H = store().get({24, 0, true, 0});
    const NumSeries qh = build_quadratic(delta_square(), H->trunc, store_getter(store()), true);
    DecomposeOptions o;
    o.p_list = {1};
    CHECK(rows[0].value == doctest::Approx(hecke_decompose(qh, H, o).lp.at(1)).epsilon(1e-12));
    CHECK(rows[0].ref4 == doctest::Approx(std::pow(std::log(24.0), -0.25)));
    CHECK(scan_mode_from_string("products") == ScanMode::products);
    CHECK_THROWS_AS(scan_mode_from_string("cubes"), std::invalid_argument);
}
