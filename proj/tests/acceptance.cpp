// One PASS/FAIL line per acceptance criterion. Usage: acceptance [N ...]
// (no arguments runs all). Exit status is nonzero if any selected criterion fails.

#include "mfq/analytic.hpp"
#include "mfq/arith.hpp"
#include "mfq/decomp.hpp"
#include "mfq/hecke.hpp"
#include "mfq/moments.hpp"
#include "mfq/space.hpp"
#include "mfq/store.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>

using namespace mfq;

namespace {

// Pinned tolerances and limits.
constexpr double kC1Seconds = 60;
constexpr double kC2Seconds = 120;
constexpr double kDeligneSlack = 1e-6;
constexpr double kDecompResidual = 1e-10;
constexpr double kSumZeroRel = 1e-10;
constexpr double kParsevalRel = 0.02;
constexpr double kC5Seconds = 600;
constexpr double kDeltaAbs = 0.05;
constexpr double kHeckeRelation = 1e-12;
constexpr double kMomentRatio = 10;
constexpr double kC9Seconds = 600;
constexpr double kScanBound = 1.5;
constexpr double kScanDecadeSlack = 0.10;
constexpr double kVarianceRel = 0.25;
constexpr double kTailFraction = 0.15;
constexpr double kC11Seconds = 900;
constexpr double kGaussianRel = 1e-8;
constexpr int kPrimeCutoff = 10000;

EigenStore& store() {
    static EigenStore s;
    return s;
}

using Clock = std::chrono::steady_clock;
double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool pass = false;
    std::string detail;
};

Outcome c1() {
    const auto t0 = Clock::now();
    const QSeries d = delta(10);
    bool ok = d.coeff(2) == -24 && d.coeff(3) == 252 && d.coeff(6) == d.coeff(2) * d.coeff(3);
    int checked = 0;
    for (int k = 12; k <= 120; k += 2) {
        const CuspSpace s = miller_basis(k, miller_min_trunc(k) + 2);
        if (s.dim != dim_cusp(k)) ok = false;
        for (int i = 0; i < s.dim; ++i) {
            if (!s.miller[i].is_integral() || s.miller[i].coeff(0) != 0) ok = false;
            for (int j = 1; j <= s.dim; ++j)
                if (s.miller[i].coeff(j) != (i + 1 == j ? 1 : 0)) ok = false;
        }
        ++checked;
    }
    const double t = since(t0);
    std::ostringstream o;
    o << "a2=" << d.coeff(2) << " a3=" << d.coeff(3) << " a6=" << d.coeff(6) << "; echelon checked at " << checked
      << " weights; " << t << " s";
    return {ok && t < kC1Seconds, o.str()};
}

Outcome c2() {
    const auto t0 = Clock::now();
    bool ok = true;
    double worst = -1e300;
    for (int k = 12; k <= 60; k += 2) {
        const int d = dim_cusp(k);
        if (d == 0) continue;
        const CuspSpace s = miller_basis(k, std::max(6 * d, miller_min_trunc(k)) + 2);
        const HeckeMatrix t2 = hecke_matrix(s, 2), t3 = hecke_matrix(s, 3), t6 = hecke_matrix(s, 6);
        if (!(t2 * t3 == t3 * t2) || !(t2 * t3 == t6)) ok = false;
        const Precision bits = default_precision(k);
        const EigenBasis b = eigenforms(s, bits);
        const double margin = b.max_residual_log2 + bits / 2.0;  // must be <= 0
        worst = std::max(worst, margin);
        if (margin > 0) ok = false;
    }
    const double t = since(t0);
    std::ostringstream o;
    o << "worst log2(residual) + precision/2 = " << worst << "; " << t << " s";
    return {ok && t < kC2Seconds, o.str()};
}

Outcome c3() {
    double worst = 0;
    int forms = 0, wk = 0;
    for (int k = 12; k <= 300; k += 2) {
        if (dim_cusp(k) == 0) continue;
        auto b = store().get({k, 199, false, 0});
        for (const auto& h : b->forms) {
            ++forms;
            for (int p : primes_up_to(199))
                if (std::fabs(h.lambda[p]) > worst) {
                    worst = std::fabs(h.lambda[p]);
                    wk = k;
                }
        }
    }
    std::ostringstream o;
    o << "max |lambda(p)| = " << worst << " (k=" << wk << ") over " << forms << " eigenforms";
    return {worst <= 2 + kDeligneSlack, o.str()};
}

NumSeries synthesize(const EigenBasis& b, const std::vector<cplx>& c, int N) {
    NumSeries s = NumSeries::zero(b.k, N, b.precision);
    for (size_t r = 0; r < c.size(); ++r) {
        if (c[r] == cplx(0)) continue;
        const Real re(c[r].real(), b.precision), im(c[r].imag(), b.precision);
        for (int n = 1; n <= N; ++n) {
            s.coeffs[n].re.add_mul(b.forms[r].a[n], re);
            s.coeffs[n].im.add_mul(b.forms[r].a[n], im);
        }
    }
    return s;
}

Outcome c4() {
    std::mt19937 rng(20240601);
    bool ok = true;
    int combos = 0, products = 0;
    double worst_res = 0, worst_sum = 0;
    for (int k = 24; k <= 120; k += 2) {
        const int d = dim_cusp(k);
        if (d == 0) continue;
        auto H = store().get({k, 0, false, 0});
        const HeckeSolver solver(H);
        DecomposeOptions opt;
        opt.want_inner = false;
        for (int trial = 0; trial < 20; ++trial) {
            const int L = std::uniform_int_distribution<int>(1, d)(rng);
            std::vector<int> idx(d);
            for (int i = 0; i < d; ++i) idx[i] = i;
            std::shuffle(idx.begin(), idx.end(), rng);
            std::vector<cplx> c(d, 0.0);
            std::uniform_int_distribution<int> coef(-50, 50);
            for (int i = 0; i < L; ++i) {
                cplx v;
                do v = cplx(coef(rng), coef(rng)) / 7.0;
                while (v == cplx(0));
                c[idx[i]] = v;
            }
            const Decomposition dec = solver.decompose(synthesize(*H, c, H->trunc), opt);
            const SparsityReport rep = sparsity_certificate(dec, *H, L, 0.0);
            worst_res = std::max(worst_res, dec.residual);
            if (rep.nnz != L || dec.residual > kDecompResidual) ok = false;
            ++combos;
        }
        // every product of two eigenforms of weights summing to k
        for (int k1 = 12; 2 * k1 <= k; k1 += 2) {
            const int k2 = k - k1;
            if (dim_cusp(k1) == 0 || dim_cusp(k2) == 0) continue;
            auto A = store().get({k1, H->trunc, false, 0});
            auto B = store().get({k2, H->trunc, false, 0});
            for (const auto& f : A->forms)
                for (const auto& g : B->forms) {
                    const NumSeries F = series_mul(eigen_series(f, H->trunc), eigen_series(g, H->trunc));
                    const Decomposition dec = solver.decompose(F, opt);
                    cplx sum = 0;
                    double mx = 0;
                    for (const auto& v : dec.c) {
                        sum += v;
                        mx = std::max(mx, std::abs(v));
                    }
                    worst_sum = std::max(worst_sum, std::abs(sum) / mx);
                    worst_res = std::max(worst_res, dec.residual);
                    if (std::abs(sum) > kSumZeroRel * mx || dec.residual > kDecompResidual) ok = false;
                    ++products;
                }
        }
    }
    std::ostringstream o;
    o << combos << " combinations, " << products << " products; max residual " << worst_res << ", max |sum c|/max|c| "
      << worst_sum;
    return {ok, o.str()};
}

Outcome c5() {
    const auto t0 = Clock::now();
    bool ok = true;
    double worst = 0;
    int pairs = 0;
    for (int k : {24, 28, 36, 48, 60}) {
        const int N = EigenStore::effective_trunc({k, 0, true, 0});
        auto H = store().get({k, N, true, 0});
        const HeckeSolver solver(H);
        for (int k1 = 12; 2 * k1 <= k; k1 += 2) {
            const int k2 = k - k1;
            const int d1 = dim_cusp(k1), d2 = dim_cusp(k2);
            for (int i = 0; i < d1; ++i)
                for (int j = (k1 == k2 ? i : 0); j < d2; ++j) {
                    QuadraticFormSpec s;
                    s.target_weight = k;
                    if (k1 == k2 && i == j) {
                        s.N = 1;
                        s.weights = {k1};
                        s.a = {{1.0}};
                        s.combos = {{{i, 1.0}}};
                    } else {
                        s.N = 2;
                        s.weights = {k1, k2};
                        s.a = {{0.0, 0.5}, {0.5, 0.0}};
                        s.combos = {{{i, 1.0}}, {{j, 1.0}}};
                    }
                    const NumSeries Q = build_quadratic(s, N, store_getter(store()), true);
                    DecomposeOptions o;
                    o.p_list = {2.0};
                    const Decomposition d = solver.decompose(Q, o);
                    const double l2sq = d.lp.at(2.0) * d.lp.at(2.0);
                    const double quad = petersson_norm_quadrature(NormalizedCoeffs::from_series(Q)).value();
                    const double rel = std::fabs(l2sq - quad) / quad;
                    worst = std::max(worst, rel);
                    if (rel > kParsevalRel) ok = false;
                    ++pairs;
                }
        }
    }
    const double t = since(t0);
    std::ostringstream o;
    o << pairs << " products; max relative gap " << worst << "; " << t << " s";
    return {ok && t < kC5Seconds, o.str()};
}

Outcome c6() {
    bool ok = true;
    double worst = 0;
    std::ostringstream o;
    for (int k : {40, 60, 100, 140, 200}) {
        const auto pairs = admissible_pairs(k);
        o << "k=" << k << ":" << pairs.size() << " pairs ";
        if (pairs.empty()) continue;
        auto b = store().get({k, 0, false, kPrimeCutoff});
        for (auto [m, n] : pairs) {
            const double v = petersson_delta_check(*b, m, n).value;
            const double e = std::fabs(v - (m == n ? 1.0 : 0.0));
            worst = std::max(worst, e);
            if (e > kDeltaAbs) ok = false;
        }
    }
    o << "; max |value - delta| = " << worst << " (k=40, 60 have no pair with mn <= k^2/10^4)";
    return {ok, o.str()};
}

Outcome c7() {
    bool ok = true;
    for (int k = 0; k <= 20; ++k)
        if (D_coeff(k, k) != 1) ok = false;
    const std::vector<mpq_class> samples = {mpq_class(0), mpq_class(1), mpq_class(-2), mpq_class(1, 2), mpq_class(-3, 7),
                                            mpq_class(5, 3), mpq_class(-11, 13), mpq_class(17, 9), mpq_class(2, 101),
                                            mpq_class(-19, 10)};
    int evaluated = 0;
    for (int k = 0; k <= 12; ++k)
        for (const auto& q : samples) {
            if (lambda_power_expand_check(k, q) != 0) ok = false;
            ++evaluated;
        }
    return {ok, "D_{k,k} = 1 for k <= 20; exact residual 0 at " + std::to_string(evaluated) + " (k, lambda) pairs"};
}

Outcome c8() {
    std::mt19937 rng(31337);
    std::vector<int> weights;
    for (int k = 12; k <= 60; k += 2)
        if (dim_cusp(k) > 0) weights.push_back(k);
    double worst = 0;
    std::ostringstream o;
    for (int t = 0; t < 5; ++t) {
        const Eigenform* tri[3];
        for (auto& e : tri) {
            const int k = weights[std::uniform_int_distribution<size_t>(0, weights.size() - 1)(rng)];
            auto b = store().get({k, 997, false, 0});
            e = &b->forms[std::uniform_int_distribution<int>(0, b->dim() - 1)(rng)];
        }
        o << (t ? " " : "") << "(" << tri[0]->k << "." << tri[0]->index << "," << tri[1]->k << "." << tri[1]->index << ","
          << tri[2]->k << "." << tri[2]->index << ")";
        for (int p : primes_up_to(997)) {
            const double rhs = (sym2_lambda(*tri[0], p) - 1) * (sym2_lambda(*tri[1], p) - 1) * (sym2_lambda(*tri[2], p) - 1);
            worst = std::max(worst, std::fabs(lambda_triple(*tri[0], *tri[1], *tri[2], p, 2) - rhs));
        }
    }
    o << "; max residual " << worst;
    return {worst <= kHeckeRelation, o.str()};
}

Outcome c9() {
    const auto t0 = Clock::now();
    auto F = store().get({12, 200, false, 0});
    auto G = store().get({24, 200, false, 0});
    const Eigenform& f = F->forms[0];
    const Eigenform& g = G->forms[0];
    bool ok = true;
    double worst = 0;
    int max_primes = 0;
    for (int k : {60, 100, 160, 200}) {
        auto H = store().get({k, 200, false, 1000});
        for (int r = 1; r <= 3; ++r) {
            const double x = std::pow(static_cast<double>(k), 1.0 / (10 * r));
            const Moment2r m = moment_2r_check(r, *H, x, [&](int p) { return f.lambda[p] * g.lambda[p]; });
            worst = std::max({worst, m.ratio, m.ratio_weighted});
            max_primes = std::max(max_primes, m.primes);
            if (m.ratio > kMomentRatio || m.ratio_weighted > kMomentRatio) ok = false;
        }
    }
    const double t = since(t0);
    std::ostringstream o;
    o << "max ratio " << worst << "; primes below x = k^{1/(10r)}: at most " << max_primes;
    if (max_primes == 0) o << " (x < 2 throughout, so every sum is empty)";
    o << "; " << t << " s";
    return {ok && t < kC9Seconds, o.str()};
}

Outcome c10() {
    std::vector<int> ks;
    for (int k = 24; k <= 300; k += 12) ks.push_back(k);
    const auto rows = lp_scan(ks, {1.0}, ScanMode::squares, store());
    if (rows.size() < 20) return {false, "scan returned too few rows"};
    const double v24 = rows.front().value;
    double mx = 0;
    for (const auto& r : rows) mx = std::max(mx, r.value);
    double first = 0, last = 0;
    for (int i = 0; i < 10; ++i) {
        first += rows[i].value / 10;
        last += rows[rows.size() - 10 + i].value / 10;
    }
    const bool bounded = mx <= kScanBound * v24;
    const bool flat = last <= (1 + kScanDecadeSlack) * first;
    std::ostringstream o;
    o << "value(24)=" << v24 << " max=" << mx << " (k=" << std::max_element(rows.begin(), rows.end(), [](auto& a, auto& b) {
             return a.value < b.value;
         })->k
      << ") first-decade mean " << first << " last-decade mean " << last << "; bounded=" << bounded << " flat=" << flat;
    return {bounded && flat, o.str()};
}

Outcome c11() {
    const auto t0 = Clock::now();
    bool ok = true;
    std::ostringstream o;
    for (int K : {300, 480, 600}) {
        const double x = std::sqrt(static_cast<double>(K));
        const int need = static_cast<int>(x) + 1;
        auto H = store().get({K, need, true, 0});
        auto F = store().get({12, need, false, 0});
        auto G = store().get({K - 12, need, false, 0});
        const TripleContext ctx{&F->forms[0], &G->forms[0], x, 1.0};
        const DistReport r = dist_report(ctx, *H, x, default_v_grid(K));
        const double rel = std::fabs(r.variance - r.predicted_variance) / r.predicted_variance;
        bool mono = true;
        int prev = H->dim();
        for (const auto& [V, c] : r.tail_counts) {
            if (c > prev) mono = false;
            prev = c;
        }
        const double frac = static_cast<double>(tail_count(r.samples, 2 * std::sqrt(r.predicted_variance))) / H->dim();
        if (rel > kVarianceRel || !mono || frac > kTailFraction) ok = false;
        o << "k=" << K << " dim=" << H->dim() << " var=" << r.variance << " pred=" << r.predicted_variance
          << " tail=" << frac << "; ";
    }
    const double t = since(t0);
    o << t << " s (Petersson-weighted variance, x = k^{1/2})";
    return {ok && t < kC11Seconds, o.str()};
}

Outcome c12() {
    const GaussianCheck g = gaussian_identity_check(1.0);
    std::ostringstream o;
    o.precision(15);
    o << "numeric " << g.numeric << " closed form " << g.closed_form << " rel " << g.rel_error;
    return {g.rel_error <= kGaussianRel, o.str()};
}

const std::vector<std::pair<std::string, std::function<Outcome()>>>& criteria() {
    static const std::vector<std::pair<std::string, std::function<Outcome()>>> list = {
        {"exact algebra", c1},
        {"Hecke algebra", c2},
        {"Deligne bound", c3},
        {"decomposition soundness", c4},
        {"Parseval", c5},
        {"harmonic average check", c6},
        {"D_{k,l} identity", c7},
        {"Hecke relation at p^2", c8},
        {"2r-th moment inequality", c9},
        {"l^1 trend for squares", c10},
        {"distribution of P(h;x,x)", c11},
        {"Gaussian integral", c12},
    };
    return list;
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> which;
    for (int i = 1; i < argc; ++i) which.insert(std::atoi(argv[i]));
    int failed = 0;
    const auto& list = criteria();
    for (size_t i = 0; i < list.size(); ++i) {
        const int n = static_cast<int>(i) + 1;
        if (!which.empty() && !which.count(n)) continue;
        Outcome out;
        try {
            out = list[i].second();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        std::cout << "CRITERION " << n << " " << (out.pass ? "PASS" : "FAIL") << " [" << list[i].first << "] "
                  << out.detail << std::endl;
        if (!out.pass) ++failed;
    }
    return failed ? 1 : 0;
}
