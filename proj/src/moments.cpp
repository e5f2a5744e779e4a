#include "mfq/moments.hpp"

#include "mfq/analytic.hpp"
#include "mfq/arith.hpp"
#include "mfq/decomp.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <stdexcept>

namespace mfq {

namespace {

constexpr double kPi = 3.14159265358979323846;

mpz_class factorial(int n) {
    mpz_class r;
    mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
    return r;
}

void check_power_degree(int k) {
    if (k < 0 || k > 30) throw std::invalid_argument("lambda_power_expand_check: need 0 <= k <= 30");
}

double loglog(double k) { return std::log(std::log(k)); }

const std::vector<double>& lambdas_checked(const Eigenform& h, int p) {
    if (p > h.trunc())
        throw std::invalid_argument("prime " + std::to_string(p) + " beyond truncation " + std::to_string(h.trunc()) +
                                    " of an eigenform of weight " + std::to_string(h.k));
    return h.lambda;
}

double lam(const Eigenform& h, int p) { return lambdas_checked(h, p)[p]; }

double mean_of(const std::vector<double>& v, const std::vector<double>& w) {
    double s = 0, t = 0;
    for (size_t i = 0; i < v.size(); ++i) {
        s += w[i] * v[i];
        t += w[i];
    }
    return s / t;
}

double variance_of(const std::vector<double>& v, const std::vector<double>& w, double m) {
    double s = 0, t = 0;
    for (size_t i = 0; i < v.size(); ++i) {
        s += w[i] * (v[i] - m) * (v[i] - m);
        t += w[i];
    }
    return s / t;
}

}  // namespace

mpq_class D_coeff(int k, int l) {
    if (k < 0 || l < 0 || l > k) throw std::invalid_argument("D_coeff: need 0 <= l <= k");
    if ((k - l) % 2) throw std::invalid_argument("D_coeff: k and l must have the same parity");
    mpq_class r(factorial(k) * (l + 1), factorial((k + l) / 2 + 1) * factorial((k - l) / 2));
    r.canonicalize();
    return r;
}

mpq_class lambda_power_expand_check(int k, const mpq_class& lambda_in) {
    check_power_degree(k);
    mpq_class lambda_p = lambda_in;
    lambda_p.canonicalize();
    // lambda(p^j) by the Hecke recurrence, exactly.
    std::vector<mpq_class> lp(static_cast<size_t>(k) + 1);
    lp[0] = 1;
    if (k >= 1) lp[1] = lambda_p;
    for (int j = 2; j <= k; ++j) lp[j] = lambda_p * lp[j - 1] - lp[j - 2];
    mpq_class power = 1;
    for (int j = 0; j < k; ++j) power *= lambda_p;
    mpq_class sum = 0;
    for (int l = k % 2; l <= k; l += 2) sum += D_coeff(k, l) * lp[l];
    return abs(power - sum);
}

Real lambda_power_expand_check(int k, const Real& lambda_p) {
    check_power_degree(k);
    const Precision bits = lambda_p.prec();
    Real sum(bits);
    for (int l = k % 2; l <= k; l += 2) sum += Real(D_coeff(k, l), bits) * lambda_prime_power(lambda_p, l);
    return abs(pow(lambda_p, static_cast<long>(k)) - sum);
}

double lambda_triple(const Eigenform& f, const Eigenform& g, const Eigenform& h, int p, int n) {
    if (n < 1) throw std::invalid_argument("lambda_triple: n must be positive");
    double prod = 1.0;
    for (const Eigenform* e : {&f, &g, &h}) {
        const Satake& s = e->satake_at(p);
        prod *= (std::pow(s.alpha, n) + std::pow(s.beta, n)).real();
    }
    return prod;
}

double sym2_lambda(const Eigenform& h, int p) {
    const double l = lam(h, p);
    return l * l - 1.0;
}

void TripleContext::validate() const {
    if (!f || !g) throw std::invalid_argument("triple context: f and g required");
    for (int k : {f->k, g->k})
        if (k < 12 || k % 2) throw std::invalid_argument("triple context: weights must be even and >= 12");
    if (!(x >= 2)) throw std::invalid_argument("triple context: x must be >= 2");
    if (!(l >= 0)) throw std::invalid_argument("triple context: l must be >= 0");
}

bool TripleContext::degenerate() const { return f->k == g->k && f->index == g->index; }

double chandee_sum(const TripleContext& ctx, const Eigenform& h) {
    ctx.validate();
    if (!(ctx.x > 10)) throw std::invalid_argument("chandee_sum: x must exceed 10");
    const double lx = std::log(ctx.x);
    const double s = 0.5 + 1.0 / lx;
    double sum = 0;
    for (int p : primes_up_to(static_cast<int>(std::floor(ctx.x)))) {
        double pn = p;
        for (int n = 1; pn <= ctx.x; ++n, pn *= p)
            sum += lambda_triple(*ctx.f, *ctx.g, h, p, n) / (n * std::pow(pn, s)) * std::log(ctx.x / pn) / lx;
    }
    return sum;
}

std::map<int, double> soundararajan_coeffs(const TripleContext& ctx) {
    ctx.validate();
    const double lx = std::log(ctx.x);
    std::map<int, double> a;
    for (int p : primes_up_to(static_cast<int>(std::floor(ctx.x))))
        a[p] = ctx.l * lam(*ctx.f, p) * lam(*ctx.g, p) * std::pow(p, -1.0 / lx) * (1 - std::log(p) / lx);
    return a;
}

double soundararajan_P(const Eigenform& h, const TripleContext& ctx, double y) {
    ctx.validate();
    if (!(y >= 2)) throw std::invalid_argument("soundararajan_P: y must be >= 2");
    if (y > ctx.x) throw std::invalid_argument("soundararajan_P: y must not exceed x");
    const double lx = std::log(ctx.x);
    const double s = 0.5 + 1.0 / lx;
    double sum = 0;
    for (int p : primes_up_to(static_cast<int>(std::floor(y))))
        sum += ctx.l * lam(*ctx.f, p) * lam(*ctx.g, p) * lam(h, p) / std::pow(p, s) * (1 - std::log(p) / lx);
    return sum;
}

HarmonicWeights harmonic_weights(const EigenBasis& b) {
    HarmonicWeights out;
    const int d = b.dim();
    const bool norms = d > 0 && std::all_of(b.forms.begin(), b.forms.end(), [](const Eigenform& h) { return h.norm.has_value(); });
    const bool lvals = d > 0 && std::all_of(b.forms.begin(), b.forms.end(), [](const Eigenform& h) { return h.l_sym2.has_value(); });
    const double k = b.k;
    for (const auto& h : b.forms) {
        if (norms)
            out.w.push_back(std::exp(std::lgamma(k - 1) - (k - 1) * std::log(4 * kPi) - h.norm->log_value));
        else if (lvals)
            out.w.push_back(2 * kPi * kPi / ((k - 1) * h.l_sym2->value));
        else
            out.w.push_back(1.0 / d);
    }
    out.source = norms ? "quadrature" : lvals ? "sym2-route" : "uniform";
    return out;
}

std::vector<double> default_v_grid(int k) {
    std::vector<double> v;
    const double s = std::sqrt(loglog(k));
    for (int j = 1; j <= 12; ++j) v.push_back(s * j / 4);
    return v;
}

int tail_count(const std::vector<double>& samples, double V) {
    return static_cast<int>(std::count_if(samples.begin(), samples.end(), [V](double s) { return s > V; }));
}

DistReport dist_report(const TripleContext& ctx, const EigenBasis& H, double y, const std::vector<double>& v_grid) {
    ctx.validate();
    if (H.dim() == 0) throw std::invalid_argument("dist_report: empty space of weight " + std::to_string(H.k));
    if (H.k != ctx.weight()) throw std::invalid_argument("dist_report: basis weight must be k1 + k2");
    if (!(y >= 2) || y > ctx.x) throw std::invalid_argument("dist_report: need 2 <= y <= x");
    DistReport r;
    r.k = H.k;
    r.x = ctx.x;
    r.y = y;
    r.l = ctx.l;
    r.degenerate = ctx.degenerate();
    for (const auto& h : H.forms) r.samples.push_back(soundararajan_P(h, ctx, ctx.x));

    const HarmonicWeights hw = harmonic_weights(H);
    r.weighting = hw.source;
    for (double w : hw.w) r.weight_sum += w;
    r.mean = mean_of(r.samples, hw.w);
    r.variance = variance_of(r.samples, hw.w, r.mean);
    const std::vector<double> flat(r.samples.size(), 1.0);
    r.natural_mean = mean_of(r.samples, flat);
    r.natural_variance = variance_of(r.samples, flat, r.natural_mean);

    for (const auto& [p, a] : soundararajan_coeffs(ctx)) {
        r.predicted_variance += a * a / p;
        const double raw = ctx.l * lam(*ctx.f, p) * lam(*ctx.g, p);
        r.predicted_variance_raw += raw * raw / p;
        if (p > y) {
            const double sf = sym2_lambda(*ctx.f, p), sg = sym2_lambda(*ctx.g, p);
            r.window_sum += ctx.l * ctx.l * sf * sf * sg * sg / p;
        }
    }
    r.window_reference = ctx.l * ctx.l * std::log(std::log(ctx.x) / std::log(y));
    r.sigma2 = ctx.l * ctx.l * loglog(r.k);
    for (double V : v_grid) r.tail_counts[V] = tail_count(r.samples, V);
    return r;
}

const std::vector<std::string>& prime_sum_labels() {
    static const std::vector<std::string> labels = {"fgh", "fg", "fh", "gh", "f", "g", "h"};
    return labels;
}

PrimeSums prime_sums_report(const Eigenform& f, const Eigenform& g, const Eigenform& h, double x) {
    if (!(x >= 2)) throw std::invalid_argument("prime_sums_report: x must be >= 2");
    PrimeSums r;
    r.x = x;
    r.sums.assign(7, 0.0);
    for (int p : primes_up_to(static_cast<int>(std::floor(x)))) {
        const double a = sym2_lambda(f, p), b = sym2_lambda(g, p), c = sym2_lambda(h, p);
        const double terms[7] = {a * b * c, a * b, a * c, b * c, a, b, c};
        for (int i = 0; i < 7; ++i) r.sums[i] += terms[i] / p;
    }
    auto lll = [](double k) { return std::log(std::log(std::log(k))); };
    r.logloglog_k = lll(f.k + g.k);
    r.logloglog_k1 = lll(f.k);
    r.logloglog_k2 = lll(g.k);
    auto same = [](const Eigenform& u, const Eigenform& v) { return u.k == v.k && u.index == v.index; };
    r.distinct = !same(f, g) && !same(f, h) && !same(g, h);
    return r;
}

double watson_surrogate(int k, std::complex<double> inner, double Lf, double Lg, double Lh) {
    return k * std::norm(inner) * Lf * Lg * Lh;
}

std::vector<double> watson_surrogates(const Eigenform& f, const Eigenform& g, std::shared_ptr<const EigenBasis> H) {
    const int k = f.k + g.k;
    if (H->k != k) throw std::invalid_argument("watson_surrogates: basis weight must be k1 + k2");
    if (H->dim() == 0) return {};
    for (const Eigenform* e : {&f, &g})
        if (!e->l_sym2) throw std::invalid_argument("watson_surrogates: L(1, sym^2) missing on f or g");
    const int N = std::min({f.trunc(), g.trunc(), H->trunc});
    const NumSeries fs = eigen_series(f, N);
    const NumSeries F = (&f == &g) ? series_mul(fs, fs) : series_mul(fs, eigen_series(g, N));
    DecomposeOptions opt;
    opt.log_unit_scale = 0.5 * (log_norm_sq(f) + log_norm_sq(g));
    const Decomposition dec = HeckeSolver(H).decompose(F, opt);
    std::vector<double> out;
    for (int r = 0; r < H->dim(); ++r) {
        const auto& h = H->forms[r];
        if (!h.l_sym2) throw std::invalid_argument("watson_surrogates: L(1, sym^2) missing on h");
        out.push_back(watson_surrogate(k, dec.inner[r], f.l_sym2->value, g.l_sym2->value, h.l_sym2->value));
    }
    return out;
}

std::vector<MomentRow> moment_sum(double l, const std::vector<int>& weights, EigenStore& store,
                                  const MomentOptions& opt) {
    if (!(l > 0)) throw std::invalid_argument("moment_sum: l must be positive");
    if (opt.k1 < 12 || opt.k1 % 2) throw std::invalid_argument("moment_sum: k1 must be even and >= 12");
    std::vector<MomentRow> rows;
    for (int k : weights) {
        const int k2 = k - opt.k1;
        if (k % 2 || k2 < 12 || dim_cusp(k) == 0 || dim_cusp(k2) <= opt.i2 || dim_cusp(opt.k1) <= opt.i1) {
            std::cerr << "moments: weight " << k << " skipped (empty space or missing partner form)\n";
            continue;
        }
        const int P = opt.prime_cutoff;
        const int N = EigenStore::effective_trunc({k, 0, true, P});
        auto H = store.get({k, N, true, P});
        auto B1 = store.get({opt.k1, N, true, P});
        auto B2 = store.get({k2, N, true, P});
        const Eigenform& f = B1->forms[opt.i1];
        const Eigenform& g = B2->forms[opt.i2];
        const std::vector<double> S = watson_surrogates(f, g, H);

        MomentRow row;
        row.k = k;
        row.dim = H->dim();
        row.l = l;
        row.k1 = opt.k1;
        row.i1 = opt.i1;
        row.k2 = k2;
        row.i2 = opt.i2;
        row.degenerate = opt.k1 == k2 && opt.i1 == opt.i2;
        std::vector<double> logL;
        for (double s : S) {
            const double v = s > 0 ? l * std::log(s) : -std::numeric_limits<double>::infinity();
            logL.push_back(v);
            row.sum_L += std::exp(v);
        }
        row.moment = row.sum_L / k;
        row.reference = std::pow(std::log(static_cast<double>(k)), l * (l - 1) / 2);
        row.sigma2 = l * l * loglog(k);
        row.mu = (-0.5 + opt.eps) * l * loglog(k);
        row.v_grid = default_v_grid(k);
        for (double V : row.v_grid) row.B.push_back(tail_count(logL, V + row.mu));
        // Bins (-inf, e_1], (e_1, e_2], ..., (e_m, inf) on the shifted edges.
        int prev = row.dim;
        for (int b : row.B) {
            row.histogram.push_back(prev - b);
            prev = b;
        }
        row.histogram.push_back(prev);

        // e^mu int e^V B(V + mu) dV = int e^u B(u) du; B is a step function
        // dropping by one at each sample, so integrate piece by piece.
        std::vector<double> v;
        for (double t : logL)
            if (std::isfinite(t)) v.push_back(t);
        std::sort(v.begin(), v.end());
        double integral = 0;
        const int finite = static_cast<int>(v.size());
        for (int i = 0; i < finite; ++i) {
            const double lo = i == 0 ? -std::numeric_limits<double>::infinity() : v[i - 1];
            const int count = finite - i;  // B on (v[i-1], v[i])
            integral += count * (std::exp(v[i]) - (std::isinf(lo) ? 0.0 : std::exp(lo)));
        }
        row.ibp_integral = integral;
        rows.push_back(std::move(row));
    }
    return rows;
}

double exp_tilted_integral(const std::function<double(double)>& g) {
    using boost::math::quadrature::gauss_kronrod;
    const double inf = std::numeric_limits<double>::infinity();
    auto f = [&](double v) {
        const double gv = g(v);
        return gv == 0 ? 0.0 : std::exp(v) * gv;
    };
    double err = 0;
    return gauss_kronrod<double, 61>::integrate(f, -inf, inf, 15, 1e-13, &err);
}

GaussianCheck gaussian_identity_check(double sigma) {
    if (!(sigma > 0)) throw std::invalid_argument("gaussian_identity_check: sigma must be positive");
    GaussianCheck c;
    c.numeric = exp_tilted_integral([sigma](double x) { return std::exp(-x * x / (2 * sigma * sigma)); });
    c.closed_form = std::sqrt(2 * kPi) * sigma * std::exp(sigma * sigma / 2);
    c.rel_error = std::fabs(c.numeric - c.closed_form) / c.closed_form;
    return c;
}

Moment2r moment_2r_check(int r, const EigenBasis& H, double x, const std::function<double(int)>& a,
                         bool enforce_range) {
    if (r < 1) throw std::invalid_argument("moment_2r_check: r must be >= 1");
    if (H.dim() == 0) throw std::invalid_argument("moment_2r_check: empty space of weight " + std::to_string(H.k));
    const double xmax = std::pow(static_cast<double>(H.k), 1.0 / (10.0 * r));
    if (enforce_range && x > xmax)
        throw std::invalid_argument("moment_2r_check: x = " + std::to_string(x) + " exceeds k^{1/(10r)} = " +
                                    std::to_string(xmax));
    Moment2r m;
    m.r = r;
    m.k = H.k;
    m.x = x;
    const std::vector<int> ps = x >= 2 ? primes_up_to(static_cast<int>(std::floor(x))) : std::vector<int>{};
    m.primes = static_cast<int>(ps.size());
    std::vector<double> ap;
    double sq = 0;
    for (int p : ps) {
        const double v = a(p);
        if (!(std::fabs(v) <= 8 * std::pow(p, 0.125)))
            throw std::invalid_argument("moment_2r_check: |a_p| exceeds 8 p^{1/8} at p = " + std::to_string(p));
        ap.push_back(v);
        sq += v * v / p;
    }
    const bool lvals = std::all_of(H.forms.begin(), H.forms.end(), [](const Eigenform& h) { return h.l_sym2.has_value(); });
    for (const auto& h : H.forms) {
        double s = 0;
        for (size_t i = 0; i < ps.size(); ++i) s += ap[i] * lam(h, ps[i]) / std::sqrt(static_cast<double>(ps[i]));
        const double t = std::pow(s, 2 * r);
        m.lhs += t;
        if (lvals) m.lhs_weighted += t / h.l_sym2->value;
    }
    if (!lvals) m.lhs_weighted = std::numeric_limits<double>::quiet_NaN();
    // (2r)! / (r! 2^r) = (2r - 1)!!
    double dfact = 1;
    for (int j = 2 * r - 1; j > 1; j -= 2) dfact *= j;
    m.rhs_scale = dfact * H.k * std::pow(sq, r);
    m.loglog3 = std::pow(loglog(H.k), 3);
    m.ratio = m.lhs == 0 ? 0.0 : m.lhs / (m.rhs_scale * m.loglog3);
    m.ratio_weighted = !lvals ? m.lhs_weighted : m.lhs_weighted == 0 ? 0.0 : m.lhs_weighted / m.rhs_scale;
    return m;
}

}  // namespace mfq
