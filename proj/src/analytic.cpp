#include "mfq/analytic.hpp"

#include "mfq/arith.hpp"
#include "mfq/parallel.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace mfq {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kNegInf = -1e300;

double log_add(double a, double b) {
    if (a < b) std::swap(a, b);
    if (b <= kNegInf) return a;
    return a + std::log1p(std::exp(b - a));
}

/// Normalized coefficients with precomputed logs, restricted to the terms
/// that matter for y >= y_min.
struct Prepared {
    int k = 0;
    int n_eff = 0;
    double half = 0.0;  // (k-1)/2
    std::vector<std::complex<double>> c;
    std::vector<double> log_abs_c;
    std::vector<double> log_n;
    double bound_c = 1.0;  // |c_n| <= bound_c * d(n) assumed past the truncation
    bool real = true;
};

constexpr double kYMin = 0.8660254037844386;  // sqrt(3)/2

/// log of d(n) n^{(k-1)/2} e^{-2 pi n y}.
double log_deligne_term(int n, double half, double y) {
    return std::log(static_cast<double>(divisor_count(n))) + half * std::log(static_cast<double>(n)) - 2 * kPi * n * y;
}

Prepared prepare(const NormalizedCoeffs& f) {
    Prepared p;
    p.k = f.k;
    p.half = 0.5 * (f.k - 1);
    const int N = f.trunc();
    double fit = 0.0;
    for (int n = 1; n <= N; ++n) fit = std::max(fit, std::abs(f.c[n]) / divisor_count(n));
    p.bound_c = fit > 0 ? fit : 1.0;
    // Drop terms that are below e^{-60} of the largest possible term at y_min.
    const double peak_n = std::max(1.0, p.half / (2 * kPi * kYMin));
    const double peak = log_deligne_term(std::max(1, static_cast<int>(peak_n)), p.half, kYMin);
    int n_eff = N;
    for (int n = static_cast<int>(peak_n) + 1; n <= N; ++n)
        if (log_deligne_term(n, p.half, kYMin) < peak - 60.0) {
            n_eff = n;
            break;
        }
    p.n_eff = n_eff;
    p.c.assign(f.c.begin(), f.c.begin() + n_eff + 1);
    p.log_abs_c.resize(static_cast<size_t>(n_eff) + 1);
    p.log_n.resize(static_cast<size_t>(n_eff) + 1);
    for (int n = 0; n <= n_eff; ++n) {
        p.log_abs_c[n] = std::abs(p.c[n]) > 0 ? std::log(std::abs(p.c[n])) : kNegInf;
        p.log_n[n] = n > 0 ? std::log(static_cast<double>(n)) : 0.0;
        if (p.c[n].imag() != 0.0) p.real = false;
    }
    return p;
}

/// log sum_n |c_n|^2 n^{k-1} e^{-4 pi n y} y^{k-2}: the x-average of y^k|f|^2/y^2.
double log_strip_density(const Prepared& p, double y) {
    double acc = kNegInf;
    for (int n = 1; n <= p.n_eff; ++n) {
        if (p.log_abs_c[n] <= kNegInf) continue;
        acc = log_add(acc, 2 * p.log_abs_c[n] + 2 * p.half * p.log_n[n] - 4 * kPi * n * y);
    }
    return acc + (p.k - 2) * std::log(y);
}

/// log |f(x+iy)|^2 + (k-2) log y.
double log_pocket_density(const Prepared& p, double x, double y) {
    double emax = kNegInf;
    for (int n = 1; n <= p.n_eff; ++n)
        if (p.log_abs_c[n] > kNegInf) emax = std::max(emax, p.log_abs_c[n] + p.half * p.log_n[n] - 2 * kPi * n * y);
    std::complex<double> s = 0.0;
    const std::complex<double> step = std::polar(1.0, 2 * kPi * x);
    std::complex<double> rot = 1.0;
    for (int n = 1; n <= p.n_eff; ++n) {
        rot *= step;
        if (p.log_abs_c[n] <= kNegInf) continue;
        const double mag = std::exp(p.half * p.log_n[n] - 2 * kPi * n * y - (emax - p.log_abs_c[n]));
        s += mag / std::abs(p.c[n]) * p.c[n] * rot;
    }
    const double as = std::abs(s);
    if (as == 0.0) return kNegInf;
    return 2 * (std::log(as) + emax) + (p.k - 2) * std::log(y);
}

/// Upper bound (log) for the contribution of omitted terms n > n_eff,
/// integrated over y >= y_min with x-width 1.
double log_tail_bound(const Prepared& p) {
    const double y_hi = 2 * std::max(1.0, p.half / (2 * kPi)) + 10.0;
    const int steps = 400;
    const double h = (y_hi - kYMin) / steps;
    double acc = kNegInf;
    for (int s = 0; s <= steps; ++s) {
        const double y = kYMin + s * h;
        // R(y): omitted terms; F(y): kept terms, both as bounds on |.|.
        double log_r = kNegInf;
        for (int n = p.n_eff + 1;; ++n) {
            const double t = log_deligne_term(n, p.half, y);
            log_r = log_add(log_r, t);
            if (t < log_r - 40.0 && n > p.half / (2 * kPi * y)) break;
        }
        log_r += std::log(p.bound_c);
        double log_f = kNegInf;
        for (int n = 1; n <= p.n_eff; ++n)
            if (p.log_abs_c[n] > kNegInf)
                log_f = log_add(log_f, p.log_abs_c[n] + p.half * p.log_n[n] - 2 * kPi * n * y);
        const double v = log_add(std::log(2.0) + log_f + log_r, 2 * log_r) + (p.k - 2) * std::log(y);
        acc = log_add(acc, v + std::log(h));
    }
    return acc;
}

double y_upper(const Prepared& p) { return 2 * std::max(1.0, (p.k - 2) / (4 * kPi)) + 10.0; }

double strip_shift(const Prepared& p) {
    double m = kNegInf;
    const double y_hi = y_upper(p);
    for (int s = 0; s <= 200; ++s) m = std::max(m, log_strip_density(p, kYMin + s * (y_hi - kYMin) / 200));
    return m;
}

using boost::math::quadrature::gauss_kronrod;

double strip_integral(const Prepared& p, double shift, double tol, double* err) {
    auto g = [&](double y) { return std::exp(log_strip_density(p, y) - shift); };
    double e = 0.0;
    const double v = gauss_kronrod<double, 21>::integrate(g, 1.0, y_upper(p), 20, tol, &e);
    if (err) *err = e;
    return v;
}

double lgamma_ratio(int k) { return std::lgamma(static_cast<double>(k)) - k * std::log(4 * kPi); }

}  // namespace

NormalizedCoeffs NormalizedCoeffs::from_eigenform(const Eigenform& h) {
    NormalizedCoeffs f;
    f.k = h.k;
    f.c.reserve(h.lambda.size());
    for (double l : h.lambda) f.c.emplace_back(l, 0.0);
    return f;
}

NormalizedCoeffs NormalizedCoeffs::from_series(const NumSeries& s) {
    NormalizedCoeffs f;
    f.k = s.weight;
    const int N = s.trunc();
    const Precision bits = std::max<Precision>(64, s.prec());
    std::vector<ComplexReal> c;
    double scale = kNegInf;
    for (int n = 0; n <= N; ++n) {
        ComplexReal z(bits);
        if (n > 0) {
            Real d(bits);
            mpfr_ui_pow_ui(d.get(), static_cast<unsigned long>(n), static_cast<unsigned long>((f.k - 2) / 2), MPFR_RNDN);
            Real r(bits);
            mpfr_sqrt_ui(r.get(), static_cast<unsigned long>(n), MPFR_RNDN);
            if (f.k % 2 == 0) d *= r;
            else throw std::invalid_argument("NormalizedCoeffs: odd weight");
            z.re = s.coeffs[n].re / d;
            z.im = s.coeffs[n].im / d;
            scale = std::max({scale, z.re.log_abs(), z.im.log_abs()});
        }
        c.push_back(std::move(z));
    }
    if (scale <= kNegInf) scale = 0.0;
    f.log_scale = scale;
    Real unit(bits);
    mpfr_set_d(unit.get(), scale, MPFR_RNDN);
    unit = exp(unit);
    for (auto& z : c) f.c.emplace_back((z.re / unit).to_double(), (z.im / unit).to_double());
    return f;
}

NormalizedCoeffs NormalizedCoeffs::from_series(const QSeries& q) {
    return from_series(NumSeries::from_exact(q, 128));
}

int quadrature_min_trunc(int k, double target_rel_error) {
    // Lower estimate of the norm of a Hecke eigenform: L(1, sym^2) >= 1/10.
    const double log_norm = lgamma_ratio(k) + std::log(2 / kPi) - std::log(10.0);
    for (int N = 4;; N += 2) {
        NormalizedCoeffs f;
        f.k = k;
        f.c.assign(static_cast<size_t>(N) + 1, 0.0);
        for (int n = 1; n <= N; ++n) f.c[n] = static_cast<double>(divisor_count(n));
        Prepared p = prepare(f);
        p.bound_c = 1.0;
        if (p.n_eff < N) return N;
        if (log_tail_bound(p) - log_norm < std::log(target_rel_error / 10)) return N;
        if (N > 100000) throw std::runtime_error("quadrature_min_trunc: no truncation found");
    }
}

double log_strip_integral(const NormalizedCoeffs& f, double* rel_error) {
    const Prepared p = prepare(f);
    const double shift = strip_shift(p);
    double err = 0.0;
    const double v = strip_integral(p, shift, 1e-10, &err);
    if (rel_error) *rel_error = err / v;
    return std::log(v) + shift + 2 * f.log_scale;
}

NormResult petersson_norm_quadrature(const NormalizedCoeffs& f, const QuadratureOptions& opt) {
    if (f.k < 12 || f.k % 2) throw std::invalid_argument("petersson_norm_quadrature: weight must be even and >= 12");
    if (f.trunc() < 1) throw std::invalid_argument("petersson_norm_quadrature: empty series");
    const Prepared p = prepare(f);
    const double tol = opt.target_rel_error / 20;
    const double shift = strip_shift(p);

    double strip_err = 0.0;
    const double strip = strip_integral(p, shift, tol, &strip_err);

    auto inner = [&](double x) {
        auto g = [&](double y) { return std::exp(log_pocket_density(p, x, y) - shift); };
        const double lo = std::sqrt(1 - x * x);
        return gauss_kronrod<double, 15>::integrate(g, lo, 1.0, 12, tol / 10);
    };
    double pocket_err = 0.0;
    double pocket = 0.0;
    if (p.real) {
        // |f(-x+iy)| = |f(x+iy)| for real coefficients.
        pocket = 2 * gauss_kronrod<double, 15>::integrate(inner, 0.0, 0.5, 12, tol, &pocket_err);
        pocket_err *= 2;
    } else {
        pocket = gauss_kronrod<double, 15>::integrate(inner, -0.5, 0.5, 12, tol, &pocket_err);
    }
    const double total = strip + pocket;
    if (!(total > 0)) throw std::runtime_error("petersson_norm_quadrature: non-positive integral (zero form?)");

    const double log_value = std::log(total) + shift;
    const double rel_tail = std::exp(log_tail_bound(p) - log_value);
    const double rel_quad = (strip_err + pocket_err) / total;
    if (rel_tail > opt.target_rel_error) {
        const int need = std::max(f.trunc() + 1, quadrature_min_trunc(f.k, opt.target_rel_error));
        throw std::invalid_argument("petersson_norm_quadrature: truncation " + std::to_string(f.trunc()) +
                                    " insufficient for weight " + std::to_string(f.k) + "; need N >= " +
                                    std::to_string(need));
    }
    NormResult r;
    r.log_value = log_value + 2 * f.log_scale;
    r.method = NormMethod::quadrature;
    r.est_error = rel_tail + rel_quad;
    r.provenance = "quadrature: strip y>=1 via Fourier orthogonality, pocket via nested Gauss-Kronrod; terms n<=" +
                   std::to_string(p.n_eff);
    return r;
}

int max_cutoff(const Eigenform& h) {
    for (int p = h.trunc(); p >= 2; --p)
        if (is_prime(p)) return p;
    return 0;
}

LValue sym2_L_at_1(const Eigenform& h, int P) {
    if (P < 100) throw std::invalid_argument("sym2_L_at_1: cutoff P=" + std::to_string(P) + " below 100");
    if (P > h.trunc())
        throw std::invalid_argument("sym2_L_at_1: cutoff P=" + std::to_string(P) + " exceeds eigenform truncation " +
                                    std::to_string(h.trunc()));
    long double log_l = 0.0L;
    int last = 0;
    for (size_t i = 0; i < h.primes.size() && h.primes[i] <= P; ++i) {
        const int p = h.primes[i];
        const Satake& s = h.satake[i];
        const long double sum_sq = (s.alpha * s.alpha + s.beta * s.beta).real();
        const long double x = 1.0L / p;
        log_l -= std::log1p(-sum_sq * x + x * x) + std::log1p(-x);
        last = p;
    }
    // sum_{p > P} 1/p^2 ~ 1/(P log P).
    const double tail_sq = 1.0 / (P * std::log(static_cast<double>(P)));
    LValue out;
    out.value = static_cast<double>(std::exp(log_l));
    out.cutoff_P = last;
    out.tail_estimate = std::sqrt(tail_sq) + 2 * tail_sq;
    return out;
}

namespace {

Sym2Calibration fit_calibration() {
    constexpr int N = 10000;
    auto fit = [&](int k, double& log_c0, double& rel_err, int& cutoff) {
        const CuspSpace s = miller_basis(k, N);
        const EigenBasis b = eigenforms(s, default_precision(k), 1);
        const Eigenform& h = b.forms.front();
        const NormResult q = petersson_norm_quadrature(NormalizedCoeffs::from_eigenform(h));
        const LValue l = sym2_L_at_1(h, max_cutoff(h));
        log_c0 = q.log_value - lgamma_ratio(k) - std::log(l.value);
        rel_err = q.est_error + l.tail_estimate;
        cutoff = l.cutoff_P;
    };
    double log12 = 0, err12 = 0, log16 = 0, err16 = 0;
    int cut = 0;
    fit(12, log12, err12, cut);
    fit(16, log16, err16, cut);
    Sym2Calibration c;
    c.c0 = std::exp(log12);
    c.cross_weight_ratio = std::exp(log16 - log12);
    std::ostringstream os;
    os.precision(10);
    os << "sym2-route: <h,h> = c0 Gamma(k) (4pi)^-k L(1,sym^2 h), c0=" << c.c0
       << " fitted by quadrature on Delta (k=12), Euler cutoff P=" << cut << ", est. rel. error " << err12
       << "; refit at k=16 gives ratio " << c.cross_weight_ratio;
    c.provenance = os.str();
    return c;
}

}  // namespace

const Sym2Calibration& sym2_calibration() {
    static std::once_flag once;
    static Sym2Calibration cal;
    std::call_once(once, [] { cal = fit_calibration(); });
    return cal;
}

NormResult petersson_norm_sym2(const Eigenform& h) {
    if (!h.l_sym2) throw std::invalid_argument("petersson_norm_sym2: L(1, sym^2) not computed for this eigenform");
    const Sym2Calibration& cal = sym2_calibration();
    if (!(cal.c0 > 0)) throw std::runtime_error("petersson_norm_sym2: calibration unavailable");
    NormResult r;
    r.method = NormMethod::sym2_route;
    r.log_value = std::log(cal.c0) + lgamma_ratio(h.k) + std::log(h.l_sym2->value);
    r.est_error = h.l_sym2->tail_estimate + std::fabs(cal.cross_weight_ratio - 1);
    r.provenance = cal.provenance;
    return r;
}

void attach_l_sym2(EigenBasis& b, int P, unsigned threads) {
    parallel_for(b.forms.size(), threads, [&](size_t i) {
        Eigenform& h = b.forms[i];
        h.l_sym2 = sym2_L_at_1(h, std::min(P, max_cutoff(h)));
    });
}

void attach_quadrature_norms(EigenBasis& b, unsigned threads) {
    parallel_for(b.forms.size(), threads, [&](size_t i) {
        Eigenform& h = b.forms[i];
        h.norm = petersson_norm_quadrature(NormalizedCoeffs::from_eigenform(h));
    });
}

std::vector<std::pair<int, int>> admissible_pairs(int k) {
    std::vector<std::pair<int, int>> out;
    const long limit = static_cast<long>(k) * k;
    for (int m = 1; 10000L * m <= limit; ++m)
        for (int n = 1; 10000L * m * n <= limit; ++n) out.emplace_back(m, n);
    return out;
}

DeltaCheck petersson_delta_check(const EigenBasis& b, int m, int n, bool enforce_range) {
    if (m < 1 || n < 1) throw std::invalid_argument("petersson_delta_check: m, n must be positive");
    if (enforce_range && 10000L * m * n > static_cast<long>(b.k) * b.k)
        throw std::invalid_argument("petersson_delta_check: mn = " + std::to_string(static_cast<long>(m) * n) +
                                    " exceeds k^2/10^4 for weight " + std::to_string(b.k));
    if (std::max(m, n) > b.trunc) throw std::invalid_argument("petersson_delta_check: index beyond truncation");
    DeltaCheck out{b.k, m, n, 0.0, 0.0};
    const double w = 2 * kPi * kPi / (b.k - 1);
    for (const auto& h : b.forms) {
        if (!h.l_sym2) throw std::invalid_argument("petersson_delta_check: L(1, sym^2) missing");
        const double t = w * h.lambda[m] * h.lambda[n] / h.l_sym2->value;
        out.value += t;
        out.err += std::fabs(t) * h.l_sym2->tail_estimate;
    }
    return out;
}

}  // namespace mfq
