#pragma once

#include "mfq/hecke.hpp"
#include "mfq/real.hpp"
#include "mfq/store.hpp"

#include <gmpxx.h>

#include <complex>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace mfq {

/// D_{k,l} = k! (l+1) / (((k+l)/2 + 1)! ((k-l)/2)!), so that
/// lambda(p)^k = sum_{l = k mod 2} D_{k,l} lambda(p^l).
mpq_class D_coeff(int k, int l);

/// |lambda^k - sum_l D_{k,l} lambda(p^l)| with lambda(p^l) from the Hecke
/// recurrence. Exact for rationals; the Real overload works at the input's
/// precision. Requires 0 <= k <= 30.
mpq_class lambda_power_expand_check(int k, const mpq_class& lambda_p);
Real lambda_power_expand_check(int k, const Real& lambda_p);

/// (alpha_f^n + beta_f^n)(alpha_g^n + beta_g^n)(alpha_h^n + beta_h^n) at p.
double lambda_triple(const Eigenform& f, const Eigenform& g, const Eigenform& h, int p, int n);

/// lambda_{sym^2 h}(p) = lambda_h(p)^2 - 1.
double sym2_lambda(const Eigenform& h, int p);

/// A fixed pair (f, g), an exponent l and a length x for the triple-product
/// sums over h in H_{k1+k2}.
struct TripleContext {
    const Eigenform* f = nullptr;
    const Eigenform* g = nullptr;
    double x = 0.0;
    double l = 1.0;

    int weight() const { return f->k + g->k; }
    /// k1, k2 >= 12 even, x >= 2, l >= 0.
    void validate() const;
    /// f and g are the same eigenform.
    bool degenerate() const;
};

/// sum_{p^n <= x} Lambda_{fxgxh}(p^n) / (n p^{n(1/2 + 1/log x)}) * log(x/p^n)/log x.
/// Requires x > 10.
double chandee_sum(const TripleContext& ctx, const Eigenform& h);

/// P(h; x, y) = sum_{p <= y} l lambda_f lambda_g lambda_h(p) / p^{1/2 + 1/log x} (1 - log p / log x).
double soundararajan_P(const Eigenform& h, const TripleContext& ctx, double y);

/// Coefficients a_p of P(h; x, x) written as sum a_p lambda_h(p) / sqrt(p).
std::map<int, double> soundararajan_coeffs(const TripleContext& ctx);

/// Petersson weights omega_h = Gamma(k-1) / ((4 pi)^{k-1} <h,h>), which sum
/// to about 1. Uses quadrature norms, else L(1, sym^2 h), else 1/dim.
struct HarmonicWeights {
    std::vector<double> w;
    std::string source;  // "quadrature", "sym2-route" or "uniform"
};
HarmonicWeights harmonic_weights(const EigenBasis& b);

/// {sqrt(loglog k) j / 4 : j = 1..12}
std::vector<double> default_v_grid(int k);

struct DistReport {
    int k = 0;
    double x = 0.0;
    double y = 0.0;
    double l = 0.0;
    std::vector<double> samples;  // P(h; x, x) per h
    std::string weighting;
    double weight_sum = 0.0;
    /// Harmonic (Petersson-weighted) mean and variance.
    double mean = 0.0;
    double variance = 0.0;
    /// Plain averages over H_k.
    double natural_mean = 0.0;
    double natural_variance = 0.0;
    /// sum_p a_p^2 / p with a_p the full coefficients of P (smoothing included).
    double predicted_variance = 0.0;
    /// sum_{p <= x} (l lambda_f(p) lambda_g(p))^2 / p without the smoothing.
    double predicted_variance_raw = 0.0;
    /// l^2 loglog k
    double sigma2 = 0.0;
    std::map<double, int> tail_counts;  // V -> A(V; x)
    /// sum_{y < p <= x} l^2 lambda_{sym^2 f}(p)^2 lambda_{sym^2 g}(p)^2 / p
    double window_sum = 0.0;
    double window_reference = 0.0;  // l^2 log(log x / log y)
    bool degenerate = false;
};

/// Requires dim > 0 and 2 <= y <= x; y only affects the window sum.
DistReport dist_report(const TripleContext& ctx, const EigenBasis& H, double y, const std::vector<double>& v_grid);

/// #{i : samples[i] > V}
int tail_count(const std::vector<double>& samples, double V);

struct PrimeSums {
    double x = 0.0;
    /// fgh, fg, fh, gh, f, g, h: sums over p <= x of products of lambda_{sym^2}(p) / p.
    std::vector<double> sums;
    double logloglog_k = 0.0;   // logloglog(k1 + k2)
    double logloglog_k1 = 0.0;
    double logloglog_k2 = 0.0;
    /// False when two of f, g, h coincide; the estimates assume distinct forms.
    bool distinct = true;
};
PrimeSums prime_sums_report(const Eigenform& f, const Eigenform& g, const Eigenform& h, double x);
const std::vector<std::string>& prime_sum_labels();

/// (k1 + k2) |<f_hat g_hat, h_hat>|^2 L(1,sym^2 f) L(1,sym^2 g) L(1,sym^2 h),
/// proportional to L(1/2, f x g x h) up to an absolute constant.
double watson_surrogate(int k, std::complex<double> inner, double Lf, double Lg, double Lh);

/// Surrogates for every h in H; all forms need norms and L(1, sym^2) values.
std::vector<double> watson_surrogates(const Eigenform& f, const Eigenform& g, std::shared_ptr<const EigenBasis> H);

struct MomentOptions {
    int k1 = 12;
    int i1 = 0;
    int i2 = 0;  // g = H_{k - k1}[i2]
    int prime_cutoff = 1000;
    double eps = 0.05;  // in mu = (-1/2 + eps) l loglog k
    unsigned threads = 0;
};

struct MomentRow {
    int k = 0;
    int dim = 0;
    double l = 0.0;
    int k1 = 0, i1 = 0, k2 = 0, i2 = 0;
    bool degenerate = false;
    /// (1/k) sum_h surrogate^l
    double moment = 0.0;
    double reference = 0.0;  // (log k)^{l(l-1)/2}
    double mu = 0.0;
    double sigma2 = 0.0;
    std::vector<double> v_grid;
    /// B(V + mu) = #{h : l log surrogate > V + mu} on v_grid.
    std::vector<int> B;
    /// Counts between consecutive shifted grid points, with both open ends; sums to dim.
    std::vector<int> histogram;
    /// sum_h surrogate^l and e^mu int e^V B(V + mu) dV evaluated on the step function.
    double sum_L = 0.0;
    double ibp_integral = 0.0;
};

/// Weights whose space or partner space is empty are skipped with a notice.
std::vector<MomentRow> moment_sum(double l, const std::vector<int>& weights, EigenStore& store,
                                  const MomentOptions& opt = {});

/// int_R e^V g(V) dV by adaptive Gauss-Kronrod.
double exp_tilted_integral(const std::function<double(double)>& g);

struct GaussianCheck {
    double numeric = 0.0;
    double closed_form = 0.0;  // sqrt(2 pi) sigma e^{sigma^2 / 2}
    double rel_error = 0.0;
};
/// int e^{-x^2/(2 sigma^2) + x} dx by exp_tilted_integral.
GaussianCheck gaussian_identity_check(double sigma);

struct Moment2r {
    int r = 0;
    int k = 0;
    double x = 0.0;
    int primes = 0;  // number of p <= x
    double lhs = 0.0;           // sum_h (sum_p a_p lambda_h(p)/sqrt p)^{2r}
    double lhs_weighted = 0.0;  // same with 1/L(1, sym^2 h); NaN if L-values missing
    double rhs_scale = 0.0;     // (2r)!/(r! 2^r) k (sum a_p^2/p)^r
    double loglog3 = 0.0;       // (loglog k)^3
    /// lhs / (rhs_scale loglog3); 0 when lhs = 0.
    double ratio = 0.0;
    double ratio_weighted = 0.0;  // lhs_weighted / rhs_scale
};

/// a(p) supplies the coefficients, |a(p)| <= 8 p^{1/8}. With enforce_range
/// x must satisfy x <= k^{1/(10r)}.
Moment2r moment_2r_check(int r, const EigenBasis& H, double x, const std::function<double(int)>& a,
                         bool enforce_range = true);

}  // namespace mfq
