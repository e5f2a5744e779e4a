#pragma once

#include "mfq/analytic_types.hpp"
#include "mfq/hecke.hpp"
#include "mfq/qseries.hpp"

#include <complex>
#include <string>
#include <vector>

namespace mfq {

/// Coefficients of a weight-k form in normalized units:
/// a_n = exp(log_scale) * c[n] * n^{(k-1)/2}. Keeps double-range numbers
/// for forms whose raw coefficients overflow.
struct NormalizedCoeffs {
    int k = 0;
    double log_scale = 0.0;
    std::vector<std::complex<double>> c;

    int trunc() const { return static_cast<int>(c.size()) - 1; }

    static NormalizedCoeffs from_eigenform(const Eigenform& h);
    static NormalizedCoeffs from_series(const NumSeries& f);
    static NormalizedCoeffs from_series(const QSeries& f);
};

struct QuadratureOptions {
    double target_rel_error = 1e-4;
};

/// Truncation needed for a Hecke eigenform of weight k to reach the target
/// error in petersson_norm_quadrature.
int quadrature_min_trunc(int k, double target_rel_error = 1e-4);

/// Integral of y^k |f|^2 dmu over the standard fundamental domain: the strip
/// y >= 1 through Fourier orthogonality plus 1D adaptive quadrature in y,
/// the pocket under y = 1 by nested adaptive quadrature. Coefficients past
/// the truncation are bounded by C d(n) n^{(k-1)/2} with C fitted to the
/// stored ones (C = 1 for eigenforms by Deligne).
NormResult petersson_norm_quadrature(const NormalizedCoeffs& f, const QuadratureOptions& opt = {});

/// The strip part alone (y >= 1), as a natural log; exposed for testing.
double log_strip_integral(const NormalizedCoeffs& f, double* rel_error = nullptr);

/// L(1, sym^2 h) as an Euler product over p <= P. The tail estimate is the
/// Sato-Tate RMS of sum_{p>P} lambda(p^2)/p plus the worst-case bound of
/// the higher-order terms under |lambda(p)| <= 2.
LValue sym2_L_at_1(const Eigenform& h, int P);

/// Largest prime cutoff usable for h (largest prime <= truncation).
int max_cutoff(const Eigenform& h);

/// <h,h> = c0 Gamma(k) (4 pi)^{-k} L(1, sym^2 h), with c0 fitted once.
struct Sym2Calibration {
    double c0 = 0.0;
    /// c0 refitted at an independent weight, divided by c0.
    double cross_weight_ratio = 0.0;
    std::string provenance;
};

/// Fits c0 by quadrature on Delta (k = 12) and re-fits at k = 16 to check
/// the weight dependence. Computed once per process and cached.
const Sym2Calibration& sym2_calibration();

/// Requires h.l_sym2.
NormResult petersson_norm_sym2(const Eigenform& h);

/// Fills h.l_sym2 for every form (cutoff min(P, max_cutoff)); each form is
/// written by exactly one worker.
void attach_l_sym2(EigenBasis& b, int P, unsigned threads = 0);
/// Fills h.norm for every form by quadrature.
void attach_quadrature_norms(EigenBasis& b, unsigned threads = 0);

struct DeltaCheck {
    int k = 0;
    int m = 0;
    int n = 0;
    double value = 0.0;
    /// Propagated L-value tail estimates.
    double err = 0.0;
};

/// (2 pi^2 / (k-1)) sum_h lambda_h(m) lambda_h(n) / L(1, sym^2 h).
/// Requires l_sym2 on every form. With enforce_range the pair must
/// satisfy mn <= k^2 / 10^4.
DeltaCheck petersson_delta_check(const EigenBasis& b, int m, int n, bool enforce_range = true);

/// (m, n) pairs with m, n >= 1 and mn <= k^2/10^4.
std::vector<std::pair<int, int>> admissible_pairs(int k);

}  // namespace mfq
