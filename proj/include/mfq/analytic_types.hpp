#pragma once

#include <cmath>
#include <string>

namespace mfq {

enum class NormMethod { quadrature, sym2_route };

inline const char* to_string(NormMethod m) {
    return m == NormMethod::quadrature ? "quadrature" : "sym2-route";
}

/// Petersson norm <h,h>. Stored as a natural log because Hecke-normalized
/// forms of large weight have norms far outside double range.
struct NormResult {
    double log_value = 0.0;
    NormMethod method = NormMethod::quadrature;
    /// Relative error estimate.
    double est_error = 0.0;
    std::string provenance;

    double value() const { return std::exp(log_value); }
};

/// L(1, sym^2 h) from a truncated Euler product.
struct LValue {
    double value = 0.0;
    int cutoff_P = 0;
    /// Estimated relative size of the omitted p > P factors.
    double tail_estimate = 0.0;
};

}  // namespace mfq
