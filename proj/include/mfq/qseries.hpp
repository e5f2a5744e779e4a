#pragma once

#include "mfq/real.hpp"

#include <gmpxx.h>
#include <json.hpp>

#include <complex>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace mfq {

/// Truncated q-expansion sum_{n=0}^{N} a_n q^n with exact rational
/// coefficients and a weight tag.
///
/// Coefficients are stored as integer numerators over one shared positive
/// denominator, kept in lowest terms. This keeps products of integral
/// series (everything built from E4, E6 and Delta) on the integer path.
class QSeries {
public:
    QSeries() = default;
    QSeries(int weight, std::vector<mpz_class> numerators, mpz_class denominator = 1);

    static QSeries from_rationals(int weight, const std::vector<mpq_class>& coeffs);
    /// The constant series 1, weight 0.
    static QSeries one(int trunc);
    static QSeries zero(int weight, int trunc);

    int weight() const { return weight_; }
    /// N: coefficients a_0..a_N are stored.
    int trunc() const { return static_cast<int>(num_.size()) - 1; }
    mpq_class coeff(int n) const;
    const std::vector<mpz_class>& numerators() const { return num_; }
    const mpz_class& denominator() const { return den_; }
    bool is_integral() const { return den_ == 1; }
    bool is_zero() const;

    QSeries truncated(int N) const;

    friend bool operator==(const QSeries& a, const QSeries& b) {
        return a.weight_ == b.weight_ && a.den_ == b.den_ && a.num_ == b.num_;
    }

private:
    void normalize();

    int weight_ = 0;
    std::vector<mpz_class> num_;
    mpz_class den_ = 1;
};

/// Normalized Eisenstein series E4 or E6 to q^N.
QSeries eisenstein(int k, int N);

/// Delta = (E4^3 - E6^2) / 1728 to q^N.
QSeries delta(int N);

/// Cauchy product; weight adds, truncation is the smaller one.
QSeries series_mul(const QSeries& a, const QSeries& b);

/// a^e by repeated squaring (e >= 0; a^0 is the weight-0 constant 1).
QSeries series_pow(const QSeries& a, int e);

using RationalTerm = std::pair<mpq_class, std::reference_wrapper<const QSeries>>;

/// Exact linear combination; all weights must agree.
QSeries series_linear(const std::vector<RationalTerm>& terms);

/// q-expansion with extended-precision complex coefficients.
struct NumSeries {
    int weight = 0;
    std::vector<ComplexReal> coeffs;

    int trunc() const { return static_cast<int>(coeffs.size()) - 1; }
    Precision prec() const { return coeffs.empty() ? 128 : coeffs.front().prec(); }
    bool is_zero() const;

    static NumSeries zero(int weight, int trunc, Precision bits);
    static NumSeries from_exact(const QSeries& s, Precision bits);
    /// Real coefficient vector (e.g. an eigenform) as a numeric series.
    static NumSeries from_real(int weight, const std::vector<Real>& a);
};

using ComplexTerm = std::pair<std::complex<double>, std::reference_wrapper<const QSeries>>;
using ComplexNumTerm = std::pair<std::complex<double>, std::reference_wrapper<const NumSeries>>;

/// Linear combination with complex scalars; result is numeric.
NumSeries series_linear(const std::vector<ComplexTerm>& terms, Precision bits);
NumSeries series_linear(const std::vector<ComplexNumTerm>& terms);

NumSeries series_mul(const NumSeries& a, const NumSeries& b);

/// {"weight": k, "trunc": N, "coeffs": ["p/q", ...]}
nlohmann::json to_json(const QSeries& s);
QSeries qseries_from_json(const nlohmann::json& j);

}  // namespace mfq
