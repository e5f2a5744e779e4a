#pragma once

#include "mfq/qseries.hpp"

#include <json.hpp>

#include <vector>

namespace mfq {

/// Delta^a E4^b E6^c.
struct Monomial {
    int delta = 0;
    int e4 = 0;
    int e6 = 0;
    int weight() const { return 12 * delta + 4 * e4 + 6 * e6; }
    friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// Echelonized (Miller) basis of S_k: miller[i] has coefficient
/// delta_{i+1,j} at q^j for 1 <= j <= dim.
struct CuspSpace {
    int k = 0;
    int dim = 0;
    std::vector<QSeries> miller;

    int trunc() const { return miller.empty() ? 0 : miller.front().trunc(); }
};

/// dim S_k for SL2(Z). Odd or negative k throws.
int dim_cusp(int k);

/// All Delta^a E4^b E6^c of weight k with a >= 1, ordered by decreasing
/// Delta power and then decreasing E4 power.
std::vector<Monomial> cuspidal_monomials(int k);

/// Exact rank of the cuspidal monomial family of weight k, using q^1..q^N.
int monomial_rank(int k, int N);

/// Minimum truncation accepted by miller_basis.
int miller_min_trunc(int k);

/// Miller basis of S_k truncated to q^N.
///
/// Uses the sub-family Delta^j E4^b E6^c (one monomial per j = 1..dim),
/// whose first dim coefficients form a unitriangular integer matrix, so
/// the echelon form is reached with integer row operations only.
CuspSpace miller_basis(int k, int N);

/// The generator of the sub-family used for Delta^j in weight k.
Monomial triangular_monomial(int k, int j);

/// Evaluates a monomial to truncation N.
QSeries monomial_series(const Monomial& m, int N);

nlohmann::json to_json(const CuspSpace& s);
CuspSpace cusp_space_from_json(const nlohmann::json& j);

}  // namespace mfq
