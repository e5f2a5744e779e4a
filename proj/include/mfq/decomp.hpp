#pragma once

#include "mfq/hecke.hpp"
#include "mfq/qseries.hpp"
#include "mfq/store.hpp"

#include <json.hpp>

#include <complex>
#include <map>
#include <string>
#include <vector>

namespace mfq {

using cplx = std::complex<double>;

/// Q(f_1..f_N) = sum a_ij f_i f_j with f_i = sum_r b_ir phi_{k_i, r}.
struct QuadraticFormSpec {
    struct Term {
        int r = 0;  // eigenform index in H_{k_i}
        cplx b;
    };
    int N = 0;
    int target_weight = 0;
    std::vector<int> weights;
    std::vector<std::vector<cplx>> a;
    std::vector<std::vector<Term>> combos;
    /// Per-form sparsity bound; 0 means unchecked.
    int M = 0;

    /// Throws std::invalid_argument describing the first violated invariant.
    void validate() const;
    bool is_zero() const;
};

QuadraticFormSpec quadratic_spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const QuadraticFormSpec& s);

/// Natural log of the stored Petersson norm; throws if missing.
double log_norm_sq(const Eigenform& h);
/// a(0..N) of h as a NumSeries.
NumSeries eigen_series(const Eigenform& h, int N);

using BasisGetter = std::function<std::shared_ptr<const EigenBasis>(int k, int min_trunc, bool norms)>;

/// Adapts an EigenStore for the functions below.
BasisGetter store_getter(EigenStore& store);

/// f_i = sum_r b_ir phi_r to truncation N; with unit_norm the result is
/// divided by ||f_i|| = sqrt(sum_r |b_ir|^2 ||phi_r||^2).
NumSeries build_component(const QuadraticFormSpec& spec, int i, int N, const BasisGetter& bases, bool unit_norm);

/// sum a_ij f_i f_j to truncation N (weight = target_weight, a_0 = 0).
NumSeries build_quadratic(const QuadraticFormSpec& spec, int N, const BasisGetter& bases, bool unit_norm = false);

struct SecondCoeff {
    /// sum_ij a_ij beta_i beta_j, beta_i = sum_r b_ir: the q^2 coefficient of Q.
    cplx a;
    /// Sum over ordered pairs (d1,r1),(d2,r2) of |sum_{k_i=d1,k_j=d2} a_ij b_ir1 b_jr2|.
    double B_val = 0.0;
};

SecondCoeff second_coeff_and_bounds(const QuadraticFormSpec& spec);

struct Decomposition {
    int k = 0;
    /// Hecke-normalized coefficients: F = sum_r c_r h_r.
    std::vector<cplx> c;
    std::vector<ComplexReal> c_hp;
    /// Unit-norm inner products <F_hat, h_r / ||h_r||>; empty without norms.
    std::vector<cplx> inner;
    /// Max relative mismatch on the margin coefficients.
    double residual = 0.0;
    int margin = 0;
    std::map<double, double> lp;
    std::string convention;
};

struct DecomposeOptions {
    int residual_margin = 25;
    double residual_tol = 1e-10;
    /// log of the factor F_hat = F / exp(log_unit_scale) used for inner.
    double log_unit_scale = 0.0;
    bool want_inner = true;
    /// Exponents for the lp map (needs inner).
    std::vector<double> p_list;
};

/// Reusable LU factorization of the normalized coefficient matrix
/// lambda_r(n), 1 <= n, r <= dim.
class HeckeSolver {
public:
    explicit HeckeSolver(std::shared_ptr<const EigenBasis> basis);

    Decomposition decompose(const NumSeries& F, const DecomposeOptions& opt = {}) const;
    const EigenBasis& basis() const { return *basis_; }
    /// log2 of (largest pivot / smallest pivot).
    double log2_pivot_ratio() const { return pivot_ratio_; }

private:
    std::shared_ptr<const EigenBasis> basis_;
    std::vector<std::vector<Real>> lu_;
    std::vector<size_t> perm_;
    std::vector<Real> scale_;  // n^{(k-1)/2}
    double pivot_ratio_ = 0.0;
};

Decomposition hecke_decompose(const NumSeries& F, std::shared_ptr<const EigenBasis> basis,
                              const DecomposeOptions& opt = {});

/// (sum_r |inner_r|^p)^{1/p}. p <= 0 rejected; needs inner.
double lp_norm(const Decomposition& d, double p);
/// Same over the Hecke-normalized coefficients c.
double lp_norm_hecke(const Decomposition& d, double p);

struct SparsityReport {
    int nnz = 0;
    int L = 0;
    bool sparse_representation_exists = false;
    double tol = 0.0;
    /// q^2 coefficient of F: sum c_r a_r(2).
    cplx a;
    bool a_admissible = false;  // |a| >= z0
    /// Normalized convention: sum c_r lambda_r(2) = a / 2^{(k-1)/2}.
    cplx a_normalized;
    double max_abs_c = 0.0;
    /// max |c_r| >= |a_normalized| / (2L).
    bool witness_normalized = false;
    /// max |c_r| >= |a| / (2L), the inequality with a taken literally.
    bool witness_literal = false;
    double lp_lower_bound = 0.0;  // |a_normalized| / (2L)
    std::map<double, double> lp_hecke;
    std::string convention;
};

/// tol_rel: coefficients with |c_r| <= tol_rel * max|c| count as zero.
SparsityReport sparsity_certificate(const Decomposition& d, const EigenBasis& basis, int L, double z0,
                                    double tol_rel = 1e-8, const std::vector<double>& p_list = {1.0});

enum class ScanMode { products, squares };
ScanMode scan_mode_from_string(const std::string& s);
const char* to_string(ScanMode m);

struct ScanRow {
    int k = 0;
    double p = 0.0;
    ScanMode mode = ScanMode::squares;
    double value = 0.0;
    /// (log k)^{-(2-p)/8}, (log k)^{-(2-p)/4}
    double ref8 = 0.0;
    double ref4 = 0.0;
    /// Where the max is attained: eigenform indices (f weight, f index, g weight, g index).
    int k1 = 0, i1 = 0, k2 = 0, i2 = 0;
};

/// Max l^p norm of f_hat g_hat over eigenform pairs (products) or of f_hat^2
/// (squares). Weights with no admissible forms are skipped with a notice on
/// stderr. Rows ordered by weight, then p.
std::vector<ScanRow> lp_scan(const std::vector<int>& weights, const std::vector<double>& p_list, ScanMode mode,
                             EigenStore& store, unsigned threads = 0);

}  // namespace mfq
