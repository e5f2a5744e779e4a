#pragma once

#include "mfq/analytic_types.hpp"
#include "mfq/real.hpp"
#include "mfq/space.hpp"

#include <gmpxx.h>
#include <json.hpp>

#include <complex>
#include <optional>
#include <vector>

namespace mfq {

/// Matrix of T_n acting on the Miller basis: column j is T_n(miller[j])
/// written in the Miller basis. Entries are integers because the basis is
/// integral and echelonized.
struct HeckeMatrix {
    int k = 0;
    int n = 0;
    std::vector<std::vector<mpz_class>> entries;

    int dim() const { return static_cast<int>(entries.size()); }
    friend bool operator==(const HeckeMatrix& a, const HeckeMatrix& b) { return a.entries == b.entries; }
};

HeckeMatrix operator*(const HeckeMatrix& a, const HeckeMatrix& b);

/// Smallest Miller-basis truncation that supports T_n.
int hecke_min_trunc(const CuspSpace& space, int n);

/// Exact matrix of T_n, using a_{T_n f}(m) = sum_{d | gcd(m,n)} d^{k-1} a_f(mn/d^2).
HeckeMatrix hecke_matrix(const CuspSpace& space, int n);

/// Monic characteristic polynomial, coefficients c_0..c_d (c_d = 1).
/// Computed modulo word-size primes and lifted by CRT; the number of primes
/// comes from Deligne's bound on the T_2 eigenvalues, plus two primes that
/// must leave the lift unchanged.
std::vector<mpz_class> charpoly(const HeckeMatrix& t);

/// True when gcd(f, f') = 1 modulo some sampled prime, which certifies
/// f squarefree (nonzero discriminant) over Q.
bool certified_squarefree(const std::vector<mpz_class>& f);

/// Roots of X^2 - lambda X + 1.
struct Satake {
    std::complex<double> alpha;
    std::complex<double> beta;
};

/// alpha has nonnegative imaginary part; for real roots alpha >= beta.
Satake satake(double lambda_p);

/// lambda(p^l) by lambda(p^{l+1}) = lambda(p) lambda(p^l) - lambda(p^{l-1}), lambda(1) = 1.
double lambda_prime_power(double lambda_p, int l);
Real lambda_prime_power(const Real& lambda_p, int l);

struct Eigenform {
    int k = 0;
    int index = 0;
    /// a(0..N), a(1) = 1.
    std::vector<Real> a;
    /// lambda(n) = a(n) / n^{(k-1)/2}; lambda[0] = 0.
    std::vector<double> lambda;
    /// Satake parameters for each prime p <= N, aligned with `primes`.
    std::vector<int> primes;
    std::vector<Satake> satake;
    std::optional<LValue> l_sym2;
    std::optional<NormResult> norm;

    int trunc() const { return static_cast<int>(a.size()) - 1; }
    /// lambda(n) at the stored precision.
    Real lambda_real(int n) const;
    const Satake& satake_at(int p) const;
};

struct EigenBasis {
    int k = 0;
    int trunc = 0;
    Precision precision = 0;
    /// Characteristic polynomial of T_2, c_0..c_d.
    std::vector<mpz_class> charpoly;
    std::vector<Eigenform> forms;
    /// max over forms of ||(T_2 - a(2)) v||_inf / ||v||_inf.
    double max_residual_log2 = 0.0;

    int dim() const { return static_cast<int>(forms.size()); }
};

/// Default working precision 64 + 2k bits.
Precision default_precision(int k);

/// Hecke eigenbasis of S_k from T_2, sorted by descending a(2).
/// Throws if T_2 has a repeated eigenvalue.
EigenBasis eigenforms(const CuspSpace& space, Precision precision, unsigned threads = 0);

nlohmann::json to_json(const EigenBasis& b);
EigenBasis eigen_basis_from_json(const nlohmann::json& j);

}  // namespace mfq
