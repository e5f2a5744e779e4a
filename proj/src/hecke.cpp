#include "mfq/hecke.hpp"

#include "mfq/arith.hpp"
#include "mfq/linalg.hpp"
#include "mfq/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>

namespace mfq {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 p) { return static_cast<u64>(static_cast<u128>(a) * b % p); }
u64 addmod(u64 a, u64 b, u64 p) { u64 s = a + b; return s >= p ? s - p : s; }
u64 submod(u64 a, u64 b, u64 p) { return a >= b ? a - b : a + p - b; }

u64 powmod(u64 a, u64 e, u64 p) {
    u64 r = 1;
    while (e) {
        if (e & 1) r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}

u64 invmod(u64 a, u64 p) { return powmod(a, p - 2, p); }

/// Primes just above 2^61, generated once.
const std::vector<u64>& word_primes(size_t count) {
    static std::mutex mu;
    static std::vector<u64> cache;
    std::lock_guard<std::mutex> lk(mu);
    mpz_class x = mpz_class(1) << 61;
    if (!cache.empty()) x = mpz_class(static_cast<unsigned long>(cache.back()));
    while (cache.size() < count) {
        mpz_nextprime(x.get_mpz_t(), x.get_mpz_t());
        cache.push_back(x.get_ui());
    }
    return cache;
}

u64 reduce(const mpz_class& x, u64 p) { return mpz_fdiv_ui(x.get_mpz_t(), p); }

using ModMatrix = std::vector<std::vector<u64>>;

/// Characteristic polynomial det(xI - H) mod p via reduction to upper
/// Hessenberg form; coefficients c_0..c_d.
std::vector<u64> charpoly_mod(ModMatrix h, u64 p) {
    const size_t n = h.size();
    for (size_t c = 0; c + 2 < n; ++c) {
        size_t piv = c + 1;
        while (piv < n && h[piv][c] == 0) ++piv;
        if (piv == n) continue;
        if (piv != c + 1) {
            std::swap(h[piv], h[c + 1]);
            for (size_t r = 0; r < n; ++r) std::swap(h[r][piv], h[r][c + 1]);
        }
        const u64 inv = invmod(h[c + 1][c], p);
        for (size_t r = c + 2; r < n; ++r) {
            if (h[r][c] == 0) continue;
            const u64 u = mulmod(h[r][c], inv, p);
            for (size_t j = 0; j < n; ++j) h[r][j] = submod(h[r][j], mulmod(u, h[c + 1][j], p), p);
            for (size_t i = 0; i < n; ++i) h[i][c + 1] = addmod(h[i][c + 1], mulmod(u, h[i][r], p), p);
        }
    }
    // polys[m] = charpoly of the leading m x m block.
    std::vector<std::vector<u64>> polys(n + 1);
    polys[0] = {1};
    for (size_t m = 1; m <= n; ++m) {
        std::vector<u64> pm(m + 1, 0);
        const auto& prev = polys[m - 1];
        const u64 diag = h[m - 1][m - 1];
        for (size_t i = 0; i < prev.size(); ++i) {
            pm[i + 1] = addmod(pm[i + 1], prev[i], p);
            pm[i] = submod(pm[i], mulmod(diag, prev[i], p), p);
        }
        u64 t = 1;
        for (size_t i = m - 1; i >= 1; --i) {
            t = mulmod(t, h[i][i - 1], p);
            const u64 f = mulmod(h[i - 1][m - 1], t, p);
            if (f == 0) continue;
            for (size_t j = 0; j < polys[i - 1].size(); ++j) pm[j] = submod(pm[j], mulmod(f, polys[i - 1][j], p), p);
        }
        polys[m] = std::move(pm);
    }
    return polys[n];
}

void trim(std::vector<u64>& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

/// Degree of gcd(f, g) over F_p (f, g nonzero).
int gcd_degree_mod(std::vector<u64> a, std::vector<u64> b, u64 p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        const u64 inv = invmod(b.back(), p);
        while (a.size() >= b.size()) {
            const u64 f = mulmod(a.back(), inv, p);
            const size_t shift = a.size() - b.size();
            for (size_t i = 0; i < b.size(); ++i) a[shift + i] = submod(a[shift + i], mulmod(f, b[i], p), p);
            trim(a);
            if (a.empty()) break;
        }
        std::swap(a, b);
    }
    return static_cast<int>(a.size()) - 1;
}

std::string weight_tag(int k) { return "weight " + std::to_string(k); }

/// Horner evaluation of f, f', f'' at x.
void eval3(const std::vector<Real>& c, const Real& x, Real& f, Real& f1, Real& f2) {
    const Precision p = x.prec();
    f = Real(0L, p);
    f1 = Real(0L, p);
    f2 = Real(0L, p);
    for (size_t i = c.size(); i-- > 0;) {
        f2 *= x;
        f2 += f1;
        f1 *= x;
        f1 += f;
        f *= x;
        f += c[i];
    }
    f2 *= 2L;
}

Real newton_polish(const std::vector<Real>& c, Real x, Precision tol_bits, int max_iter) {
    Real f(x.prec()), f1(x.prec()), f2(x.prec());
    for (int it = 0; it < max_iter; ++it) {
        eval3(c, x, f, f1, f2);
        if (f.is_zero() || f1.is_zero()) break;
        Real step = f / f1;
        x -= step;
        if (step.is_zero() || step.exponent() < -tol_bits) break;
    }
    return x;
}

/// Real roots of a real-rooted polynomial, largest first. Laguerre's
/// method started to the right of every root converges monotonically to
/// the largest root of the implicitly deflated polynomial.
std::vector<Real> real_roots(const std::vector<Real>& c, const Real& start) {
    const int d = static_cast<int>(c.size()) - 1;
    const Precision p = start.prec();
    const Precision tol = p - 12;
    std::vector<Real> roots;
    Real f(p), f1(p), f2(p);
    for (int m = d; m >= 1; --m) {
        Real x(start);
        for (int it = 0; it < 400; ++it) {
            eval3(c, x, f, f1, f2);
            if (f.is_zero()) break;
            Real g = f1 / f;
            Real h = g * g - f2 / f;
            for (const auto& r : roots) {
                Real inv = Real(1L, p) / (x - r);
                g -= inv;
                h -= inv * inv;
            }
            Real disc = (Real(m, p) * h - g * g) * static_cast<long>(m - 1);
            if (disc.sign() < 0) disc = Real(0L, p);
            Real sq = sqrt(disc);
            Real den = g.sign() >= 0 ? g + sq : g - sq;
            if (den.is_zero()) break;
            Real step = Real(m, p) / den;
            x -= step;
            if (step.is_zero() || step.exponent() < -tol) break;
        }
        roots.push_back(newton_polish(c, x, tol, 8));
    }
    std::sort(roots.begin(), roots.end(), [](const Real& a, const Real& b) { return a > b; });
    return roots;
}

/// n^{(k-1)/2} for even k at the given precision.
Real half_power(unsigned long n, int k, Precision bits) {
    Real r(bits);
    mpfr_ui_pow_ui(r.get(), n, static_cast<unsigned long>((k - 2) / 2), MPFR_RNDN);
    Real s(bits);
    mpfr_sqrt_ui(s.get(), n, MPFR_RNDN);
    r *= s;
    return r;
}

double log2_abs(const mpz_class& x) {
    if (x == 0) return -1e300;
    long e = 0;
    const double m = mpz_get_d_2exp(&e, x.get_mpz_t());
    return std::log2(std::fabs(m)) + static_cast<double>(e);
}

}  // namespace

HeckeMatrix operator*(const HeckeMatrix& a, const HeckeMatrix& b) {
    if (a.k != b.k || a.dim() != b.dim()) throw std::invalid_argument("HeckeMatrix product: shape or weight mismatch");
    const int d = a.dim();
    HeckeMatrix c;
    c.k = a.k;
    c.n = a.n * b.n;
    c.entries.assign(static_cast<size_t>(d), std::vector<mpz_class>(static_cast<size_t>(d), 0));
    for (int i = 0; i < d; ++i)
        for (int l = 0; l < d; ++l)
            for (int j = 0; j < d; ++j) c.entries[i][j] += a.entries[i][l] * b.entries[l][j];
    return c;
}

int hecke_min_trunc(const CuspSpace& space, int n) { return n * space.dim; }

HeckeMatrix hecke_matrix(const CuspSpace& space, int n) {
    if (n < 1) throw std::invalid_argument("hecke_matrix: index must be positive");
    const int d = space.dim;
    if (space.trunc() < hecke_min_trunc(space, n))
        throw std::invalid_argument("hecke_matrix: truncation " + std::to_string(space.trunc()) + " too small for T_" +
                                    std::to_string(n) + " in " + weight_tag(space.k) + "; need N >= " +
                                    std::to_string(hecke_min_trunc(space, n)));
    HeckeMatrix t;
    t.k = space.k;
    t.n = n;
    t.entries.assign(static_cast<size_t>(d), std::vector<mpz_class>(static_cast<size_t>(d), 0));
    mpz_class ek;
    for (int j = 0; j < d; ++j) {
        const QSeries& m = space.miller[j];
        if (!m.is_integral()) throw std::logic_error("hecke_matrix: Miller basis is not integral");
        const auto& a = m.numerators();
        for (int i = 1; i <= d; ++i) {
            mpz_class& out = t.entries[i - 1][j];
            const int g = std::gcd(i, n);
            for (int e = 1; e <= g; ++e) {
                if (g % e) continue;
                mpz_ui_pow_ui(ek.get_mpz_t(), static_cast<unsigned long>(e), static_cast<unsigned long>(space.k - 1));
                mpz_addmul(out.get_mpz_t(), ek.get_mpz_t(), a[static_cast<size_t>(i) * n / (e * e)].get_mpz_t());
            }
        }
    }
    return t;
}

std::vector<mpz_class> charpoly(const HeckeMatrix& t) {
    const int d = t.dim();
    if (d == 0) return {mpz_class(1)};
    // Every eigenvalue of T_n on S_k is bounded by d(n) n^{(k-1)/2}, and
    // by the max row sum. Coefficient i is at most C(d,i) R^{d-i}.
    double log2_r = std::log2(static_cast<double>(divisor_count(t.n))) + 0.5 * (t.k - 1) * std::log2(t.n);
    double gersh = -1e300;
    for (const auto& row : t.entries) {
        mpz_class s = 0;
        for (const auto& x : row) s += abs(x);
        gersh = std::max(gersh, log2_abs(s));
    }
    log2_r = std::min(log2_r, gersh);
    const double bound_bits = d + d * std::max(0.0, log2_r) + 2;
    const size_t needed = static_cast<size_t>(std::ceil(bound_bits / 61.0)) + 1;
    const auto& primes = word_primes(needed + 2);

    std::vector<mpz_class> x(static_cast<size_t>(d) + 1, 0);
    mpz_class modulus = 1;
    auto residues = [&](u64 p) {
        ModMatrix m(static_cast<size_t>(d), std::vector<u64>(static_cast<size_t>(d)));
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) m[i][j] = reduce(t.entries[i][j], p);
        return charpoly_mod(std::move(m), p);
    };
    for (size_t pi = 0; pi < needed; ++pi) {
        const u64 p = primes[pi];
        const auto r = residues(p);
        const u64 minv = invmod(reduce(modulus, p), p);
        for (int i = 0; i <= d; ++i) {
            const u64 delta = mulmod(submod(r[i], reduce(x[i], p), p), minv, p);
            x[i] += modulus * mpz_class(static_cast<unsigned long>(delta));
        }
        modulus *= mpz_class(static_cast<unsigned long>(p));
    }
    const mpz_class half = modulus / 2;
    for (auto& c : x)
        if (c > half) c -= modulus;
    for (size_t pi = needed; pi < needed + 2; ++pi) {
        const u64 p = primes[pi];
        const auto r = residues(p);
        for (int i = 0; i <= d; ++i)
            if (reduce(x[i], p) != r[i]) throw std::logic_error("charpoly: CRT lift unstable for " + weight_tag(t.k));
    }
    return x;
}

bool certified_squarefree(const std::vector<mpz_class>& f) {
    if (f.size() <= 2) return true;
    const auto& primes = word_primes(8);
    for (u64 p : primes) {
        std::vector<u64> a, da;
        for (const auto& c : f) a.push_back(reduce(c, p));
        if (a.back() == 0) continue;
        for (size_t i = 1; i < a.size(); ++i) da.push_back(mulmod(a[i], i % p, p));
        if (gcd_degree_mod(a, da, p) == 0) return true;
    }
    return false;
}

Satake satake(double lambda_p) {
    const double disc = lambda_p * lambda_p - 4.0;
    if (disc >= 0) {
        const double s = std::sqrt(disc);
        return {{(lambda_p + s) / 2, 0.0}, {(lambda_p - s) / 2, 0.0}};
    }
    const double s = std::sqrt(-disc);
    return {{lambda_p / 2, s / 2}, {lambda_p / 2, -s / 2}};
}

double lambda_prime_power(double lambda_p, int l) {
    if (l < 0) throw std::invalid_argument("lambda_prime_power: negative exponent");
    double prev = 1.0, cur = lambda_p;
    if (l == 0) return 1.0;
    for (int i = 1; i < l; ++i) {
        const double next = lambda_p * cur - prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

Real lambda_prime_power(const Real& lambda_p, int l) {
    if (l < 0) throw std::invalid_argument("lambda_prime_power: negative exponent");
    Real prev(1L, lambda_p.prec()), cur(lambda_p);
    if (l == 0) return prev;
    for (int i = 1; i < l; ++i) {
        Real next = lambda_p * cur - prev;
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

Real Eigenform::lambda_real(int n) const {
    const Real& x = a.at(static_cast<size_t>(n));
    if (n == 0) return Real(0L, x.prec());
    return x / half_power(static_cast<unsigned long>(n), k, x.prec());
}

const Satake& Eigenform::satake_at(int p) const {
    auto it = std::lower_bound(primes.begin(), primes.end(), p);
    if (it == primes.end() || *it != p)
        throw std::out_of_range("satake_at: " + std::to_string(p) + " is not a stored prime");
    return satake[static_cast<size_t>(it - primes.begin())];
}

Precision default_precision(int k) { return 64 + 2L * k; }

namespace {

void fill_derived(Eigenform& h, const std::vector<Real>& norms) {
    const int N = h.trunc();
    h.lambda.assign(static_cast<size_t>(N) + 1, 0.0);
    for (int n = 1; n <= N; ++n) h.lambda[n] = (h.a[n] / norms[n]).to_double();
    h.primes = primes_up_to(N);
    h.satake.clear();
    for (int p : h.primes) h.satake.push_back(satake(h.lambda[p]));
}

std::vector<Real> half_powers(int k, int N, Precision bits) {
    std::vector<Real> out;
    out.reserve(static_cast<size_t>(N) + 1);
    out.emplace_back(1L, bits);
    for (int n = 1; n <= N; ++n) out.push_back(half_power(static_cast<unsigned long>(n), k, bits));
    return out;
}

}  // namespace

EigenBasis eigenforms(const CuspSpace& space, Precision precision, unsigned threads) {
    const int k = space.k;
    const int d = space.dim;
    if (d < 1) throw std::invalid_argument("eigenforms: " + weight_tag(k) + " has no cusp forms");
    if (precision < 32) throw std::invalid_argument("eigenforms: precision below 32 bits");
    const int N = space.trunc();
    const HeckeMatrix t2 = hecke_matrix(space, 2);

    EigenBasis out;
    out.k = k;
    out.trunc = N;
    out.precision = precision;
    out.charpoly = charpoly(t2);
    if (!certified_squarefree(out.charpoly))
        throw std::runtime_error("eigenforms: T_2 has a repeated eigenvalue in " + weight_tag(k) +
                                 "; T_2 alone does not split this space");

    const double e = 0.5 * (k - 1);

    // Bits lost to cancellation when forming a(n) = sum_i v_i m_i(n), where
    // |v_i| = |a(i)| <= d(i) i^{(k-1)/2}; measured against n^{(k-1)/2}.
    std::vector<double> log2_v(static_cast<size_t>(d) + 1);
    for (int i = 1; i <= d; ++i) log2_v[i] = std::log2(divisor_count(i)) + e * std::log2(i);
    double cancel = 0.0;
    for (int n = d + 1; n <= N; ++n) {
        double worst = -1e300;
        for (int i = 1; i <= d; ++i) {
            const auto& c = space.miller[i - 1].numerators()[n];
            if (c != 0) worst = std::max(worst, log2_v[i] + static_cast<double>(mpz_sizeinbase(c.get_mpz_t(), 2)));
        }
        cancel = std::max(cancel, worst - e * std::log2(n));
    }
    const Precision p_int = precision + static_cast<Precision>(std::ceil(cancel)) + 64 +
                            static_cast<Precision>(std::ceil(std::log2(d + 1)));

    // Scaled operator A = D^{-1} T_2 D / 2^{(k-1)/2}, D = diag(i^{(k-1)/2}),
    // whose eigenvector with first entry 1 is (lambda(1), ..., lambda(d)).
    double log2_a = 0.0;
    for (int i = 1; i <= d; ++i)
        for (int j = 1; j <= d; ++j)
            if (t2.entries[i - 1][j - 1] != 0)
                log2_a = std::max(log2_a, log2_abs(t2.entries[i - 1][j - 1]) + e * (std::log2(j) - std::log2(2.0 * i)));
    const Precision p_eig = p_int + static_cast<Precision>(std::ceil(log2_a)) + 4L * d + 64;

    // Scaled characteristic polynomial: roots are lambda(2) in [-2, 2].
    auto scaled_poly = [&](Precision bits) {
        std::vector<Real> c;
        const Real s = half_power(2, k, bits);
        for (int i = 0; i <= d; ++i) {
            Real x(out.charpoly[i], bits + 64);
            x /= pow(s, static_cast<long>(d - i));
            x.set_prec_round(bits);
            c.push_back(std::move(x));
        }
        return c;
    };

    std::vector<Real> roots;
    for (Precision p1 = 128 + 8L * d;; p1 *= 2) {
        const auto c = scaled_poly(p1);
        roots = real_roots(c, Real(2.5, p1));
        bool separated = true;
        for (size_t i = 0; i + 1 < roots.size(); ++i)
            if ((roots[i] - roots[i + 1]).exponent() < -p1 / 4) separated = false;
        if (separated) break;
        if (p1 > 64 * p_eig)
            throw std::runtime_error("eigenforms: could not separate T_2 eigenvalues in " + weight_tag(k));
    }
    for (const auto& r : roots)
        if (std::fabs(r.to_double()) > 2.0 + 1e-9)
            throw std::runtime_error("eigenforms: T_2 eigenvalue outside the Deligne range in " + weight_tag(k));
    {
        const auto c = scaled_poly(p_eig);
        for (auto& r : roots) {
            r.set_prec_round(p_eig);
            r = newton_polish(c, r, p_eig - 8L * d - 32, 64);
        }
    }

    std::vector<Real> pw_eig = half_powers(k, d, p_eig);
    const Real s2 = half_power(2, k, p_eig);
    std::vector<std::vector<Real>> base(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            Real x(t2.entries[i][j], p_eig);
            x *= pw_eig[j + 1];
            x /= pw_eig[i + 1];
            x /= s2;
            base[i].push_back(std::move(x));
        }

    const std::vector<Real> norms = half_powers(k, N, precision);
    out.forms.resize(static_cast<size_t>(d));
    std::vector<double> residual(static_cast<size_t>(d), 0.0);

    parallel_for(static_cast<size_t>(d), threads, [&](size_t r) {
        // Inverse iteration on A - lambda I.
        auto a = base;
        for (int i = 0; i < d; ++i) a[i][i] -= roots[r];
        const auto perm = lu_decompose(a);
        std::vector<Real> w(static_cast<size_t>(d), Real(1L, p_eig));
        for (int sweep = 0; sweep < 2; ++sweep) {
            w = lu_solve(a, perm, w);
            const Real lead = w[0];
            if (lead.is_zero()) throw std::runtime_error("eigenforms: eigenvector with a(1) = 0 in " + weight_tag(k));
            for (auto& x : w) x /= lead;
        }
        std::vector<Real> v;
        for (int i = 0; i < d; ++i) v.push_back(w[i] * pw_eig[i + 1]);

        // ||(T_2 - a(2)) v||_inf / ||v||_inf.
        const Real theta = roots[r] * s2;
        Real num(p_eig), den(p_eig);
        for (int i = 0; i < d; ++i) {
            Real acc(p_eig);
            for (int j = 0; j < d; ++j) acc.add_mul(v[j], t2.entries[i][j]);
            acc -= theta * v[i];
            if (abs(acc) > num) num = abs(acc);
            if (abs(v[i]) > den) den = abs(v[i]);
        }
        residual[r] = num.is_zero() ? -static_cast<double>(p_eig) : (num / den).log_abs() / std::log(2.0);

        Eigenform& h = out.forms[r];
        h.k = k;
        h.index = static_cast<int>(r);
        h.a.reserve(static_cast<size_t>(N) + 1);
        for (auto& x : v) x.set_prec_round(p_int);
        Real acc(p_int);
        for (int n = 0; n <= N; ++n) {
            mpfr_set_zero(acc.get(), 1);
            for (int i = 0; i < d; ++i) {
                const auto& c = space.miller[i].numerators()[n];
                if (c != 0) acc.add_mul(v[i], c);
            }
            h.a.emplace_back(acc, precision);
        }
        fill_derived(h, norms);
    });

    out.max_residual_log2 = *std::max_element(residual.begin(), residual.end());
    if (out.max_residual_log2 > -0.5 * static_cast<double>(precision))
        throw std::runtime_error("eigenforms: eigenvector residual 2^" + std::to_string(out.max_residual_log2) +
                                 " above tolerance in " + weight_tag(k));
    return out;
}

nlohmann::json to_json(const EigenBasis& b) {
    nlohmann::json cp = nlohmann::json::array();
    for (const auto& c : b.charpoly) cp.push_back(c.get_str());
    const int digits = static_cast<int>(std::ceil(static_cast<double>(b.precision) * 0.30103)) + 3;
    nlohmann::json forms = nlohmann::json::array();
    for (const auto& h : b.forms) {
        nlohmann::json a = nlohmann::json::array();
        for (const auto& x : h.a) a.push_back(x.to_string(digits));
        nlohmann::json f = {{"index", h.index}, {"a", a}, {"l_sym2", nullptr}, {"norm", nullptr}};
        if (h.l_sym2)
            f["l_sym2"] = {{"value", h.l_sym2->value},
                           {"cutoff_P", h.l_sym2->cutoff_P},
                           {"tail_estimate", h.l_sym2->tail_estimate}};
        if (h.norm)
            f["norm"] = {{"log_value", h.norm->log_value},
                         {"method", to_string(h.norm->method)},
                         {"est_error", h.norm->est_error},
                         {"provenance", h.norm->provenance}};
        forms.push_back(std::move(f));
    }
    return {{"k", b.k},
            {"trunc", b.trunc},
            {"precision_bits", b.precision},
            {"charpoly", cp},
            {"max_residual_log2", b.max_residual_log2},
            {"forms", forms}};
}

EigenBasis eigen_basis_from_json(const nlohmann::json& j) {
    EigenBasis b;
    b.k = j.at("k").get<int>();
    b.trunc = j.at("trunc").get<int>();
    b.precision = j.at("precision_bits").get<Precision>();
    b.max_residual_log2 = j.at("max_residual_log2").get<double>();
    for (const auto& c : j.at("charpoly")) b.charpoly.emplace_back(c.get<std::string>());
    const std::vector<Real> norms = half_powers(b.k, b.trunc, b.precision);
    for (const auto& f : j.at("forms")) {
        Eigenform h;
        h.k = b.k;
        h.index = f.at("index").get<int>();
        for (const auto& x : f.at("a")) h.a.push_back(Real::from_string(x.get<std::string>(), b.precision));
        if (h.trunc() != b.trunc) throw std::invalid_argument("EigenBasis JSON: coefficient count mismatch");
        if (!f.at("l_sym2").is_null()) {
            const auto& l = f["l_sym2"];
            h.l_sym2 = LValue{l.at("value").get<double>(), l.at("cutoff_P").get<int>(),
                              l.at("tail_estimate").get<double>()};
        }
        if (!f.at("norm").is_null()) {
            const auto& n = f["norm"];
            NormResult r;
            r.log_value = n.at("log_value").get<double>();
            r.method = n.at("method").get<std::string>() == "quadrature" ? NormMethod::quadrature
                                                                         : NormMethod::sym2_route;
            r.est_error = n.at("est_error").get<double>();
            r.provenance = n.at("provenance").get<std::string>();
            h.norm = r;
        }
        fill_derived(h, norms);
        b.forms.push_back(std::move(h));
    }
    return b;
}

}  // namespace mfq
