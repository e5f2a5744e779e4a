#include "mfq/qseries.hpp"

#include "mfq/arith.hpp"
#include "mfq/polymul.hpp"

#include <algorithm>
#include <stdexcept>

namespace mfq {

QSeries::QSeries(int weight, std::vector<mpz_class> numerators, mpz_class denominator)
    : weight_(weight), num_(std::move(numerators)), den_(std::move(denominator)) {
    if (num_.empty()) throw std::invalid_argument("QSeries: need at least a_0");
    if (den_ == 0) throw std::invalid_argument("QSeries: zero denominator");
    normalize();
}

void QSeries::normalize() {
    if (den_ < 0) {
        den_ = -den_;
        for (auto& c : num_) c = -c;
    }
    if (den_ == 1) return;
    mpz_class g = den_;
    for (const auto& c : num_) {
        if (g == 1) break;
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    }
    if (g == 1) return;
    den_ /= g;
    for (auto& c : num_) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
}

QSeries QSeries::from_rationals(int weight, const std::vector<mpq_class>& coeffs) {
    mpz_class den = 1;
    for (const auto& c : coeffs) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
    std::vector<mpz_class> num;
    num.reserve(coeffs.size());
    for (const auto& c : coeffs) num.push_back(c.get_num() * (den / c.get_den()));
    return QSeries(weight, std::move(num), den);
}

QSeries QSeries::one(int trunc) {
    std::vector<mpz_class> num(static_cast<size_t>(trunc) + 1, 0);
    num[0] = 1;
    return QSeries(0, std::move(num));
}

QSeries QSeries::zero(int weight, int trunc) {
    return QSeries(weight, std::vector<mpz_class>(static_cast<size_t>(trunc) + 1, 0));
}

mpq_class QSeries::coeff(int n) const {
    mpq_class q(num_.at(static_cast<size_t>(n)), den_);
    q.canonicalize();
    return q;
}

bool QSeries::is_zero() const {
    return std::all_of(num_.begin(), num_.end(), [](const mpz_class& c) { return c == 0; });
}

QSeries QSeries::truncated(int N) const {
    if (N > trunc()) throw std::invalid_argument("QSeries::truncated: cannot extend truncation");
    return QSeries(weight_, std::vector<mpz_class>(num_.begin(), num_.begin() + N + 1), den_);
}

QSeries eisenstein(int k, int N) {
    long c = 0;
    if (k == 4) c = 240;
    else if (k == 6) c = -504;
    else throw std::invalid_argument("eisenstein: weight " + std::to_string(k) + " unsupported (allowed: 4, 6)");
    if (N < 0) throw std::invalid_argument("eisenstein: negative truncation");
    auto sigma = divisor_sums(k - 1, N);
    std::vector<mpz_class> num(static_cast<size_t>(N) + 1);
    num[0] = 1;
    for (int n = 1; n <= N; ++n) num[n] = sigma[n] * c;
    return QSeries(k, std::move(num));
}

QSeries delta(int N) {
    if (N < 0) throw std::invalid_argument("delta: negative truncation");
    const QSeries e4 = eisenstein(4, N), e6 = eisenstein(6, N);
    const QSeries e4cube = series_mul(series_mul(e4, e4), e4);
    const QSeries e6sq = series_mul(e6, e6);
    std::vector<mpz_class> num(static_cast<size_t>(N) + 1);
    for (int n = 0; n <= N; ++n) {
        num[n] = e4cube.numerators()[n] - e6sq.numerators()[n];
        mpz_divexact_ui(num[n].get_mpz_t(), num[n].get_mpz_t(), 1728);
    }
    return QSeries(12, std::move(num));
}

QSeries series_mul(const QSeries& a, const QSeries& b) {
    const int N = std::min(a.trunc(), b.trunc());
    auto num = mul_trunc(a.numerators(), b.numerators(), static_cast<size_t>(N) + 1);
    return QSeries(a.weight() + b.weight(), std::move(num), a.denominator() * b.denominator());
}

QSeries series_pow(const QSeries& a, int e) {
    if (e < 0) throw std::invalid_argument("series_pow: negative exponent");
    QSeries result = QSeries::one(a.trunc());
    QSeries base = a;
    while (e > 0) {
        if (e & 1) result = series_mul(result, base);
        e >>= 1;
        if (e) base = series_mul(base, base);
    }
    return result;
}

QSeries series_linear(const std::vector<RationalTerm>& terms) {
    if (terms.empty()) throw std::invalid_argument("series_linear: no terms");
    const int w = terms.front().second.get().weight();
    int N = terms.front().second.get().trunc();
    for (const auto& [s, q] : terms) {
        if (q.get().weight() != w) throw std::invalid_argument("series_linear: mixed weights");
        N = std::min(N, q.get().trunc());
    }
    std::vector<mpq_class> out(static_cast<size_t>(N) + 1, 0);
    for (const auto& [s, q] : terms) {
        if (s == 0) continue;
        for (int n = 0; n <= N; ++n) out[n] += s * q.get().coeff(n);
    }
    return QSeries::from_rationals(w, out);
}

bool NumSeries::is_zero() const {
    return std::all_of(coeffs.begin(), coeffs.end(), [](const ComplexReal& c) { return c.is_zero(); });
}

NumSeries NumSeries::zero(int weight, int trunc, Precision bits) {
    NumSeries s;
    s.weight = weight;
    s.coeffs.assign(static_cast<size_t>(trunc) + 1, ComplexReal(bits));
    return s;
}

NumSeries NumSeries::from_exact(const QSeries& q, Precision bits) {
    NumSeries s = zero(q.weight(), q.trunc(), bits);
    for (int n = 0; n <= q.trunc(); ++n) s.coeffs[n].re = Real(q.coeff(n), bits);
    return s;
}

NumSeries NumSeries::from_real(int weight, const std::vector<Real>& a) {
    NumSeries s;
    s.weight = weight;
    s.coeffs.reserve(a.size());
    for (const auto& x : a) s.coeffs.emplace_back(x, Real(x.prec()));
    return s;
}

namespace {

void accumulate(ComplexReal& acc, std::complex<double> s, const ComplexReal& x) {
    const Precision p = x.prec();
    const Real sr(s.real(), p), si(s.imag(), p);
    acc.re.add_mul(sr, x.re);
    acc.re -= si * x.im;
    acc.im.add_mul(sr, x.im);
    acc.im.add_mul(si, x.re);
}

bool all_real(const NumSeries& s) {
    return std::all_of(s.coeffs.begin(), s.coeffs.end(), [](const ComplexReal& c) { return c.im.is_zero(); });
}

}  // namespace

NumSeries series_linear(const std::vector<ComplexTerm>& terms, Precision bits) {
    std::vector<NumSeries> converted;
    converted.reserve(terms.size());
    for (const auto& [s, q] : terms) converted.push_back(NumSeries::from_exact(q.get(), bits));
    std::vector<ComplexNumTerm> num_terms;
    for (size_t i = 0; i < terms.size(); ++i) num_terms.emplace_back(terms[i].first, std::cref(converted[i]));
    return series_linear(num_terms);
}

NumSeries series_linear(const std::vector<ComplexNumTerm>& terms) {
    if (terms.empty()) throw std::invalid_argument("series_linear: no terms");
    const int w = terms.front().second.get().weight;
    int N = terms.front().second.get().trunc();
    Precision bits = 0;
    for (const auto& [s, q] : terms) {
        if (q.get().weight != w) throw std::invalid_argument("series_linear: mixed weights");
        N = std::min(N, q.get().trunc());
        bits = std::max(bits, q.get().prec());
    }
    NumSeries out = NumSeries::zero(w, N, bits);
    for (const auto& [s, q] : terms) {
        if (s == std::complex<double>(0.0, 0.0)) continue;
        for (int n = 0; n <= N; ++n) accumulate(out.coeffs[n], s, q.get().coeffs[n]);
    }
    return out;
}

NumSeries series_mul(const NumSeries& a, const NumSeries& b) {
    const int N = std::min(a.trunc(), b.trunc());
    const Precision bits = std::max(a.prec(), b.prec());
    NumSeries out = NumSeries::zero(a.weight + b.weight, N, bits);
    const bool real_only = all_real(a) && all_real(b);
    Real t(bits);
    for (int i = 0; i <= N; ++i) {
        const ComplexReal& x = a.coeffs[i];
        if (x.is_zero()) continue;
        for (int j = 0; i + j <= N; ++j) {
            const ComplexReal& y = b.coeffs[j];
            ComplexReal& z = out.coeffs[i + j];
            z.re.add_mul(x.re, y.re);
            if (real_only) continue;
            mpfr_mul(t.get(), x.im.get(), y.im.get(), MPFR_RNDN);
            z.re -= t;
            z.im.add_mul(x.re, y.im);
            z.im.add_mul(x.im, y.re);
        }
    }
    return out;
}

nlohmann::json to_json(const QSeries& s) {
    nlohmann::json coeffs = nlohmann::json::array();
    for (int n = 0; n <= s.trunc(); ++n) {
        const mpq_class q = s.coeff(n);
        coeffs.push_back(q.get_num().get_str() + "/" + q.get_den().get_str());
    }
    return {{"weight", s.weight()}, {"trunc", s.trunc()}, {"coeffs", coeffs}};
}

QSeries qseries_from_json(const nlohmann::json& j) {
    const int weight = j.at("weight").get<int>();
    const int trunc = j.at("trunc").get<int>();
    const auto& arr = j.at("coeffs");
    if (!arr.is_array() || static_cast<int>(arr.size()) != trunc + 1)
        throw std::invalid_argument("QSeries JSON: coeffs must hold trunc+1 entries");
    std::vector<mpq_class> coeffs;
    coeffs.reserve(arr.size());
    for (const auto& c : arr) {
        mpq_class q;
        if (q.set_str(c.get<std::string>(), 10) != 0)
            throw std::invalid_argument("QSeries JSON: bad rational '" + c.get<std::string>() + "'");
        q.canonicalize();
        coeffs.push_back(q);
    }
    return QSeries::from_rationals(weight, coeffs);
}

}  // namespace mfq
