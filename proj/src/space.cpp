#include "mfq/space.hpp"

#include "mfq/arith.hpp"
#include "mfq/polymul.hpp"

#include <stdexcept>
#include <string>

namespace mfq {

int dim_cusp(int k) {
    if (k < 0) throw std::invalid_argument("dim_cusp: negative weight " + std::to_string(k));
    if (k % 2 != 0) throw std::invalid_argument("dim_cusp: odd weight " + std::to_string(k));
    if (k < 12) return 0;
    const int dim_modular = k / 12 + (k % 12 == 2 ? 0 : 1);
    return dim_modular - 1;
}

std::vector<Monomial> cuspidal_monomials(int k) {
    if (k < 0 || k % 2 != 0) throw std::invalid_argument("cuspidal_monomials: weight must be even and >= 0");
    std::vector<Monomial> out;
    for (int a = k / 12; a >= 1; --a) {
        const int rest = k - 12 * a;
        for (int b = rest / 4; b >= 0; --b) {
            const int r = rest - 4 * b;
            if (r % 6 == 0) out.push_back({a, b, r / 6});
        }
    }
    return out;
}

QSeries monomial_series(const Monomial& m, int N) {
    QSeries s = QSeries::one(N);
    if (m.delta) s = series_mul(s, series_pow(delta(N), m.delta));
    if (m.e4) s = series_mul(s, series_pow(eisenstein(4, N), m.e4));
    if (m.e6) s = series_mul(s, series_pow(eisenstein(6, N), m.e6));
    return s;
}

int monomial_rank(int k, int N) {
    std::vector<std::vector<mpz_class>> rows;
    for (const auto& m : cuspidal_monomials(k)) {
        const QSeries s = monomial_series(m, N);
        rows.emplace_back(s.numerators().begin() + 1, s.numerators().end());
    }
    return exact_rank(std::move(rows));
}

int miller_min_trunc(int k) { return dim_cusp(k) + 1; }

Monomial triangular_monomial(int k, int j) {
    const int rest = k - 12 * j;
    if (rest < 0 || rest == 2) throw std::invalid_argument("triangular_monomial: no monomial for this Delta power");
    if (rest % 4 == 0) return {j, rest / 4, 0};
    return {j, (rest - 6) / 4, 1};
}

CuspSpace miller_basis(int k, int N) {
    const int d = dim_cusp(k);
    if (k < 12) throw std::invalid_argument("miller_basis: weight must be >= 12");
    if (N < miller_min_trunc(k))
        throw std::invalid_argument("miller_basis: truncation " + std::to_string(N) + " too small for weight " +
                                    std::to_string(k) + "; need N >= " + std::to_string(miller_min_trunc(k)));
    CuspSpace space;
    space.k = k;
    space.dim = d;
    if (d == 0) return space;

    const size_t len = static_cast<size_t>(N) + 1;
    const QSeries e4 = eisenstein(4, N);
    const QSeries del = delta(N);

    // R_j = E4^{b_j} E6^c with b_j decreasing by 3 as j grows; build from j = d upwards.
    const Monomial top = triangular_monomial(k, d);
    QSeries rest = series_pow(e4, top.e4);
    if (top.e6) rest = series_mul(rest, eisenstein(6, N));
    const QSeries e4cube = series_mul(series_mul(e4, e4), e4);
    std::vector<QSeries> tails(static_cast<size_t>(d) + 1);
    tails[d] = rest;
    for (int j = d - 1; j >= 1; --j) tails[j] = series_mul(tails[j + 1], e4cube);

    std::vector<std::vector<mpz_class>> rows(static_cast<size_t>(d));
    std::vector<mpz_class> delta_pow = del.numerators();
    for (int j = 1; j <= d; ++j) {
        if (j > 1) delta_pow = mul_trunc(delta_pow, del.numerators(), len);
        rows[j - 1] = mul_trunc(delta_pow, tails[j].numerators(), len);
    }

    // Rows are unitriangular on q^1..q^d; clear above-diagonal entries from the bottom up.
    for (int i = d - 1; i >= 0; --i) {
        for (int j = i + 1; j < d; ++j) {
            const mpz_class f = rows[i][j + 1];
            if (f == 0) continue;
            for (size_t n = static_cast<size_t>(j) + 1; n < len; ++n)
                mpz_submul(rows[i][n].get_mpz_t(), f.get_mpz_t(), rows[j][n].get_mpz_t());
        }
    }
    space.miller.reserve(static_cast<size_t>(d));
    for (auto& r : rows) space.miller.emplace_back(k, std::move(r));
    return space;
}

nlohmann::json to_json(const CuspSpace& s) {
    nlohmann::json basis = nlohmann::json::array();
    for (const auto& m : s.miller) basis.push_back(to_json(m));
    return {{"k", s.k}, {"dim", s.dim}, {"trunc", s.trunc()}, {"miller", basis}};
}

CuspSpace cusp_space_from_json(const nlohmann::json& j) {
    CuspSpace s;
    s.k = j.at("k").get<int>();
    s.dim = j.at("dim").get<int>();
    for (const auto& m : j.at("miller")) s.miller.push_back(qseries_from_json(m));
    if (static_cast<int>(s.miller.size()) != s.dim) throw std::invalid_argument("CuspSpace JSON: dim mismatch");
    return s;
}

}  // namespace mfq
