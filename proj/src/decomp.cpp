#include "mfq/decomp.hpp"

#include "mfq/linalg.hpp"
#include "mfq/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <set>
#include <stdexcept>
#include <tuple>

namespace mfq {

namespace {

cplx complex_from_json(const nlohmann::json& v, const std::string& what) {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return {v[0].get<double>(), v[1].get<double>()};
    throw std::invalid_argument(what + ": expected a number or [re, im]");
}

nlohmann::json complex_to_json(cplx z) {
    if (z.imag() == 0.0) return z.real();
    return nlohmann::json::array({z.real(), z.imag()});
}

Real exp_real(double x, Precision bits) {
    Real r(bits);
    mpfr_set_d(r.get(), x, MPFR_RNDN);
    return exp(r);
}

void scale_series(NumSeries& s, const Real& f) {
    for (auto& c : s.coeffs) {
        c.re *= f;
        c.im *= f;
    }
}

Real cabs(const ComplexReal& z) {
    Real r(z.prec());
    mpfr_hypot(r.get(), z.re.get(), z.im.get(), MPFR_RNDN);
    return r;
}

double log_sum_exp(const std::vector<double>& xs) {
    double m = -1e300;
    for (double x : xs) m = std::max(m, x);
    if (m <= -1e300) return m;
    double s = 0;
    for (double x : xs) s += std::exp(x - m);
    return m + std::log(s);
}

}  // namespace

double log_norm_sq(const Eigenform& h) {
    if (!h.norm) throw std::invalid_argument("Petersson norm missing for eigenform " + std::to_string(h.index) +
                                             " of weight " + std::to_string(h.k));
    return h.norm->log_value;
}

NumSeries eigen_series(const Eigenform& h, int N) {
    if (N > h.trunc())
        throw std::invalid_argument("eigenform of weight " + std::to_string(h.k) + " truncated at " +
                                    std::to_string(h.trunc()) + ", need " + std::to_string(N));
    NumSeries s;
    s.weight = h.k;
    s.coeffs.reserve(static_cast<size_t>(N) + 1);
    for (int n = 0; n <= N; ++n) s.coeffs.emplace_back(h.a[n], Real(h.a[n].prec()));
    return s;
}

void QuadraticFormSpec::validate() const {
    if (N < 1) throw std::invalid_argument("QuadraticFormSpec: N must be >= 1");
    if (static_cast<int>(weights.size()) != N || static_cast<int>(a.size()) != N ||
        static_cast<int>(combos.size()) != N)
        throw std::invalid_argument("QuadraticFormSpec: weights, a and combos must all have N entries");
    for (const auto& row : a)
        if (static_cast<int>(row.size()) != N) throw std::invalid_argument("QuadraticFormSpec: a must be N x N");
    for (int i = 0; i < N; ++i) {
        if (weights[i] < 12 || weights[i] % 2)
            throw std::invalid_argument("QuadraticFormSpec: weight k_" + std::to_string(i + 1) + " = " +
                                        std::to_string(weights[i]) + " must be even and >= 12");
        for (int j = 0; j < N; ++j) {
            if (a[i][j] != a[j][i])
                throw std::invalid_argument("QuadraticFormSpec: a is not symmetric at (" + std::to_string(i + 1) +
                                            "," + std::to_string(j + 1) + ")");
            if (a[i][j] != cplx(0) && weights[i] + weights[j] != target_weight)
                throw std::invalid_argument("QuadraticFormSpec: k_" + std::to_string(i + 1) + " + k_" +
                                            std::to_string(j + 1) + " != target weight " +
                                            std::to_string(target_weight) + " although a_ij != 0");
        }
        const int d = dim_cusp(weights[i]);
        std::set<int> seen;
        int nonzero = 0;
        for (const auto& t : combos[i]) {
            if (t.r < 0 || t.r >= d)
                throw std::invalid_argument("QuadraticFormSpec: eigenform index " + std::to_string(t.r) +
                                            " out of range for weight " + std::to_string(weights[i]) + " (dim " +
                                            std::to_string(d) + ")");
            if (!seen.insert(t.r).second)
                throw std::invalid_argument("QuadraticFormSpec: repeated eigenform index in form " +
                                            std::to_string(i + 1));
            if (t.b != cplx(0)) ++nonzero;
        }
        if (M > 0 && nonzero > M)
            throw std::invalid_argument("QuadraticFormSpec: form " + std::to_string(i + 1) + " uses " +
                                        std::to_string(nonzero) + " eigenforms, more than M = " + std::to_string(M));
    }
}

bool QuadraticFormSpec::is_zero() const {
    bool a_zero = true;
    for (const auto& row : a)
        for (auto z : row)
            if (z != cplx(0)) a_zero = false;
    bool b_zero = true;
    for (const auto& c : combos)
        for (const auto& t : c)
            if (t.b != cplx(0)) b_zero = false;
    return a_zero || b_zero;
}

QuadraticFormSpec quadratic_spec_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw std::invalid_argument("quadratic form spec: top level must be an object");
    QuadraticFormSpec s;
    try {
        s.target_weight = j.at("target_weight").get<int>();
        s.weights = j.at("weights").get<std::vector<int>>();
        s.N = j.contains("N") ? j.at("N").get<int>() : static_cast<int>(s.weights.size());
        if (j.contains("M")) s.M = j.at("M").get<int>();
        for (const auto& row : j.at("a")) {
            std::vector<cplx> r;
            for (const auto& v : row) r.push_back(complex_from_json(v, "a"));
            s.a.push_back(std::move(r));
        }
        for (const auto& combo : j.at("combos")) {
            std::vector<QuadraticFormSpec::Term> terms;
            for (const auto& t : combo) terms.push_back({t.at("r").get<int>(), complex_from_json(t.at("b"), "b")});
            s.combos.push_back(std::move(terms));
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("quadratic form spec: ") + e.what());
    }
    s.validate();
    return s;
}

nlohmann::json to_json(const QuadraticFormSpec& s) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& row : s.a) {
        nlohmann::json r = nlohmann::json::array();
        for (auto z : row) r.push_back(complex_to_json(z));
        a.push_back(r);
    }
    nlohmann::json combos = nlohmann::json::array();
    for (const auto& c : s.combos) {
        nlohmann::json terms = nlohmann::json::array();
        for (const auto& t : c) terms.push_back({{"r", t.r}, {"b", complex_to_json(t.b)}});
        combos.push_back(terms);
    }
    nlohmann::json j = {{"N", s.N}, {"target_weight", s.target_weight}, {"weights", s.weights}, {"a", a},
                        {"combos", combos}};
    if (s.M) j["M"] = s.M;
    return j;
}

BasisGetter store_getter(EigenStore& store) {
    return [&store](int k, int min_trunc, bool norms) { return store.get({k, min_trunc, norms, 0}); };
}

NumSeries build_component(const QuadraticFormSpec& spec, int i, int N, const BasisGetter& bases, bool unit_norm) {
    const int k = spec.weights.at(static_cast<size_t>(i));
    const auto basis = bases(k, N, unit_norm);
    std::vector<NumSeries> parts;
    std::vector<ComplexNumTerm> terms;
    std::vector<double> log_sq;
    parts.reserve(spec.combos[i].size());
    for (const auto& t : spec.combos[i]) {
        if (t.r >= basis->dim()) throw std::invalid_argument("build_component: eigenform index out of range");
        parts.push_back(eigen_series(basis->forms[t.r], N));
        if (unit_norm && t.b != cplx(0)) log_sq.push_back(2 * std::log(std::abs(t.b)) + log_norm_sq(basis->forms[t.r]));
    }
    for (size_t n = 0; n < parts.size(); ++n) terms.emplace_back(spec.combos[i][n].b, std::cref(parts[n]));
    if (terms.empty()) return NumSeries::zero(k, N, default_precision(k));
    NumSeries f = series_linear(terms);
    if (unit_norm && !log_sq.empty()) scale_series(f, exp_real(-0.5 * log_sum_exp(log_sq), f.prec()));
    return f;
}

NumSeries build_quadratic(const QuadraticFormSpec& spec, int N, const BasisGetter& bases, bool unit_norm) {
    spec.validate();
    const int k = spec.target_weight;
    if (spec.is_zero()) return NumSeries::zero(k, N, default_precision(k));
    std::vector<NumSeries> f(static_cast<size_t>(spec.N));
    for (int i = 0; i < spec.N; ++i) {
        bool used = false;
        for (int j = 0; j < spec.N; ++j) used = used || spec.a[i][j] != cplx(0);
        if (used) f[i] = build_component(spec, i, N, bases, unit_norm);
    }
    std::vector<NumSeries> products;
    std::vector<cplx> scalars;
    for (int i = 0; i < spec.N; ++i)
        for (int j = i; j < spec.N; ++j) {
            if (spec.a[i][j] == cplx(0)) continue;
            products.push_back(series_mul(f[i], f[j]));
            scalars.push_back(i == j ? spec.a[i][j] : 2.0 * spec.a[i][j]);
        }
    std::vector<ComplexNumTerm> terms;
    for (size_t t = 0; t < products.size(); ++t) terms.emplace_back(scalars[t], std::cref(products[t]));
    NumSeries q = series_linear(terms);
    if (q.weight != k) throw std::logic_error("build_quadratic: weight mismatch");
    return q;
}

SecondCoeff second_coeff_and_bounds(const QuadraticFormSpec& spec) {
    spec.validate();
    SecondCoeff out;
    std::vector<cplx> beta(static_cast<size_t>(spec.N), 0.0);
    for (int i = 0; i < spec.N; ++i)
        for (const auto& t : spec.combos[i]) beta[i] += t.b;
    for (int i = 0; i < spec.N; ++i)
        for (int j = 0; j < spec.N; ++j) out.a += spec.a[i][j] * beta[i] * beta[j];
    std::map<std::tuple<int, int, int, int>, cplx> T;
    for (int i = 0; i < spec.N; ++i)
        for (int j = 0; j < spec.N; ++j) {
            if (spec.a[i][j] == cplx(0)) continue;
            for (const auto& t1 : spec.combos[i])
                for (const auto& t2 : spec.combos[j])
                    T[{spec.weights[i], t1.r, spec.weights[j], t2.r}] += spec.a[i][j] * t1.b * t2.b;
        }
    for (const auto& [key, v] : T) out.B_val += std::abs(v);
    return out;
}

HeckeSolver::HeckeSolver(std::shared_ptr<const EigenBasis> basis) : basis_(std::move(basis)) {
    const EigenBasis& b = *basis_;
    const int d = b.dim();
    if (d == 0) return;
    const Precision bits = b.precision;
    scale_.emplace_back(1L, bits);
    for (int n = 1; n <= b.trunc; ++n) {
        Real r(bits);
        mpfr_ui_pow_ui(r.get(), static_cast<unsigned long>(n), static_cast<unsigned long>((b.k - 2) / 2), MPFR_RNDN);
        Real s(bits);
        mpfr_sqrt_ui(s.get(), static_cast<unsigned long>(n), MPFR_RNDN);
        r *= s;
        scale_.push_back(std::move(r));
    }
    lu_.assign(static_cast<size_t>(d), {});
    for (int n = 1; n <= d; ++n)
        for (int r = 0; r < d; ++r) lu_[n - 1].push_back(b.forms[r].a[n] / scale_[n]);
    perm_ = lu_decompose(lu_);
    double lo = 1e300, hi = -1e300;
    for (int i = 0; i < d; ++i) {
        const double l = lu_[i][i].log_abs() / std::log(2.0);
        lo = std::min(lo, l);
        hi = std::max(hi, l);
    }
    pivot_ratio_ = hi - lo;
    if (pivot_ratio_ > 0.5 * static_cast<double>(bits))
        throw std::runtime_error("hecke_decompose: coefficient matrix of weight " + std::to_string(b.k) +
                                 " numerically singular (pivot ratio 2^" + std::to_string(pivot_ratio_) + ")");
}

Decomposition HeckeSolver::decompose(const NumSeries& F, const DecomposeOptions& opt) const {
    const EigenBasis& b = *basis_;
    const int d = b.dim();
    if (F.weight != b.k)
        throw std::invalid_argument("hecke_decompose: series weight " + std::to_string(F.weight) +
                                    " does not match basis weight " + std::to_string(b.k));
    const int need = d + opt.residual_margin;
    if (F.trunc() < need || b.trunc < need)
        throw std::invalid_argument("hecke_decompose: need truncation >= " + std::to_string(need) + " (dim " +
                                    std::to_string(d) + " + margin " + std::to_string(opt.residual_margin) + ")");
    Decomposition out;
    out.k = b.k;
    out.margin = opt.residual_margin;
    const Precision bits = b.precision;
    out.convention = "c: Hecke-normalized (a_h(1) = 1); inner: <F/exp(" + std::to_string(opt.log_unit_scale) +
                     "), h/||h||>";
    out.c.assign(static_cast<size_t>(d), 0.0);
    out.c_hp.assign(static_cast<size_t>(d), ComplexReal(bits));
    if (d == 0) return out;

    // Normalized right-hand side; also the margin rows.
    std::vector<ComplexReal> rhs;
    Real fmax(bits);
    for (int n = 1; n <= need; ++n) {
        ComplexReal z(F.coeffs[n].re / scale_[n], F.coeffs[n].im / scale_[n]);
        fmax = std::max(fmax, cabs(z), [](const Real& x, const Real& y) { return x < y; });
        rhs.push_back(std::move(z));
    }
    const ComplexReal& a0 = F.coeffs[0];
    if (!a0.is_zero()) {
        Real t = cabs(a0);
        if (fmax.is_zero() || (t / fmax).log_abs() > -0.5 * static_cast<double>(bits) * std::log(2.0))
            throw std::invalid_argument("hecke_decompose: a_0 != 0, not a cusp form");
    }
    if (fmax.is_zero()) {
        if (opt.want_inner) out.inner.assign(static_cast<size_t>(d), 0.0);
        for (double p : opt.p_list) out.lp[p] = 0.0;
        return out;
    }

    std::vector<Real> re, im;
    for (int n = 0; n < d; ++n) {
        re.push_back(rhs[n].re);
        im.push_back(rhs[n].im);
    }
    const auto xr = lu_solve(lu_, perm_, re);
    const auto xi = lu_solve(lu_, perm_, im);
    for (int r = 0; r < d; ++r) {
        out.c_hp[r] = ComplexReal(xr[r], xi[r]);
        out.c[r] = out.c_hp[r].to_complex();
    }

    double worst = 0.0;
    for (int n = d + 1; n <= need; ++n) {
        ComplexReal sum(bits);
        Real mag(bits);
        for (int r = 0; r < d; ++r) {
            const Real l = b.forms[r].a[n] / scale_[n];
            sum.re.add_mul(out.c_hp[r].re, l);
            sum.im.add_mul(out.c_hp[r].im, l);
            mag += abs(l) * cabs(out.c_hp[r]);
        }
        const ComplexReal diff(sum.re - rhs[n - 1].re, sum.im - rhs[n - 1].im);
        Real denom = mag > cabs(rhs[n - 1]) ? mag : cabs(rhs[n - 1]);
        if (denom.is_zero()) continue;
        worst = std::max(worst, (cabs(diff) / denom).to_double());
    }
    out.residual = worst;
    if (worst > opt.residual_tol)
        throw std::runtime_error("hecke_decompose: residual " + std::to_string(worst) + " above tolerance " +
                                 std::to_string(opt.residual_tol) + " in weight " + std::to_string(b.k));

    const bool have_norms = std::all_of(b.forms.begin(), b.forms.end(), [](const Eigenform& h) { return h.norm; });
    if (opt.want_inner && have_norms) {
        for (int r = 0; r < d; ++r) {
            const Real f = exp_real(0.5 * b.forms[r].norm->log_value - opt.log_unit_scale, bits);
            out.inner.emplace_back((out.c_hp[r].re * f).to_double(), (out.c_hp[r].im * f).to_double());
        }
        out.convention += " with ||h|| from " + std::string(to_string(b.forms.front().norm->method));
        for (double p : opt.p_list) out.lp[p] = lp_norm(out, p);
    }
    return out;
}

Decomposition hecke_decompose(const NumSeries& F, std::shared_ptr<const EigenBasis> basis,
                              const DecomposeOptions& opt) {
    return HeckeSolver(std::move(basis)).decompose(F, opt);
}

namespace {

double lp_of(const std::vector<cplx>& v, double p) {
    if (!(p > 0)) throw std::invalid_argument("lp_norm: p must be positive");
    double m = 0;
    for (auto z : v) m = std::max(m, std::abs(z));
    if (m == 0) return 0.0;
    double s = 0;
    for (auto z : v) s += std::pow(std::abs(z) / m, p);
    return m * std::pow(s, 1.0 / p);
}

}  // namespace

double lp_norm(const Decomposition& d, double p) {
    if (!(p > 0)) throw std::invalid_argument("lp_norm: p must be positive");
    if (d.inner.size() != d.c.size()) throw std::invalid_argument("lp_norm: inner products not populated");
    return lp_of(d.inner, p);
}

double lp_norm_hecke(const Decomposition& d, double p) { return lp_of(d.c, p); }

SparsityReport sparsity_certificate(const Decomposition& d, const EigenBasis& basis, int L, double z0, double tol_rel,
                                    const std::vector<double>& p_list) {
    if (L < 1) throw std::invalid_argument("sparsity_certificate: L must be >= 1");
    SparsityReport rep;
    rep.L = L;
    const int dim = static_cast<int>(d.c_hp.size());
    double log_max = -1e300;
    std::vector<double> logs;
    for (const auto& z : d.c_hp) {
        logs.push_back(cabs(z).log_abs());
        log_max = std::max(log_max, logs.back());
    }
    rep.max_abs_c = log_max > -1e300 ? std::exp(log_max) : 0.0;
    rep.tol = tol_rel * rep.max_abs_c;
    for (double l : logs)
        if (l > -1e300 && l > log_max + std::log(tol_rel)) ++rep.nnz;
    rep.sparse_representation_exists = rep.nnz <= L;

    const Precision bits = basis.precision;
    ComplexReal a(bits), an(bits);
    for (int r = 0; r < dim; ++r) {
        const Real& a2 = basis.forms[r].a.at(2);
        const Real l2 = basis.forms[r].lambda_real(2);
        a.re.add_mul(d.c_hp[r].re, a2);
        a.im.add_mul(d.c_hp[r].im, a2);
        an.re.add_mul(d.c_hp[r].re, l2);
        an.im.add_mul(d.c_hp[r].im, l2);
    }
    rep.a = a.to_complex();
    rep.a_normalized = an.to_complex();
    rep.a_admissible = std::abs(rep.a) >= z0;
    rep.lp_lower_bound = std::abs(rep.a_normalized) / (2.0 * L);
    rep.witness_normalized = rep.max_abs_c >= rep.lp_lower_bound;
    rep.witness_literal = rep.max_abs_c >= std::abs(rep.a) / (2.0 * L);
    for (double p : p_list) rep.lp_hecke[p] = lp_norm_hecke(d, p);
    rep.convention = "normalized: a_normalized = sum_r c_r lambda_r(2), |lambda_r(2)| <= 2";
    return rep;
}

ScanMode scan_mode_from_string(const std::string& s) {
    if (s == "products") return ScanMode::products;
    if (s == "squares") return ScanMode::squares;
    throw std::invalid_argument("scan mode must be 'products' or 'squares', got '" + s + "'");
}

const char* to_string(ScanMode m) { return m == ScanMode::products ? "products" : "squares"; }

std::vector<ScanRow> lp_scan(const std::vector<int>& weights, const std::vector<double>& p_list, ScanMode mode,
                             EigenStore& store, unsigned threads) {
    for (double p : p_list)
        if (!(p > 0)) throw std::invalid_argument("lp_scan: p must be positive");
    std::vector<ScanRow> rows;
    for (int k : weights) {
        if (k < 24 || k % 2) throw std::invalid_argument("lp_scan: weights must be even and >= 24");
        const int dk = dim_cusp(k);
        struct Pair {
            int k1, i1, k2, i2;
        };
        std::vector<Pair> pairs;
        if (dk > 0) {
            if (mode == ScanMode::squares) {
                if ((k / 2) % 2 == 0)
                    for (int i = 0; i < dim_cusp(k / 2); ++i) pairs.push_back({k / 2, i, k / 2, i});
            } else {
                for (int k1 = 12; 2 * k1 <= k; k1 += 2) {
                    const int k2 = k - k1;
                    const int d1 = dim_cusp(k1), d2 = dim_cusp(k2);
                    for (int i = 0; i < d1; ++i)
                        for (int j = (k1 == k2 ? i + 1 : 0); j < d2; ++j) pairs.push_back({k1, i, k2, j});
                }
            }
        }
        if (pairs.empty()) {
            std::cerr << "scan: weight " << k << " skipped (no " << to_string(mode) << " of eigenforms)\n";
            continue;
        }
        const int N = EigenStore::effective_trunc({k, 0, true, 0});
        auto target = store.get({k, N, true, 0});
        const HeckeSolver solver(target);
        std::map<int, std::shared_ptr<const EigenBasis>> parts;
        for (const auto& p : pairs)
            for (int w : {p.k1, p.k2})
                if (!parts.count(w)) parts[w] = store.get({w, N, true, 0});

        std::vector<std::vector<double>> values(pairs.size());
        parallel_for(pairs.size(), threads, [&](size_t t) {
            const Pair& p = pairs[t];
            const Eigenform& f = parts.at(p.k1)->forms[p.i1];
            const Eigenform& g = parts.at(p.k2)->forms[p.i2];
            const NumSeries fs = eigen_series(f, N);
            const NumSeries F = (p.k1 == p.k2 && p.i1 == p.i2) ? series_mul(fs, fs) : series_mul(fs, eigen_series(g, N));
            DecomposeOptions opt;
            opt.log_unit_scale = 0.5 * (log_norm_sq(f) + log_norm_sq(g));
            opt.p_list = p_list;
            const Decomposition dec = solver.decompose(F, opt);
            for (double q : p_list) values[t].push_back(dec.lp.at(q));
        });
        for (size_t pi = 0; pi < p_list.size(); ++pi) {
            ScanRow row;
            row.k = k;
            row.p = p_list[pi];
            row.mode = mode;
            row.value = -1;
            for (size_t t = 0; t < pairs.size(); ++t)
                if (values[t][pi] > row.value) {
                    row.value = values[t][pi];
                    row.k1 = pairs[t].k1;
                    row.i1 = pairs[t].i1;
                    row.k2 = pairs[t].k2;
                    row.i2 = pairs[t].i2;
                }
            const double lk = std::log(static_cast<double>(k));
            row.ref8 = std::pow(lk, -(2 - row.p) / 8);
            row.ref4 = std::pow(lk, -(2 - row.p) / 4);
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace mfq
