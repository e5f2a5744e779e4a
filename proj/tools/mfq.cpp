#include "mfq/analytic.hpp"
#include "mfq/cache.hpp"
#include "mfq/decomp.hpp"
#include "mfq/moments.hpp"
#include "mfq/space.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace mfq;
using nlohmann::json;

namespace {

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct Config {
    std::optional<long> precision_bits;  // unset: 64 + 2k
    int residual_margin = 25;
    int prime_cutoff_P = 10000;
    std::string cache_dir;
    bool no_cache = false;
    unsigned threads = 0;
    double residual_tol = 1e-10;

    void validate() const {
        if (precision_bits && *precision_bits < 64) throw UsageError("precision_bits must be >= 64");
        if (residual_margin < 5) throw UsageError("residual_margin must be >= 5");
        if (prime_cutoff_P < 100) throw UsageError("prime_cutoff_P must be >= 100");
    }
};

/// Values in the config file win over command-line flags; every flag that
/// gets overridden is reported.
void apply_config_file(const std::string& path, Config& cfg, const CLI::App& app) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw UsageError("config " + path + ": " + e.what());
    }
    if (!j.is_object()) throw UsageError("config " + path + ": top level must be an object");
    auto given = [&](const std::string& flag) { return app.get_option(flag)->count() > 0; };
    auto note = [&](const std::string& key, const std::string& flag) {
        if (given(flag)) std::cerr << "note: config " << path << " overrides " << flag << " with " << key << "\n";
    };
    try {
        for (const auto& [key, v] : j.items()) {
            if (key == "precision_bits") {
                note(key, "--precision");
                cfg.precision_bits = v.get<long>();
            } else if (key == "residual_margin") {
                note(key, "--residual-margin");
                cfg.residual_margin = v.get<int>();
            } else if (key == "prime_cutoff_P") {
                note(key, "--prime-cutoff");
                cfg.prime_cutoff_P = v.get<int>();
            } else if (key == "cache_dir") {
                note(key, "--cache-dir");
                cfg.cache_dir = v.get<std::string>();
            } else if (key == "threads") {
                note(key, "--threads");
                cfg.threads = v.get<unsigned>();
            } else if (key == "tolerances") {
                for (const auto& [t, tv] : v.items()) {
                    if (t == "residual_tol")
                        cfg.residual_tol = tv.get<double>();
                    else
                        throw UsageError("config " + path + ": unknown tolerance '" + t + "'");
                }
            } else {
                throw UsageError("config " + path + ": unknown key '" + key + "'");
            }
        }
    } catch (const json::exception& e) {
        throw UsageError("config " + path + ": " + e.what());
    }
}

std::vector<int> parse_weights(const std::string& s) {
    std::vector<int> out;
    try {
        if (s.find(':') != std::string::npos) {
            std::vector<int> parts;
            std::stringstream ss(s);
            std::string tok;
            while (std::getline(ss, tok, ':')) parts.push_back(std::stoi(tok));
            if (parts.size() < 2 || parts.size() > 3) throw UsageError("weights: expected A:B or A:B:STEP");
            const int step = parts.size() == 3 ? parts[2] : 2;
            if (step <= 0) throw UsageError("weights: step must be positive");
            for (int k = parts[0]; k <= parts[1]; k += step) out.push_back(k);
        } else {
            std::stringstream ss(s);
            std::string tok;
            while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
        }
    } catch (const std::logic_error& e) {
        if (dynamic_cast<const UsageError*>(&e)) throw;
        throw UsageError("weights: cannot parse '" + s + "'");
    }
    for (int k : out)
        if (k % 2 || k < 0) throw UsageError("weight " + std::to_string(k) + " must be even and nonnegative");
    return out;
}

std::vector<double> parse_doubles(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    try {
        while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    } catch (const std::logic_error&) {
        throw UsageError("cannot parse number list '" + s + "'");
    }
    return out;
}

void check_weight(int k) {
    if (k % 2 || k < 0) throw UsageError("weight " + std::to_string(k) + " must be even and nonnegative");
}

std::string timestamp() {
    const std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

/// CSV with two comment lines: the timestamp, then the parameters.
class Csv {
public:
    Csv(std::ostream& out, const std::string& cmd, const std::vector<std::pair<std::string, std::string>>& params,
        const std::string& header)
        : out_(out) {
        out_ << "# mfq " << cmd << " generated=" << timestamp() << "\n# params:";
        for (const auto& [k, v] : params) out_ << ' ' << k << '=' << v;
        out_ << '\n' << header << '\n';
    }
    template <class... T>
    void row(const T&... cells) {
        bool first = true;
        ((out_ << (first ? "" : ",") << cell(cells), first = false), ...);
        out_ << '\n';
    }

private:
    static std::string cell(double v) { return num(v); }
    static std::string cell(int v) { return std::to_string(v); }
    static std::string cell(long v) { return std::to_string(v); }
    static std::string cell(bool v) { return v ? "1" : "0"; }
    static std::string cell(const std::string& v) { return v; }
    static std::string cell(const char* v) { return v; }
    std::ostream& out_;
};

struct Context {
    Config cfg;
    std::unique_ptr<DiskCache> cache;
    std::unique_ptr<EigenStore> store;
    std::ostream* out = &std::cout;

    void init() {
        cfg.validate();
        if (cfg.cache_dir.empty())
            if (const char* env = std::getenv("MFQ_CACHE_DIR")) cfg.cache_dir = env;
        if (!cfg.no_cache && !cfg.cache_dir.empty()) cache = std::make_unique<DiskCache>(cfg.cache_dir);
        store = std::make_unique<EigenStore>(cfg.threads);
        if (cache) cache->attach(*store);
        if (cfg.precision_bits) {
            const long bits = *cfg.precision_bits;
            store->set_precision([bits](int) { return bits; });
        }
    }
    std::vector<std::pair<std::string, std::string>> base_params() const {
        return {{"precision_bits", cfg.precision_bits ? std::to_string(*cfg.precision_bits) : "64+2k"},
                {"residual_margin", std::to_string(cfg.residual_margin)},
                {"prime_cutoff_P", std::to_string(cfg.prime_cutoff_P)}};
    }
};

void cmd_basis(Context& ctx, int k, int N) {
    check_weight(k);
    const int d = dim_cusp(k);
    if (N <= 0) N = std::max(miller_min_trunc(k), d + 1);
    std::shared_ptr<CuspSpace> s;
    if (ctx.cache) s = ctx.cache->load_space(k, N);
    if (s) {
        std::cerr << "basis: served from cache\n";
    } else {
        s = std::make_shared<CuspSpace>(miller_basis(k, N));
        if (ctx.cache) ctx.cache->save_space(*s);
    }
    char sum[16];
    std::snprintf(sum, sizeof sum, "%08x", DiskCache::checksum(to_json(*s).dump()));
    Csv csv(*ctx.out, "basis", {{"k", std::to_string(k)}, {"trunc", std::to_string(N)}, {"dim", std::to_string(s->dim)}, {"checksum", sum}},
            "row,pivot,monomial,coeff_at_dim_plus_1");
    for (int i = 0; i < s->dim; ++i) {
        const Monomial m = triangular_monomial(k, i + 1);
        const std::string mono = "D^" + std::to_string(m.delta) + " E4^" + std::to_string(m.e4) + " E6^" + std::to_string(m.e6);
        const std::string next = s->dim + 1 <= N ? s->miller[i].coeff(s->dim + 1).get_str() : "";
        csv.row(i + 1, i + 1, mono, next);
    }
}

void cmd_eigen(Context& ctx, int k, int N, bool norms, bool lsym2) {
    check_weight(k);
    const int P = lsym2 ? ctx.cfg.prime_cutoff_P : 0;
    auto b = ctx.store->get({k, N, norms, P});
    Csv csv(*ctx.out, "eigen",
            {{"k", std::to_string(k)},
             {"dim", std::to_string(b->dim())},
             {"trunc", std::to_string(b->trunc)},
             {"precision_bits", std::to_string(b->precision)},
             {"max_residual_log2", num(b->max_residual_log2)}},
            "index,a2,lambda2,lambda3,lambda5,log_norm_sq,norm_method,l_sym2,l_sym2_cutoff");
    for (const auto& h : b->forms) {
        csv.row(h.index, h.a[2].to_string(20), h.lambda[2], h.lambda[3], h.trunc() >= 5 ? h.lambda[5] : NAN,
                h.norm ? num(h.norm->log_value) : std::string(), h.norm ? to_string(h.norm->method) : "",
                h.l_sym2 ? num(h.l_sym2->value) : std::string(), h.l_sym2 ? std::to_string(h.l_sym2->cutoff_P) : std::string());
    }
}

QuadraticFormSpec read_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open spec file " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        // what() carries "at line L, column C".
        throw UsageError("spec " + path + ": " + e.what());
    }
    try {
        return quadratic_spec_from_json(j);
    } catch (const std::invalid_argument& e) {
        throw UsageError("spec " + path + ": " + e.what());
    }
}

void cmd_decompose(Context& ctx, const std::string& path, const std::vector<double>& ps, int L, double z0) {
    const QuadraticFormSpec spec = read_spec(path);
    const int k = spec.target_weight;
    check_weight(k);
    const int N = EigenStore::effective_trunc({k, 0, true, 0});
    auto H = ctx.store->get({k, N, true, 0});
    const BasisGetter get = store_getter(*ctx.store);
    const NumSeries F = build_quadratic(spec, N, get, false);
    DecomposeOptions opt;
    opt.residual_margin = ctx.cfg.residual_margin;
    opt.residual_tol = ctx.cfg.residual_tol;
    opt.want_inner = false;
    const HeckeSolver solver(H);
    const Decomposition raw = solver.decompose(F, opt);
    Decomposition unit;
    if (!spec.is_zero()) {
        opt.want_inner = true;
        opt.p_list = ps;
        unit = solver.decompose(build_quadratic(spec, N, get, true), opt);
    } else {
        unit.inner.assign(H->dim(), cplx(0));
        for (double p : ps) unit.lp[p] = 0.0;
    }
    const SecondCoeff sc = second_coeff_and_bounds(spec);
    auto params = ctx.base_params();
    params.insert(params.begin(), {{"spec", path}, {"k", std::to_string(k)}, {"dim", std::to_string(H->dim())},
                                   {"trunc", std::to_string(N)}, {"convention", "inner=<Q_hat,h/||h||> with unit-norm f_i"}});
    Csv csv(*ctx.out, "decompose", params, "item,index,re,im,abs");
    cplx sum(0);
    for (size_t r = 0; r < raw.c.size(); ++r) {
        csv.row(std::string("c"), static_cast<int>(r), raw.c[r].real(), raw.c[r].imag(), std::abs(raw.c[r]));
        sum += raw.c[r];
    }
    for (size_t r = 0; r < unit.inner.size(); ++r)
        csv.row(std::string("inner"), static_cast<int>(r), unit.inner[r].real(), unit.inner[r].imag(), std::abs(unit.inner[r]));
    for (double p : ps) {
        const double v = unit.lp.count(p) ? unit.lp.at(p) : 0.0;
        csv.row(std::string("lp"), num(p), v, 0.0, v);
    }
    for (double p : ps) {
        const double v = spec.is_zero() ? 0.0 : lp_norm_hecke(raw, p);
        csv.row(std::string("lp_hecke"), num(p), v, 0.0, v);
    }
    csv.row(std::string("sum_c"), 0, sum.real(), sum.imag(), std::abs(sum));
    csv.row(std::string("residual"), 0, raw.residual, 0.0, raw.residual);
    csv.row(std::string("second_coeff"), 2, sc.a.real(), sc.a.imag(), std::abs(sc.a));
    csv.row(std::string("B_val"), 0, sc.B_val, 0.0, sc.B_val);
    if (L > 0) {
        const SparsityReport rep = sparsity_certificate(raw, *H, L, z0, 1e-8, ps);
        csv.row(std::string("nnz"), L, static_cast<double>(rep.nnz), 0.0, static_cast<double>(rep.nnz));
        csv.row(std::string("sparse_representation_exists"), L, rep.sparse_representation_exists ? 1.0 : 0.0, 0.0,
                rep.sparse_representation_exists ? 1.0 : 0.0);
        csv.row(std::string("a_normalized"), 2, rep.a_normalized.real(), rep.a_normalized.imag(), std::abs(rep.a_normalized));
        csv.row(std::string("witness_normalized"), L, rep.witness_normalized ? 1.0 : 0.0, 0.0, rep.witness_normalized ? 1.0 : 0.0);
        csv.row(std::string("witness_literal"), L, rep.witness_literal ? 1.0 : 0.0, 0.0, rep.witness_literal ? 1.0 : 0.0);
        csv.row(std::string("lp_lower_bound"), L, rep.lp_lower_bound, 0.0, rep.lp_lower_bound);
    }
}

void cmd_scan(Context& ctx, const std::string& weights, const std::vector<double>& ps, const std::string& mode_s) {
    const ScanMode mode = [&] {
        try {
            return scan_mode_from_string(mode_s);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }();
    const std::vector<int> ks = parse_weights(weights);
    for (int k : ks)
        if (k < 24) throw UsageError("scan: weights must be >= 24");
    const auto rows = lp_scan(ks, ps, mode, *ctx.store, ctx.cfg.threads);
    auto params = ctx.base_params();
    params.insert(params.begin(), {{"weights", weights}, {"mode", to_string(mode)}, {"convention", "unit-norm inner products"}});
    Csv csv(*ctx.out, "scan", params, "k,p,mode,value,ref_logk_pow_minus_2mp_over_8,ref_logk_pow_minus_2mp_over_4,k1,i1,k2,i2");
    for (const auto& r : rows) csv.row(r.k, r.p, std::string(to_string(r.mode)), r.value, r.ref8, r.ref4, r.k1, r.i1, r.k2, r.i2);
}

void cmd_petersson(Context& ctx, const std::string& weights, int max_mn) {
    const std::vector<int> ks = parse_weights(weights);
    auto params = ctx.base_params();
    params.insert(params.begin(), {{"weights", weights}, {"max_mn", max_mn > 0 ? std::to_string(max_mn) : "k^2/10^4"}});
    Csv csv(*ctx.out, "petersson-check", params, "k,m,n,in_range,value,delta,abs_diff,err_estimate");
    for (int k : ks) {
        if (dim_cusp(k) == 0) {
            std::cerr << "petersson-check: weight " << k << " skipped (empty space)\n";
            continue;
        }
        const int M = max_mn > 0 ? max_mn : static_cast<int>(static_cast<long>(k) * k / 10000);
        if (M < 1) {
            std::cerr << "petersson-check: weight " << k << " has no pair with mn <= k^2/10^4\n";
            continue;
        }
        auto b = ctx.store->get({k, std::max(M, 2), false, ctx.cfg.prime_cutoff_P});
        for (int m = 1; m <= M; ++m)
            for (int n = 1; m * n <= M; ++n) {
                const DeltaCheck d = petersson_delta_check(*b, m, n, false);
                const double delta = m == n ? 1.0 : 0.0;
                csv.row(k, m, n, 10000L * m * n <= static_cast<long>(k) * k, d.value, delta, std::fabs(d.value - delta), d.err);
            }
    }
}

void cmd_moments(Context& ctx, double l, const std::string& weights, const MomentOptions& base) {
    MomentOptions opt = base;
    opt.prime_cutoff = ctx.cfg.prime_cutoff_P;
    opt.threads = ctx.cfg.threads;
    const auto rows = moment_sum(l, parse_weights(weights), *ctx.store, opt);
    auto params = ctx.base_params();
    params.insert(params.begin(), {{"l", num(l)}, {"weights", weights}, {"k1", std::to_string(opt.k1)}, {"i1", std::to_string(opt.i1)},
                                   {"i2", std::to_string(opt.i2)}, {"eps", num(opt.eps)},
                                   {"v_grid", "sqrt(loglog k)*j/4,j=1..12"}});
    Csv csv(*ctx.out, "moments", params,
            "k,dim,l,k1,i1,k2,i2,degenerate,moment,reference_logk_pow_l(l-1)/2,ratio,mu,sigma2,sum_L,ibp_integral,B_shifted,histogram");
    for (const auto& r : rows) {
        std::string B, hist;
        for (size_t j = 0; j < r.B.size(); ++j) B += (j ? ";" : "") + num(r.v_grid[j]) + ":" + std::to_string(r.B[j]);
        for (size_t j = 0; j < r.histogram.size(); ++j) hist += (j ? ";" : "") + std::to_string(r.histogram[j]);
        csv.row(r.k, r.dim, r.l, r.k1, r.i1, r.k2, r.i2, r.degenerate, r.moment, r.reference, r.moment / r.reference, r.mu,
                r.sigma2, r.sum_L, r.ibp_integral, B, hist);
    }
}

void cmd_dist(Context& ctx, int K, double E, double l, int k1, int i1, int i2, double y_exp) {
    check_weight(K);
    if (k1 < 12 || k1 % 2) throw UsageError("dist: k1 must be even and >= 12");
    const int k2 = K - k1;
    if (k2 < 12 || dim_cusp(k2) <= i2 || dim_cusp(k1) <= i1) throw UsageError("dist: no eigenform pair for this weight split");
    if (dim_cusp(K) == 0) throw UsageError("dist: empty space of weight " + std::to_string(K));
    const double x = std::pow(static_cast<double>(K), E);
    const double y = y_exp > 0 ? std::pow(static_cast<double>(K), y_exp) : x;
    const int need = static_cast<int>(std::floor(x)) + 1;
    auto H = ctx.store->get({K, need, true, 0});
    auto F = ctx.store->get({k1, need, false, 0});
    auto G = ctx.store->get({k2, need, false, 0});
    TripleContext tc{&F->forms[i1], &G->forms[i2], x, l};
    const auto grid = default_v_grid(K);
    DistReport r;
    try {
        r = dist_report(tc, *H, y, grid);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    auto params = ctx.base_params();
    params.insert(params.begin(), {{"k", std::to_string(K)}, {"x_exp", num(E)}, {"x", num(x)}, {"y", num(y)}, {"l", num(l)},
                                   {"f", std::to_string(k1) + ":" + std::to_string(i1)},
                                   {"g", std::to_string(k2) + ":" + std::to_string(i2)},
                                   {"v_grid", "sqrt(loglog k)*j/4,j=1..12"}, {"weighting", r.weighting}});
    Csv csv(*ctx.out, "dist", params, "item,key,value");
    for (size_t i = 0; i < r.samples.size(); ++i) csv.row(std::string("P"), static_cast<int>(i), r.samples[i]);
    if (x > 10)
        for (int i = 0; i < H->dim(); ++i) csv.row(std::string("chandee"), i, chandee_sum(tc, H->forms[i]));
    csv.row(std::string("stat"), std::string("mean"), r.mean);
    csv.row(std::string("stat"), std::string("variance"), r.variance);
    csv.row(std::string("stat"), std::string("natural_mean"), r.natural_mean);
    csv.row(std::string("stat"), std::string("natural_variance"), r.natural_variance);
    csv.row(std::string("stat"), std::string("predicted_variance"), r.predicted_variance);
    csv.row(std::string("stat"), std::string("predicted_variance_unsmoothed"), r.predicted_variance_raw);
    csv.row(std::string("stat"), std::string("sigma2_l2_loglog_k"), r.sigma2);
    csv.row(std::string("stat"), std::string("weight_sum"), r.weight_sum);
    csv.row(std::string("stat"), std::string("degenerate"), r.degenerate ? 1.0 : 0.0);
    for (const auto& [V, c] : r.tail_counts) csv.row(std::string("tail"), num(V), static_cast<double>(c));
    csv.row(std::string("window"), std::string("sum"), r.window_sum);
    csv.row(std::string("window"), std::string("reference"), r.window_reference);
    const PrimeSums psr = prime_sums_report(*tc.f, *tc.g, H->forms[0], x);
    for (size_t i = 0; i < psr.sums.size(); ++i) csv.row(std::string("prime_sum_h0"), prime_sum_labels()[i], psr.sums[i]);
    csv.row(std::string("prime_sum_h0"), std::string("logloglog_k"), psr.logloglog_k);
    csv.row(std::string("prime_sum_h0"), std::string("distinct"), psr.distinct ? 1.0 : 0.0);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Level-one cusp forms: Hecke eigenbases, decompositions, norms and moment statistics"};
    app.require_subcommand(1);
    app.fallthrough();
    Context ctx;
    std::string config_path, out_path;
    long precision = 0;
    app.add_option("--config", config_path, "JSON config; its values override flags (with a notice)");
    app.add_option("--precision", precision, "Working precision in bits (default 64 + 2k)");
    app.add_option("--residual-margin", ctx.cfg.residual_margin, "Extra coefficients checked after a decomposition");
    app.add_option("--prime-cutoff", ctx.cfg.prime_cutoff_P, "Euler product cutoff P for L(1, sym^2)");
    app.add_option("--cache-dir", ctx.cfg.cache_dir, "Cache directory (default $MFQ_CACHE_DIR)");
    app.add_flag("--no-cache", ctx.cfg.no_cache, "Do not read or write the cache");
    app.add_option("--threads", ctx.cfg.threads, "Worker threads (default: available cores)");
    app.add_option("-o,--out", out_path, "Write the report here instead of stdout");

    int k = 0, N = 0, max_mn = 0, L = 0, K = 0;
    int k1 = 12, i1 = 0, i2 = 0;
    double z0 = 0.0, l = 1.0, x_exp = 0.5, y_exp = 0.0, eps = 0.05;
    bool norms = false, lsym2 = false;
    std::string spec, p_list = "1", weights, mode = "squares";

    auto* basis = app.add_subcommand("basis", "Miller basis of S_k");
    basis->add_option("--weight", k, "Weight k")->required();
    basis->add_option("--trunc", N, "Truncation N");

    auto* eigen = app.add_subcommand("eigen", "Hecke eigenbasis of S_k");
    eigen->add_option("--weight", k, "Weight k")->required();
    eigen->add_option("--trunc", N, "Minimum truncation");
    eigen->add_flag("--norms", norms, "Attach quadrature Petersson norms");
    eigen->add_flag("--l-sym2", lsym2, "Attach L(1, sym^2 h)");

    auto* dec = app.add_subcommand("decompose", "Decompose a quadratic form of eigenforms");
    dec->add_option("--spec", spec, "JSON quadratic form spec")->required();
    dec->add_option("--p", p_list, "Comma-separated exponents");
    dec->add_option("--L", L, "Sparsity level for the certificate (0: skip)");
    dec->add_option("--z0", z0, "Admissibility threshold for |a|");

    auto* scan = app.add_subcommand("scan", "Max l^p norm over products or squares");
    scan->add_option("--weights", weights, "A:B:STEP or a comma list")->required();
    scan->add_option("--p", p_list, "Comma-separated exponents");
    scan->add_option("--mode", mode, "products or squares");

    auto* pc = app.add_subcommand("petersson-check", "Harmonic average of lambda(m) lambda(n)");
    pc->add_option("--weight", weights, "Weight, list or A:B:STEP")->required();
    pc->add_option("--max-mn", max_mn, "Largest mn (default k^2/10^4)");

    auto* mom = app.add_subcommand("moments", "Moments of the Watson surrogate");
    mom->add_option("--l", l, "Exponent l > 0")->required();
    mom->add_option("--weights", weights, "A:B:STEP or a comma list")->required();
    mom->add_option("--k1", k1, "Weight of f");
    mom->add_option("--i1", i1, "Index of f");
    mom->add_option("--i2", i2, "Index of g in H_{k-k1}");
    mom->add_option("--eps", eps, "epsilon in mu");

    auto* dist = app.add_subcommand("dist", "Distribution of P(h; x, x)");
    dist->add_option("--weight", K, "Weight k1 + k2")->required();
    dist->add_option("--x-exp", x_exp, "x = k^E");
    dist->add_option("--l", l, "Exponent l");
    dist->add_option("--k1", k1, "Weight of f");
    dist->add_option("--i1", i1, "Index of f");
    dist->add_option("--i2", i2, "Index of g");
    dist->add_option("--y-exp", y_exp, "Window start y = k^E' (default y = x)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (app.get_option("--precision")->count()) ctx.cfg.precision_bits = precision;
        if (!config_path.empty()) apply_config_file(config_path, ctx.cfg, app);
        ctx.init();
        std::ofstream file;
        if (!out_path.empty()) {
            file.open(out_path);
            if (!file) throw UsageError("cannot open " + out_path);
            ctx.out = &file;
        }
        const std::vector<double> ps = parse_doubles(p_list);
        if (*basis) cmd_basis(ctx, k, N);
        if (*eigen) cmd_eigen(ctx, k, N, norms, lsym2);
        if (*dec) cmd_decompose(ctx, spec, ps, L, z0);
        if (*scan) cmd_scan(ctx, weights, ps, mode);
        if (*pc) cmd_petersson(ctx, weights, max_mn);
        if (*mom) {
            MomentOptions o;
            o.k1 = k1;
            o.i1 = i1;
            o.i2 = i2;
            o.eps = eps;
            cmd_moments(ctx, l, weights, o);
        }
        if (*dist) cmd_dist(ctx, K, x_exp, l, k1, i1, i2, y_exp);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
