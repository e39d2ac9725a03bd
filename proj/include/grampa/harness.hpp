#pragma once

// Experiment runner: grid expansion, seeded repetitions, parallel execution and
// aggregation of result records into mean curves.

#include "grampa/generators.hpp"
#include "grampa/io.hpp"
#include "grampa/matchers.hpp"
#include "grampa/metrics.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <map>
#include <mutex>
#include <thread>
#include <tuple>

namespace grampa {

/// One (model, noise) point of a sweep.
struct GridPoint {
    std::string model;
    double x = 0.0;      // configured grid value (sigma, C or s)
    double sigma = 0.0;  // effective noise level
    double s = 1.0;      // subsampling keep probability
    double c_param = 0.0;
};

inline bool is_subsampled(const std::string& model) {
    return model == "er_sub" || model == "sbm_sub" || model == "powerlaw_sub";
}

/// Expected density of the two-block model with equal blocks.
inline double sbm_density(long n, double p_in, double p_out) {
    const double half = static_cast<double>(n) / 2.0;
    const double within = 2.0 * half * (half - 1.0) / 2.0;
    const double across = half * half;
    return (within * p_in + across * p_out) / (within + across);
}

/// Marginal edge density used for normalization.
inline double model_density(const ExperimentConfig& cfg, const std::string& model) {
    if (model == "sbm_sub") return cfg.p > 0.0 ? cfg.p : sbm_density(cfg.n, cfg.p_in, cfg.p_out);
    if (model == "wigner" || model == "wigner_er" || model == "bipartite") return 0.0;
    return cfg.p;
}

inline double sigma_from_grid(const ExperimentConfig& cfg, double x) {
    const double n = static_cast<double>(cfg.n);
    if (cfg.sigma_mode == "c_over_log_n") return x / std::log(n);
    if (cfg.sigma_mode == "c_n_quarter") return x * std::pow(n, -0.25);
    return x;
}

/// Stream of repetition `rep` at grid point `grid`; independent of the total rep count.
inline std::uint64_t repetition_stream(std::uint64_t master, std::uint64_t grid, std::uint64_t rep) {
    return hash_combine(hash_combine(master, grid), rep);
}

inline std::vector<GridPoint> expand_grid(const ExperimentConfig& cfg) {
    validate(cfg);
    std::vector<GridPoint> grid;
    for (const auto& model : cfg.model) {
        const double p = model_density(cfg, model);
        if (is_subsampled(model) && !cfg.s.empty()) {
            for (double s : cfg.s) {
                GridPoint g{model, s, std::sqrt((1.0 - s) / (1.0 - p)), s, 0.0};
                grid.push_back(g);
            }
            continue;
        }
        for (double x : cfg.sigma) {
            GridPoint g;
            g.model = model;
            g.x = x;
            g.sigma = sigma_from_grid(cfg, x);
            if (is_subsampled(model)) {
                g.s = 1.0 - g.sigma * g.sigma * (1.0 - p);
                if (!(g.s > p && g.s <= 1.0))
                    throw IoError("config: sigma " + format_real(g.sigma) + " gives s outside (p, 1]");
            }
            if ((model == "er") && g.sigma > 1.0)
                throw IoError("config: sigma must lie in [0, 1] for er");
            grid.push_back(g);
        }
    }
    // Power-law mothers need an attachment constant for density p / s.
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
        auto& g = grid[gi];
        if (g.model != "powerlaw_sub") continue;
        if (cfg.c_param > 0.0) {
            g.c_param = cfg.c_param;
            continue;
        }
        const double target = cfg.p / g.s;
        for (std::size_t prev = 0; prev < gi; ++prev) {
            if (grid[prev].model == "powerlaw_sub" && grid[prev].s == g.s) g.c_param = grid[prev].c_param;
        }
        if (g.c_param == 0.0)
            g.c_param = calibrate_powerlaw_c(static_cast<Index>(cfg.n), target,
                                             Seed{cfg.master_seed, 0xca11b7a7eULL});
    }
    return grid;
}

struct GeneratedInstance {
    CorrelatedPair pair;    // raw matrices (adjacency or weights)
    Matrix a_in, b_in;      // matrices handed to the matchers
    BipartitePair bipartite;
    bool is_bipartite = false;
};

inline GeneratedInstance generate_instance(const ExperimentConfig& cfg, const GridPoint& g, const Seed& seed) {
    const Index n = static_cast<Index>(cfg.n);
    GeneratedInstance inst;
    const double p = model_density(cfg, g.model);
    if (g.model == "wigner") {
        inst.pair = gen_wigner_pair(n, g.sigma, seed);
    } else if (g.model == "wigner_er") {
        // B = A + sqrt(2) sigma Z matches the per-entry noise variance 2 sigma^2 / n of the
        // normalized Erdos-Renyi model at the same sigma.
        inst.pair = gen_wigner_pair(n, std::sqrt(2.0) * g.sigma, seed);
        inst.pair.model = "wigner_er";
        inst.pair.params["sigma"] = g.sigma;
    } else if (g.model == "er") {
        inst.pair = gen_er_pair(n, p, g.sigma, seed);
    } else if (g.model == "er_sub") {
        inst.pair = gen_subsampled_pair(
            [n](double density, const Seed& s) { return gen_er_mother(n, density, s); }, p, g.s, seed);
    } else if (g.model == "sbm_sub") {
        const double p_in = cfg.p_in, p_out = cfg.p_out, s_keep = g.s;
        inst.pair = gen_subsampled_pair(
            [n, p_in, p_out, s_keep](double, const Seed& s) {
                return gen_sbm_mother(n, std::min(1.0, p_in / s_keep), std::min(1.0, p_out / s_keep), s);
            },
            p, g.s, seed);
    } else if (g.model == "powerlaw_sub") {
        const double c = g.c_param;
        inst.pair = gen_subsampled_pair(
            [n, c](double, const Seed& s) { return gen_powerlaw_mother(n, c, s); }, p, g.s, seed);
    } else if (g.model == "bipartite") {
        const Index m = static_cast<Index>(cfg.m == 0 ? cfg.n : cfg.m);
        inst.bipartite = gen_bipartite_pair(n, m, g.sigma, seed);
        inst.is_bipartite = true;
        return inst;
    } else {
        throw IoError("unknown model '" + g.model + "'");
    }
    inst.pair.model = g.model;
    if (p > 0.0) {
        inst.a_in = normalize_adjacency(inst.pair.a, p);
        inst.b_in = normalize_adjacency(inst.pair.b, p);
    } else {
        inst.a_in = inst.pair.a;
        inst.b_in = inst.pair.b;
    }
    return inst;
}

inline ExperimentRecord base_record(const ExperimentConfig& cfg, const GridPoint& g) {
    ExperimentRecord r;
    r.model = g.model;
    r.n = cfg.n;
    r.m = g.model == "bipartite" ? (cfg.m == 0 ? cfg.n : cfg.m) : cfg.n;
    r.p = model_density(cfg, g.model);
    r.sigma = g.sigma;
    r.s = g.s;
    r.eta = cfg.eta;
    r.gamma = cfg.gamma;
    r.rounding = cfg.rounding;
    return r;
}

/// Runs every method on one generated instance.
inline std::vector<ExperimentRecord> run_repetition(const ExperimentConfig& cfg, const GridPoint& g,
                                                    std::uint64_t grid_index, long rep) {
    const std::uint64_t stream = repetition_stream(cfg.master_seed, grid_index, static_cast<std::uint64_t>(rep));
    const GeneratedInstance inst = generate_instance(cfg, g, Seed{cfg.master_seed, stream});
    const Rounding rounding = parse_rounding(cfg.rounding);
    std::vector<ExperimentRecord> out;
    for (const auto& method : cfg.methods) {
        ExperimentRecord r = base_record(cfg, g);
        r.method = method;
        r.seed = stream;
        r.rep = rep;
        const auto start = std::chrono::steady_clock::now();
        if (inst.is_bipartite) {
            const auto& bp = inst.bipartite;
            const BipartiteMatch match = bi_grampa(bp.f, bp.g, cfg.eta);
            r.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
            const double nr = static_cast<double>(bp.f.rows());
            const double nc = static_cast<double>(bp.f.cols());
            r.frac_correct = (fraction_correct(match.rows, bp.row_truth) * nr +
                              fraction_correct(match.cols, bp.col_truth) * nc) / (nr + nc);
            r.exact = exact_recovery(match.rows, bp.row_truth) && exact_recovery(match.cols, bp.col_truth);
            r.common_edges = frobenius_inner(bp.f, permute_rect(bp.g, match.rows, match.cols));
            r.truth_common_edges = frobenius_inner(bp.f, permute_rect(bp.g, bp.row_truth, bp.col_truth));
        } else {
            const VertexMap est = match_vertices(parse_method(method), inst.a_in, inst.b_in, cfg.eta, rounding);
            r.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
            r.frac_correct = fraction_correct(est, inst.pair.truth);
            r.exact = r.frac_correct == 1.0;
            r.common_edges = common_edges(inst.pair.a, inst.pair.b, est);
            r.truth_common_edges = common_edges(inst.pair.a, inst.pair.b, inst.pair.truth);
        }
        if (!cfg.timing) r.runtime_ms = 0.0;
        out.push_back(std::move(r));
    }
    return out;
}

/// GRAMPA_THREADS if set and positive, else the hardware concurrency.
inline unsigned thread_count_from_env() {
    if (const char* env = std::getenv("GRAMPA_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1u : hw;
}

/// Rows are ordered by (rep, grid point, method) regardless of scheduling.
inline std::vector<ExperimentRecord> run_sweep(const ExperimentConfig& cfg, unsigned threads = 0) {
    const std::vector<GridPoint> grid = expand_grid(cfg);
    if (threads == 0) threads = thread_count_from_env();
    const std::size_t reps = static_cast<std::size_t>(cfg.reps);
    const std::size_t tasks = grid.size() * reps;
    std::vector<std::vector<ExperimentRecord>> results(tasks);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&]() {
        while (true) {
            const std::size_t task = next.fetch_add(1);
            if (task >= tasks) return;
            const std::size_t rep = task / grid.size();
            const std::size_t gi = task % grid.size();
            try {
                results[task] = run_repetition(cfg, grid[gi], gi, static_cast<long>(rep));
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(tasks);
            }
        }
    };
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(tasks, 1)));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);

    std::vector<ExperimentRecord> out;
    out.reserve(tasks * cfg.methods.size());
    for (auto& chunk : results)
        for (auto& r : chunk) out.push_back(std::move(r));
    return out;
}

// ---------------------------------------------------------------------------
// Aggregation

struct CurvePoint {
    std::string model;
    long n = 0;
    std::string method;
    double x = 0.0;
    double mean_frac_correct = 0.0;
    double exact_rate = 0.0;
    double stderr_frac_correct = 0.0;
    long count = 0;
};

/// x axis for aggregated curves: sigma itself or the constant C of sigma = C / log n
/// or sigma = C n^{-1/4}.
inline double curve_x(const ExperimentRecord& r, const std::string& x_mode) {
    const double n = static_cast<double>(r.n);
    if (x_mode == "c_over_log_n") return r.sigma * std::log(n);
    if (x_mode == "c_n_quarter") return r.sigma * std::pow(n, 0.25);
    if (x_mode == "s") return r.s;
    if (x_mode != "sigma") throw IoError("unknown x mode '" + x_mode + "'");
    return r.sigma;
}

inline double round_significant(double v, int digits) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, digits);
    double out = v;
    std::from_chars(buf, ptr, out);
    return out;
}

inline std::vector<CurvePoint> aggregate_curves(const std::vector<ExperimentRecord>& records,
                                                const std::string& x_mode = "sigma") {
    using Key = std::tuple<std::string, long, std::string, double>;
    struct Acc {
        double sum = 0.0, sum_sq = 0.0;
        long exact = 0, count = 0;
    };
    std::map<Key, Acc> groups;
    for (const auto& r : records) {
        // Recomputed C values differ in the last bits; group on 12 significant digits.
        const double x = round_significant(curve_x(r, x_mode), 12);
        auto& acc = groups[Key{r.model, r.n, r.method, x}];
        acc.sum += r.frac_correct;
        acc.sum_sq += r.frac_correct * r.frac_correct;
        acc.exact += r.exact ? 1 : 0;
        acc.count += 1;
    }
    std::vector<CurvePoint> out;
    for (const auto& [key, acc] : groups) {
        CurvePoint c;
        std::tie(c.model, c.n, c.method, c.x) = key;
        c.count = acc.count;
        c.mean_frac_correct = acc.sum / static_cast<double>(acc.count);
        c.exact_rate = static_cast<double>(acc.exact) / static_cast<double>(acc.count);
        if (acc.count > 1) {
            const double k = static_cast<double>(acc.count);
            const double var = std::max(0.0, (acc.sum_sq - k * c.mean_frac_correct * c.mean_frac_correct) / (k - 1.0));
            c.stderr_frac_correct = std::sqrt(var / k);
        }
        out.push_back(std::move(c));
    }
    return out;
}

inline constexpr std::string_view kCurveHeader = "model,n,method,x,mean_frac_correct,exact_rate,stderr_frac_correct,count";

inline void write_curves_csv(std::ostream& out, const std::vector<CurvePoint>& curves) {
    out << kCurveHeader << '\n';
    for (const auto& c : curves) {
        out << c.model << ',' << c.n << ',' << c.method << ',' << format_real(c.x) << ','
            << format_real(c.mean_frac_correct) << ',' << format_real(c.exact_rate) << ','
            << format_real(c.stderr_frac_correct) << ',' << c.count << '\n';
    }
}

}  // namespace grampa
