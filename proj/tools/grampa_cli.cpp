// grampa: generate correlated graph pairs, match graph files, run sweeps and
// aggregate their results.

#include "grampa/harness.hpp"
#include "selftest.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>

namespace {

using namespace grampa;

struct LoadedGraph {
    Matrix m;
    std::vector<std::string> labels;
    bool dense = false;
};

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path + "'");
    return out;
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    for (const auto& item : detail::split_char(text, ','))
        out.push_back(detail::parse_double(item, "--eta-grid"));
    return out;
}

// ---------------------------------------------------------------------------
// generate

struct GenerateArgs {
    std::string model = "wigner";
    long n = 200;
    long m = 0;
    double p = 0.5;
    double sigma = 0.0;
    double s = 0.0;
    double p_in = 0.0;
    double p_out = 0.0;
    double c_param = 0.0;
    std::uint64_t seed = 1;
    std::string prefix = "pair";
};

int cmd_generate(const GenerateArgs& args) {
    ExperimentConfig cfg;
    cfg.model = {args.model};
    cfg.n = args.n;
    cfg.m = args.m;
    cfg.p = args.model == "wigner" || args.model == "wigner_er" || args.model == "bipartite" ? 0.0 : args.p;
    cfg.sigma = {args.sigma};
    if (args.s > 0.0) cfg.s = {args.s};
    cfg.p_in = args.p_in;
    cfg.p_out = args.p_out;
    cfg.c_param = args.c_param;
    cfg.master_seed = args.seed;
    cfg.methods = {args.model == "bipartite" ? "bigrampa" : "grampa"};
    const GridPoint g = expand_grid(cfg).front();
    const GeneratedInstance inst = generate_instance(cfg, g, Seed{args.seed, 0});

    auto out_a = open_out(args.prefix + "_A.txt");
    auto out_b = open_out(args.prefix + "_B.txt");
    if (inst.is_bipartite) {
        write_dense_matrix(out_a, inst.bipartite.f);
        write_dense_matrix(out_b, inst.bipartite.g);
        auto rows = open_out(args.prefix + "_truth.txt");
        write_permutation(rows, inst.bipartite.row_truth);
        auto cols = open_out(args.prefix + "_truth_cols.txt");
        write_permutation(cols, inst.bipartite.col_truth);
    } else {
        if (cfg.p > 0.0) {
            const auto labels = one_based_labels(inst.pair.a.rows());
            write_edge_list(out_a, inst.pair.a, labels);
            write_edge_list(out_b, inst.pair.b, labels);
        } else {
            write_dense_matrix(out_a, inst.pair.a);
            write_dense_matrix(out_b, inst.pair.b);
        }
        auto truth = open_out(args.prefix + "_truth.txt");
        write_permutation(truth, inst.pair.truth);
    }
    std::cout << "wrote " << args.prefix << "_A.txt, " << args.prefix << "_B.txt and truth files"
              << " (sigma = " << format_real(g.sigma) << ")\n";
    return 0;
}

// ---------------------------------------------------------------------------
// match

struct MatchArgs {
    std::string a_path;
    std::string b_path;
    std::optional<double> eta;
    std::string eta_grid;
    std::string method = "grampa";
    std::string rounding = "lap";
    std::string out_path;
    std::string truth_path;
};

Matrix load_dense(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    return read_dense_matrix(in, path);
}

int match_bipartite(const MatchArgs& args, const Matrix& f, const Matrix& g, double eta) {
    const BipartiteMatch match = bi_grampa(f, g, eta);
    std::ofstream file;
    if (!args.out_path.empty()) file = open_out(args.out_path);
    std::ostream& out = args.out_path.empty() ? std::cout : file;
    for (Index i = 0; i < match.rows.size(); ++i) out << "row " << (i + 1) << ' ' << (match.rows(i) + 1) << '\n';
    for (Index j = 0; j < match.cols.size(); ++j) out << "col " << (j + 1) << ' ' << (match.cols(j) + 1) << '\n';
    std::cout << "# objective " << format_real(frobenius_inner(f, permute_rect(g, match.rows, match.cols)))
              << " self_objective " << format_real(f.squaredNorm()) << '\n';
    return 0;
}

int cmd_match(const MatchArgs& args) {
    const bool dense_a = is_dense_file(args.a_path);
    const bool dense_b = is_dense_file(args.b_path);
    if (dense_a != dense_b) throw IoError("match: both inputs must be dense matrices or both edge lists");

    Matrix a, b;
    std::vector<std::string> labels;
    if (dense_a) {
        a = load_dense(args.a_path);
        b = load_dense(args.b_path);
        if (a.rows() != a.cols() || b.rows() != b.cols())
            return match_bipartite(args, a, b, args.eta.value_or(0.2));
        require_same_shape(a, b, "match");
        labels = one_based_labels(a.rows());
    } else {
        const EdgeList g1 = load_edge_list(args.a_path);
        const EdgeList g2 = load_edge_list(args.b_path);
        AlignedGraphs aligned = align_common_vertices(g1, g2);
        a = std::move(aligned.a);
        b = std::move(aligned.b);
        labels = std::move(aligned.labels);
        std::cerr << "# aligned " << labels.size() << " common vertices\n";
    }
    // Unnormalized real networks use a wider bandwidth by default.
    const double eta = args.eta.value_or(dense_a ? 0.2 : 1.0);
    const Method method = parse_method(args.method);
    const Rounding rounding = parse_rounding(args.rounding);

    VertexMap est;
    double chosen_eta = eta;
    if (!args.eta_grid.empty()) {
        if (method != Method::Grampa || rounding != Rounding::Lap)
            throw IoError("match: --eta-grid needs --method grampa --rounding lap");
        EtaSelection sel = grampa_select_eta(a, b, parse_list(args.eta_grid));
        chosen_eta = sel.eta;
        est = to_vertex_map(sel.perm);
    } else {
        est = match_vertices(method, a, b, eta, rounding);
    }

    std::ofstream file;
    if (!args.out_path.empty()) file = open_out(args.out_path);
    std::ostream& out = args.out_path.empty() ? std::cout : file;
    for (Index i = 0; i < est.size(); ++i) out << labels[i] << ' ' << labels[est(i)] << '\n';
    out.flush();

    const VertexMap self = to_vertex_map(Permutation::identity(a.rows()));
    std::cout << "# eta " << format_real(chosen_eta) << " objective " << format_real(qap_objective(a, b, est))
              << " self_objective " << format_real(qap_objective(a, a, self)) << " common_edges "
              << format_real(common_edges(a, b, est)) << '\n';

    if (!args.truth_path.empty()) {
        std::ifstream in(args.truth_path);
        if (!in) throw IoError("cannot open '" + args.truth_path + "'");
        const Permutation truth = read_permutation(in, args.truth_path);
        // Truth files use 1-based vertex labels; compare on the aligned labels.
        std::map<std::string, Index> position;
        for (std::size_t k = 0; k < labels.size(); ++k) position.emplace(labels[k], static_cast<Index>(k));
        Index hits = 0, total = 0;
        for (Index i = 0; i < truth.size(); ++i) {
            const auto pa = position.find(std::to_string(i + 1));
            const auto pb = position.find(std::to_string(truth(i) + 1));
            if (pa == position.end() || pb == position.end()) continue;
            ++total;
            hits += est(pa->second) == pb->second ? 1 : 0;
        }
        if (total == 0) throw IoError("match: truth file shares no vertices with the inputs");
        std::cout << "# frac_correct " << format_real(static_cast<double>(hits) / static_cast<double>(total))
                  << " over " << total << " vertices\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------
// sweep / plotdata

struct SweepOverrides {
    std::optional<long> n, reps;
    std::optional<std::uint64_t> master_seed;
    std::optional<double> eta;
    std::optional<std::string> rounding, methods;
    std::optional<bool> timing;
};

int cmd_sweep(const std::string& config_path, const std::string& out_path, const SweepOverrides& o) {
    ExperimentConfig cfg = load_config(config_path);
    if (o.n) cfg.n = *o.n;
    if (o.reps) cfg.reps = *o.reps;
    if (o.master_seed) cfg.master_seed = *o.master_seed;
    if (o.eta) cfg.eta = *o.eta;
    if (o.rounding) cfg.rounding = *o.rounding;
    if (o.timing) cfg.timing = *o.timing;
    if (o.methods) {
        cfg.methods.clear();
        for (const auto& m : detail::split_char(*o.methods, ',')) cfg.methods.emplace_back(detail::trim(m));
    }
    const auto records = run_sweep(cfg);
    if (out_path.empty()) {
        write_records_csv(std::cout, records);
    } else {
        write_records_csv(records, out_path);
        std::cerr << "# wrote " << records.size() << " records to " << out_path << '\n';
    }
    return 0;
}

int cmd_plotdata(const std::string& csv_path, const std::string& out_path, const std::string& x_mode) {
    std::ifstream in(csv_path);
    if (!in) throw IoError("cannot open '" + csv_path + "'");
    const auto records = read_records_csv(in, csv_path);
    const auto curves = aggregate_curves(records, x_mode);
    auto out = open_out(out_path);
    write_curves_csv(out, curves);
    out.flush();
    if (!out) throw IoError("write failed for '" + out_path + "'");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral graph matching with pairwise eigenvector alignment"};
    app.require_subcommand(1);

    GenerateArgs gen;
    auto* generate = app.add_subcommand("generate", "Sample a correlated pair and its planted matching");
    generate->add_option("--model", gen.model, "wigner|wigner_er|er|er_sub|sbm_sub|powerlaw_sub|bipartite")
        ->capture_default_str();
    generate->add_option("--n", gen.n, "Number of vertices (rows for bipartite)")->capture_default_str();
    generate->add_option("--m", gen.m, "Bipartite column count (0 means n)");
    generate->add_option("--p", gen.p, "Edge density")->capture_default_str();
    generate->add_option("--sigma", gen.sigma, "Noise level")->capture_default_str();
    generate->add_option("--s", gen.s, "Subsampling keep probability (overrides --sigma)");
    generate->add_option("--p-in", gen.p_in, "SBM within-block density");
    generate->add_option("--p-out", gen.p_out, "SBM across-block density");
    generate->add_option("--c-param", gen.c_param, "Power-law attachment constant (0 calibrates)");
    generate->add_option("--seed", gen.seed, "Master seed")->capture_default_str();
    generate->add_option("--out-prefix", gen.prefix, "Output file prefix")->capture_default_str();

    MatchArgs match;
    double eta_flag = 0.0;
    auto* matchc = app.add_subcommand("match", "Match two graph files");
    matchc->add_option("--a", match.a_path, "First graph (edge list or dense matrix)")->required();
    matchc->add_option("--b", match.b_path, "Second graph")->required();
    auto* eta_opt = matchc->add_option("--eta", eta_flag, "Kernel bandwidth (default 1 for edge lists, 0.2 for dense)");
    matchc->add_option("--eta-grid", match.eta_grid, "Comma-separated bandwidths; keep the best objective");
    matchc->add_option("--method", match.method, "grampa|umeyama|topeig|degree")->capture_default_str();
    matchc->add_option("--rounding", match.rounding, "lap|greedy")->capture_default_str();
    matchc->add_option("--out", match.out_path, "Write the matching here instead of stdout");
    matchc->add_option("--truth", match.truth_path, "Planted permutation file to score against");

    std::string config_path, sweep_out;
    SweepOverrides overrides;
    auto* sweep = app.add_subcommand("sweep", "Run a configured experiment sweep");
    sweep->add_option("config", config_path, "Config file")->required();
    sweep->add_option("--out", sweep_out, "CSV output path (default stdout)");
    long n_flag = 0, reps_flag = 0;
    std::uint64_t seed_flag = 0;
    double sweep_eta = 0.0;
    std::string rounding_flag, methods_flag;
    bool timing_flag = false;
    auto* o_n = sweep->add_option("--n", n_flag, "Override n");
    auto* o_reps = sweep->add_option("--reps", reps_flag, "Override reps");
    auto* o_seed = sweep->add_option("--master-seed", seed_flag, "Override master_seed");
    auto* o_eta = sweep->add_option("--eta", sweep_eta, "Override eta");
    auto* o_round = sweep->add_option("--rounding", rounding_flag, "Override rounding");
    auto* o_methods = sweep->add_option("--methods", methods_flag, "Override methods");
    auto* o_timing = sweep->add_flag("--timing", timing_flag, "Record wall-clock runtimes");

    std::string csv_path, plot_out, x_mode = "sigma";
    auto* plot = app.add_subcommand("plotdata", "Aggregate sweep CSV into mean curves");
    plot->add_option("csv", csv_path, "Sweep CSV")->required();
    plot->add_option("out", plot_out, "Output table")->required();
    plot->add_option("--x", x_mode, "sigma|c_over_log_n|c_n_quarter|s")->capture_default_str();

    auto* selftest = app.add_subcommand("selftest", "Run the invariant checks");

    CLI11_PARSE(app, argc, argv);

    try {
        if (generate->parsed()) return cmd_generate(gen);
        if (matchc->parsed()) {
            if (eta_opt->count() > 0) match.eta = eta_flag;
            return cmd_match(match);
        }
        if (sweep->parsed()) {
            if (o_n->count()) overrides.n = n_flag;
            if (o_reps->count()) overrides.reps = reps_flag;
            if (o_seed->count()) overrides.master_seed = seed_flag;
            if (o_eta->count()) overrides.eta = sweep_eta;
            if (o_round->count()) overrides.rounding = rounding_flag;
            if (o_methods->count()) overrides.methods = methods_flag;
            if (o_timing->count()) overrides.timing = timing_flag;
            return cmd_sweep(config_path, sweep_out, overrides);
        }
        if (plot->parsed()) return cmd_plotdata(csv_path, plot_out, x_mode);
        if (selftest->parsed()) return grampa::tools::run_selftest(std::cout) ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
