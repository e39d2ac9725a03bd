#pragma once

// Edge-list ingestion, dense matrix files, experiment configs and result CSVs.

#include "grampa/core.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace grampa {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

inline std::vector<std::string> split_ws(std::string_view line) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        if (i >= line.size()) break;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        out.emplace_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

inline std::vector<std::string> split_char(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.emplace_back(s.substr(start, pos == std::string_view::npos ? s.npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

inline bool parse_int(std::string_view s, long long& out) {
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc() && ptr == end && !s.empty();
}

inline double parse_double(std::string_view s, const std::string& context) {
    s = trim(s);
    double value = 0.0;
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, value);
    if (ec != std::errc() || ptr != end || s.empty())
        throw IoError(context + ": cannot parse number '" + std::string(s) + "'");
    return value;
}

inline std::uint64_t parse_u64(std::string_view s, const std::string& context) {
    s = trim(s);
    std::uint64_t value = 0;
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, value);
    if (ec != std::errc() || ptr != end || s.empty())
        throw IoError(context + ": cannot parse integer '" + std::string(s) + "'");
    return value;
}

}  // namespace detail

/// Integers compare numerically and sort before other labels, which compare as strings.
inline bool label_less(const std::string& x, const std::string& y) {
    long long ix = 0, iy = 0;
    const bool nx = detail::parse_int(x, ix);
    const bool ny = detail::parse_int(y, iy);
    if (nx && ny) return ix < iy;
    if (nx != ny) return nx;
    return x < y;
}

/// Locale-independent shortest-round-trip-safe formatting (17 significant digits).
inline std::string format_real(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, ptr);
}

struct EdgeList {
    std::vector<std::string> labels;  // first-appearance order
    std::vector<std::pair<std::size_t, std::size_t>> edges;  // label indices, first < second, sorted
    std::size_t self_loops_dropped = 0;
    std::size_t duplicates_dropped = 0;

    std::size_t num_vertices() const { return labels.size(); }
    std::size_t num_edges() const { return edges.size(); }
};

/// One edge per line as two whitespace-separated labels; '#' starts a comment.
inline EdgeList parse_edge_list(std::istream& in, const std::string& source = "<stream>") {
    EdgeList out;
    std::unordered_map<std::string, std::size_t> index;
    std::set<std::pair<std::size_t, std::size_t>> seen;
    auto id = [&](const std::string& label) {
        auto [it, inserted] = index.emplace(label, out.labels.size());
        if (inserted) out.labels.push_back(label);
        return it->second;
    };
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view(line);
        if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
        const auto tokens = detail::split_ws(view);
        if (tokens.empty()) continue;
        if (tokens.size() != 2)
            throw IoError(source + ":" + std::to_string(line_no) + ": expected two labels per line");
        const std::size_t u = id(tokens[0]);
        const std::size_t v = id(tokens[1]);
        if (u == v) {
            ++out.self_loops_dropped;
            continue;
        }
        const auto key = std::minmax(u, v);
        if (!seen.insert(key).second) ++out.duplicates_dropped;
    }
    out.edges.assign(seen.begin(), seen.end());
    return out;
}

inline EdgeList load_edge_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open edge list '" + path + "'");
    return parse_edge_list(in, path);
}

/// Both graphs restricted to the sorted common label set, as 0/1 symmetric matrices.
struct AlignedGraphs {
    Matrix a;
    Matrix b;
    std::vector<std::string> labels;
};

namespace detail {

inline Matrix restricted_adjacency(const EdgeList& g,
                                   const std::unordered_map<std::string, Index>& position) {
    const Index n = static_cast<Index>(position.size());
    Matrix adj = Matrix::Zero(n, n);
    for (const auto& [u, v] : g.edges) {
        const auto iu = position.find(g.labels[u]);
        const auto iv = position.find(g.labels[v]);
        if (iu == position.end() || iv == position.end()) continue;
        adj(iu->second, iv->second) = adj(iv->second, iu->second) = 1.0;
    }
    return adj;
}

}  // namespace detail

inline AlignedGraphs align_common_vertices(const EdgeList& g1, const EdgeList& g2) {
    std::set<std::string> second(g2.labels.begin(), g2.labels.end());
    AlignedGraphs out;
    for (const auto& label : g1.labels)
        if (second.count(label)) out.labels.push_back(label);
    if (out.labels.empty()) throw IoError("align_common_vertices: no common vertices");
    std::sort(out.labels.begin(), out.labels.end(), label_less);
    std::unordered_map<std::string, Index> position;
    for (std::size_t i = 0; i < out.labels.size(); ++i) position.emplace(out.labels[i], static_cast<Index>(i));
    out.a = detail::restricted_adjacency(g1, position);
    out.b = detail::restricted_adjacency(g2, position);
    return out;
}

/// Edge list of a 0/1 (or weighted, treated as nonzero) symmetric matrix with the given labels.
inline void write_edge_list(std::ostream& out, const Matrix& adj, const std::vector<std::string>& labels) {
    require_square(adj, "write_edge_list");
    require(static_cast<Index>(labels.size()) == adj.rows(), "write_edge_list: label count mismatch");
    for (Index i = 0; i < adj.rows(); ++i)
        for (Index j = i + 1; j < adj.cols(); ++j)
            if (adj(i, j) != 0.0) out << labels[i] << ' ' << labels[j] << '\n';
}

inline std::vector<std::string> one_based_labels(Index n) {
    std::vector<std::string> labels(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) labels[i] = std::to_string(i + 1);
    return labels;
}

/// Dense matrix text format: a "dense <rows> <cols>" header then one row per line.
inline void write_dense_matrix(std::ostream& out, const Matrix& m) {
    out << "dense " << m.rows() << ' ' << m.cols() << '\n';
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            if (j) out << ' ';
            out << format_real(m(i, j));
        }
        out << '\n';
    }
}

inline Matrix read_dense_matrix(std::istream& in, const std::string& source = "<stream>") {
    std::string line;
    std::size_t line_no = 0;
    Index rows = -1, cols = -1;
    Matrix m;
    Index filled = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view(line);
        if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
        const auto tokens = detail::split_ws(view);
        if (tokens.empty()) continue;
        const std::string where = source + ":" + std::to_string(line_no);
        if (rows < 0) {
            if (tokens.size() != 3 || tokens[0] != "dense") throw IoError(where + ": expected 'dense <rows> <cols>'");
            rows = static_cast<Index>(detail::parse_u64(tokens[1], where));
            cols = static_cast<Index>(detail::parse_u64(tokens[2], where));
            m.resize(rows, cols);
            continue;
        }
        if (filled >= rows) throw IoError(where + ": too many rows");
        if (static_cast<Index>(tokens.size()) != cols) throw IoError(where + ": wrong number of columns");
        for (Index j = 0; j < cols; ++j) m(filled, j) = detail::parse_double(tokens[j], where);
        ++filled;
    }
    if (rows < 0 || filled != rows) throw IoError(source + ": truncated dense matrix");
    return m;
}

/// A graph file is either a dense matrix (first token "dense") or an edge list.
inline bool is_dense_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::string line;
    while (std::getline(in, line)) {
        const auto view = detail::trim(std::string_view(line).substr(0, line.find('#')));
        if (view.empty()) continue;
        return view.substr(0, 5) == "dense";
    }
    return false;
}

/// Permutation file: one "i j" pair per line with 1-based indices.
inline void write_permutation(std::ostream& out, const Permutation& p) {
    for (Index i = 0; i < p.size(); ++i) out << (i + 1) << ' ' << (p(i) + 1) << '\n';
}

inline Permutation read_permutation(std::istream& in, const std::string& source = "<stream>") {
    std::vector<std::pair<long long, long long>> pairs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto tokens = detail::split_ws(std::string_view(line).substr(0, line.find('#')));
        if (tokens.empty()) continue;
        long long i = 0, j = 0;
        if (tokens.size() != 2 || !detail::parse_int(tokens[0], i) || !detail::parse_int(tokens[1], j))
            throw IoError(source + ":" + std::to_string(line_no) + ": expected 'i j'");
        pairs.emplace_back(i, j);
    }
    std::vector<Index> map(pairs.size(), -1);
    for (const auto& [i, j] : pairs) {
        if (i < 1 || i > static_cast<long long>(pairs.size())) throw IoError(source + ": index out of range");
        map[static_cast<std::size_t>(i - 1)] = static_cast<Index>(j - 1);
    }
    try {
        return Permutation(std::move(map));
    } catch (const std::invalid_argument& e) {
        throw IoError(source + ": not a permutation (" + e.what() + ")");
    }
}

// ---------------------------------------------------------------------------
// Experiment configuration

/// Flat key = value file; '#' comments; list values are comma separated.
struct ExperimentConfig {
    std::vector<std::string> model{"wigner"};
    long n = 200;
    long m = 0;  // bipartite column count; 0 means n
    double p = 0.0;
    std::vector<double> sigma{0.0};
    std::string sigma_mode = "direct";  // direct | c_over_log_n | c_n_quarter
    std::vector<double> s;  // explicit subsampling grid; overrides sigma for *_sub models
    double p_in = 0.0;
    double p_out = 0.0;
    double c_param = 0.0;  // power-law attachment constant; 0 means calibrate to density
    double eta = 0.2;
    double gamma = 0.0;
    std::vector<std::string> methods{"grampa"};
    long reps = 10;
    std::uint64_t master_seed = 1;
    std::string rounding = "lap";
    bool timing = false;
};

inline const std::vector<std::string>& known_models() {
    static const std::vector<std::string> models{"wigner", "wigner_er", "er", "er_sub",
                                                 "sbm_sub", "powerlaw_sub", "bipartite"};
    return models;
}

inline void validate(const ExperimentConfig& cfg) {
    auto fail = [](const std::string& msg) { throw IoError("config: " + msg); };
    if (cfg.model.empty()) fail("model must be set");
    for (const auto& model : cfg.model)
        if (std::find(known_models().begin(), known_models().end(), model) == known_models().end())
            fail("unknown model '" + model + "'");
    if (cfg.n < 1) fail("n must be positive");
    if (cfg.reps < 1) fail("reps must be >= 1");
    if (!(cfg.eta > 0.0)) fail("eta must be positive");
    if (cfg.gamma < 0.0) fail("gamma must be non-negative");
    if (cfg.methods.empty()) fail("methods must be non-empty");
    if (cfg.rounding != "lap" && cfg.rounding != "greedy") fail("rounding must be lap or greedy");
    if (cfg.sigma_mode != "direct" && cfg.sigma_mode != "c_over_log_n" && cfg.sigma_mode != "c_n_quarter")
        fail("sigma_mode must be direct, c_over_log_n or c_n_quarter");
    if (cfg.sigma.empty() && cfg.s.empty()) fail("sigma grid must be non-empty");
    for (double v : cfg.sigma)
        if (!(v >= 0.0)) fail("sigma values must be non-negative");
    for (const auto& model : cfg.model) {
        const bool sub = model.size() > 4 && model.substr(model.size() - 4) == "_sub";
        if (model == "er" || model == "er_sub" || model == "powerlaw_sub")
            if (!(cfg.p > 0.0 && cfg.p < 1.0)) fail("p must lie in (0, 1) for model " + model);
        if (model == "sbm_sub") {
            if (cfg.n % 2 != 0) fail("sbm_sub needs even n");
            if (!(cfg.p_in >= 0.0 && cfg.p_in <= 1.0 && cfg.p_out >= 0.0 && cfg.p_out <= 1.0))
                fail("p_in and p_out must lie in [0, 1]");
            if (cfg.p_in + cfg.p_out <= 0.0) fail("sbm_sub needs p_in + p_out > 0");
        }
        if (model == "bipartite" && cfg.m != 0 && cfg.m < cfg.n) fail("bipartite needs m >= n");
        if (!sub && !cfg.s.empty()) fail("s grid only applies to subsampled models");
        if (model == "er" || sub) {
            for (double v : cfg.sigma)
                if (cfg.sigma_mode == "direct" && v > 1.0) fail("sigma must lie in [0, 1] for " + model);
        }
        for (double sv : cfg.s)
            if (!(sv > cfg.p && sv <= 1.0)) fail("s values must lie in (p, 1]");
        for (const auto& method : cfg.methods) {
            const bool bip_method = method == "bigrampa";
            if ((model == "bipartite") != bip_method)
                fail("method '" + method + "' does not apply to model " + model);
            if (!bip_method && method != "grampa" && method != "umeyama" && method != "topeig" &&
                method != "degree")
                fail("unknown method '" + method + "'");
        }
    }
}

inline ExperimentConfig parse_config(std::istream& in, const std::string& source = "<config>") {
    ExperimentConfig cfg;
    std::string line;
    std::size_t line_no = 0;
    auto reals = [](std::string_view v, const std::string& where) {
        std::vector<double> out;
        for (const auto& item : detail::split_char(v, ',')) out.push_back(detail::parse_double(item, where));
        return out;
    };
    auto tags = [](std::string_view v) {
        std::vector<std::string> out;
        for (const auto& item : detail::split_char(v, ',')) {
            const auto t = detail::trim(item);
            if (!t.empty()) out.emplace_back(t);
        }
        return out;
    };
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view(line);
        if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
        view = detail::trim(view);
        if (view.empty()) continue;
        const std::string where = source + ":" + std::to_string(line_no);
        const auto eq = view.find('=');
        if (eq == std::string_view::npos) throw IoError(where + ": expected key = value");
        const std::string key(detail::trim(view.substr(0, eq)));
        const std::string_view value = detail::trim(view.substr(eq + 1));
        if (key == "model") cfg.model = tags(value);
        else if (key == "n") cfg.n = static_cast<long>(detail::parse_u64(value, where));
        else if (key == "m") cfg.m = static_cast<long>(detail::parse_u64(value, where));
        else if (key == "p") cfg.p = detail::parse_double(value, where);
        else if (key == "sigma") cfg.sigma = reals(value, where);
        else if (key == "sigma_mode") cfg.sigma_mode = std::string(value);
        else if (key == "s") cfg.s = reals(value, where);
        else if (key == "p_in") cfg.p_in = detail::parse_double(value, where);
        else if (key == "p_out") cfg.p_out = detail::parse_double(value, where);
        else if (key == "c_param") cfg.c_param = detail::parse_double(value, where);
        else if (key == "eta") cfg.eta = detail::parse_double(value, where);
        else if (key == "gamma") cfg.gamma = detail::parse_double(value, where);
        else if (key == "methods") cfg.methods = tags(value);
        else if (key == "reps") cfg.reps = static_cast<long>(detail::parse_u64(value, where));
        else if (key == "master_seed") cfg.master_seed = detail::parse_u64(value, where);
        else if (key == "rounding") cfg.rounding = std::string(value);
        else if (key == "timing") {
            if (value == "true" || value == "1") cfg.timing = true;
            else if (value == "false" || value == "0") cfg.timing = false;
            else throw IoError(where + ": timing must be true or false");
        } else throw IoError(where + ": unknown key '" + key + "'");
    }
    return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config '" + path + "'");
    return parse_config(in, path);
}

// ---------------------------------------------------------------------------
// Result records

struct ExperimentRecord {
    std::string model;
    long n = 0;
    long m = 0;
    double p = 0.0;
    double sigma = 0.0;
    double s = 1.0;
    double eta = 0.0;
    double gamma = 0.0;
    std::string rounding;
    std::string method;
    std::uint64_t seed = 0;
    long rep = 0;
    double frac_correct = 0.0;
    bool exact = false;
    double common_edges = 0.0;
    double truth_common_edges = 0.0;
    double runtime_ms = 0.0;

    friend bool operator==(const ExperimentRecord&, const ExperimentRecord&) = default;
};

inline constexpr std::string_view kRecordHeader =
    "model,n,m,p,sigma,s,eta,gamma,rounding,method,seed,rep,frac_correct,exact,common_edges,"
    "truth_common_edges,runtime_ms";

inline void write_records_csv(std::ostream& out, const std::vector<ExperimentRecord>& records) {
    out << kRecordHeader << '\n';
    for (const auto& r : records) {
        out << r.model << ',' << r.n << ',' << r.m << ',' << format_real(r.p) << ','
            << format_real(r.sigma) << ',' << format_real(r.s) << ',' << format_real(r.eta) << ','
            << format_real(r.gamma) << ',' << r.rounding << ',' << r.method << ',' << r.seed << ','
            << r.rep << ',' << format_real(r.frac_correct) << ',' << (r.exact ? 1 : 0) << ','
            << format_real(r.common_edges) << ',' << format_real(r.truth_common_edges) << ','
            << format_real(r.runtime_ms) << '\n';
    }
}

inline void write_records_csv(const std::vector<ExperimentRecord>& records, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path + "'");
    write_records_csv(out, records);
    out.flush();
    if (!out) throw IoError("write failed for '" + path + "'");
}

inline std::vector<ExperimentRecord> read_records_csv(std::istream& in, const std::string& source = "<csv>") {
    std::vector<ExperimentRecord> out;
    std::string line;
    if (!std::getline(in, line)) return out;
    if (detail::trim(line) != kRecordHeader) throw IoError(source + ": unexpected CSV header");
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        const std::string where = source + ":" + std::to_string(line_no);
        const auto f = detail::split_char(detail::trim(line), ',');
        if (f.size() != 17) throw IoError(where + ": expected 17 fields");
        ExperimentRecord r;
        r.model = f[0];
        r.n = static_cast<long>(detail::parse_u64(f[1], where));
        r.m = static_cast<long>(detail::parse_u64(f[2], where));
        r.p = detail::parse_double(f[3], where);
        r.sigma = detail::parse_double(f[4], where);
        r.s = detail::parse_double(f[5], where);
        r.eta = detail::parse_double(f[6], where);
        r.gamma = detail::parse_double(f[7], where);
        r.rounding = f[8];
        r.method = f[9];
        r.seed = detail::parse_u64(f[10], where);
        r.rep = static_cast<long>(detail::parse_u64(f[11], where));
        r.frac_correct = detail::parse_double(f[12], where);
        if (f[13] != "0" && f[13] != "1") throw IoError(where + ": exact must be 0 or 1");
        r.exact = f[13] == "1";
        r.common_edges = detail::parse_double(f[14], where);
        r.truth_common_edges = detail::parse_double(f[15], where);
        r.runtime_ms = detail::parse_double(f[16], where);
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace grampa
