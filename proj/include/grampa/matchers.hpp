#pragma once

// End-to-end matching pipelines: GRAMPA, Bi-GRAMPA and spectral baselines.

#include "grampa/core.hpp"
#include "grampa/rounding.hpp"
#include "grampa/spectral.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

namespace grampa {

inline void require_matchable(const Matrix& a, const Matrix& b, const char* what) {
    require_symmetric(a, what);
    require_symmetric(b, what);
    require_same_shape(a, b, what);
}

/// Round the pairwise eigen-alignment similarity with the Cauchy kernel by LAP.
inline Permutation grampa(const Matrix& a, const Matrix& b, double eta) {
    require_matchable(a, b, "grampa");
    return round_lap(build_similarity(a, b, eta)).perm;
}

struct EtaSelection {
    Permutation perm;
    double eta = 0.0;
};

/// <A, B^p>; the graph matching (QAP) objective.
inline double qap_objective(const Matrix& a, const Matrix& b, const Permutation& p) {
    return frobenius_inner(a, permute_graph(b, p));
}

/// GRAMPA over several bandwidths; keeps the matching with the smallest ||A - B^p||_F,
/// the first bandwidth winning ties.
inline EtaSelection grampa_select_eta(const Matrix& a, const Matrix& b, const std::vector<double>& etas) {
    require_matchable(a, b, "grampa_select_eta");
    require(!etas.empty(), "grampa_select_eta: empty bandwidth grid");
    const auto da = eig_sym(a);
    const auto db = eig_sym(b);
    EtaSelection best{Permutation::identity(a.rows()), etas.front()};
    double best_score = -std::numeric_limits<double>::infinity();
    for (double eta : etas) {
        Permutation p = round_lap(build_similarity(da, db, eta)).perm;
        // ||A - B^p||^2 = ||A||^2 + ||B||^2 - 2 <A, B^p>.
        const double score = qap_objective(a, b, p);
        if (score > best_score) {
            best_score = score;
            best = {std::move(p), eta};
        }
    }
    return best;
}

/// Rows of G relabeled: G^{p, id}(i, j) = G(p(i), j).
inline Matrix permute_rows(const Matrix& g, const Permutation& p) {
    require(g.rows() == p.size(), "permute_rows: dimension mismatch");
    Matrix out(g.rows(), g.cols());
    for (Index i = 0; i < g.rows(); ++i) out.row(i) = g.row(p(i));
    return out;
}

/// Column permutation maximizing sum_j (F' G^{p1, id})_{j, pi(j)}.
inline Permutation lap_stage2(const Matrix& f, const Matrix& g, const Permutation& p1) {
    require_same_shape(f, g, "lap_stage2");
    require(f.rows() == p1.size(), "lap_stage2: row permutation has wrong length");
    const Matrix scores = f.transpose() * permute_rows(g, p1);
    return round_lap(scores).perm;
}

struct BipartiteMatch {
    Permutation rows;
    Permutation cols;
};

/// Similarity over left singular pairs for the rows, then a second LAP for the columns.
inline BipartiteMatch bi_grampa(const Matrix& f, const Matrix& g, double eta) {
    require_same_shape(f, g, "bi_grampa");
    require(f.rows() <= f.cols(), "bi_grampa: need n <= m");
    const Matrix x = build_similarity(svd_left(f), svd_left(g), eta);
    BipartiteMatch out;
    out.rows = round_lap(x).perm;
    out.cols = lap_stage2(f, g, out.rows);
    return out;
}

/// Entrywise absolute eigenvector alignment sum_i |u_i| |v_i|^T.
inline Matrix umeyama_similarity(const SpectralDecomposition& da, const SpectralDecomposition& db) {
    require(da.size() == db.size(), "umeyama_similarity: dimension mismatch");
    return da.vectors.cwiseAbs() * db.vectors.cwiseAbs().transpose();
}

inline Permutation umeyama(const Matrix& a, const Matrix& b) {
    require_matchable(a, b, "umeyama");
    return round_lap(umeyama_similarity(eig_sym(a), eig_sym(b))).perm;
}

/// Rank-one u_1 v_1^T rounded by LAP for both signs of v_1; keeps the larger <A, B^p>.
inline Permutation top_eigenvector(const Matrix& a, const Matrix& b) {
    require_matchable(a, b, "top_eigenvector");
    const Vector u = eig_sym(a).vectors.col(0);
    const Vector v = eig_sym(b).vectors.col(0);
    const Matrix x = u * v.transpose();
    Permutation plus = round_lap(x).perm;
    Permutation minus = round_lap(-x).perm;
    return qap_objective(a, b, minus) > qap_objective(a, b, plus) ? minus : plus;
}

/// Orders of a = A1 and b = B1 matched rank by rank; ties broken by vertex index.
inline Permutation degree_sort(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b, "degree_sort");
    require_square(a, "degree_sort");
    const Vector da = a.rowwise().sum();
    const Vector db = b.rowwise().sum();
    const Index n = a.rows();
    auto order = [n](const Vector& d) {
        std::vector<Index> idx(static_cast<std::size_t>(n));
        std::iota(idx.begin(), idx.end(), Index{0});
        std::stable_sort(idx.begin(), idx.end(), [&d](Index x, Index y) { return d[x] > d[y]; });
        return idx;
    };
    const auto oa = order(da);
    const auto ob = order(db);
    std::vector<Index> map(static_cast<std::size_t>(n));
    for (std::size_t r = 0; r < oa.size(); ++r) map[static_cast<std::size_t>(oa[r])] = ob[r];
    return Permutation(std::move(map));
}

enum class Method { Grampa, Umeyama, TopEigenvector, DegreeSort };
enum class Rounding { Lap, Greedy };

inline std::string_view to_string(Method m) {
    switch (m) {
        case Method::Grampa: return "grampa";
        case Method::Umeyama: return "umeyama";
        case Method::TopEigenvector: return "topeig";
        case Method::DegreeSort: return "degree";
    }
    return "unknown";
}

inline std::string_view to_string(Rounding r) { return r == Rounding::Lap ? "lap" : "greedy"; }

inline Method parse_method(std::string_view s) {
    if (s == "grampa") return Method::Grampa;
    if (s == "umeyama") return Method::Umeyama;
    if (s == "topeig") return Method::TopEigenvector;
    if (s == "degree") return Method::DegreeSort;
    throw std::invalid_argument("unknown method '" + std::string(s) + "'");
}

inline Rounding parse_rounding(std::string_view s) {
    if (s == "lap") return Rounding::Lap;
    if (s == "greedy") return Rounding::Greedy;
    throw std::invalid_argument("unknown rounding '" + std::string(s) + "'");
}

/// <A, B^map> for a possibly non-injective vertex map.
inline double qap_objective(const Matrix& a, const Matrix& b, const VertexMap& map) {
    require(a.rows() == map.size(), "qap_objective: dimension mismatch");
    double total = 0.0;
    for (Index j = 0; j < a.cols(); ++j)
        for (Index i = 0; i < a.rows(); ++i) total += a(i, j) * b(map(i), map(j));
    return total;
}

inline VertexMap to_vertex_map(const Permutation& p) { return VertexMap{p.map()}; }

/// Runs `method` with the requested rounding. Degree sorting ignores `rounding`.
inline VertexMap match_vertices(Method method, const Matrix& a, const Matrix& b, double eta,
                                Rounding rounding) {
    if (rounding == Rounding::Lap) {
        switch (method) {
            case Method::Grampa: return to_vertex_map(grampa(a, b, eta));
            case Method::Umeyama: return to_vertex_map(umeyama(a, b));
            case Method::TopEigenvector: return to_vertex_map(top_eigenvector(a, b));
            case Method::DegreeSort: return to_vertex_map(degree_sort(a, b));
        }
    }
    require_matchable(a, b, "match_vertices");
    switch (method) {
        case Method::Grampa: return round_greedy(build_similarity(a, b, eta));
        case Method::Umeyama: return round_greedy(umeyama_similarity(eig_sym(a), eig_sym(b)));
        case Method::TopEigenvector: {
            const Vector u = eig_sym(a).vectors.col(0);
            const Vector v = eig_sym(b).vectors.col(0);
            const Matrix x = u * v.transpose();
            VertexMap plus = round_greedy(x);
            VertexMap minus = round_greedy(-x);
            return qap_objective(a, b, minus) > qap_objective(a, b, plus) ? minus : plus;
        }
        case Method::DegreeSort: return to_vertex_map(degree_sort(a, b));
    }
    throw std::invalid_argument("match_vertices: unknown method");
}

}  // namespace grampa
