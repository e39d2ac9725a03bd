#pragma once

#include "grampa/core.hpp"

#include <vector>

namespace grampa {

inline double fraction_correct(const Permutation& est, const Permutation& truth) {
    require(est.size() == truth.size(), "fraction_correct: length mismatch");
    require(est.size() >= 1, "fraction_correct: empty permutation");
    Index hits = 0;
    for (Index i = 0; i < est.size(); ++i) hits += est(i) == truth(i) ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(est.size());
}

inline bool exact_recovery(const Permutation& est, const Permutation& truth) {
    return fraction_correct(est, truth) == 1.0;
}

/// Fraction of vertices mapped to their planted partner; est may be non-injective.
inline double fraction_correct(const VertexMap& est, const Permutation& truth) {
    require(est.size() == truth.size(), "fraction_correct: length mismatch");
    require(est.size() >= 1, "fraction_correct: empty map");
    Index hits = 0;
    for (Index i = 0; i < est.size(); ++i) hits += est(i) == truth(i) ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(est.size());
}

inline double common_edges(const Matrix& a, const Matrix& b, const VertexMap& est) {
    require_same_shape(a, b, "common_edges");
    require(a.rows() == est.size(), "common_edges: dimension mismatch");
    double total = 0.0;
    for (Index j = 0; j < a.rows(); ++j)
        for (Index i = 0; i < a.rows(); ++i) total += a(i, j) * b(est(i), est(j));
    return total / 2.0;
}

/// <A, B^est> / 2: the number of common edges for unweighted graphs.
inline double common_edges(const Matrix& a, const Matrix& b, const Permutation& est) {
    require_same_shape(a, b, "common_edges");
    require_square(a, "common_edges");
    require(a.rows() == est.size(), "common_edges: dimension mismatch");
    const Index n = a.rows();
    double total = 0.0;
    for (Index j = 0; j < n; ++j)
        for (Index i = 0; i < n; ++i) total += a(i, j) * b(est(i), est(j));
    return total / 2.0;
}

/// Mean of exact-recovery indicators.
inline double recovery_rate(const std::vector<bool>& records) {
    require(!records.empty(), "recovery_rate: no records");
    std::size_t hits = 0;
    for (bool r : records) hits += r ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(records.size());
}

}  // namespace grampa
