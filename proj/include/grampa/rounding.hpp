#pragma once

// Rounding a similarity matrix to a matching.

#include "grampa/core.hpp"

#include <limits>

namespace grampa {

struct Assignment {
    Permutation perm;
    double objective = 0.0;
};

/// sum_i X(i, p(i)), accumulated in row order.
inline double assignment_objective(const Matrix& x, const Permutation& p) {
    require(x.rows() == p.size() && x.cols() == p.size(), "assignment_objective: dimension mismatch");
    double total = 0.0;
    for (Index i = 0; i < p.size(); ++i) total += x(i, p(i));
    return total;
}

namespace detail {

// Minimum-cost perfect assignment on a dense square cost matrix by successive
// shortest augmenting paths with dual potentials (Jonker-Volgenant augmentation,
// Crouse's formulation). Column reduction seeds the duals and a partial
// matching of tight edges. Returns col4row.
inline std::vector<Index> solve_min_cost_assignment(const Matrix& cost) {
    const Index n = cost.rows();
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n, 0.0), v(n, 0.0);
    std::vector<Index> col4row(n, -1), row4col(n, -1);

    // Column reduction: v_j = min_i c_ij keeps reduced costs >= 0 with u = 0;
    // an edge (argmin row, j) is tight and may be matched directly.
    for (Index j = 0; j < n; ++j) {
        Index best = 0;
        double best_cost = cost(0, j);
        for (Index i = 1; i < n; ++i) {
            if (cost(i, j) < best_cost) {
                best_cost = cost(i, j);
                best = i;
            }
        }
        v[j] = best_cost;
        if (col4row[best] == -1) {
            col4row[best] = j;
            row4col[j] = best;
        }
    }

    std::vector<double> shortest(n);
    std::vector<Index> path(n), remaining(n);
    std::vector<char> scanned_row(n), scanned_col(n);

    for (Index cur = 0; cur < n; ++cur) {
        if (col4row[cur] != -1) continue;

        std::fill(shortest.begin(), shortest.end(), inf);
        std::fill(scanned_row.begin(), scanned_row.end(), 0);
        std::fill(scanned_col.begin(), scanned_col.end(), 0);
        for (Index j = 0; j < n; ++j) remaining[j] = n - 1 - j;
        Index num_remaining = n;

        double min_val = 0.0;
        Index sink = -1;
        Index i = cur;
        while (sink == -1) {
            scanned_row[i] = 1;
            Index index = -1;
            double lowest = inf;
            for (Index it = 0; it < num_remaining; ++it) {
                const Index j = remaining[it];
                const double r = min_val + cost(i, j) - u[i] - v[j];
                if (r < shortest[j]) {
                    path[j] = i;
                    shortest[j] = r;
                }
                if (shortest[j] < lowest || (shortest[j] == lowest && row4col[j] == -1)) {
                    lowest = shortest[j];
                    index = it;
                }
            }
            min_val = lowest;
            if (index == -1 || min_val == inf)
                throw std::runtime_error("round_lap: assignment problem is infeasible");
            const Index j = remaining[index];
            if (row4col[j] == -1) sink = j;
            else i = row4col[j];
            scanned_col[j] = 1;
            remaining[index] = remaining[--num_remaining];
        }

        u[cur] += min_val;
        for (Index r = 0; r < n; ++r)
            if (scanned_row[r] && r != cur) u[r] += min_val - shortest[col4row[r]];
        for (Index c = 0; c < n; ++c)
            if (scanned_col[c]) v[c] -= min_val - shortest[c];

        Index j = sink;
        while (true) {
            const Index r = path[j];
            row4col[j] = r;
            std::swap(col4row[r], j);
            if (r == cur) break;
        }
    }
    return col4row;
}

}  // namespace detail

/// Exact maximizer of sum_i X(i, p(i)) over all permutations.
inline Assignment round_lap(const Matrix& x) {
    require_square(x, "round_lap");
    require_finite(x, "round_lap");
    const Matrix cost = -x;
    Assignment out;
    out.perm = Permutation(detail::solve_min_cost_assignment(cost));
    out.objective = assignment_objective(x, out.perm);
    return out;
}

/// Row-wise argmax, ties to the smallest column index.
inline VertexMap round_greedy(const Matrix& x) {
    require_square(x, "round_greedy");
    require_finite(x, "round_greedy");
    VertexMap out;
    out.map.resize(static_cast<std::size_t>(x.rows()));
    for (Index i = 0; i < x.rows(); ++i) {
        Index best = 0;
        for (Index j = 1; j < x.cols(); ++j)
            if (x(i, j) > x(i, best)) best = j;
        out.map[static_cast<std::size_t>(i)] = best;
    }
    return out;
}

inline constexpr Index kBruteForceMaxSize = 9;

/// Exhaustive search over S_n; the lexicographically smallest optimum wins ties.
inline Assignment round_bruteforce(const Matrix& x) {
    require_square(x, "round_bruteforce");
    require(x.rows() <= kBruteForceMaxSize, "round_bruteforce: n > 9");
    const Index n = x.rows();
    std::vector<Index> cand(static_cast<std::size_t>(n));
    std::iota(cand.begin(), cand.end(), Index{0});
    std::vector<Index> best = cand;
    double best_value = -std::numeric_limits<double>::infinity();
    do {
        double value = 0.0;
        for (Index i = 0; i < n; ++i) value += x(i, cand[static_cast<std::size_t>(i)]);
        if (value > best_value) {
            best_value = value;
            best = cand;
        }
    } while (std::next_permutation(cand.begin(), cand.end()));
    return {Permutation(std::move(best)), best_value};
}

}  // namespace grampa
