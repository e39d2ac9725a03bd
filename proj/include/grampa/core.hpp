#pragma once

// Shared domain types: dense matrices, permutations and vertex maps.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace grampa {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

inline void require(bool condition, const std::string& message) {
    if (!condition) throw std::invalid_argument(message);
}

inline bool all_finite(const Matrix& m) { return m.allFinite(); }

inline void require_square(const Matrix& m, const char* what) {
    require(m.rows() == m.cols(), std::string(what) + ": matrix must be square");
    require(m.rows() >= 1, std::string(what) + ": matrix must be non-empty");
}

inline void require_finite(const Matrix& m, const char* what) {
    require(m.allFinite(), std::string(what) + ": matrix has non-finite entries");
}

/// Largest |m(i,j) - m(j,i)| relative to max(1, max|m(i,j)|).
inline double asymmetry(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    return (m - m.transpose()).cwiseAbs().maxCoeff() / scale;
}

inline void require_symmetric(const Matrix& m, const char* what, double tol = 1e-10) {
    require_square(m, what);
    require_finite(m, what);
    require(asymmetry(m) <= tol, std::string(what) + ": matrix is not symmetric");
}

inline void require_same_shape(const Matrix& a, const Matrix& b, const char* what) {
    require(a.rows() == b.rows() && a.cols() == b.cols(),
            std::string(what) + ": dimension mismatch");
}

/// A bijection on {0, ..., n-1}; map()[i] is the image of i.
class Permutation {
public:
    Permutation() = default;

    explicit Permutation(std::vector<Index> map) : map_(std::move(map)) {
        std::vector<char> seen(map_.size(), 0);
        for (Index v : map_) {
            require(v >= 0 && static_cast<std::size_t>(v) < map_.size(),
                    "Permutation: value out of range");
            require(!seen[static_cast<std::size_t>(v)], "Permutation: repeated value");
            seen[static_cast<std::size_t>(v)] = 1;
        }
    }

    static Permutation identity(Index n) {
        std::vector<Index> m(static_cast<std::size_t>(n));
        std::iota(m.begin(), m.end(), Index{0});
        return Permutation(std::move(m));
    }

    Index size() const { return static_cast<Index>(map_.size()); }
    Index operator()(Index i) const { return map_[static_cast<std::size_t>(i)]; }
    const std::vector<Index>& map() const { return map_; }

    bool is_identity() const {
        for (std::size_t i = 0; i < map_.size(); ++i)
            if (map_[i] != static_cast<Index>(i)) return false;
        return true;
    }

    friend bool operator==(const Permutation&, const Permutation&) = default;

private:
    std::vector<Index> map_;
};

/// A map {0..n-1} -> {0..n-1} that need not be injective (greedy rounding output).
struct VertexMap {
    std::vector<Index> map;

    Index size() const { return static_cast<Index>(map.size()); }
    Index operator()(Index i) const { return map[static_cast<std::size_t>(i)]; }
    bool is_bijection() const {
        std::vector<char> seen(map.size(), 0);
        for (Index v : map) {
            if (v < 0 || static_cast<std::size_t>(v) >= map.size() || seen[v]) return false;
            seen[static_cast<std::size_t>(v)] = 1;
        }
        return true;
    }
    friend bool operator==(const VertexMap&, const VertexMap&) = default;
};

/// (p o q)(i) = p(q(i)).
inline Permutation compose(const Permutation& p, const Permutation& q) {
    require(p.size() == q.size(), "compose: length mismatch");
    std::vector<Index> out(q.map().size());
    for (Index i = 0; i < q.size(); ++i) out[static_cast<std::size_t>(i)] = p(q(i));
    return Permutation(std::move(out));
}

inline Permutation invert(const Permutation& p) {
    std::vector<Index> out(p.map().size());
    for (Index i = 0; i < p.size(); ++i) out[static_cast<std::size_t>(p(i))] = i;
    return Permutation(std::move(out));
}

/// Returns B^p with B^p(i,j) = B(p(i), p(j)).
inline Matrix permute_graph(const Matrix& b, const Permutation& p) {
    require_square(b, "permute_graph");
    require(b.rows() == p.size(), "permute_graph: dimension mismatch");
    const Index n = b.rows();
    Matrix out(n, n);
    for (Index j = 0; j < n; ++j)
        for (Index i = 0; i < n; ++i) out(i, j) = b(p(i), p(j));
    return out;
}

/// G^{rows,cols}(i,j) = G(rows(i), cols(j)) for a rectangular matrix.
inline Matrix permute_rect(const Matrix& g, const Permutation& rows, const Permutation& cols) {
    require(g.rows() == rows.size() && g.cols() == cols.size(), "permute_rect: dimension mismatch");
    Matrix out(g.rows(), g.cols());
    for (Index j = 0; j < g.cols(); ++j)
        for (Index i = 0; i < g.rows(); ++i) out(i, j) = g(rows(i), cols(j));
    return out;
}

/// <A, B> = sum_ij A(i,j) B(i,j).
inline double frobenius_inner(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b, "frobenius_inner");
    return a.cwiseProduct(b).sum();
}

}  // namespace grampa
