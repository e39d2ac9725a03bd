#pragma once

// Eigendecompositions and the pairwise eigen-alignment similarity matrix.

#include "grampa/core.hpp"

#ifdef GRAMPA_HAVE_LAPACKE
#include <lapacke.h>
#endif

#include <limits>
#include <stdexcept>
#include <utility>

namespace grampa {

/// values sorted descending; column k of vectors pairs with values[k].
struct SpectralDecomposition {
    Vector values;
    Matrix vectors;

    Index size() const { return values.size(); }
};

namespace detail {

inline void sort_descending(Vector& values, Matrix& vectors) {
    // Backends return ascending order; reverse in place.
    const Index n = values.size();
    for (Index k = 0; k < n / 2; ++k) {
        std::swap(values[k], values[n - 1 - k]);
        vectors.col(k).swap(vectors.col(n - 1 - k));
    }
}

}  // namespace detail

/// Symmetric eigendecomposition A = sum_k values[k] u_k u_k^T.
inline SpectralDecomposition eig_sym(const Matrix& a) {
    require_symmetric(a, "eig_sym");
    const Index n = a.rows();
    SpectralDecomposition out;
#ifdef GRAMPA_HAVE_LAPACKE
    out.vectors = a;
    out.values.resize(n);
    const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', static_cast<lapack_int>(n),
                                           out.vectors.data(), static_cast<lapack_int>(n),
                                           out.values.data());
    if (info != 0) throw std::runtime_error("eig_sym: eigensolver did not converge");
#else
    Eigen::SelfAdjointEigenSolver<Matrix> solver(a);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("eig_sym: eigensolver did not converge");
    out.values = solver.eigenvalues();
    out.vectors = solver.eigenvectors();
#endif
    detail::sort_descending(out.values, out.vectors);
    return out;
}

/// Singular values (descending) and left singular vectors of an n x m matrix, n <= m.
inline SpectralDecomposition svd_left(const Matrix& f) {
    require(f.rows() >= 1 && f.cols() >= f.rows(), "svd_left: need 1 <= rows <= cols");
    require_finite(f, "svd_left");
    const Index n = f.rows();
    const Index m = f.cols();
    SpectralDecomposition out;
#ifdef GRAMPA_HAVE_LAPACKE
    Matrix work = f;
    out.values.resize(n);
    out.vectors.resize(n, n);
    Matrix vt(n, m);
    const lapack_int info = LAPACKE_dgesdd(
        LAPACK_COL_MAJOR, 'S', static_cast<lapack_int>(n), static_cast<lapack_int>(m),
        work.data(), static_cast<lapack_int>(n), out.values.data(), out.vectors.data(),
        static_cast<lapack_int>(n), vt.data(), static_cast<lapack_int>(n));
    if (info != 0) throw std::runtime_error("svd_left: SVD did not converge");
#else
    Eigen::BDCSVD<Matrix> svd(f, Eigen::ComputeThinU);
    out.values = svd.singularValues();
    out.vectors = svd.matrixU();
#endif
    return out;
}

/// Cauchy kernel w(x, y) = 1 / ((x - y)^2 + eta^2).
inline double cauchy_weight(double x, double y, double eta) {
    require(eta > 0.0 && std::isfinite(eta), "cauchy_weight: eta must be positive");
    const double d = x - y;
    return 1.0 / (d * d + eta * eta);
}

/// X = sum_ij weight(l_i, m_j) u_i u_i^T J v_j v_j^T, assembled as U M V^T with
/// M(i,j) = weight(l_i, m_j) (u_i . 1)(v_j . 1).
template <class Weight>
Matrix assemble_similarity(const SpectralDecomposition& da, const SpectralDecomposition& db,
                           Weight&& weight) {
    require(da.size() == db.size(), "assemble_similarity: dimension mismatch");
    const Index n = da.size();
    const Vector ua = da.vectors.colwise().sum().transpose();
    const Vector vb = db.vectors.colwise().sum().transpose();
    Matrix core(n, n);
    for (Index j = 0; j < n; ++j) {
        for (Index i = 0; i < n; ++i) {
            const double w = weight(da.values[i], db.values[j]);
            if (!std::isfinite(w))
                throw std::invalid_argument("assemble_similarity: non-finite weight");
            core(i, j) = w * ua[i] * vb[j];
        }
    }
    Matrix left = da.vectors * core;
    return left * db.vectors.transpose();
}

template <class Weight>
Matrix build_similarity_generic(const Matrix& a, const Matrix& b, Weight&& weight) {
    require_same_shape(a, b, "build_similarity_generic");
    return assemble_similarity(eig_sym(a), eig_sym(b), std::forward<Weight>(weight));
}

inline Matrix build_similarity(const Matrix& a, const Matrix& b, double eta) {
    require(eta > 0.0 && std::isfinite(eta), "build_similarity: eta must be positive");
    require_same_shape(a, b, "build_similarity");
    const double eta2 = eta * eta;
    return build_similarity_generic(a, b, [eta2](double x, double y) {
        const double d = x - y;
        return 1.0 / (d * d + eta2);
    });
}

/// Similarity from precomputed decompositions with the Cauchy kernel.
inline Matrix build_similarity(const SpectralDecomposition& da, const SpectralDecomposition& db,
                               double eta) {
    require(eta > 0.0 && std::isfinite(eta), "build_similarity: eta must be positive");
    const double eta2 = eta * eta;
    return assemble_similarity(da, db, [eta2](double x, double y) {
        const double d = x - y;
        return 1.0 / (d * d + eta2);
    });
}

struct DominanceResult {
    bool dominant = false;
    // min_i X(i, truth(i)) - max_{j != truth(i)} X(i, j)
    double margin = 0.0;
};

inline DominanceResult diag_dominance(const Matrix& x, const Permutation& truth) {
    require_square(x, "diag_dominance");
    require(x.rows() == truth.size(), "diag_dominance: dimension mismatch");
    const Index n = x.rows();
    double min_matched = std::numeric_limits<double>::infinity();
    double max_other = -std::numeric_limits<double>::infinity();
    for (Index i = 0; i < n; ++i) {
        const Index t = truth(i);
        min_matched = std::min(min_matched, x(i, t));
        for (Index j = 0; j < n; ++j)
            if (j != t) max_other = std::max(max_other, x(i, j));
    }
    DominanceResult r;
    r.margin = min_matched - max_other;
    r.dominant = min_matched > max_other;
    return r;
}

/// Empirical signal-to-noise ratio Tr(X) / ||X||_F.
inline double snr_diagnostic(const Matrix& x) {
    require_square(x, "snr_diagnostic");
    const double norm = x.norm();
    require(norm > 0.0, "snr_diagnostic: zero matrix");
    return x.trace() / norm;
}

}  // namespace grampa
