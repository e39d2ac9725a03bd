#pragma once

// Ridge-regularized QP view of the similarity matrix: gradient descent,
// closed-form iterates and population solutions.

#include "grampa/core.hpp"
#include "grampa/spectral.hpp"

#include <cmath>

namespace grampa {

struct GdConfig {
    double gamma = 0.0;  // step size
    double eta = 0.2;    // ridge bandwidth
    long max_iters = 0;
    double tol = 1e-8;   // relative Frobenius change between iterates
};

/// Spectral norm of a symmetric matrix by power iteration on A^2.
inline double spectral_norm_estimate(const Matrix& a, int iters = 300) {
    require_square(a, "spectral_norm_estimate");
    const Index n = a.rows();
    Vector x(n);
    for (Index i = 0; i < n; ++i) x[i] = 1.0 + 0.01 * static_cast<double>(i % 7);
    x.normalize();
    double estimate = 0.0;
    for (int k = 0; k < iters; ++k) {
        Vector y = a * (a * x);
        const double norm = y.norm();
        if (norm == 0.0) return 0.0;
        const double next = std::sqrt(norm);
        x = y / norm;
        if (std::abs(next - estimate) <= 1e-12 * next) {
            estimate = next;
            break;
        }
        estimate = next;
    }
    return estimate;
}

/// gamma = 0.9 / (eta^2 + (||A|| + ||B||)^2), max_iters = 10 ceil(log n / (gamma eta^2)).
inline GdConfig default_gd_config(const Matrix& a, const Matrix& b, double eta) {
    require(eta > 0.0, "default_gd_config: eta must be positive");
    GdConfig cfg;
    cfg.eta = eta;
    const double spread = spectral_norm_estimate(a) + spectral_norm_estimate(b);
    cfg.gamma = 0.9 / (eta * eta + spread * spread);
    const double n = static_cast<double>(a.rows());
    const double horizon = std::log(std::max(n, 2.0)) / (cfg.gamma * eta * eta);
    cfg.max_iters = 10 * static_cast<long>(std::ceil(horizon));
    return cfg;
}

inline void validate(const GdConfig& cfg) {
    require(cfg.gamma > 0.0 && std::isfinite(cfg.gamma), "GdConfig: gamma must be positive");
    require(cfg.eta > 0.0 && std::isfinite(cfg.eta), "GdConfig: eta must be positive");
    require(cfg.max_iters >= 1, "GdConfig: max_iters must be positive");
    require(cfg.tol > 0.0, "GdConfig: tol must be positive");
}

namespace detail {

// Gradient of 1/2 ||AX - XB||^2 + eta^2/2 ||X||^2 - 1'X1 with A^2, B^2 precomputed.
inline Matrix qp_gradient(const Matrix& x, const Matrix& a, const Matrix& b, const Matrix& a2,
                          const Matrix& b2, double eta) {
    Matrix g = a2 * x;
    g.noalias() += x * b2;
    const Matrix ax = a * x;
    g.noalias() -= 2.0 * (ax * b);
    g += (eta * eta) * x;
    g.array() -= 1.0;
    return g;
}

}  // namespace detail

/// Objective 1/2 ||AX - XB||_F^2 + eta^2/2 ||X||_F^2 - 1'X1.
inline double qp_objective(const Matrix& x, const Matrix& a, const Matrix& b, double eta) {
    const double fit = (a * x - x * b).squaredNorm();
    return 0.5 * fit + 0.5 * eta * eta * x.squaredNorm() - x.sum();
}

/// A^2 X + X B^2 - 2 A X B + eta^2 X - J; zero exactly at the QP minimizer.
inline Matrix stationarity_residual(const Matrix& x, const Matrix& a, const Matrix& b, double eta) {
    require_same_shape(a, b, "stationarity_residual");
    require_same_shape(a, x, "stationarity_residual");
    return detail::qp_gradient(x, a, b, a * a, b * b, eta);
}

/// X <- X - gamma (A^2 X + X B^2 - 2 A X B + eta^2 X - J).
inline Matrix gd_step(const Matrix& x, const Matrix& a, const Matrix& b, const GdConfig& cfg) {
    require_square(a, "gd_step");
    require_same_shape(a, b, "gd_step");
    require_same_shape(a, x, "gd_step");
    return x - cfg.gamma * detail::qp_gradient(x, a, b, a * a, b * b, cfg.eta);
}

struct GdResult {
    Matrix x;
    long iters = 0;
    bool converged = false;
};

/// Gradient descent from X = 0 until relative change <= tol or max_iters.
inline GdResult gd_solve(const Matrix& a, const Matrix& b, const GdConfig& cfg) {
    validate(cfg);
    require_square(a, "gd_solve");
    require_same_shape(a, b, "gd_solve");
    const Index n = a.rows();
    const Matrix a2 = a * a;
    const Matrix b2 = b * b;
    // ||X^*||_F <= ||J||_F / eta^2; anything ten times larger is divergence.
    const double blowup = 10.0 * static_cast<double>(n) / (cfg.eta * cfg.eta);

    GdResult out;
    out.x = Matrix::Zero(n, n);
    for (long t = 0; t < cfg.max_iters; ++t) {
        Matrix step = cfg.gamma * detail::qp_gradient(out.x, a, b, a2, b2, cfg.eta);
        out.x -= step;
        out.iters = t + 1;
        const double norm = out.x.norm();
        if (!std::isfinite(norm) || norm > blowup)
            throw std::runtime_error("gd_solve: iterates diverged (reduce gamma)");
        if (step.norm() <= cfg.tol * norm) {
            out.converged = true;
            break;
        }
    }
    return out;
}

/// X^(t) = sum_ij (1 - [1 - gamma eta^2 - gamma d_ij^2]^t) / (eta^2 + d_ij^2) u_i u_i' J v_j v_j'.
inline Matrix closed_form_iterate(const SpectralDecomposition& da, const SpectralDecomposition& db,
                                  const GdConfig& cfg, long t) {
    require(t >= 0, "closed_form_iterate: t must be non-negative");
    const double g = cfg.gamma;
    const double eta2 = cfg.eta * cfg.eta;
    const double tt = static_cast<double>(t);
    return assemble_similarity(da, db, [g, eta2, tt](double l, double m) {
        const double d2 = (l - m) * (l - m);
        return (1.0 - std::pow(1.0 - g * eta2 - g * d2, tt)) / (eta2 + d2);
    });
}

inline Matrix closed_form_iterate(const Matrix& a, const Matrix& b, const GdConfig& cfg, long t) {
    require_same_shape(a, b, "closed_form_iterate");
    return closed_form_iterate(eig_sym(a), eig_sym(b), cfg, t);
}

/// eps = 2 / (2 + (n+1) sigma^2); population matrix eps I + (1 - eps) J / n.
inline double population_solution_birkhoff(long n, double sigma) {
    require(n >= 1, "population_solution_birkhoff: n must be positive");
    require(sigma >= 0.0, "population_solution_birkhoff: sigma must be non-negative");
    return 2.0 / (2.0 + (static_cast<double>(n) + 1.0) * sigma * sigma);
}

inline Matrix population_matrix_birkhoff(long n, double sigma) {
    const double eps = population_solution_birkhoff(n, sigma);
    const double nn = static_cast<double>(n);
    Matrix out = Matrix::Constant(n, n, (1.0 - eps) / nn);
    out.diagonal().array() += eps;
    return out;
}

struct PopulationSolution {
    double alpha = 0.0;
    double beta = 0.0;
};

/// Population minimizer alpha I + beta J of the ridge-regularized program.
inline PopulationSolution population_solution_regularized(long n, double sigma, double eta) {
    require(n >= 1, "population_solution_regularized: n must be positive");
    require(sigma >= 0.0 && eta >= 0.0, "population_solution_regularized: negative parameter");
    const double nn = static_cast<double>(n);
    const double s2 = sigma * sigma;
    const double e2 = eta * eta;
    const double first = nn * (e2 + s2) + s2;
    const double second = nn * (e2 + s2 + 2.0) + s2;
    if (first == 0.0) throw std::domain_error("population_solution_regularized: sigma = eta = 0");
    return {2.0 * nn * nn / (first * second), nn / second};
}

}  // namespace grampa
