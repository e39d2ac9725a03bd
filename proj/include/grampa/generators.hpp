#pragma once

// Seeded samplers for correlated random graph pairs.

#include "grampa/core.hpp"
#include "grampa/rng.hpp"

#include <cmath>
#include <map>
#include <optional>
#include <string>

namespace grampa {

/// A, B and the planted matching with permute_graph(B, truth) ~ A.
struct CorrelatedPair {
    Matrix a;
    Matrix b;
    Permutation truth;
    std::string model;
    std::map<std::string, double> params;
};

/// F, G with G(rows(i), cols(j)) = F(i,j) + sigma W(i,j).
struct BipartitePair {
    Matrix f;
    Matrix g;
    Permutation row_truth;
    Permutation col_truth;
};

namespace detail {

// Stream tags for the independent pieces of one sample.
enum : std::uint64_t { kTagA = 1, kTagNoise = 2, kTagTruth = 3, kTagMother = 4, kTagThinB = 5 };

inline Permutation truth_or_random(const std::optional<Permutation>& truth, Index n, const Seed& seed) {
    if (truth) {
        require(truth->size() == n, "generator: truth permutation has wrong length");
        return *truth;
    }
    Rng rng(seed.child(kTagTruth));
    return random_permutation(n, rng);
}

// B with B(truth(i), truth(j)) = c(i, j).
inline Matrix relabel_by_truth(const Matrix& c, const Permutation& truth) {
    return permute_graph(c, invert(truth));
}

}  // namespace detail

/// GOE(n): off-diagonal N(0, 1/n), diagonal N(0, 2/n).
inline Matrix gen_goe(Index n, const Seed& seed) {
    require(n >= 1, "gen_goe: n must be positive");
    Rng rng(seed);
    const double nn = static_cast<double>(n);
    const double off = std::sqrt(1.0 / nn);
    const double diag = std::sqrt(2.0 / nn);
    Matrix a(n, n);
    for (Index i = 0; i < n; ++i) {
        a(i, i) = rng.normal(diag);
        for (Index j = i + 1; j < n; ++j) {
            a(i, j) = rng.normal(off);
            a(j, i) = a(i, j);
        }
    }
    return a;
}

/// Gaussian Wigner pair: B^{truth} = A + sigma Z with A, Z independent GOE(n).
inline CorrelatedPair gen_wigner_pair(Index n, double sigma, const Seed& seed,
                                      std::optional<Permutation> truth = std::nullopt) {
    require(sigma >= 0.0 && std::isfinite(sigma), "gen_wigner_pair: sigma must be non-negative");
    CorrelatedPair pair;
    pair.model = "wigner";
    pair.truth = detail::truth_or_random(truth, n, seed);
    pair.a = gen_goe(n, seed.child(detail::kTagA));
    Matrix c = pair.a;
    if (sigma > 0.0) c += sigma * gen_goe(n, seed.child(detail::kTagNoise));
    pair.b = detail::relabel_by_truth(c, pair.truth);
    pair.params = {{"n", static_cast<double>(n)}, {"sigma", sigma}};
    return pair;
}

/// Correlated Erdos-Renyi pair: A ~ G(n, p); given A(i,j), B(truth(i), truth(j)) is
/// Bern(1 - sigma^2 (1 - p)) on edges and Bern(sigma^2 p) on non-edges.
inline CorrelatedPair gen_er_pair(Index n, double p, double sigma, const Seed& seed,
                                  std::optional<Permutation> truth = std::nullopt) {
    require(n >= 1, "gen_er_pair: n must be positive");
    require(p > 0.0 && p < 1.0, "gen_er_pair: p must lie in (0, 1)");
    require(sigma >= 0.0 && sigma <= 1.0, "gen_er_pair: sigma must lie in [0, 1]");
    const double s2 = sigma * sigma;
    require(s2 * p <= 1.0 && s2 * (1.0 - p) <= 1.0, "gen_er_pair: invalid conditional law");
    CorrelatedPair pair;
    pair.model = "er";
    pair.truth = detail::truth_or_random(truth, n, seed);
    Rng rng(seed.child(detail::kTagA));
    const double keep = 1.0 - s2 * (1.0 - p);
    const double spawn = s2 * p;
    pair.a = Matrix::Zero(n, n);
    Matrix c = Matrix::Zero(n, n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = i + 1; j < n; ++j) {
            const bool edge = rng.bernoulli(p);
            const bool other = rng.bernoulli(edge ? keep : spawn);
            pair.a(i, j) = pair.a(j, i) = edge ? 1.0 : 0.0;
            c(i, j) = c(j, i) = other ? 1.0 : 0.0;
        }
    }
    pair.b = detail::relabel_by_truth(c, pair.truth);
    pair.params = {{"n", static_cast<double>(n)}, {"p", p}, {"sigma", sigma}};
    return pair;
}

/// Centered and scaled adjacency (raw - p) / sqrt(p (1 - p) n) off the diagonal;
/// the diagonal stays zero since simple graphs have no self-loops.
inline Matrix normalize_adjacency(const Matrix& raw, double p) {
    require(p > 0.0 && p < 1.0, "normalize_adjacency: p must lie in (0, 1)");
    require_square(raw, "normalize_adjacency");
    const Index n = raw.rows();
    const double scale = 1.0 / std::sqrt(p * (1.0 - p) * static_cast<double>(n));
    Matrix out = (raw.array() - p) * scale;
    out.diagonal().setZero();
    return out;
}

/// G(n, density) adjacency, zero diagonal.
inline Matrix gen_er_mother(Index n, double density, const Seed& seed) {
    require(n >= 1, "gen_er_mother: n must be positive");
    require(density >= 0.0 && density <= 1.0, "gen_er_mother: density must lie in [0, 1]");
    Rng rng(seed);
    Matrix a = Matrix::Zero(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j)
            if (rng.bernoulli(density)) a(i, j) = a(j, i) = 1.0;
    return a;
}

/// Two equal communities {0..n/2-1} and {n/2..n-1}.
inline Matrix gen_sbm_mother(Index n, double p_in, double p_out, const Seed& seed) {
    require(n >= 2 && n % 2 == 0, "gen_sbm_mother: n must be even");
    require(p_in >= 0.0 && p_in <= 1.0 && p_out >= 0.0 && p_out <= 1.0,
            "gen_sbm_mother: probabilities must lie in [0, 1]");
    Rng rng(seed);
    const Index half = n / 2;
    Matrix a = Matrix::Zero(n, n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = i + 1; j < n; ++j) {
            const bool same = (i < half) == (j < half);
            if (rng.bernoulli(same ? p_in : p_out)) a(i, j) = a(j, i) = 1.0;
        }
    }
    return a;
}

/// Preferential attachment: start from one edge; each new vertex links to existing
/// vertex j with probability min(c d_j / sum_i d_i, 1), redrawn until it has a link.
inline Matrix gen_powerlaw_mother(Index n, double c_param, const Seed& seed) {
    require(n >= 2, "gen_powerlaw_mother: n must be at least 2");
    require(c_param > 0.0 && std::isfinite(c_param), "gen_powerlaw_mother: c_param must be positive");
    Rng rng(seed);
    Matrix a = Matrix::Zero(n, n);
    std::vector<double> degree(static_cast<std::size_t>(n), 0.0);
    a(0, 1) = a(1, 0) = 1.0;
    degree[0] = degree[1] = 1.0;
    double total = 2.0;
    std::vector<Index> links;
    for (Index k = 2; k < n; ++k) {
        do {
            links.clear();
            for (Index j = 0; j < k; ++j) {
                const double prob = std::min(c_param * degree[j] / total, 1.0);
                if (rng.bernoulli(prob)) links.push_back(j);
            }
        } while (links.empty());
        for (Index j : links) {
            a(k, j) = a(j, k) = 1.0;
            degree[j] += 1.0;
        }
        degree[k] = static_cast<double>(links.size());
        total += 2.0 * static_cast<double>(links.size());
    }
    return a;
}

/// Edge density |E| / C(n, 2) of a 0/1 adjacency matrix.
inline double edge_density(const Matrix& adj) {
    const double n = static_cast<double>(adj.rows());
    if (n < 2) return 0.0;
    const double edges = (adj.sum() - adj.trace()) / 2.0;
    return edges / (n * (n - 1.0) / 2.0);
}

/// Bisection on c_param so that the mean density over `samples` draws hits target.
/// The same seeds are reused at every probe so the search sees one fixed function.
inline double calibrate_powerlaw_c(Index n, double target_density, const Seed& seed,
                                   int samples = 3, int iters = 40) {
    require(target_density > 0.0 && target_density < 1.0,
            "calibrate_powerlaw_c: target density must lie in (0, 1)");
    auto mean_density = [&](double c) {
        double sum = 0.0;
        for (int s = 0; s < samples; ++s)
            sum += edge_density(gen_powerlaw_mother(n, c, seed.child(static_cast<std::uint64_t>(s))));
        return sum / samples;
    };
    double lo = 1e-3;
    double hi = static_cast<double>(n);
    for (int it = 0; it < iters; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mean_density(mid) < target_density) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

/// Two independent s-thinnings of one mother graph with density p / s; the second is
/// relabeled by the planted permutation. Records sigma = sqrt((1 - s) / (1 - p)).
template <class MotherSampler>
CorrelatedPair gen_subsampled_pair(MotherSampler&& mother_sampler, double p, double s,
                                   const Seed& seed, std::optional<Permutation> truth = std::nullopt) {
    require(p > 0.0 && p < s && s <= 1.0, "gen_subsampled_pair: need 0 < p < s <= 1");
    const Matrix mother = mother_sampler(p / s, seed.child(detail::kTagMother));
    require_square(mother, "gen_subsampled_pair");
    const Index n = mother.rows();
    CorrelatedPair pair;
    pair.model = "subsampled";
    pair.truth = detail::truth_or_random(truth, n, seed);
    Rng thin_a(seed.child(detail::kTagA));
    Rng thin_b(seed.child(detail::kTagThinB));
    pair.a = Matrix::Zero(n, n);
    Matrix c = Matrix::Zero(n, n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = i + 1; j < n; ++j) {
            if (mother(i, j) == 0.0) continue;
            if (thin_a.bernoulli(s)) pair.a(i, j) = pair.a(j, i) = 1.0;
            if (thin_b.bernoulli(s)) c(i, j) = c(j, i) = 1.0;
        }
    }
    pair.b = detail::relabel_by_truth(c, pair.truth);
    pair.params = {{"n", static_cast<double>(n)},
                   {"p", p},
                   {"s", s},
                   {"sigma", std::sqrt((1.0 - s) / (1.0 - p))}};
    return pair;
}

/// Gaussian bipartite pair G^{rows, cols} = F + sigma W, entries i.i.d. N(0, 1/m).
inline BipartitePair gen_bipartite_pair(Index n, Index m, double sigma, const Seed& seed,
                                        std::optional<Permutation> row_truth = std::nullopt,
                                        std::optional<Permutation> col_truth = std::nullopt) {
    require(n >= 1 && n <= m, "gen_bipartite_pair: need 1 <= n <= m");
    require(sigma >= 0.0 && std::isfinite(sigma), "gen_bipartite_pair: sigma must be non-negative");
    BipartitePair out;
    out.row_truth = detail::truth_or_random(row_truth, n, seed);
    out.col_truth = detail::truth_or_random(col_truth, m, seed.child(detail::kTagTruth));
    const double sd = std::sqrt(1.0 / static_cast<double>(m));
    Rng rf(seed.child(detail::kTagA));
    Rng rw(seed.child(detail::kTagNoise));
    out.f.resize(n, m);
    Matrix c(n, m);
    for (Index j = 0; j < m; ++j) {
        for (Index i = 0; i < n; ++i) {
            out.f(i, j) = rf.normal(sd);
            c(i, j) = out.f(i, j) + (sigma > 0.0 ? sigma * rw.normal(sd) : 0.0);
        }
    }
    out.g.resize(n, m);
    for (Index j = 0; j < m; ++j)
        for (Index i = 0; i < n; ++i) out.g(out.row_truth(i), out.col_truth(j)) = c(i, j);
    return out;
}

}  // namespace grampa
