#include "grampa/rounding.hpp"

#include "grampa/generators.hpp"
#include "grampa/spectral.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

namespace grampa {
namespace {

TEST(RoundLap, IdentityAndSwap) {
    const auto id = round_lap(Matrix::Identity(3, 3));
    EXPECT_TRUE(id.perm.is_identity());
    EXPECT_DOUBLE_EQ(id.objective, 3.0);
    Matrix swap(2, 2);
    swap << 0, 1, 1, 0;
    const auto s = round_lap(swap);
    EXPECT_EQ(s.perm, test::perm({1, 0}));
    EXPECT_DOUBLE_EQ(s.objective, 2.0);
}

TEST(RoundLap, SixBySixMatchesExhaustiveSearch) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Matrix x = test::random_matrix(6, 6, seed);
        const auto lap = round_lap(x);
        const auto brute = round_bruteforce(x);
        EXPECT_EQ(lap.perm, brute.perm);
        EXPECT_EQ(lap.objective, brute.objective);
    }
}

TEST(RoundLap, ExactOnSmallSizesIncludingTies) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        Rng rng(Seed{seed, 17});
        const Index n = 1 + rng.uniform_index(8);
        Matrix x(n, n);
        // Small integer entries produce many tied optima.
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j) x(i, j) = static_cast<double>(rng.uniform_index(4));
        EXPECT_EQ(round_lap(x).objective, round_bruteforce(x).objective) << "seed " << seed;
    }
}

TEST(RoundLap, BeatsRandomPermutations) {
    const Matrix x = test::random_matrix(40, 40, 3);
    const auto lap = round_lap(x);
    Rng rng(Seed{3, 3});
    for (int k = 0; k < 10000; ++k) {
        const Permutation p = random_permutation(40, rng);
        EXPECT_GE(lap.objective, assignment_objective(x, p));
    }
}

TEST(RoundLap, AffineInvariantOptimum) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Matrix x = test::random_matrix(7, 7, seed + 100);
        const double c = 0.5 + static_cast<double>(seed), d = -3.0 + static_cast<double>(seed);
        const Matrix y = c * x + d * Matrix::Ones(7, 7);
        const auto rx = round_lap(x);
        const auto ry = round_lap(y);
        // sum_i y(i, p(i)) = c sum_i x(i, p(i)) + n d for every p.
        EXPECT_NEAR((ry.objective - 7.0 * d) / c, rx.objective, 1e-10 * std::abs(rx.objective) + 1e-12);
    }
}

TEST(RoundLap, LargeDiagonallyDominantInstance) {
    const auto pair = gen_wigner_pair(300, 0.02, Seed{1, 2});
    const auto r = round_lap(build_similarity(pair.a, pair.b, 0.2));
    EXPECT_EQ(r.perm, pair.truth);
}

TEST(RoundLap, RejectsNonFinite) {
    Matrix x = Matrix::Zero(2, 2);
    x(0, 1) = std::numeric_limits<double>::infinity();
    EXPECT_THROW(round_lap(x), std::invalid_argument);
    EXPECT_THROW(round_lap(Matrix::Zero(2, 3)), std::invalid_argument);
}

TEST(RoundGreedy, IdentityAndTieBreak) {
    EXPECT_EQ(round_greedy(Matrix::Identity(3, 3)).map, (std::vector<Index>{0, 1, 2}));
    EXPECT_EQ(round_greedy(Matrix::Ones(2, 2)).map, (std::vector<Index>{0, 0}));
}

TEST(RoundGreedy, AgreesWithLapUnderDiagonalDominance) {
    const auto pair = gen_wigner_pair(100, 0.02, Seed{2, 2});
    const Matrix x = build_similarity(pair.a, pair.b, 0.01);
    ASSERT_TRUE(diag_dominance(x, pair.truth).dominant);
    const VertexMap g = round_greedy(x);
    EXPECT_EQ(g.map, round_lap(x).perm.map());
    EXPECT_EQ(g.map, pair.truth.map());
}

TEST(RoundBruteforce, SmallCases) {
    EXPECT_TRUE(round_bruteforce(Matrix::Identity(2, 2)).perm.is_identity());
    EXPECT_TRUE(round_bruteforce(Matrix::Ones(3, 3)).perm.is_identity());
    EXPECT_THROW(round_bruteforce(Matrix::Zero(10, 10)), std::invalid_argument);
}

}  // namespace
}  // namespace grampa
