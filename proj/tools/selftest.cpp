#include "selftest.hpp"

#include "grampa/harness.hpp"
#include "grampa/qp.hpp"

#include <functional>
#include <sstream>
#include <string>
#include <vector>

namespace grampa::tools {
namespace {

struct Check {
    std::string name;
    std::function<bool()> run;
};

bool equivariance() {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto pair = gen_wigner_pair(40, 0.05, Seed{seed, 1});
        Rng rng(Seed{seed, 2});
        const Permutation pi = random_permutation(40, rng);
        if (compose(pi, grampa(pair.a, permute_graph(pair.b, pi), 0.2)) != grampa(pair.a, pair.b, 0.2))
            return false;
    }
    return true;
}

bool lap_exact() {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        Rng rng(Seed{seed, 3});
        const Index n = 2 + rng.uniform_index(6);
        Matrix x(n, n);
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j) x(i, j) = rng.normal(1.0);
        if (round_lap(x).objective != round_bruteforce(x).objective) return false;
    }
    return true;
}

bool sign_invariance() {
    const auto pair = gen_wigner_pair(30, 0.1, Seed{4, 0});
    auto da = eig_sym(pair.a);
    auto db = eig_sym(pair.b);
    const Matrix x = build_similarity(da, db, 0.2);
    Rng rng(Seed{4, 1});
    for (Index k = 0; k < 30; ++k) {
        if (rng.bernoulli(0.5)) da.vectors.col(k) *= -1.0;
        if (rng.bernoulli(0.5)) db.vectors.col(k) *= -1.0;
    }
    return (build_similarity(da, db, 0.2) - x).cwiseAbs().maxCoeff() <= 1e-12;
}

bool stationarity() {
    const auto pair = gen_wigner_pair(40, 0.1, Seed{5, 0});
    const Matrix x = build_similarity(pair.a, pair.b, 0.2);
    return stationarity_residual(x, pair.a, pair.b, 0.2).norm() <= 1e-8 * 40.0;
}

bool closed_form() {
    const auto pair = gen_wigner_pair(20, 0.1, Seed{6, 0});
    const GdConfig cfg = default_gd_config(pair.a, pair.b, 0.2);
    Matrix x = Matrix::Zero(20, 20);
    for (int t = 0; t < 30; ++t) x = gd_step(x, pair.a, pair.b, cfg);
    return (closed_form_iterate(pair.a, pair.b, cfg, 30) - x).norm() <= 1e-9 * x.norm();
}

bool degree_kernel() {
    const auto pair = gen_wigner_pair(25, 0.3, Seed{7, 0});
    const Matrix x = build_similarity_generic(pair.a, pair.b, [](double l, double m) { return l * m; });
    const Matrix ajb = pair.a * Matrix::Ones(25, 25) * pair.b;
    return (x - ajb).cwiseAbs().maxCoeff() <= 1e-8;
}

bool noiseless_recovery() {
    const auto pair = gen_wigner_pair(100, 0.0, Seed{8, 0});
    return grampa(pair.a, pair.b, 0.2) == pair.truth;
}

bool csv_round_trip() {
    ExperimentConfig cfg;
    cfg.n = 20;
    cfg.sigma = {0.0, 0.1};
    cfg.reps = 2;
    const auto records = run_sweep(cfg, 1);
    std::stringstream s;
    write_records_csv(s, records);
    return read_records_csv(s) == records;
}

bool sweep_determinism() {
    ExperimentConfig cfg;
    cfg.model = {"er"};
    cfg.n = 30;
    cfg.p = 0.3;
    cfg.sigma = {0.1, 0.3};
    cfg.methods = {"grampa", "umeyama"};
    cfg.reps = 3;
    std::ostringstream one, many;
    write_records_csv(one, run_sweep(cfg, 1));
    write_records_csv(many, run_sweep(cfg, 4));
    return one.str() == many.str();
}

}  // namespace

bool run_selftest(std::ostream& out) {
    const std::vector<Check> checks{
        {"noiseless recovery", noiseless_recovery},
        {"equivariance", equivariance},
        {"lap exactness", lap_exact},
        {"eigenvector sign invariance", sign_invariance},
        {"qp stationarity", stationarity},
        {"closed-form iterate", closed_form},
        {"degree kernel identity", degree_kernel},
        {"csv round trip", csv_round_trip},
        {"sweep determinism", sweep_determinism},
    };
    bool ok = true;
    for (const auto& c : checks) {
        bool passed = false;
        try {
            passed = c.run();
        } catch (const std::exception& e) {
            out << "  error: " << e.what() << '\n';
        }
        out << (passed ? "PASS " : "FAIL ") << c.name << '\n';
        ok = ok && passed;
    }
    return ok;
}

}  // namespace grampa::tools
