#include "grampa/harness.hpp"

#include <gtest/gtest.h>

#include <sstream>

namespace grampa {
namespace {

ExperimentConfig small_config() {
    ExperimentConfig cfg;
    cfg.model = {"wigner", "er"};
    cfg.n = 40;
    cfg.p = 0.3;
    cfg.sigma = {0.0, 0.2};
    cfg.methods = {"grampa", "degree"};
    cfg.reps = 3;
    cfg.master_seed = 77;
    return cfg;
}

std::string sweep_csv(const ExperimentConfig& cfg, unsigned threads) {
    std::ostringstream out;
    write_records_csv(out, run_sweep(cfg, threads));
    return out.str();
}

TEST(Sweep, OneRepOnePointOneMethodIsOneRow) {
    ExperimentConfig cfg;
    cfg.n = 20;
    cfg.sigma = {0.0};
    cfg.reps = 1;
    const auto rows = run_sweep(cfg, 1);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0].frac_correct, 1.0);
    EXPECT_TRUE(rows[0].exact);
    EXPECT_EQ(rows[0].runtime_ms, 0.0);
}

TEST(Sweep, ByteIdenticalAcrossRunsAndThreadCounts) {
    const ExperimentConfig cfg = small_config();
    const std::string one = sweep_csv(cfg, 1);
    EXPECT_EQ(one, sweep_csv(cfg, 1));
    EXPECT_EQ(one, sweep_csv(cfg, 3));
    EXPECT_EQ(one, sweep_csv(cfg, 16));
}

TEST(Sweep, RowOrderAndRecordFields) {
    const auto rows = run_sweep(small_config(), 2);
    ASSERT_EQ(rows.size(), 3u * 4u * 2u);
    for (std::size_t k = 0; k < rows.size(); ++k) {
        EXPECT_EQ(rows[k].rep, static_cast<long>(k / 8));
        EXPECT_EQ(rows[k].method, k % 2 == 0 ? "grampa" : "degree");
        EXPECT_GE(rows[k].frac_correct, 0.0);
        EXPECT_LE(rows[k].frac_correct, 1.0);
    }
    EXPECT_EQ(rows[0].model, "wigner");
    EXPECT_EQ(rows[4].model, "er");
    EXPECT_EQ(rows[4].p, 0.3);
}

TEST(Sweep, MoreRepsKeepLeadingRows) {
    ExperimentConfig cfg = small_config();
    const auto short_run = run_sweep(cfg, 2);
    cfg.reps = 5;
    const auto long_run = run_sweep(cfg, 2);
    ASSERT_GT(long_run.size(), short_run.size());
    for (std::size_t k = 0; k < short_run.size(); ++k) EXPECT_EQ(short_run[k], long_run[k]);
}

TEST(Sweep, RepetitionStreamDependsOnGridAndRep) {
    EXPECT_NE(repetition_stream(1, 0, 1), repetition_stream(1, 1, 0));
    EXPECT_NE(repetition_stream(1, 0, 0), repetition_stream(2, 0, 0));
    EXPECT_EQ(repetition_stream(5, 3, 2), repetition_stream(5, 3, 2));
}

TEST(Sweep, InvalidConfigThrows) {
    ExperimentConfig cfg;
    cfg.model = {"er"};
    EXPECT_THROW(run_sweep(cfg, 1), IoError);
    cfg.p = 0.5;
    cfg.sigma = {1.5};
    EXPECT_THROW(run_sweep(cfg, 1), IoError);
}

TEST(Sweep, SubsampledAndBipartiteModels) {
    ExperimentConfig cfg;
    cfg.model = {"er_sub"};
    cfg.n = 30;
    cfg.p = 0.2;
    cfg.sigma = {0.3};
    cfg.reps = 1;
    const auto sub = run_sweep(cfg, 1);
    ASSERT_EQ(sub.size(), 1u);
    EXPECT_NEAR(sub[0].s, 1.0 - 0.09 * 0.8, 1e-15);

    ExperimentConfig bip;
    bip.model = {"bipartite"};
    bip.n = 20;
    bip.m = 30;
    bip.sigma = {0.0};
    bip.methods = {"bigrampa"};
    bip.reps = 1;
    const auto rows = run_sweep(bip, 1);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_TRUE(rows[0].exact);
    EXPECT_EQ(rows[0].m, 30);
    EXPECT_NEAR(rows[0].common_edges, rows[0].truth_common_edges, 1e-12);
}

TEST(SigmaModes, GridValuesMapToNoise) {
    ExperimentConfig cfg;
    cfg.n = 256;
    cfg.sigma = {2.0};
    cfg.sigma_mode = "c_n_quarter";
    EXPECT_NEAR(expand_grid(cfg)[0].sigma, 0.5, 1e-15);
    cfg.sigma_mode = "c_over_log_n";
    EXPECT_NEAR(expand_grid(cfg)[0].sigma, 2.0 / std::log(256.0), 1e-15);
}

TEST(Plotdata, ManualMeanOracle) {
    std::vector<ExperimentRecord> records;
    double sum = 0.0;
    for (long r = 0; r < 10; ++r) {
        ExperimentRecord rec;
        rec.model = "wigner";
        rec.n = 100;
        rec.method = "grampa";
        rec.sigma = 0.1;
        rec.rep = r;
        rec.frac_correct = 0.5 + 0.05 * static_cast<double>(r);
        rec.exact = r >= 7;
        sum += rec.frac_correct;
        records.push_back(rec);
    }
    const auto curves = aggregate_curves(records);
    ASSERT_EQ(curves.size(), 1u);
    EXPECT_NEAR(curves[0].mean_frac_correct, sum / 10.0, 1e-15);
    EXPECT_DOUBLE_EQ(curves[0].exact_rate, 0.3);
    EXPECT_EQ(curves[0].count, 10);
    // Sample sd of 0.5, 0.55, ..., 0.95 is 0.05 sqrt(55/6).
    EXPECT_NEAR(curves[0].stderr_frac_correct, 0.05 * std::sqrt(55.0 / 6.0) / std::sqrt(10.0), 1e-12);
}

TEST(Plotdata, EmptyAndMixedMethods) {
    std::ostringstream empty;
    write_curves_csv(empty, aggregate_curves({}));
    EXPECT_EQ(empty.str(), std::string(kCurveHeader) + "\n");
    const auto rows = run_sweep(small_config(), 1);
    // 2 models x 2 methods x 2 sigma values.
    EXPECT_EQ(aggregate_curves(rows).size(), 8u);
}

TEST(Plotdata, XModes) {
    ExperimentRecord r;
    r.n = 256;
    r.sigma = 0.5;
    r.s = 0.9;
    EXPECT_NEAR(curve_x(r, "c_n_quarter"), 2.0, 1e-15);
    EXPECT_EQ(curve_x(r, "s"), 0.9);
    EXPECT_THROW(curve_x(r, "bogus"), IoError);
}

}  // namespace
}  // namespace grampa
