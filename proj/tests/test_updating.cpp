#include <gtest/gtest.h>

#include <random>

#include "femu/modal.hpp"
#include "femu/updating.hpp"

using namespace femu;

namespace {

const std::vector<double> kMeasured{53.9, 117.3, 208.4, 254.0, 445.1};
const std::vector<double> kInitial{56.2, 127.1, 228.4, 263.4, 452.4};
const std::vector<double> kPsoColumn{53.9, 117.8, 208.5, 253.8, 438.5};

UpdatingProblem synthetic_problem(std::vector<double> truth) {
    UpdatingProblem p;
    p.base_model = make_h_structure();
    p.target_frequencies = model_frequencies(apply_parameters(p.base_model, truth), 5);
    p.weights.assign(5, 1.0);
    p.bounds = Bounds::uniform(12, 5e10, 8e10);
    return p;
}

}  // namespace

TEST(DefaultWeights, TableValues) {
    const std::vector<double> m{53.9}, i{56.2};
    const double expected = (56.2 - 53.9) / 53.9 * ((56.2 - 53.9) / 53.9);
    EXPECT_DOUBLE_EQ(default_weights(m, i)[0], expected);
    EXPECT_NEAR(default_weights(m, i)[0], 1.821e-3, 1e-6);

    const std::vector<double> m2{100.0}, i2{110.0};
    EXPECT_NEAR(default_weights(m2, i2)[0], 0.01, 1e-15);
    for (double g : default_weights(kMeasured, kMeasured)) EXPECT_EQ(g, 0.0);
    EXPECT_THROW(default_weights(m, kInitial), std::invalid_argument);
}

TEST(WeightedCost, SingleModeAndTableOracle) {
    const std::vector<double> m{100.0}, w{1.0}, f{110.0};
    EXPECT_NEAR(weighted_frequency_cost(m, w, f), 0.01, 1e-15);

    const auto gamma = default_weights(kMeasured, kInitial);
    double oracle = 0.0;
    for (std::size_t i = 0; i < 5; ++i) {
        const double r = (kMeasured[i] - kInitial[i]) / kMeasured[i];
        oracle += r * r * r * r;
    }
    EXPECT_NEAR(weighted_frequency_cost(kMeasured, gamma, kInitial), oracle, 1e-18);
    EXPECT_NEAR(oracle, 1.3881e-4, 1e-8);
}

TEST(FrequencyErrors, TableInitialAndPsoColumns) {
    const auto initial = frequency_error_table(kMeasured, kInitial);
    const double expected[5] = {4.26716, 8.35465, 9.59693, 3.70079, 1.64008};
    for (int i = 0; i < 5; ++i) EXPECT_NEAR(initial.percent[i], expected[i], 1e-5);
    EXPECT_NEAR(initial.mean, 5.51192, 1e-5);

    const auto pso = frequency_error_table(kMeasured, kPsoColumn);
    EXPECT_NEAR(pso.percent[0], 0.0, 1e-12);
    EXPECT_NEAR(pso.percent[4], 1.48281, 1e-5);
    EXPECT_NEAR(pso.mean, 0.40716, 1e-5);

    const auto zero = frequency_error_table(kMeasured, kMeasured);
    EXPECT_EQ(zero.mean, 0.0);
}

TEST(ClipToBounds, Clamps) {
    const Bounds b = Bounds::uniform(3, 6e10, 8e10);
    const std::vector<double> x{9e10, 5e10, 7e10};
    EXPECT_EQ(clip_to_bounds(x, b), (std::vector<double>{8e10, 6e10, 7e10}));
}

TEST(EvaluateCost, ZeroAtTruth) {
    std::vector<double> truth(12, 7e10);
    truth[2] = truth[3] = truth[4] = 5.95e10;
    const auto p = synthetic_problem(truth);
    const auto e = evaluate_cost(p, truth);
    EXPECT_LT(e.cost, 1e-20);
    EXPECT_GT(evaluate_cost(p, std::vector<double>(12, 7e10)).cost, 1e-6);
}

TEST(EvaluateCost, WeightScalingScalesCost) {
    auto p = synthetic_problem(std::vector<double>(12, 6.5e10));
    p.weights = {1.0, 0.5, 2.0, 0.0, 1.0};
    const std::vector<double> x(12, 7.2e10);
    const double c = evaluate_cost(p, x).cost;
    for (double& w : p.weights) w *= 3.0;
    EXPECT_NEAR(evaluate_cost(p, x).cost, 3.0 * c, 1e-15 * c);
}

TEST(EvaluateCost, AllZeroWeightsRejected) {
    auto p = synthetic_problem(std::vector<double>(12, 7e10));
    p.weights.assign(5, 0.0);
    EXPECT_THROW(p.validate(), std::invalid_argument);
    EXPECT_THROW(evaluate_cost(p, std::vector<double>(12, 7e10)), std::invalid_argument);
}

TEST(EvaluateCost, StiffeningRaisesEveryFrequency) {
    const auto m = make_h_structure();
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(6e10, 8e10);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> e(12);
        for (double& x : e) x = u(rng);
        auto stiffer = e;
        for (double& x : stiffer) x *= 1.01;
        const auto f0 = model_frequencies(apply_parameters(m, e), 5);
        const auto f1 = model_frequencies(apply_parameters(m, stiffer), 5);
        for (int i = 0; i < 5; ++i) EXPECT_GT(f1[i], f0[i]);
    }
}

TEST(UpdatingProblem, Validation) {
    auto p = synthetic_problem(std::vector<double>(12, 7e10));
    EXPECT_NO_THROW(p.validate());
    auto unsorted = p;
    std::swap(unsorted.target_frequencies[0], unsorted.target_frequencies[1]);
    EXPECT_THROW(unsorted.validate(), std::invalid_argument);
    auto short_bounds = p;
    short_bounds.bounds = Bounds::uniform(11, 6e10, 8e10);
    EXPECT_THROW(short_bounds.validate(), std::invalid_argument);
}
