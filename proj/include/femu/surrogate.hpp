#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "femu/bounds.hpp"
#include "femu/optimizers.hpp"

namespace femu {

struct UpdatingProblem;

/// Single-hidden-layer perceptron: y = w2 . tanh(W1 x + b1) + b2.
///
/// Parameters live in one flat vector laid out as [W1 (row-major, hidden x inputs),
/// b1 (hidden), w2 (hidden), b2], which is what the trainer optimises over.
class Mlp {
public:
    Mlp(int inputs, int hidden);

    /// Weights uniform in +-1/sqrt(fan_in) of the receiving layer.
    static Mlp initialized(int inputs, int hidden, std::uint64_t seed);

    int inputs() const { return inputs_; }
    int hidden() const { return hidden_; }
    std::size_t parameter_count() const { return params_.size(); }

    std::span<const double> parameters() const { return params_; }
    std::span<double> parameters() { return params_; }

    std::span<const double> w1() const { return {params_.data(), w1_size()}; }
    std::span<const double> b1() const { return {params_.data() + w1_size(), hid()}; }
    std::span<const double> w2() const { return {params_.data() + w1_size() + hid(), hid()}; }
    double b2() const { return params_.back(); }

    double forward(std::span<const double> x) const;

    struct Gradient {
        std::vector<double> parameters;  // d y / d theta, same layout as parameters()
        std::vector<double> input;       // d y / d x
        double output = 0.0;
    };

    Gradient gradient(std::span<const double> x) const;

    bool operator==(const Mlp&) const = default;

private:
    std::size_t hid() const { return static_cast<std::size_t>(hidden_); }
    std::size_t w1_size() const { return hid() * static_cast<std::size_t>(inputs_); }

    int inputs_;
    int hidden_;
    std::vector<double> params_;
};

struct TrainingSet {
    std::vector<std::vector<double>> inputs;
    std::vector<double> targets;

    std::size_t size() const { return targets.size(); }
    void add(std::vector<double> x, double y) {
        inputs.push_back(std::move(x));
        targets.push_back(y);
    }
};

/// Sum over the set of (y(x) - t)^2.
double mlp_loss(const Mlp& net, const TrainingSet& data);

/// Loss and its gradient with respect to the parameters.
double mlp_loss_gradient(const Mlp& net, const TrainingSet& data, std::span<double> gradient);

struct TrainResult {
    Mlp net;
    double loss = 0.0;
    double initial_loss = 0.0;
    int iterations = 0;
};

/// Møller's scaled conjugate gradient, `cycles` full-batch iterations. A step is
/// only taken when it does not increase the loss.
TrainResult mlp_train(Mlp net, const TrainingSet& data, int cycles);

/// x in [lo, hi] -> [-1, 1] per coordinate, and back.
std::vector<double> normalize(std::span<const double> x, const Bounds& bounds);
std::vector<double> denormalize(std::span<const double> z, const Bounds& bounds);

/// Latin hypercube: each coordinate's n strata are each hit exactly once.
std::vector<std::vector<double>> sample_design(const Bounds& bounds, int n, Rng& rng);

struct SurrogateLoopConfig {
    int n_initial_samples = 150;
    int n_refinements = 10;
    int initial_training_cycles = 200;
    int refresh_training_cycles = 5;
    int hidden_units = 8;
    GaConfig inner;  // optimiser applied to the network prediction
    std::uint64_t seed = 1;
    int threads = 1;

    void validate() const;
};

struct RefinementRecord {
    int iteration = 0;
    std::vector<double> candidate;  // Pa
    double predicted_cost = 0.0;
    double true_cost = 0.0;
    double training_loss = 0.0;
    std::size_t training_set_size = 0;
};

struct SurrogateResult {
    OptimizerRun run;
    TrainingSet training_set;  // normalised inputs, raw true costs
    std::vector<RefinementRecord> refinements;
    double initial_training_loss = 0.0;
    int network_initializations = 0;
    double initial_sample_best = 0.0;
};

/// Response-surface loop: sample, train, then repeatedly optimise the network
/// prediction, evaluate the true cost at the optimum and retrain warm.
SurrogateResult surrogate_optimize(const Objective& objective, const Bounds& bounds,
                                   const SurrogateLoopConfig& config);

SurrogateResult surrogate_optimize(const UpdatingProblem& problem, const SurrogateLoopConfig& config);

}  // namespace femu
