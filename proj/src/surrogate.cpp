#include "femu/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "femu/errors.hpp"
#include "femu/updating.hpp"

namespace femu {

void SurrogateLoopConfig::validate() const {
    if (n_initial_samples < 1 || n_refinements < 1 || initial_training_cycles < 1 ||
        refresh_training_cycles < 1 || hidden_units < 1)
        throw std::invalid_argument("surrogate: all counts must be >= 1");
    inner.validate();
}

std::vector<double> normalize(std::span<const double> x, const Bounds& bounds) {
    if (x.size() != bounds.size()) throw std::invalid_argument("normalize: size mismatch");
    std::vector<double> z(x.size());
    for (std::size_t j = 0; j < x.size(); ++j)
        z[j] = 2.0 * (x[j] - bounds.lower[j]) / bounds.width(j) - 1.0;
    return z;
}

std::vector<double> denormalize(std::span<const double> z, const Bounds& bounds) {
    if (z.size() != bounds.size()) throw std::invalid_argument("denormalize: size mismatch");
    std::vector<double> x(z.size());
    for (std::size_t j = 0; j < z.size(); ++j)
        x[j] = bounds.lower[j] + 0.5 * (z[j] + 1.0) * bounds.width(j);
    return x;
}

std::vector<std::vector<double>> sample_design(const Bounds& bounds, int n, Rng& rng) {
    if (n < 1) throw std::invalid_argument("sample_design: n must be >= 1");
    bounds.validate();
    const std::size_t dim = bounds.size();
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::vector<double>> points(static_cast<std::size_t>(n), std::vector<double>(dim));
    std::vector<int> strata(static_cast<std::size_t>(n));
    for (std::size_t j = 0; j < dim; ++j) {
        std::iota(strata.begin(), strata.end(), 0);
        std::shuffle(strata.begin(), strata.end(), rng);
        for (int i = 0; i < n; ++i) {
            const double t = (strata[i] + unit(rng)) / n;
            points[i][j] = std::min(bounds.lower[j] + t * bounds.width(j), bounds.upper[j]);
        }
    }
    return points;
}

namespace {

struct Standardizer {
    double mean = 0.0;
    double scale = 1.0;

    double to(double y) const { return (y - mean) / scale; }
    double from(double z) const { return z * scale + mean; }
};

Standardizer fit_standardizer(std::span<const double> y) {
    Standardizer s;
    s.mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
    double ss = 0.0;
    for (double v : y) ss += (v - s.mean) * (v - s.mean);
    const double sd = y.size() > 1 ? std::sqrt(ss / static_cast<double>(y.size() - 1)) : 0.0;
    s.scale = sd > 0.0 ? sd : 1.0;
    return s;
}

TrainingSet standardized(const TrainingSet& raw, const Standardizer& s) {
    TrainingSet out;
    out.inputs = raw.inputs;
    out.targets.reserve(raw.size());
    for (double t : raw.targets) out.targets.push_back(s.to(t));
    return out;
}

double checked(double value, const std::string& where) {
    if (!std::isfinite(value)) throw OptimizerError("surrogate: non-finite objective at " + where);
    return value;
}

}  // namespace

SurrogateResult surrogate_optimize(const Objective& objective, const Bounds& bounds,
                                   const SurrogateLoopConfig& config) {
    config.validate();
    bounds.validate();
    const std::size_t dim = bounds.size();

    SurrogateResult result;
    OptimizerRun& run = result.run;
    run.seed = config.seed;

    Rng rng = make_rng(config.seed, 0);
    const auto design = sample_design(bounds, config.n_initial_samples, rng);
    const auto costs = evaluate_batch(objective, design, config.threads);
    run.evaluations += design.size();

    run.best_cost = checked(costs[0], "design point 0");
    run.best_params = design[0];
    for (std::size_t i = 0; i < design.size(); ++i) {
        checked(costs[i], "design point " + std::to_string(i));
        result.training_set.add(normalize(design[i], bounds), costs[i]);
        if (costs[i] < run.best_cost) {
            run.best_cost = costs[i];
            run.best_params = design[i];
        }
    }
    result.initial_sample_best = run.best_cost;
    run.history.push_back(run.best_cost);

    const Standardizer scale = fit_standardizer(result.training_set.targets);

    const std::uint64_t net_seed = make_rng(config.seed, 1)();
    Mlp net = Mlp::initialized(static_cast<int>(dim), config.hidden_units, net_seed);
    result.network_initializations = 1;
    TrainResult trained =
        mlp_train(std::move(net), standardized(result.training_set, scale),
                  config.initial_training_cycles);
    result.initial_training_loss = trained.loss;
    net = std::move(trained.net);

    const Bounds unit_box = Bounds::uniform(dim, -1.0, 1.0);
    for (int it = 1; it <= config.n_refinements; ++it) {
        GaConfig inner = config.inner;
        inner.seed = make_rng(config.seed, 100 + static_cast<std::uint64_t>(it))();
        const Mlp frozen = net;
        const Objective predicted = [&frozen](std::span<const double> z) { return frozen.forward(z); };
        const OptimizerRun inner_run = ga_minimize(predicted, unit_box, inner);

        const std::vector<double> candidate = denormalize(inner_run.best_params, bounds);
        const double true_cost = checked(objective(candidate), "refinement " + std::to_string(it));
        ++run.evaluations;
        if (true_cost < run.best_cost) {
            run.best_cost = true_cost;
            run.best_params = candidate;
        }
        run.history.push_back(run.best_cost);

        result.training_set.add(inner_run.best_params, true_cost);
        trained = mlp_train(std::move(net), standardized(result.training_set, scale),
                            config.refresh_training_cycles);
        net = std::move(trained.net);

        result.refinements.push_back({it, candidate, scale.from(inner_run.best_cost), true_cost,
                                      trained.loss, result.training_set.size()});
    }
    return result;
}

SurrogateResult surrogate_optimize(const UpdatingProblem& problem, const SurrogateLoopConfig& config) {
    problem.validate();
    const Objective objective = [&problem](std::span<const double> x) {
        return evaluate_cost(problem, x).cost;
    };
    return surrogate_optimize(objective, problem.bounds, config);
}

}  // namespace femu
