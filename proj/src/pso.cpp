#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "femu/errors.hpp"
#include "femu/kernels.hpp"
#include "femu/optimizers.hpp"

namespace femu {

void PsoConfig::validate() const {
    if (swarm_size < 2) throw std::invalid_argument("pso: swarm_size must be >= 2");
    if (max_steps < 1) throw std::invalid_argument("pso: max_steps must be >= 1");
    if (!(inertia >= 0.0)) throw std::invalid_argument("pso: inertia must be >= 0");
    if (!(c1 >= 0.0) || !(c2 >= 0.0)) throw std::invalid_argument("pso: c1, c2 must be >= 0");
    if (v_max_fraction && !(*v_max_fraction > 0.0))
        throw std::invalid_argument("pso: v_max_fraction must be positive");
}

OptimizerRun pso_minimize(const Objective& objective, const Bounds& bounds, const PsoConfig& config,
                          const PsoObserver& observer) {
    config.validate();
    bounds.validate();
    const std::size_t dim = bounds.size();
    const auto n = static_cast<std::size_t>(config.swarm_size);
    Rng rng = make_rng(config.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::vector<Particle> swarm(n);
    for (auto& p : swarm) {
        p.position.resize(dim);
        p.velocity.resize(dim);
        for (std::size_t j = 0; j < dim; ++j) {
            const double w = bounds.width(j);
            p.position[j] = bounds.lower[j] + w * unit(rng);
            p.velocity[j] = w * (2.0 * unit(rng) - 1.0);
        }
    }

    std::vector<std::vector<double>> positions(n);
    auto evaluate_swarm = [&](int step) {
        for (std::size_t i = 0; i < n; ++i) positions[i] = swarm[i].position;
        auto costs = evaluate_batch(objective, positions, config.threads);
        for (std::size_t i = 0; i < n; ++i)
            if (!std::isfinite(costs[i]))
                throw OptimizerError("pso: non-finite objective for particle " + std::to_string(i) +
                                     " at step " + std::to_string(step));
        return costs;
    };

    OptimizerRun run;
    run.seed = config.seed;

    auto costs = evaluate_swarm(0);
    run.evaluations += n;
    std::size_t gbest = 0;
    for (std::size_t i = 0; i < n; ++i) {
        swarm[i].pbest = swarm[i].position;
        swarm[i].pbest_cost = costs[i];
        if (costs[i] < swarm[gbest].pbest_cost) gbest = i;
    }
    std::vector<double> gbest_position = swarm[gbest].pbest;
    double gbest_cost = swarm[gbest].pbest_cost;
    run.history.push_back(gbest_cost);
    if (observer) observer(0, swarm, gbest_cost);

    std::vector<double> a1(dim), a2(dim);
    for (int step = 1; step <= config.max_steps; ++step) {
        for (auto& p : swarm) {
            if (config.per_dimension_random) {
                for (std::size_t j = 0; j < dim; ++j) {
                    a1[j] = config.c1 * unit(rng);
                    a2[j] = config.c2 * unit(rng);
                }
            } else {
                const double r1 = unit(rng);
                const double r2 = unit(rng);
                std::fill(a1.begin(), a1.end(), config.c1 * r1);
                std::fill(a2.begin(), a2.end(), config.c2 * r2);
            }
            kernels::swarm_velocity(p.velocity, p.position, p.pbest, gbest_position,
                                    config.inertia, a1, a2);
            if (config.v_max_fraction) {
                for (std::size_t j = 0; j < dim; ++j) {
                    const double cap = *config.v_max_fraction * bounds.width(j);
                    p.velocity[j] = std::clamp(p.velocity[j], -cap, cap);
                }
            }
            kernels::axpy(1.0, p.velocity, p.position);
            for (std::size_t j = 0; j < dim; ++j)
                p.position[j] = std::clamp(p.position[j], bounds.lower[j], bounds.upper[j]);
        }

        costs = evaluate_swarm(step);
        run.evaluations += n;
        for (std::size_t i = 0; i < n; ++i) {
            if (costs[i] < swarm[i].pbest_cost) {
                swarm[i].pbest = swarm[i].position;
                swarm[i].pbest_cost = costs[i];
            }
            if (swarm[i].pbest_cost < gbest_cost) {
                gbest_cost = swarm[i].pbest_cost;
                gbest_position = swarm[i].pbest;
            }
        }
        run.history.push_back(gbest_cost);
        if (observer) observer(step, swarm, gbest_cost);
    }

    run.best_params = std::move(gbest_position);
    run.best_cost = gbest_cost;
    return run;
}

}  // namespace femu
