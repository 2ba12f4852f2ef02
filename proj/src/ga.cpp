#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "femu/errors.hpp"
#include "femu/optimizers.hpp"

namespace femu {

void GaConfig::validate() const {
    if (population_size < 2) throw std::invalid_argument("ga: population_size must be >= 2");
    if (generations < 1) throw std::invalid_argument("ga: generations must be >= 1");
    if (!(select_best_probability > 0.0 && select_best_probability < 1.0))
        throw std::invalid_argument("ga: select_best_probability must lie in (0, 1)");
    if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0) ||
        !(mutation_rate >= 0.0 && mutation_rate <= 1.0))
        throw std::invalid_argument("ga: rates must lie in [0, 1]");
    if (!(mutation_shape >= 0.0)) throw std::invalid_argument("ga: mutation_shape must be >= 0");
}

std::vector<double> normalized_geometric_pmf(int population, double q) {
    if (population < 1) throw std::invalid_argument("population must be >= 1");
    const double norm = q / (1.0 - std::pow(1.0 - q, population));
    std::vector<double> pmf(static_cast<std::size_t>(population));
    for (int r = 0; r < population; ++r) pmf[r] = norm * std::pow(1.0 - q, r);
    return pmf;
}

int normalized_geometric_select(int population, double q, Rng& rng) {
    if (population <= 1) return 0;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    // Inverse CDF of the geometric distribution truncated to P ranks.
    const double mass = 1.0 - std::pow(1.0 - q, population);
    const double x = std::log1p(-unit(rng) * mass) / std::log1p(-q);
    return std::clamp(static_cast<int>(std::floor(x)), 0, population - 1);
}

Offspring arithmetic_crossover(std::span<const double> parent1, std::span<const double> parent2,
                               double a) {
    if (parent1.size() != parent2.size())
        throw std::invalid_argument("arithmetic_crossover: parent size mismatch");
    Offspring out{std::vector<double>(parent1.size()), std::vector<double>(parent1.size())};
    for (std::size_t j = 0; j < parent1.size(); ++j) {
        out.first[j] = a * parent1[j] + (1.0 - a) * parent2[j];
        out.second[j] = (1.0 - a) * parent1[j] + a * parent2[j];
    }
    return out;
}

Offspring arithmetic_crossover(std::span<const double> parent1, std::span<const double> parent2,
                               Rng& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    return arithmetic_crossover(parent1, parent2, unit(rng));
}

double nonuniform_delta(double gap, int generation, int max_generations, double shape, double u) {
    const double progress = std::clamp(static_cast<double>(generation) / max_generations, 0.0, 1.0);
    return gap * (1.0 - std::pow(u, std::pow(1.0 - progress, shape)));
}

std::vector<double> nonuniform_mutate(std::span<const double> individual, const Bounds& bounds,
                                      int generation, int max_generations, double shape, Rng& rng) {
    if (individual.size() != bounds.size())
        throw std::invalid_argument("nonuniform_mutate: size mismatch");
    std::vector<double> out(individual.begin(), individual.end());
    if (out.empty()) return out;
    std::uniform_int_distribution<std::size_t> pick(0, out.size() - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::size_t j = pick(rng);
    const bool up = unit(rng) < 0.5;
    const double u = unit(rng);
    if (up) {
        out[j] += nonuniform_delta(bounds.upper[j] - out[j], generation, max_generations, shape, u);
    } else {
        out[j] -= nonuniform_delta(out[j] - bounds.lower[j], generation, max_generations, shape, u);
    }
    out[j] = std::clamp(out[j], bounds.lower[j], bounds.upper[j]);
    return out;
}

OptimizerRun ga_minimize(const Objective& objective, const Bounds& bounds, const GaConfig& config) {
    config.validate();
    bounds.validate();
    const std::size_t dim = bounds.size();
    const int P = config.population_size;
    Rng rng = make_rng(config.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::vector<std::vector<double>> population(static_cast<std::size_t>(P), std::vector<double>(dim));
    for (auto& x : population)
        for (std::size_t j = 0; j < dim; ++j) x[j] = bounds.lower[j] + bounds.width(j) * unit(rng);

    OptimizerRun run;
    run.seed = config.seed;
    bool have_best = false;

    auto evaluate = [&](int generation) {
        auto costs = evaluate_batch(objective, population, config.threads);
        run.evaluations += population.size();
        for (std::size_t i = 0; i < costs.size(); ++i) {
            if (!std::isfinite(costs[i]))
                throw OptimizerError("ga: non-finite objective for individual " + std::to_string(i) +
                                     " in generation " + std::to_string(generation));
            if (!have_best || costs[i] < run.best_cost) {
                run.best_cost = costs[i];
                run.best_params = population[i];
                have_best = true;
            }
        }
        run.history.push_back(run.best_cost);
        return costs;
    };

    auto costs = evaluate(0);
    std::vector<std::size_t> ranked(static_cast<std::size_t>(P));
    for (int g = 1; g < config.generations; ++g) {
        std::iota(ranked.begin(), ranked.end(), 0);
        std::stable_sort(ranked.begin(), ranked.end(),
                         [&](std::size_t a, std::size_t b) { return costs[a] < costs[b]; });

        std::vector<std::vector<double>> next;
        next.reserve(static_cast<std::size_t>(P));
        next.push_back(population[ranked[0]]);  // elitism
        while (static_cast<int>(next.size()) < P) {
            const auto& p1 = population[ranked[normalized_geometric_select(P, config.select_best_probability, rng)]];
            const auto& p2 = population[ranked[normalized_geometric_select(P, config.select_best_probability, rng)]];
            Offspring kids{p1, p2};
            if (unit(rng) < config.crossover_rate) kids = arithmetic_crossover(p1, p2, rng);
            for (auto* child : {&kids.first, &kids.second}) {
                if (static_cast<int>(next.size()) >= P) break;
                if (unit(rng) < config.mutation_rate)
                    *child = nonuniform_mutate(*child, bounds, g, config.generations,
                                               config.mutation_shape, rng);
                next.push_back(clip_to_bounds(*child, bounds));
            }
        }
        population = std::move(next);
        costs = evaluate(g);
    }
    return run;
}

}  // namespace femu
