#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "femu/bounds.hpp"

namespace femu {

/// Scalar cost over a parameter vector. Must be pure and safe to call from
/// several threads at once.
using Objective = std::function<double(std::span<const double>)>;

using Rng = std::mt19937_64;

/// Independent stream for (seed, stream) pairs, e.g. one per annealing run.
Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0);

struct OptimizerRun {
    std::vector<double> best_params;
    double best_cost = 0.0;
    std::vector<double> history;  // best-so-far cost, one entry per step/generation/stage
    std::size_t evaluations = 0;
    std::uint64_t seed = 0;

    bool operator==(const OptimizerRun&) const = default;
};

/// Evaluates each candidate, writing costs in input order. `threads` > 1 splits
/// the batch into contiguous chunks; the result does not depend on the split.
std::vector<double> evaluate_batch(const Objective& objective,
                                   std::span<const std::vector<double>> candidates, int threads);

// ---------------------------------------------------------------------------
// Particle swarm

struct PsoConfig {
    int swarm_size = 50;
    int max_steps = 100;
    double inertia = 0.72;
    double c1 = 1.49;
    double c2 = 1.49;
    /// Cap on |v_j| as a fraction of the bound width; unset means no cap.
    std::optional<double> v_max_fraction;
    /// Draw r1, r2 per dimension instead of once per particle per step.
    bool per_dimension_random = false;
    std::uint64_t seed = 1;
    int threads = 1;

    void validate() const;
};

struct Particle {
    std::vector<double> position;
    std::vector<double> velocity;
    std::vector<double> pbest;
    double pbest_cost = 0.0;
};

/// Called after initialisation (step 0) and after every update step.
using PsoObserver =
    std::function<void(int step, std::span<const Particle> swarm, double gbest_cost)>;

OptimizerRun pso_minimize(const Objective& objective, const Bounds& bounds, const PsoConfig& config,
                          const PsoObserver& observer = {});

// ---------------------------------------------------------------------------
// Simulated annealing

struct SaConfig {
    /// Unset: standard deviation of the objective over `t0_samples` uniform draws.
    std::optional<double> initial_temperature;
    int t0_samples = 50;
    double cooling = 0.9;  // T <- cooling * T after each stage
    /// Stage length is schedule_scale * dimension unless steps_per_temperature is set.
    int schedule_scale = 4;
    std::optional<int> steps_per_temperature;
    /// Frozen once T < frozen_ratio * T0.
    double frozen_ratio = 1e-6;
    int n_runs = 3;
    double step_scale = 0.05;  // proposal std as a fraction of each bound width
    std::uint64_t seed = 1;

    void validate() const;
    int stage_length(std::size_t dim) const;
    int stage_count() const;
};

/// Metropolis rule: always accept improvements; accept a worsening move of
/// size delta with probability exp(-delta / T). `u` is a U[0,1) draw.
bool metropolis_accept(double delta, double temperature, double u);

struct SaRunStats {
    std::size_t evaluations = 0;
    double best_cost = 0.0;
};

struct SaResult {
    OptimizerRun run;
    std::vector<SaRunStats> runs;
    double initial_temperature = 0.0;
};

SaResult sa_minimize_detailed(const Objective& objective, const Bounds& bounds,
                              const SaConfig& config);

OptimizerRun sa_minimize(const Objective& objective, const Bounds& bounds, const SaConfig& config);

// ---------------------------------------------------------------------------
// Genetic algorithm

struct GaConfig {
    int population_size = 600;
    int generations = 100;
    double select_best_probability = 0.08;  // q of normalised geometric selection
    double crossover_rate = 0.6;
    double mutation_rate = 0.2;
    double mutation_shape = 3.0;  // b
    std::uint64_t seed = 1;
    int threads = 1;

    void validate() const;
};

/// Normalised geometric pmf: P(r) = q' (1-q)^r, q' = q / (1 - (1-q)^P).
std::vector<double> normalized_geometric_pmf(int population, double q);

/// Rank (0 = best) drawn from the normalised geometric distribution.
int normalized_geometric_select(int population, double q, Rng& rng);

struct Offspring {
    std::vector<double> first;
    std::vector<double> second;
};

/// c1 = a p1 + (1-a) p2, c2 = (1-a) p1 + a p2.
Offspring arithmetic_crossover(std::span<const double> parent1, std::span<const double> parent2,
                               double a);
Offspring arithmetic_crossover(std::span<const double> parent1, std::span<const double> parent2,
                               Rng& rng);

/// Step towards a bound of size gap * (1 - u^((1 - g/G)^b)).
double nonuniform_delta(double gap, int generation, int max_generations, double shape, double u);

/// Moves one random coordinate towards a random bound by nonuniform_delta.
std::vector<double> nonuniform_mutate(std::span<const double> individual, const Bounds& bounds,
                                      int generation, int max_generations, double shape, Rng& rng);

/// `generations` evaluation rounds of `population_size` individuals each,
/// the first being the random initial population; elitist.
OptimizerRun ga_minimize(const Objective& objective, const Bounds& bounds, const GaConfig& config);

}  // namespace femu
