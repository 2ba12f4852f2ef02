#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "femu/errors.hpp"
#include "femu/optimizers.hpp"

namespace femu {

void SaConfig::validate() const {
    if (initial_temperature && !(*initial_temperature > 0.0))
        throw std::invalid_argument("sa: initial_temperature must be positive");
    if (!initial_temperature && t0_samples < 2)
        throw std::invalid_argument("sa: t0_samples must be >= 2");
    if (!(cooling > 0.0 && cooling < 1.0)) throw std::invalid_argument("sa: cooling must lie in (0, 1)");
    if (schedule_scale < 1) throw std::invalid_argument("sa: schedule_scale must be >= 1");
    if (steps_per_temperature && *steps_per_temperature < 1)
        throw std::invalid_argument("sa: steps_per_temperature must be >= 1");
    if (!(frozen_ratio > 0.0 && frozen_ratio < 1.0))
        throw std::invalid_argument("sa: frozen_ratio must lie in (0, 1)");
    if (n_runs < 1) throw std::invalid_argument("sa: n_runs must be >= 1");
    if (!(step_scale > 0.0)) throw std::invalid_argument("sa: step_scale must be positive");
}

int SaConfig::stage_length(std::size_t dim) const {
    return steps_per_temperature ? *steps_per_temperature
                                 : schedule_scale * static_cast<int>(dim);
}

int SaConfig::stage_count() const {
    return static_cast<int>(std::ceil(std::log(frozen_ratio) / std::log(cooling)));
}

bool metropolis_accept(double delta, double temperature, double u) {
    if (delta < 0.0) return true;
    return u < std::exp(-delta / temperature);
}

namespace {

double checked(double value, int run, std::size_t evaluation) {
    if (!std::isfinite(value))
        throw OptimizerError("sa: non-finite objective in run " + std::to_string(run) +
                             " at evaluation " + std::to_string(evaluation));
    return value;
}

std::vector<double> uniform_point(const Bounds& bounds, Rng& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> x(bounds.size());
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = bounds.lower[j] + bounds.width(j) * unit(rng);
    return x;
}

}  // namespace

SaResult sa_minimize_detailed(const Objective& objective, const Bounds& bounds,
                              const SaConfig& config) {
    config.validate();
    bounds.validate();
    const std::size_t dim = bounds.size();

    SaResult result;
    OptimizerRun& run = result.run;
    run.seed = config.seed;

    if (config.initial_temperature) {
        result.initial_temperature = *config.initial_temperature;
    } else {
        Rng rng = make_rng(config.seed, 0);
        double mean = 0.0, m2 = 0.0;
        for (int i = 0; i < config.t0_samples; ++i) {
            const double c = checked(objective(uniform_point(bounds, rng)), 0, run.evaluations);
            ++run.evaluations;
            const double d = c - mean;
            mean += d / (i + 1);
            m2 += d * (c - mean);
        }
        const double sd = std::sqrt(m2 / (config.t0_samples - 1));
        // A flat objective gives no scale; any positive temperature is equivalent.
        result.initial_temperature = sd > 0.0 ? sd : 1.0;
    }

    const int stages = config.stage_count();
    const int stage_length = config.stage_length(dim);
    bool have_best = false;
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    for (int r = 0; r < config.n_runs; ++r) {
        Rng rng = make_rng(config.seed, static_cast<std::uint64_t>(r) + 1);
        SaRunStats stats;

        std::vector<double> current = uniform_point(bounds, rng);
        double energy = checked(objective(current), r, run.evaluations);
        ++stats.evaluations;
        double run_best = energy;
        if (!have_best || energy < run.best_cost) {
            run.best_cost = energy;
            run.best_params = current;
            have_best = true;
        }

        double temperature = result.initial_temperature;
        std::vector<double> proposal(dim);
        for (int s = 0; s < stages; ++s) {
            for (int k = 0; k < stage_length; ++k) {
                for (std::size_t j = 0; j < dim; ++j) {
                    const double x = current[j] + config.step_scale * bounds.width(j) * normal(rng);
                    proposal[j] = std::clamp(x, bounds.lower[j], bounds.upper[j]);
                }
                const double e_new =
                    checked(objective(proposal), r, run.evaluations + stats.evaluations);
                ++stats.evaluations;
                if (metropolis_accept(e_new - energy, temperature, unit(rng))) {
                    current = proposal;
                    energy = e_new;
                }
                run_best = std::min(run_best, e_new);
                if (e_new < run.best_cost) {
                    run.best_cost = e_new;
                    run.best_params = proposal;
                }
            }
            run.history.push_back(run.best_cost);
            temperature *= config.cooling;
        }
        stats.best_cost = run_best;
        run.evaluations += stats.evaluations;
        result.runs.push_back(stats);
    }
    return result;
}

OptimizerRun sa_minimize(const Objective& objective, const Bounds& bounds, const SaConfig& config) {
    return sa_minimize_detailed(objective, bounds, config).run;
}

}  // namespace femu
