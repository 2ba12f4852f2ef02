#pragma once

#include <span>
#include <vector>

#include "femu/beam_fe.hpp"
#include "femu/bounds.hpp"

namespace femu {

/// Frequency-matching problem over per-element moduli.
struct UpdatingProblem {
    StructureModel base_model;
    std::vector<double> target_frequencies;  // Hz, ascending
    std::vector<double> weights;             // one per target mode
    Bounds bounds;                           // Pa, one pair per element

    int n_modes() const { return static_cast<int>(target_frequencies.size()); }

    void validate() const;
};

struct CostEvaluation {
    std::vector<double> params;
    std::vector<double> frequencies;  // Hz, model modes paired to targets by index
    double cost = 0.0;
};

/// gamma_i = ((f_i^target - f_i^initial) / f_i^target)^2
std::vector<double> default_weights(std::span<const double> targets,
                                    std::span<const double> initial);

/// sum_i gamma_i ((f_i^target - f_i) / f_i^target)^2
double weighted_frequency_cost(std::span<const double> targets, std::span<const double> weights,
                               std::span<const double> frequencies);

/// Applies `params` as element moduli, assembles, solves the first N elastic modes
/// and returns the weighted relative frequency error. No clipping is applied here.
CostEvaluation evaluate_cost(const UpdatingProblem& problem, std::span<const double> params);

/// First `n_modes` elastic natural frequencies (Hz) of `model`.
std::vector<double> model_frequencies(const StructureModel& model, int n_modes);

struct FrequencyErrorTable {
    std::vector<double> percent;  // 100 |f^m - f| / f^m
    double mean = 0.0;
};

FrequencyErrorTable frequency_error_table(std::span<const double> targets,
                                          std::span<const double> frequencies);

}  // namespace femu
