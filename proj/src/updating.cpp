#include "femu/updating.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "femu/modal.hpp"

namespace femu {

std::vector<double> clip_to_bounds(std::span<const double> params, const Bounds& bounds) {
    if (params.size() != bounds.size())
        throw std::invalid_argument("clip_to_bounds: parameter/bounds size mismatch");
    std::vector<double> out(params.begin(), params.end());
    for (std::size_t j = 0; j < out.size(); ++j)
        out[j] = std::clamp(out[j], bounds.lower[j], bounds.upper[j]);
    return out;
}

void UpdatingProblem::validate() const {
    base_model.validate();
    if (target_frequencies.empty()) throw std::invalid_argument("at least one target frequency required");
    for (std::size_t i = 0; i < target_frequencies.size(); ++i) {
        if (!(target_frequencies[i] > 0.0))
            throw std::invalid_argument("target frequencies must be positive");
        if (i > 0 && !(target_frequencies[i] > target_frequencies[i - 1]))
            throw std::invalid_argument("target frequencies must be strictly ascending");
    }
    if (weights.size() != target_frequencies.size())
        throw std::invalid_argument("need one weight per target mode");
    if (std::any_of(weights.begin(), weights.end(), [](double w) { return !(w >= 0.0); }))
        throw std::invalid_argument("weights must be non-negative");
    if (std::none_of(weights.begin(), weights.end(), [](double w) { return w > 0.0; }))
        throw std::invalid_argument(
            "all weights are zero: the objective is identically zero and cannot be updated");
    bounds.validate();
    if (bounds.size() != base_model.element_count())
        throw std::invalid_argument("need one bound pair per element");
}

std::vector<double> default_weights(std::span<const double> targets,
                                    std::span<const double> initial) {
    if (targets.size() != initial.size())
        throw std::invalid_argument("default_weights: length mismatch");
    std::vector<double> gamma(targets.size());
    for (std::size_t i = 0; i < targets.size(); ++i) {
        if (targets[i] == 0.0) throw std::invalid_argument("default_weights: zero target frequency");
        const double rel = (targets[i] - initial[i]) / targets[i];
        gamma[i] = rel * rel;
    }
    return gamma;
}

double weighted_frequency_cost(std::span<const double> targets, std::span<const double> weights,
                               std::span<const double> frequencies) {
    if (targets.size() != weights.size() || targets.size() != frequencies.size())
        throw std::invalid_argument("weighted_frequency_cost: length mismatch");
    double cost = 0.0;
    for (std::size_t i = 0; i < targets.size(); ++i) {
        const double rel = (targets[i] - frequencies[i]) / targets[i];
        cost += weights[i] * rel * rel;
    }
    return cost;
}

std::vector<double> model_frequencies(const StructureModel& model, int n_modes) {
    const ModalSolution modes = structure_modes(model, n_modes);
    return {modes.frequencies.data(), modes.frequencies.data() + modes.frequencies.size()};
}

CostEvaluation evaluate_cost(const UpdatingProblem& problem, std::span<const double> params) {
    if (std::none_of(problem.weights.begin(), problem.weights.end(), [](double w) { return w > 0.0; }))
        throw std::invalid_argument(
            "all weights are zero: the objective is identically zero and cannot be updated");
    CostEvaluation out;
    out.params.assign(params.begin(), params.end());
    out.frequencies = model_frequencies(apply_parameters(problem.base_model, params), problem.n_modes());
    out.cost = weighted_frequency_cost(problem.target_frequencies, problem.weights, out.frequencies);
    return out;
}

FrequencyErrorTable frequency_error_table(std::span<const double> targets,
                                          std::span<const double> frequencies) {
    if (targets.size() != frequencies.size() || targets.empty())
        throw std::invalid_argument("frequency_error_table: length mismatch or empty");
    FrequencyErrorTable t;
    t.percent.resize(targets.size());
    for (std::size_t i = 0; i < targets.size(); ++i) {
        if (!(targets[i] > 0.0)) throw std::invalid_argument("target frequency must be positive");
        t.percent[i] = 100.0 * std::abs(targets[i] - frequencies[i]) / targets[i];
    }
    t.mean = std::accumulate(t.percent.begin(), t.percent.end(), 0.0) /
             static_cast<double>(t.percent.size());
    return t;
}

}  // namespace femu
