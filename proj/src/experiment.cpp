#include <chrono>
#include <string>

#include "femu/errors.hpp"
#include "femu/experiment.hpp"
#include "femu/modal.hpp"

namespace femu {

UpdatingProblem make_problem(const ExperimentConfig& config) {
    UpdatingProblem p;
    p.base_model = config.structure;
    p.target_frequencies = config.target_frequencies;
    p.bounds = config.bounds;
    const auto n = static_cast<int>(config.target_frequencies.size());
    if (config.weights == WeightRule::InitialError) {
        const auto initial = model_frequencies(config.structure, n);
        p.weights = default_weights(p.target_frequencies, initial);
    } else {
        p.weights.assign(static_cast<std::size_t>(n), 1.0);
    }
    return p;
}

RunReport run_experiment(const ExperimentConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    const UpdatingProblem problem = make_problem(config);
    problem.validate();
    const Objective objective = [&problem](std::span<const double> x) {
        return evaluate_cost(problem, x).cost;
    };

    RunReport r;
    r.name = config.name;
    r.optimizer = config.optimizer;
    r.seed = config.seed;
    r.weights_rule = config.weights;
    r.config_echo = config.source;
    r.measured = problem.target_frequencies;
    r.weights = problem.weights;
    r.initial_moduli = config.structure.moduli();

    switch (config.optimizer) {
        case OptimizerKind::Pso:
            r.run = pso_minimize(objective, problem.bounds, config.pso);
            break;
        case OptimizerKind::Sa: {
            SaResult sa = sa_minimize_detailed(objective, problem.bounds, config.sa);
            for (const auto& s : sa.runs) r.sa_run_evaluations.push_back(s.evaluations);
            r.run = std::move(sa.run);
            break;
        }
        case OptimizerKind::Ga:
            r.run = ga_minimize(objective, problem.bounds, config.ga);
            break;
        case OptimizerKind::Surrogate:
            r.surrogate = surrogate_optimize(objective, problem.bounds, config.surrogate);
            r.run = r.surrogate->run;
            break;
    }
    r.updated_moduli = r.run.best_params;

    const int n = problem.n_modes();
    const ModalSolution initial_modes = structure_modes(config.structure, n);
    const ModalSolution updated_modes =
        structure_modes(apply_parameters(config.structure, r.updated_moduli), n);
    r.initial.assign(initial_modes.frequencies.data(), initial_modes.frequencies.data() + n);
    r.updated.assign(updated_modes.frequencies.data(), updated_modes.frequencies.data() + n);
    r.initial_errors = frequency_error_table(r.measured, r.initial);
    r.updated_errors = frequency_error_table(r.measured, r.updated);
    r.initial_cost = weighted_frequency_cost(r.measured, r.weights, r.initial);
    r.updated_cost = weighted_frequency_cost(r.measured, r.weights, r.updated);

    if (config.target_shapes && !config.structure.measured_dofs.empty()) {
        const auto& dofs = config.structure.measured_dofs;
        r.comac_initial = comac(*config.target_shapes, select_measured(initial_modes, dofs));
        r.comac_updated = comac(*config.target_shapes, select_measured(updated_modes, dofs));
        r.average_comac_initial = average_comac(r.comac_initial);
        r.average_comac_updated = average_comac(r.comac_updated);
    }

    r.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

bool same_problem(const ExperimentConfig& a, const ExperimentConfig& b) {
    if (a.structure.nodes.size() != b.structure.nodes.size()) return false;
    for (std::size_t i = 0; i < a.structure.nodes.size(); ++i) {
        const Node& p = a.structure.nodes[i];
        const Node& q = b.structure.nodes[i];
        if (p.x != q.x || p.y != q.y) return false;
    }
    if (a.structure.elements.size() != b.structure.elements.size()) return false;
    for (std::size_t i = 0; i < a.structure.elements.size(); ++i) {
        const FrameElement& p = a.structure.elements[i];
        const FrameElement& q = b.structure.elements[i];
        if (p.node_a != q.node_a || p.node_b != q.node_b || !(p.section == q.section) ||
            p.modulus != q.modulus)
            return false;
    }
    return a.structure.measured_dofs == b.structure.measured_dofs &&
           a.target_frequencies == b.target_frequencies && a.weights == b.weights &&
           a.n_modes == b.n_modes && a.bounds.lower == b.bounds.lower &&
           a.bounds.upper == b.bounds.upper;
}

ComparisonReport compare_optimizers(std::span<const ExperimentConfig> configs) {
    if (configs.empty()) throw ConfigError("compare: no experiments given");
    for (std::size_t i = 1; i < configs.size(); ++i)
        if (!same_problem(configs[0], configs[i]))
            throw ConfigError("compare: '" + configs[i].name + "' does not describe the same problem as '" +
                              configs[0].name + "'");
    ComparisonReport out;
    for (const auto& c : configs) out.rows.push_back(run_experiment(c));
    return out;
}

}  // namespace femu
