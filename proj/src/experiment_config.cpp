#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <set>
#include <string>

#include "femu/errors.hpp"
#include "femu/experiment.hpp"
#include "femu/modal.hpp"
#include "femu/structure_io.hpp"

namespace femu {
namespace {

using nlohmann::json;

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
    if (!obj.is_object()) throw ConfigError(where + ": expected an object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, value] : obj.items())
        if (!ok.contains(key)) throw ConfigError(where + "." + key + ": unknown field");
}

const json& require(const json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key)) throw ConfigError(where + ": missing field '" + key + "'");
    return obj.at(key);
}

template <typename T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    try {
        if constexpr (std::is_same_v<T, bool>) {
            if (!v.is_boolean()) throw ConfigError(where + "." + key + ": expected true/false");
        } else if constexpr (std::is_integral_v<T>) {
            if (!v.is_number_integer()) throw ConfigError(where + "." + key + ": expected an integer");
        } else {
            if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
        }
        out = v.get<T>();
    } catch (const json::exception& ex) {
        throw ConfigError(where + "." + key + ": " + ex.what());
    }
}

template <typename T>
void read_optional(const json& obj, const char* key, std::optional<T>& out, const std::string& where) {
    if (!obj.contains(key) || obj.at(key).is_null()) return;
    T value{};
    read(obj, key, value, where);
    out = value;
}

std::vector<double> read_numbers(const json& v, const std::string& where) {
    if (!v.is_array()) throw ConfigError(where + ": expected an array of numbers");
    std::vector<double> out;
    for (const auto& x : v) {
        if (!x.is_number()) throw ConfigError(where + ": expected an array of numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

void rethrow_as_config(const std::string& where, const std::exception& ex) {
    throw ConfigError(where + ": " + ex.what());
}

PsoConfig parse_pso(const json& b, const std::string& where) {
    check_keys(b, {"swarm_size", "max_steps", "inertia", "c1", "c2", "v_max_fraction",
                   "per_dimension_random"}, where);
    PsoConfig c;
    read(b, "swarm_size", c.swarm_size, where);
    read(b, "max_steps", c.max_steps, where);
    read(b, "inertia", c.inertia, where);
    read(b, "c1", c.c1, where);
    read(b, "c2", c.c2, where);
    read_optional(b, "v_max_fraction", c.v_max_fraction, where);
    read(b, "per_dimension_random", c.per_dimension_random, where);
    try {
        c.validate();
    } catch (const std::invalid_argument& ex) {
        rethrow_as_config(where, ex);
    }
    return c;
}

SaConfig parse_sa(const json& b, const std::string& where) {
    check_keys(b, {"initial_temperature", "t0_samples", "cooling", "schedule_scale",
                   "steps_per_temperature", "frozen_ratio", "n_runs", "step_scale"}, where);
    SaConfig c;
    read_optional(b, "initial_temperature", c.initial_temperature, where);
    read(b, "t0_samples", c.t0_samples, where);
    read(b, "cooling", c.cooling, where);
    read(b, "schedule_scale", c.schedule_scale, where);
    read_optional(b, "steps_per_temperature", c.steps_per_temperature, where);
    read(b, "frozen_ratio", c.frozen_ratio, where);
    read(b, "n_runs", c.n_runs, where);
    read(b, "step_scale", c.step_scale, where);
    try {
        c.validate();
    } catch (const std::invalid_argument& ex) {
        rethrow_as_config(where, ex);
    }
    return c;
}

GaConfig parse_ga(const json& b, const std::string& where) {
    check_keys(b, {"population_size", "generations", "select_best_probability", "crossover_rate",
                   "mutation_rate", "mutation_shape"}, where);
    GaConfig c;
    read(b, "population_size", c.population_size, where);
    read(b, "generations", c.generations, where);
    read(b, "select_best_probability", c.select_best_probability, where);
    read(b, "crossover_rate", c.crossover_rate, where);
    read(b, "mutation_rate", c.mutation_rate, where);
    read(b, "mutation_shape", c.mutation_shape, where);
    try {
        c.validate();
    } catch (const std::invalid_argument& ex) {
        rethrow_as_config(where, ex);
    }
    return c;
}

SurrogateLoopConfig parse_surrogate(const json& b, const std::string& where) {
    check_keys(b, {"n_initial_samples", "n_refinements", "initial_training_cycles",
                   "refresh_training_cycles", "hidden_units", "inner_ga"}, where);
    SurrogateLoopConfig c;
    read(b, "n_initial_samples", c.n_initial_samples, where);
    read(b, "n_refinements", c.n_refinements, where);
    read(b, "initial_training_cycles", c.initial_training_cycles, where);
    read(b, "refresh_training_cycles", c.refresh_training_cycles, where);
    read(b, "hidden_units", c.hidden_units, where);
    if (b.contains("inner_ga")) c.inner = parse_ga(b.at("inner_ga"), where + ".inner_ga");
    try {
        c.validate();
    } catch (const std::invalid_argument& ex) {
        rethrow_as_config(where, ex);
    }
    return c;
}

json load_json(const std::filesystem::path& path, const std::string& what) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + what + " file " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& ex) {
        throw ConfigError(path.string() + ": " + ex.what());
    }
}

void load_targets_file(ExperimentConfig& c, const std::filesystem::path& path) {
    const json doc = load_json(path, "targets");
    const std::string where = "targets(" + path.filename().string() + ")";
    check_keys(doc, {"schema", "version", "name", "note", "frequencies_hz", "mode_shapes"}, where);
    if (require(doc, "schema", where) != kTargetsSchema)
        throw ConfigError(where + ".schema: expected '" + std::string(kTargetsSchema) + "'");
    if (require(doc, "version", where) != kExperimentSchemaVersion)
        throw ConfigError(where + ".version: unsupported");
    c.target_frequencies = read_numbers(require(doc, "frequencies_hz", where), where + ".frequencies_hz");
    if (doc.contains("mode_shapes")) {
        const json& rows = doc.at("mode_shapes");
        if (!rows.is_array() || rows.size() != c.structure.measured_dofs.size())
            throw ConfigError(where + ".mode_shapes: need one row per measured DOF");
        Eigen::MatrixXd shapes(static_cast<Eigen::Index>(rows.size()),
                               static_cast<Eigen::Index>(c.target_frequencies.size()));
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const auto row = read_numbers(rows[r], where + ".mode_shapes");
            if (row.size() != c.target_frequencies.size())
                throw ConfigError(where + ".mode_shapes: need one column per target mode");
            for (std::size_t m = 0; m < row.size(); ++m)
                shapes(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(m)) = row[m];
        }
        c.target_shapes = shapes;
    }
}

void resolve_synthetic(ExperimentConfig& c, const json& block, const std::string& where) {
    check_keys(block, {"true_moduli", "reduce", "noise_percent", "noise_seed"}, where);
    SyntheticTargets s;
    if (block.contains("true_moduli") == block.contains("reduce"))
        throw ConfigError(where + ": give exactly one of 'true_moduli' or 'reduce'");
    if (block.contains("true_moduli")) {
        s.true_moduli = read_numbers(block.at("true_moduli"), where + ".true_moduli");
    } else {
        const json& reduce = block.at("reduce");
        check_keys(reduce, {"elements", "factor"}, where + ".reduce");
        double factor = 1.0;
        read(reduce, "factor", factor, where + ".reduce");
        if (!(factor > 0.0)) throw ConfigError(where + ".reduce.factor: must be positive");
        s.true_moduli = c.structure.moduli();
        for (const auto& e : require(reduce, "elements", where + ".reduce")) {
            if (!e.is_number_integer() || e.get<int>() < 0 ||
                e.get<std::size_t>() >= s.true_moduli.size())
                throw ConfigError(where + ".reduce.elements: invalid element index " + e.dump());
            s.true_moduli[e.get<std::size_t>()] *= factor;
        }
    }
    read(block, "noise_percent", s.noise_percent, where);
    if (!(s.noise_percent >= 0.0)) throw ConfigError(where + ".noise_percent: must be >= 0");
    std::uint64_t noise_seed = 0;
    read(block, "noise_seed", noise_seed, where);

    ModalSolution truth;
    try {
        truth = structure_modes(apply_parameters(c.structure, s.true_moduli), c.n_modes);
    } catch (const std::exception& ex) {
        rethrow_as_config(where, ex);
    }
    c.target_frequencies.assign(truth.frequencies.data(), truth.frequencies.data() + truth.frequencies.size());
    if (s.noise_percent > 0.0) {
        Rng rng = make_rng(noise_seed, 7);
        std::normal_distribution<double> normal(0.0, 1.0);
        for (double& f : c.target_frequencies) f *= 1.0 + 0.01 * s.noise_percent * normal(rng);
    }
    if (!c.structure.measured_dofs.empty())
        c.target_shapes = select_measured(truth, c.structure.measured_dofs);
    c.synthetic = std::move(s);
}

}  // namespace

std::string to_string(OptimizerKind kind) {
    switch (kind) {
        case OptimizerKind::Pso:
            return "pso";
        case OptimizerKind::Sa:
            return "sa";
        case OptimizerKind::Ga:
            return "ga";
        case OptimizerKind::Surrogate:
            return "surrogate";
    }
    return "unknown";
}

std::string to_string(WeightRule rule) {
    return rule == WeightRule::InitialError ? "initial-error" : "uniform";
}

void ExperimentConfig::set_seed(std::uint64_t value) {
    seed = value;
    pso.seed = value;
    sa.seed = value;
    ga.seed = value;
    surrogate.seed = value;
    surrogate.inner.seed = value;
}

ExperimentConfig parse_experiment_config(const json& doc, const std::filesystem::path& base_dir) {
    const std::string root = "experiment";
    check_keys(doc, {"schema", "version", "name", "note", "structure", "targets", "weights", "n_modes",
                     "bounds", "optimizer", "seed", "threads", "output_dir"}, root);
    if (require(doc, "schema", root) != kExperimentSchema)
        throw ConfigError("experiment.schema: expected '" + std::string(kExperimentSchema) + "'");
    if (require(doc, "version", root) != kExperimentSchemaVersion)
        throw ConfigError("experiment.version: unsupported version " + doc.at("version").dump());

    ExperimentConfig c;
    c.source = doc;
    c.name = doc.value("name", std::string("experiment"));

    const json& structure = require(doc, "structure", root);
    if (!structure.is_string()) throw ConfigError("experiment.structure: expected a file path");
    c.structure_path = base_dir / structure.get<std::string>();
    c.structure = load_structure(c.structure_path);

    read(doc, "n_modes", c.n_modes, root);
    if (c.n_modes < 1) throw ConfigError("experiment.n_modes: must be >= 1");
    read(doc, "seed", c.seed, root);
    read(doc, "threads", c.threads, root);
    if (c.threads < 1) throw ConfigError("experiment.threads: must be >= 1");

    const json& targets = require(doc, "targets", root);
    check_keys(targets, {"file", "synthetic"}, "experiment.targets");
    if (targets.contains("file") == targets.contains("synthetic"))
        throw ConfigError("experiment.targets: give exactly one of 'file' or 'synthetic'");
    if (targets.contains("file")) {
        c.targets_path = base_dir / targets.at("file").get<std::string>();
        load_targets_file(c, *c.targets_path);
        if (!doc.contains("n_modes")) c.n_modes = static_cast<int>(c.target_frequencies.size());
        if (static_cast<std::size_t>(c.n_modes) > c.target_frequencies.size())
            throw ConfigError("experiment.n_modes: exceeds the number of target frequencies");
        c.target_frequencies.resize(static_cast<std::size_t>(c.n_modes));
        if (c.target_shapes) c.target_shapes = c.target_shapes->leftCols(c.n_modes).eval();
    } else {
        resolve_synthetic(c, targets.at("synthetic"), "experiment.targets.synthetic");
    }

    const std::string weights = doc.value("weights", std::string("initial-error"));
    if (weights == "initial-error") {
        c.weights = WeightRule::InitialError;
    } else if (weights == "uniform") {
        c.weights = WeightRule::Uniform;
    } else {
        throw ConfigError("experiment.weights: expected 'initial-error' or 'uniform'");
    }

    const json& bounds = require(doc, "bounds", root);
    check_keys(bounds, {"lower", "upper"}, "experiment.bounds");
    const std::size_t n_el = c.structure.element_count();
    for (auto [key, dest] : {std::pair{"lower", &c.bounds.lower}, std::pair{"upper", &c.bounds.upper}}) {
        const json& v = require(bounds, key, "experiment.bounds");
        *dest = v.is_number() ? std::vector<double>(n_el, v.get<double>())
                              : read_numbers(v, std::string("experiment.bounds.") + key);
    }
    try {
        c.bounds.validate();
    } catch (const std::invalid_argument& ex) {
        rethrow_as_config("experiment.bounds", ex);
    }
    if (c.bounds.size() != n_el) throw ConfigError("experiment.bounds: need one pair per element");

    const json& optimizer = require(doc, "optimizer", root);
    if (!optimizer.is_object() || optimizer.size() != 1)
        throw ConfigError("experiment.optimizer: exactly one of pso, sa, ga, surrogate is required");
    const auto& [kind, block] = *optimizer.items().begin();
    const std::string where = "experiment.optimizer." + kind;
    if (kind == "pso") {
        c.optimizer = OptimizerKind::Pso;
        c.pso = parse_pso(block, where);
    } else if (kind == "sa") {
        c.optimizer = OptimizerKind::Sa;
        c.sa = parse_sa(block, where);
    } else if (kind == "ga") {
        c.optimizer = OptimizerKind::Ga;
        c.ga = parse_ga(block, where);
    } else if (kind == "surrogate") {
        c.optimizer = OptimizerKind::Surrogate;
        c.surrogate = parse_surrogate(block, where);
    } else {
        throw ConfigError("experiment.optimizer." + kind + ": unknown optimizer");
    }
    c.pso.threads = c.ga.threads = c.surrogate.threads = c.threads;
    c.surrogate.inner.threads = 1;
    c.set_seed(c.seed);

    c.output_dir = base_dir / doc.value("output_dir", "out/" + c.name);

    try {
        make_problem(c).validate();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& ex) {
        rethrow_as_config("experiment", ex);
    }
    return c;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    return parse_experiment_config(load_json(path, "experiment"), path.parent_path());
}

}  // namespace femu
