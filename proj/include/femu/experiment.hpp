#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "femu/beam_fe.hpp"
#include "femu/bounds.hpp"
#include "femu/optimizers.hpp"
#include "femu/surrogate.hpp"
#include "femu/updating.hpp"

namespace femu {

inline constexpr const char* kExperimentSchema = "femu.experiment";
inline constexpr const char* kTargetsSchema = "femu.targets";
inline constexpr int kExperimentSchemaVersion = 1;

enum class OptimizerKind { Pso, Sa, Ga, Surrogate };
enum class WeightRule { InitialError, Uniform };

std::string to_string(OptimizerKind kind);
std::string to_string(WeightRule rule);

/// Targets generated from the structure itself with known moduli.
struct SyntheticTargets {
    std::vector<double> true_moduli;  // Pa, one per element
    double noise_percent = 0.0;       // Gaussian frequency noise, % of each frequency
};

struct ExperimentConfig {
    std::string name;
    std::filesystem::path structure_path;
    StructureModel structure;

    std::optional<std::filesystem::path> targets_path;
    std::optional<SyntheticTargets> synthetic;
    /// Resolved at load time from the targets file or the synthetic truth model.
    std::vector<double> target_frequencies;
    std::optional<Eigen::MatrixXd> target_shapes;  // measured DOFs x modes

    WeightRule weights = WeightRule::InitialError;
    int n_modes = 5;
    Bounds bounds;

    OptimizerKind optimizer = OptimizerKind::Pso;
    PsoConfig pso;
    SaConfig sa;
    GaConfig ga;
    SurrogateLoopConfig surrogate;

    std::uint64_t seed = 1;
    int threads = 1;
    std::filesystem::path output_dir;

    nlohmann::json source;  // the parsed document, echoed into reports

    /// Overrides the experiment seed and every optimiser seed derived from it.
    void set_seed(std::uint64_t value);
};

/// Parses and validates; relative paths resolve against `base_dir`.
ExperimentConfig parse_experiment_config(const nlohmann::json& doc,
                                         const std::filesystem::path& base_dir);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// Builds the updating problem (weights computed from the initial model).
UpdatingProblem make_problem(const ExperimentConfig& config);

struct RunReport {
    std::string name;
    OptimizerKind optimizer = OptimizerKind::Pso;
    std::uint64_t seed = 0;
    WeightRule weights_rule = WeightRule::InitialError;

    std::vector<double> measured;
    std::vector<double> initial;
    std::vector<double> updated;
    std::vector<double> weights;
    FrequencyErrorTable initial_errors;
    FrequencyErrorTable updated_errors;
    double initial_cost = 0.0;
    double updated_cost = 0.0;

    std::vector<double> initial_moduli;
    std::vector<double> updated_moduli;

    /// Present only when target mode shapes were supplied.
    std::vector<double> comac_initial;
    std::vector<double> comac_updated;
    std::optional<double> average_comac_initial;
    std::optional<double> average_comac_updated;

    OptimizerRun run;
    std::vector<std::size_t> sa_run_evaluations;
    std::optional<SurrogateResult> surrogate;

    double wall_seconds = 0.0;
    nlohmann::json config_echo;
};

RunReport run_experiment(const ExperimentConfig& config);

struct ComparisonReport {
    std::vector<RunReport> rows;
};

/// Runs every config; all must describe the same updating problem.
ComparisonReport compare_optimizers(std::span<const ExperimentConfig> configs);

/// True when two configs share structure, targets, weights, modes and bounds.
bool same_problem(const ExperimentConfig& a, const ExperimentConfig& b);

/// Human-readable frequency, moduli and COMAC tables.
std::string format_report(const RunReport& report);
std::string format_comparison(const ComparisonReport& report);

nlohmann::json report_to_json(const RunReport& report);

/// Writes frequencies.csv, moduli.csv, history.csv, comac.csv (when shapes
/// exist), surrogate_*.csv (surrogate runs), report.txt and summary.json.
/// Returns the paths written.
std::vector<std::filesystem::path> emit_report(const RunReport& report,
                                               const std::filesystem::path& dir);

std::vector<std::filesystem::path> emit_comparison(const ComparisonReport& report,
                                                   const std::filesystem::path& dir);

}  // namespace femu
