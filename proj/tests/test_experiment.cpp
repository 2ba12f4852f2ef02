#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "femu/errors.hpp"
#include "femu/experiment.hpp"
#include "femu/structure_io.hpp"

using namespace femu;
namespace fs = std::filesystem;

namespace {

const fs::path kExperiments = default_data_dir() / "experiments";

nlohmann::json small_config(const std::string& optimizer) {
    auto doc = nlohmann::json::parse(R"({
      "schema": "femu.experiment",
      "version": 1,
      "name": "small",
      "structure": "../h_structure.default.json",
      "targets": {"synthetic": {"reduce": {"elements": [2, 3, 4], "factor": 0.85}}},
      "weights": "uniform",
      "bounds": {"lower": 5e10, "upper": 8e10},
      "seed": 3
    })");
    if (optimizer == "pso") doc["optimizer"] = {{"pso", {{"swarm_size", 8}, {"max_steps", 5}}}};
    if (optimizer == "sa")
        doc["optimizer"] = {{"sa", {{"frozen_ratio", 0.5}, {"n_runs", 1}, {"t0_samples", 5}}}};
    if (optimizer == "ga") doc["optimizer"] = {{"ga", {{"population_size", 8}, {"generations", 4}}}};
    if (optimizer == "surrogate")
        doc["optimizer"] = {{"surrogate",
                             {{"n_initial_samples", 12},
                              {"n_refinements", 2},
                              {"initial_training_cycles", 10},
                              {"inner_ga", {{"population_size", 10}, {"generations", 5}}}}}};
    return doc;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("femu_test_" + name);
    fs::remove_all(dir);
    return dir;
}

}  // namespace

TEST(ExperimentConfig, ShippedConfigsParse) {
    int count = 0;
    for (const auto& entry : fs::directory_iterator(kExperiments)) {
        SCOPED_TRACE(entry.path().string());
        const auto c = load_experiment_config(entry.path());
        EXPECT_EQ(c.target_frequencies.size(), 5u);
        EXPECT_EQ(c.bounds.size(), 12u);
        ++count;
    }
    EXPECT_GE(count, 8);
}

TEST(ExperimentConfig, MeasuredTargetsFromFile) {
    const auto c = load_experiment_config(kExperiments / "measured-pso.json");
    EXPECT_EQ(c.target_frequencies, (std::vector<double>{53.9, 117.3, 208.4, 254.0, 445.1}));
    EXPECT_FALSE(c.target_shapes.has_value());
    EXPECT_EQ(c.weights, WeightRule::InitialError);
    EXPECT_EQ(c.bounds.lower, std::vector<double>(12, 6e10));
}

TEST(ExperimentConfig, SyntheticTargetsCarryShapes) {
    const auto c = parse_experiment_config(small_config("pso"), kExperiments);
    ASSERT_TRUE(c.synthetic.has_value());
    EXPECT_EQ(c.synthetic->true_moduli[3], 7e10 * 0.85);
    EXPECT_EQ(c.synthetic->true_moduli[0], 7e10);
    ASSERT_TRUE(c.target_shapes.has_value());
    EXPECT_EQ(c.target_shapes->rows(), 15);
    EXPECT_EQ(c.target_shapes->cols(), 5);
}

TEST(ExperimentConfig, SeedOverridePropagates) {
    auto c = parse_experiment_config(small_config("surrogate"), kExperiments);
    c.set_seed(99);
    EXPECT_EQ(c.pso.seed, 99u);
    EXPECT_EQ(c.sa.seed, 99u);
    EXPECT_EQ(c.ga.seed, 99u);
    EXPECT_EQ(c.surrogate.seed, 99u);
}

TEST(ExperimentConfig, ErrorsNameTheField) {
    auto expect_field = [](nlohmann::json doc, const std::string& field) {
        try {
            parse_experiment_config(doc, kExperiments);
            ADD_FAILURE() << "no error for " << field;
        } catch (const ConfigError& ex) {
            EXPECT_NE(std::string(ex.what()).find(field), std::string::npos) << ex.what();
        }
    };
    auto typo = small_config("pso");
    typo["optimizer"]["pso"]["swarm"] = 3;
    expect_field(typo, "experiment.optimizer.pso.swarm");

    auto two = small_config("pso");
    two["optimizer"]["ga"] = nlohmann::json::object();
    expect_field(two, "experiment.optimizer");

    auto bounds = small_config("ga");
    bounds["bounds"]["upper"] = 4e10;
    expect_field(bounds, "experiment.bounds");

    auto weights = small_config("ga");
    weights["weights"] = "equal";
    expect_field(weights, "experiment.weights");

    auto schema = small_config("ga");
    schema["schema"] = "femu.other";
    expect_field(schema, "experiment.schema");

    auto element = small_config("ga");
    element["targets"]["synthetic"]["reduce"]["elements"] = {12};
    expect_field(element, "reduce.elements");

    auto rate = small_config("ga");
    rate["optimizer"]["ga"]["crossover_rate"] = 1.5;
    expect_field(rate, "experiment.optimizer.ga");
}

TEST(ExperimentConfig, InitialErrorWeightsFromInitialModel) {
    const auto c = load_experiment_config(kExperiments / "measured-ga.json");
    const auto p = make_problem(c);
    const auto initial = model_frequencies(c.structure, 5);
    EXPECT_EQ(p.weights, default_weights(c.target_frequencies, initial));
}

TEST(RunExperiment, EveryOptimizerProducesConsistentReport) {
    for (const std::string opt : {"pso", "sa", "ga", "surrogate"}) {
        SCOPED_TRACE(opt);
        const auto c = parse_experiment_config(small_config(opt), kExperiments);
        const auto r = run_experiment(c);
        EXPECT_EQ(r.measured.size(), 5u);
        EXPECT_NEAR(r.updated_errors.mean,
                    std::accumulate(r.updated_errors.percent.begin(), r.updated_errors.percent.end(), 0.0) / 5.0,
                    1e-12);
        EXPECT_NEAR(r.updated_cost, r.run.best_cost, 1e-12 * (1.0 + r.run.best_cost));
        EXPECT_LE(r.updated_cost, r.initial_cost);
        ASSERT_TRUE(r.average_comac_updated.has_value());
        EXPECT_LE(*r.average_comac_updated, 1.0);
        EXPECT_EQ(r.surrogate.has_value(), opt == "surrogate");
        EXPECT_EQ(r.sa_run_evaluations.empty(), opt != "sa");
    }
}

TEST(RunExperiment, ReportsAreByteIdenticalAcrossRuns) {
    const auto c = parse_experiment_config(small_config("surrogate"), kExperiments);
    const auto d1 = scratch_dir("a");
    const auto d2 = scratch_dir("b");
    const auto files = emit_report(run_experiment(c), d1);
    emit_report(run_experiment(c), d2);
    int compared = 0;
    for (const auto& f : files) {
        if (f.extension() != ".csv") continue;
        EXPECT_EQ(slurp(f), slurp(d2 / f.filename())) << f;
        ++compared;
    }
    EXPECT_EQ(compared, 6);
    const auto freq = slurp(d1 / "frequencies.csv");
    EXPECT_EQ(freq.rfind("mean,", std::string::npos) != std::string::npos, true);
    fs::remove_all(d1);
    fs::remove_all(d2);
}

TEST(Compare, RejectsDifferentProblemsAndRunsMatchingOnes) {
    const auto a = parse_experiment_config(small_config("pso"), kExperiments);
    const auto b = parse_experiment_config(small_config("ga"), kExperiments);
    auto other_doc = small_config("sa");
    other_doc["weights"] = "initial-error";
    const auto other = parse_experiment_config(other_doc, kExperiments);
    EXPECT_TRUE(same_problem(a, b));
    EXPECT_FALSE(same_problem(a, other));
    EXPECT_THROW(compare_optimizers(std::vector<ExperimentConfig>{a, other}), ConfigError);

    const auto report = compare_optimizers(std::vector<ExperimentConfig>{a, b});
    ASSERT_EQ(report.rows.size(), 2u);
    const auto d1 = scratch_dir("cmp1");
    const auto d2 = scratch_dir("cmp2");
    emit_comparison(report, d1);
    emit_comparison(compare_optimizers(std::vector<ExperimentConfig>{a, b}), d2);
    EXPECT_EQ(slurp(d1 / "comparison.csv"), slurp(d2 / "comparison.csv"));
    EXPECT_NE(format_comparison(report).find("pso"), std::string::npos);
    fs::remove_all(d1);
    fs::remove_all(d2);
}
