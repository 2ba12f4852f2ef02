#include <fmt/format.h>

#include <fstream>
#include <string>

#include "femu/errors.hpp"
#include "femu/experiment.hpp"

namespace femu {
namespace {

using nlohmann::json;

std::string num(double v) { return fmt::format("{:.17g}", v); }

void write_file(const std::filesystem::path& path, const std::string& text,
                std::vector<std::filesystem::path>& written) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
    if (!out) throw Error("failed writing " + path.string());
    written.push_back(path);
}

std::string frequencies_csv(const RunReport& r) {
    std::string s = "mode,measured_hz,initial_hz,updated_hz,initial_error_pct,updated_error_pct,weight\n";
    for (std::size_t i = 0; i < r.measured.size(); ++i)
        s += fmt::format("{},{},{},{},{},{},{}\n", i + 1, num(r.measured[i]), num(r.initial[i]),
                         num(r.updated[i]), num(r.initial_errors.percent[i]),
                         num(r.updated_errors.percent[i]), num(r.weights[i]));
    s += fmt::format("mean,,,,{},{},\n", num(r.initial_errors.mean), num(r.updated_errors.mean));
    return s;
}

std::string moduli_csv(const RunReport& r) {
    std::string s = "element,initial_pa,updated_pa,ratio\n";
    for (std::size_t i = 0; i < r.updated_moduli.size(); ++i)
        s += fmt::format("{},{},{},{}\n", i + 1, num(r.initial_moduli[i]), num(r.updated_moduli[i]),
                         num(r.updated_moduli[i] / r.initial_moduli[i]));
    return s;
}

std::string history_csv(const OptimizerRun& run) {
    std::string s = "index,best_cost\n";
    for (std::size_t i = 0; i < run.history.size(); ++i)
        s += fmt::format("{},{}\n", i, num(run.history[i]));
    return s;
}

std::string comac_csv(const RunReport& r) {
    std::string s = "measured_dof,initial,updated\n";
    for (std::size_t i = 0; i < r.comac_initial.size(); ++i)
        s += fmt::format("{},{},{}\n", i + 1, num(r.comac_initial[i]), num(r.comac_updated[i]));
    s += fmt::format("mean,{},{}\n", num(*r.average_comac_initial), num(*r.average_comac_updated));
    return s;
}

std::string training_csv(const SurrogateResult& sr) {
    std::string s;
    const std::size_t d = sr.training_set.inputs.empty() ? 0 : sr.training_set.inputs[0].size();
    s += "index";
    for (std::size_t j = 0; j < d; ++j) s += fmt::format(",z{}", j + 1);
    s += ",cost\n";
    for (std::size_t i = 0; i < sr.training_set.size(); ++i) {
        s += std::to_string(i);
        for (double z : sr.training_set.inputs[i]) s += "," + num(z);
        s += "," + num(sr.training_set.targets[i]) + "\n";
    }
    return s;
}

std::string refinements_csv(const SurrogateResult& sr) {
    std::string s = "iteration,predicted_cost,true_cost,training_loss,training_set_size\n";
    for (const auto& rec : sr.refinements)
        s += fmt::format("{},{},{},{},{}\n", rec.iteration, num(rec.predicted_cost), num(rec.true_cost),
                         num(rec.training_loss), rec.training_set_size);
    return s;
}

}  // namespace

std::string format_report(const RunReport& r) {
    std::string s = fmt::format("experiment {}  optimizer {}  seed {}  weights {}\n", r.name,
                                to_string(r.optimizer), r.seed, to_string(r.weights_rule));
    s += fmt::format("{:>5} {:>12} {:>12} {:>12} {:>9} {:>9}\n", "mode", "measured", "initial",
                     "updated", "err0 %", "err %");
    for (std::size_t i = 0; i < r.measured.size(); ++i)
        s += fmt::format("{:>5} {:>12.3f} {:>12.3f} {:>12.3f} {:>9.3f} {:>9.3f}\n", i + 1, r.measured[i],
                         r.initial[i], r.updated[i], r.initial_errors.percent[i],
                         r.updated_errors.percent[i]);
    s += fmt::format("{:>5} {:>12} {:>12} {:>12} {:>9.3f} {:>9.3f}\n", "mean", "", "", "",
                     r.initial_errors.mean, r.updated_errors.mean);
    s += fmt::format("cost {:.6e} -> {:.6e}  evaluations {}\n", r.initial_cost, r.updated_cost,
                     r.run.evaluations);
    s += "element  modulus (GPa)\n";
    for (std::size_t i = 0; i < r.updated_moduli.size(); ++i)
        s += fmt::format("{:>7}  {:.4f}\n", i + 1, r.updated_moduli[i] * 1e-9);
    if (r.average_comac_updated)
        s += fmt::format("average COMAC {:.5f} -> {:.5f}\n", *r.average_comac_initial,
                         *r.average_comac_updated);
    s += fmt::format("wall clock {:.3f} s\n", r.wall_seconds);
    return s;
}

std::string format_comparison(const ComparisonReport& c) {
    std::string s = fmt::format("{:<24} {:>10} {:>12} {:>12} {:>12} {:>10}\n", "experiment", "optimizer",
                                "mean err %", "cost", "evaluations", "COMAC");
    for (const auto& r : c.rows) {
        const std::string cm = r.average_comac_updated ? fmt::format("{:.5f}", *r.average_comac_updated) : "-";
        s += fmt::format("{:<24} {:>10} {:>12.4f} {:>12.4e} {:>12} {:>10}\n", r.name, to_string(r.optimizer),
                         r.updated_errors.mean, r.updated_cost, r.run.evaluations, cm);
    }
    s += "wall clock (s):";
    for (const auto& r : c.rows) s += fmt::format(" {}={:.3f}", r.name, r.wall_seconds);
    s += "\n";
    return s;
}

json report_to_json(const RunReport& r) {
    json j;
    j["name"] = r.name;
    j["optimizer"] = to_string(r.optimizer);
    j["seed"] = r.seed;
    j["weights_rule"] = to_string(r.weights_rule);
    j["measured_hz"] = r.measured;
    j["initial_hz"] = r.initial;
    j["updated_hz"] = r.updated;
    j["weights"] = r.weights;
    j["initial_error_pct"] = r.initial_errors.percent;
    j["updated_error_pct"] = r.updated_errors.percent;
    j["initial_mean_error_pct"] = r.initial_errors.mean;
    j["updated_mean_error_pct"] = r.updated_errors.mean;
    j["initial_cost"] = r.initial_cost;
    j["updated_cost"] = r.updated_cost;
    j["initial_moduli_pa"] = r.initial_moduli;
    j["updated_moduli_pa"] = r.updated_moduli;
    j["evaluations"] = r.run.evaluations;
    if (!r.sa_run_evaluations.empty()) j["sa_run_evaluations"] = r.sa_run_evaluations;
    if (r.average_comac_updated) {
        j["comac_initial"] = r.comac_initial;
        j["comac_updated"] = r.comac_updated;
        j["average_comac_initial"] = *r.average_comac_initial;
        j["average_comac_updated"] = *r.average_comac_updated;
    }
    if (r.surrogate) {
        j["surrogate"] = {{"training_set_size", r.surrogate->training_set.size()},
                          {"refinements", r.surrogate->refinements.size()},
                          {"initial_training_loss", r.surrogate->initial_training_loss},
                          {"initial_sample_best", r.surrogate->initial_sample_best}};
    }
    j["wall_seconds"] = r.wall_seconds;
    j["config"] = r.config_echo;
    return j;
}

std::vector<std::filesystem::path> emit_report(const RunReport& r, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> written;
    write_file(dir / "frequencies.csv", frequencies_csv(r), written);
    write_file(dir / "moduli.csv", moduli_csv(r), written);
    write_file(dir / "history.csv", history_csv(r.run), written);
    if (r.average_comac_updated) write_file(dir / "comac.csv", comac_csv(r), written);
    if (r.surrogate) {
        write_file(dir / "surrogate_training.csv", training_csv(*r.surrogate), written);
        write_file(dir / "surrogate_refinements.csv", refinements_csv(*r.surrogate), written);
    }
    write_file(dir / "report.txt", format_report(r), written);
    write_file(dir / "summary.json", report_to_json(r).dump(2) + "\n", written);
    return written;
}

std::vector<std::filesystem::path> emit_comparison(const ComparisonReport& c,
                                                   const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> written;
    std::string csv = "experiment,optimizer,seed,mean_error_pct,cost,evaluations,average_comac\n";
    json rows = json::array();
    for (const auto& r : c.rows) {
        csv += fmt::format("{},{},{},{},{},{},{}\n", r.name, to_string(r.optimizer), r.seed,
                           num(r.updated_errors.mean), num(r.updated_cost), r.run.evaluations,
                           r.average_comac_updated ? num(*r.average_comac_updated) : "");
        rows.push_back(report_to_json(r));
    }
    write_file(dir / "comparison.csv", csv, written);
    write_file(dir / "comparison.txt", format_comparison(c), written);
    write_file(dir / "comparison.json", json{{"runs", rows}}.dump(2) + "\n", written);
    return written;
}

}  // namespace femu
