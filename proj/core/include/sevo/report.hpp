#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sevo/harness.hpp"

namespace sevo {

using Json = nlohmann::ordered_json;

// Experiment specs serialize losslessly: parse(dump(spec)) == spec.
Json to_json(const ExperimentSpec& spec);
ExperimentSpec experiment_spec_from_json(const Json& j);

Json to_json(const DecayReport& report, const ExperimentSpec& spec);
Json to_json(const SweepReport& report, const ExperimentSpec& spec);
Json to_json(const LemmaVerification& v);

struct EmittedFiles {
    std::filesystem::path report_json;
    std::vector<std::filesystem::path> csv_files;
};

// Writes <out>/<name>/report.json plus plot CSVs. The JSON carries the full
// spec for reproducibility; the timestamp is isolated in one field so byte
// comparison after stripping it is meaningful.
EmittedFiles emit_decay_report(const std::filesystem::path& out_dir, const DecayReport& report,
                               const ExperimentSpec& spec);
EmittedFiles emit_sweep_report(const std::filesystem::path& out_dir, const std::string& name,
                               const SweepReport& report, const ExperimentSpec& spec);
EmittedFiles emit_lemma_report(const std::filesystem::path& out_dir, const std::string& name,
                               const LemmaVerification& v);

// Writes the trajectory with 17 significant digits:
// t,norm_lq,norm_lm2p,norm_lqp,seminorm,dtnorm
void write_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path);

}  // namespace sevo
