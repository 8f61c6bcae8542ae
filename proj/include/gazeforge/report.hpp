#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "gazeforge/evaluation.hpp"

namespace gazeforge {

std::string version();

nlohmann::json to_json(const PipelineConfig& config);
nlohmann::json to_json(const ExperimentConfig& config);
nlohmann::json to_json(const ProcessedCohort& cohort);  // summary only: vt, counts, warnings
nlohmann::json to_json(const EvalReport& report);
nlohmann::json to_json(const SotaComparison& comparison);
nlohmann::json to_json(std::span<const SdPoint> curve);
nlohmann::json to_json(const CohortStats& stats);

// run,seed,accuracy,fixation_accuracy,saccade_accuracy,w_fix,w_sac
void write_runs_csv(std::ostream& out, const EvalReport& report);

// Plot data: header x,y then one pair per line.
void write_xy_csv(std::ostream& out, std::span<const std::pair<double, double>> points);

// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

struct InputDigest {
    std::string path;
    std::string sha256;
};

struct RunManifest {
    std::string command;
    nlohmann::json config;  // every option, defaults included
    std::vector<InputDigest> inputs;
    std::string tool_version = version();
    std::uint64_t seed = 0;

    void add_input(const std::filesystem::path& path);
    nlohmann::json to_json() const;
};

void write_json(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace gazeforge
