#include "gazeforge/report.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <memory>
#include <ostream>
#include <stdexcept>

#include <openssl/evp.h>

#include "gazeforge/errors.hpp"
#include "gazeforge/text.hpp"

namespace gazeforge {

std::string version() { return GAZEFORGE_VERSION; }

nlohmann::json to_json(const PipelineConfig& c) {
    nlohmann::json j;
    j["geometry"] = {{"width_px", c.geometry.width_px},
                     {"height_px", c.geometry.height_px},
                     {"diagonal_cm", c.geometry.diagonal_cm},
                     {"viewing_distance_cm", c.geometry.viewing_distance_cm}};
    j["sg_order"] = c.smoothing.poly_order;
    j["sg_frame"] = c.smoothing.frame_size;
    j["vt"] = c.vt ? nlohmann::json(*c.vt) : nlohmann::json(nullptr);
    j["mfd_ms"] = c.mfd_ms;
    j["vt_grid"] = c.vt_grid;
    j["aggregation"] = to_string(c.aggregation);
    j["spatial_cells"] = c.spatial_cells;
    return j;
}

nlohmann::json to_json(const ExperimentConfig& c) {
    nlohmann::json j;
    j["n_runs"] = c.n_runs;
    j["split_ratio"] = c.split_ratio;
    j["k_features"] = c.k_features;
    j["classifier"] = to_string(c.classifier);
    j["weight_mode"] = to_string(c.weight_mode);
    j["manual_weights"] = {{"w_fix", c.manual_weights.w_fix}, {"w_sac", c.manual_weights.w_sac}};
    j["rank_on"] = to_string(c.rank_on);
    j["tune_on"] = to_string(c.tune_on);
    j["tune_folds"] = c.tune_folds;
    j["seed"] = c.seed;
    j["subset_size"] = c.subset_size ? nlohmann::json(*c.subset_size) : nlohmann::json(nullptr);
    j["feature_set"] = to_string(c.feature_set);
    j["logreg"] = {{"l2", c.classifier_options.logreg.l2},
                   {"max_iterations", c.classifier_options.logreg.max_iterations},
                   {"gradient_tolerance", c.classifier_options.logreg.gradient_tolerance}};
    const auto& g = c.classifier_options.grid;
    j["rf_grid"] = {{"n_trees", g.n_trees}, {"max_depth", g.max_depth}, {"min_leaf", g.min_leaf},
                    {"cv_folds", g.cv_folds}};
    j["jobs"] = c.jobs;
    return j;
}

nlohmann::json to_json(const ProcessedCohort& cohort) {
    nlohmann::json j;
    j["vt"] = cohort.vt;
    j["vt_auto_selected"] = cohort.vt_selection.has_value();
    if (cohort.vt_selection) {
        j["vt_target_fixations"] = cohort.vt_selection->target;
        j["vt_mean_fixations"] = cohort.vt_selection->mean_counts;
    }
    j["deg_per_px"] = cohort.scale.kx;
    j["participants"] = cohort.participants.size();
    j["warnings"] = cohort.warnings;
    return j;
}

nlohmann::json to_json(const EvalReport& r) {
    nlohmann::json j;
    j["config"] = to_json(r.config);
    j["leaky"] = r.leaky;
    j["n_participants"] = r.n_participants;
    j["n_excluded"] = r.n_excluded;
    j["split_rule"] = "per class: train = floor(split_ratio * n), test = the rest; n = smaller class size";
    j["n_train_per_class"] = r.n_train_per_class;
    j["n_test_per_class"] = r.n_test_per_class;
    j["mean_accuracy"] = r.mean_accuracy;
    j["sd"] = r.sd;
    j["sem"] = r.sem;
    j["interval_2sem"] = {r.interval_low, r.interval_high};
    if (r.mean_weights) {
        j["mean_weights"] = {{"w_fix", r.mean_weights->w_fix}, {"w_sac", r.mean_weights->w_sac}};
    }
    j["warnings"] = r.warnings;
    auto& runs = j["runs"] = nlohmann::json::array();
    for (const auto& run : r.runs) {
        nlohmann::json row;
        row["run"] = run.run;
        row["seed"] = run.seed;
        row["accuracy"] = run.accuracy;
        if (run.fixation_accuracy) {
            row["fixation_accuracy"] = *run.fixation_accuracy;
            row["saccade_accuracy"] = *run.saccade_accuracy;
        }
        if (run.weights) {
            row["weights"] = {{"w_fix", run.weights->w_fix}, {"w_sac", run.weights->w_sac}};
        }
        row["fixation_features"] = run.fixation_features;
        row["saccade_features"] = run.saccade_features;
        row["train_ids"] = run.train_ids;
        row["test_ids"] = run.test_ids;
        runs.push_back(std::move(row));
    }
    return j;
}

nlohmann::json to_json(const SotaComparison& c) {
    return {{"subset_ids", c.subset_ids}, {"pipeline", to_json(c.pipeline)}, {"sota", to_json(c.sota)}};
}

nlohmann::json to_json(std::span<const SdPoint> curve) {
    auto j = nlohmann::json::array();
    for (const auto& p : curve) {
        j.push_back({{"n_users", p.n_users}, {"mean", p.mean}, {"sd", p.sd}, {"sem", p.sem}});
    }
    return j;
}

nlohmann::json to_json(const CohortStats& s) {
    nlohmann::json j;
    j["test"] = to_string(s.test);
    auto& rows = j["measures"] = nlohmann::json::array();
    for (const auto& r : s.rows) {
        rows.push_back({{"measure", r.measure},
                        {"female", {{"mean", r.female.mean}, {"sd", r.female.sd}, {"n", r.female.n}}},
                        {"male", {{"mean", r.male.mean}, {"sd", r.male.sd}, {"n", r.male.n}}},
                        {"statistic", r.statistic},
                        {"p_value", r.p_value}});
    }
    return j;
}

void write_runs_csv(std::ostream& out, const EvalReport& report) {
    out << "run,seed,accuracy,fixation_accuracy,saccade_accuracy,w_fix,w_sac\n";
    auto opt = [](const std::optional<double>& v) { return v ? text::shortest(*v) : std::string(); };
    for (const auto& r : report.runs) {
        out << r.run << ',' << r.seed << ',' << text::shortest(r.accuracy) << ',' << opt(r.fixation_accuracy)
            << ',' << opt(r.saccade_accuracy) << ','
            << (r.weights ? text::shortest(r.weights->w_fix) : "") << ','
            << (r.weights ? text::shortest(r.weights->w_sac) : "") << '\n';
    }
}

void write_xy_csv(std::ostream& out, std::span<const std::pair<double, double>> points) {
    out << "x,y\n";
    for (const auto& [x, y] : points) {
        out << text::shortest(x) << ',' << text::shortest(y) << '\n';
    }
}

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open " + path.string());
    }
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("sha256 init failed");
    }
    std::array<char, 1 << 16> buffer{};
    while (in) {
        in.read(buffer.data(), buffer.size());
        if (in.gcount() > 0) {
            EVP_DigestUpdate(ctx.get(), buffer.data(), static_cast<std::size_t>(in.gcount()));
        }
    }
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), digest.data(), &len);
    std::string hex;
    for (unsigned int i = 0; i < len; ++i) {
        char byte[3];
        std::snprintf(byte, sizeof byte, "%02x", digest[i]);
        hex += byte;
    }
    return hex;
}

void RunManifest::add_input(const std::filesystem::path& path) {
    inputs.push_back({path.string(), sha256_file(path)});
}

nlohmann::json RunManifest::to_json() const {
    nlohmann::json j;
    j["tool"] = "gazeforge";
    j["tool_version"] = tool_version;
    j["command"] = command;
    j["seed"] = seed;
    j["config"] = config;
    auto& in = j["inputs"] = nlohmann::json::array();
    for (const auto& d : inputs) {
        in.push_back({{"path", d.path}, {"sha256", d.sha256}});
    }
    return j;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) {
        throw DataError("cannot write " + path.string());
    }
    out << j.dump(2) << '\n';
}

}  // namespace gazeforge
