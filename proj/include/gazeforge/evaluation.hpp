#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gazeforge/classifiers.hpp"
#include "gazeforge/ensemble.hpp"
#include "gazeforge/features.hpp"
#include "gazeforge/ingest.hpp"
#include "gazeforge/segmentation.hpp"
#include "gazeforge/signal.hpp"

namespace gazeforge {

// 5, 10, ..., 50 deg/s
std::vector<double> default_vt_grid();

struct PipelineConfig {
    ScreenGeometry geometry;
    SmoothingConfig smoothing;
    std::optional<double> vt;  // unset: select from vt_grid
    double mfd_ms = 100.0;
    std::vector<double> vt_grid = default_vt_grid();
    Aggregation aggregation = Aggregation::pooled;
    int spatial_cells = 8;

    void validate() const;
};

struct ProcessedParticipant {
    std::string participant_id;
    Gender gender = Gender::female;
    std::vector<GazeSample> smoothed;
    KinematicSeries series;
    std::vector<Segment> segments;
    std::optional<FeatureVector> fixation;
    std::optional<FeatureVector> saccade;
    std::optional<FeatureVector> sota;

    bool has(Channel channel) const;
    const FeatureVector& features(Channel channel) const;
};

struct ProcessedCohort {
    std::vector<ProcessedParticipant> participants;
    PixelScale scale;
    double vt = 0.0;
    std::optional<VtSelection> vt_selection;  // set when vt was auto-selected
    std::vector<std::string> warnings;

    // Rows for every participant that has the channel, in cohort order.
    FeatureTable table(Channel channel) const;
};

// Smoothing, kinematics, I-VT and feature extraction for each participant.
// Participants shorter than one smoothing frame are dropped with a warning;
// a missing fixation or saccade channel leaves that feature vector unset.
// jobs <= 0 uses the hardware concurrency.
ProcessedCohort process_cohort(std::span<const GazeTrajectory> cohort, const PipelineConfig& config,
                               int jobs = 0);

enum class WeightMode { equal, optimized, manual };
enum class RankOn { train, all };
enum class TuneOn { train, test_leaky };
enum class FeatureSet { pipeline, sota };
enum class StatTest { mannwhitney, ttest };

std::string_view to_string(WeightMode mode) noexcept;
std::string_view to_string(RankOn mode) noexcept;
std::string_view to_string(TuneOn mode) noexcept;
std::string_view to_string(FeatureSet set) noexcept;
std::string_view to_string(StatTest test) noexcept;
WeightMode parse_weight_mode(std::string_view name);
RankOn parse_rank_on(std::string_view name);
TuneOn parse_tune_on(std::string_view name);
FeatureSet parse_feature_set(std::string_view name);
StatTest parse_stat_test(std::string_view name);

struct ExperimentConfig {
    int n_runs = 50;
    double split_ratio = 0.8;
    int k_features = 1;  // per channel; the sota set always uses its six features
    ClassifierKind classifier = ClassifierKind::logreg;
    WeightMode weight_mode = WeightMode::equal;
    EnsembleWeights manual_weights;
    RankOn rank_on = RankOn::train;
    TuneOn tune_on = TuneOn::train;
    int tune_folds = 5;
    std::uint64_t seed = 0;
    std::optional<int> subset_size;  // balanced random subset, drawn once from (seed, size)
    FeatureSet feature_set = FeatureSet::pipeline;
    ClassifierOptions classifier_options;
    int jobs = 0;

    void validate() const;
};

struct RunResult {
    int run = 0;
    std::uint64_t seed = 0;
    double accuracy = 0.0;
    std::optional<double> fixation_accuracy;  // single-channel scores, pipeline set only
    std::optional<double> saccade_accuracy;
    std::vector<std::string> train_ids;
    std::vector<std::string> test_ids;
    std::vector<std::string> fixation_features;
    std::vector<std::string> saccade_features;
    std::optional<EnsembleWeights> weights;  // unset for the sota set
};

struct Summary {
    double mean = 0.0;
    double sd = 0.0;  // sample SD
    double sem = 0.0;
};

// Needs at least two values.
Summary sem(std::span<const double> values);

struct EvalReport {
    ExperimentConfig config;
    std::vector<RunResult> runs;
    double mean_accuracy = 0.0;
    double sd = 0.0;
    double sem = 0.0;
    double interval_low = 0.0;  // mean -+ 2 SEM
    double interval_high = 0.0;
    std::optional<EnsembleWeights> mean_weights;
    int n_participants = 0;  // eligible participants the splits were drawn from
    int n_excluded = 0;      // participants lacking a needed channel
    int n_train_per_class = 0;
    int n_test_per_class = 0;
    bool leaky = false;  // ranking or weight tuning saw test rows
    std::vector<std::string> warnings;

    std::vector<double> accuracies() const;
};

// Repeated class-balanced splits. Each run uses derive_seed(seed, run).
EvalReport run_experiment(const ProcessedCohort& cohort, const ExperimentConfig& config);

// One report per k, all sharing the run seeds.
std::vector<EvalReport> sweep_feature_counts(const ProcessedCohort& cohort, std::span<const int> ks,
                                             const ExperimentConfig& config);

struct SotaComparison {
    EvalReport pipeline;
    EvalReport sota;
    std::vector<std::string> subset_ids;
};

struct SotaSubset {
    int n_female = 20;
    int n_male = 25;
};

// Both feature sets on one random subset (participants with all channels).
SotaComparison sota_protocol(const ProcessedCohort& cohort, const ExperimentConfig& config,
                             const SotaSubset& subset = {});

struct SdPoint {
    int n_users = 0;
    double mean = 0.0;
    double sd = 0.0;
    double sem = 0.0;
};

// run_experiment with subset_size = n for each size. The subset seed depends
// only on (seed, n), so a repeated size repeats its result.
std::vector<SdPoint> sd_vs_users(const ProcessedCohort& cohort, std::span<const int> sizes,
                                 const ExperimentConfig& config);

struct AoiSpec {
    std::map<std::string, Rect> regions;

    static AoiSpec defaults();  // left_eye, right_eye
    static AoiSpec load(const std::filesystem::path& path);
    void validate(const ScreenGeometry& geometry) const;
};

struct GroupStat {
    double mean = 0.0;
    double sd = 0.0;  // sample SD
    int n = 0;
};

struct MeasureRow {
    std::string measure;
    GroupStat female;
    GroupStat male;
    double statistic = 0.0;
    double p_value = 1.0;
};

struct CohortStats {
    StatTest test = StatTest::mannwhitney;
    std::vector<MeasureRow> rows;
};

// Per participant: path_length (px), mean saccade_amplitude (deg),
// fixation_count, and for each AOI the share (%) of fixations whose centroid
// lies in it.
CohortStats cohort_stats(const ProcessedCohort& cohort, const AoiSpec& aoi,
                         StatTest test = StatTest::mannwhitney);

}  // namespace gazeforge
