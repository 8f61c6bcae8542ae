#include "gazeforge/evaluation.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <stdexcept>
#include <thread>
#include <unordered_set>

#include "json.hpp"

#include "gazeforge/errors.hpp"
#include "gazeforge/rng.hpp"
#include "gazeforge/stats.hpp"

namespace gazeforge {

namespace {

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& body) {
    std::size_t workers = jobs > 0 ? static_cast<std::size_t>(jobs)
                                   : std::max<std::size_t>(1, std::thread::hardware_concurrency());
    workers = std::min(workers, n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            body(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(n);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
    for (auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

template <class Enum, std::size_t N>
Enum parse_enum(std::string_view name, const std::pair<std::string_view, Enum> (&table)[N], const char* what) {
    for (const auto& [key, value] : table) {
        if (key == name) {
            return value;
        }
    }
    throw ConfigError(std::string("unknown ") + what + " '" + std::string(name) + "'");
}

}  // namespace

std::vector<double> default_vt_grid() {
    std::vector<double> grid;
    for (int vt = 5; vt <= 50; vt += 5) {
        grid.push_back(vt);
    }
    return grid;
}

void PipelineConfig::validate() const {
    geometry.validate();
    smoothing.validate();
    IvtParams{vt.value_or(20.0), mfd_ms}.validate();
    if (!vt && vt_grid.empty()) {
        throw ConfigError("vt grid is empty and no vt was given");
    }
    for (double v : vt_grid) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw ConfigError("vt grid values must be positive");
        }
    }
    if (spatial_cells < 1) {
        throw ConfigError("spatial grid needs at least one cell per side");
    }
}

bool ProcessedParticipant::has(Channel channel) const {
    switch (channel) {
        case Channel::fixation:
            return fixation.has_value();
        case Channel::saccade:
            return saccade.has_value();
        case Channel::sota:
            return sota.has_value();
    }
    return false;
}

const FeatureVector& ProcessedParticipant::features(Channel channel) const {
    if (!has(channel)) {
        throw EmptyChannel(participant_id + " has no " + std::string(to_string(channel)) + " features");
    }
    switch (channel) {
        case Channel::fixation:
            return *fixation;
        case Channel::saccade:
            return *saccade;
        case Channel::sota:
            break;
    }
    return *sota;
}

FeatureTable ProcessedCohort::table(Channel channel) const {
    FeatureTable out;
    out.channel = channel;
    out.feature_names = feature_catalog(channel);
    for (const auto& p : participants) {
        if (p.has(channel)) {
            out.add(p.participant_id, p.gender, p.features(channel));
        }
    }
    return out;
}

ProcessedCohort process_cohort(std::span<const GazeTrajectory> cohort, const PipelineConfig& config, int jobs) {
    config.validate();
    ProcessedCohort out;
    out.scale = deg_per_px(config.geometry);

    std::vector<std::optional<ProcessedParticipant>> slots(cohort.size());
    std::vector<std::vector<double>> times(cohort.size());
    parallel_for(cohort.size(), jobs, [&](std::size_t i) {
        const auto& traj = cohort[i];
        if (traj.samples.size() < static_cast<std::size_t>(config.smoothing.frame_size)) {
            return;
        }
        ProcessedParticipant p;
        p.participant_id = traj.participant_id;
        p.gender = traj.gender;
        p.smoothed = savgol_smooth(traj.samples, config.smoothing);
        p.series = kinematics(p.smoothed, out.scale);
        times[i] = traj.timestamps();
        slots[i] = std::move(p);
    });
    for (std::size_t i = 0; i < cohort.size(); ++i) {
        if (!slots[i]) {
            out.warnings.push_back(cohort[i].participant_id + ": fewer samples than one smoothing frame, dropped");
        }
    }

    if (config.vt) {
        out.vt = *config.vt;
    } else {
        std::vector<SpeedTrace> traces;
        for (std::size_t i = 0; i < cohort.size(); ++i) {
            if (slots[i]) {
                traces.push_back({slots[i]->series.v, times[i]});
            }
        }
        if (traces.empty()) {
            throw DataError("no participant has enough samples to process");
        }
        out.vt_selection = select_vt(traces, config.mfd_ms, config.vt_grid);
        out.vt = out.vt_selection->vt;
    }

    const IvtParams ivt{out.vt, config.mfd_ms};
    const SpatialGrid grid{config.spatial_cells, config.geometry.width_px, config.geometry.height_px};
    parallel_for(cohort.size(), jobs, [&](std::size_t i) {
        if (!slots[i]) {
            return;
        }
        auto& p = *slots[i];
        p.segments = ivt_segment(p.series, times[i], ivt);
        const ChannelInput input{p.segments, &p.series, p.smoothed, out.scale};
        try {
            p.fixation = extract_channel_features(input, SegmentKind::fixation, config.aggregation);
        } catch (const EmptyChannel&) {
        }
        try {
            p.saccade = extract_channel_features(input, SegmentKind::saccade, config.aggregation);
        } catch (const EmptyChannel&) {
        }
        if (p.fixation && p.saccade) {
            p.sota = extract_sota_features(input, grid);
        }
    });

    for (auto& slot : slots) {
        if (!slot) {
            continue;
        }
        if (!slot->fixation) {
            out.warnings.push_back(slot->participant_id + ": no fixations at vt " + std::to_string(out.vt));
        }
        if (!slot->saccade) {
            out.warnings.push_back(slot->participant_id + ": no saccades at vt " + std::to_string(out.vt));
        }
        out.participants.push_back(std::move(*slot));
    }
    return out;
}

std::string_view to_string(WeightMode mode) noexcept {
    switch (mode) {
        case WeightMode::equal:
            return "equal";
        case WeightMode::optimized:
            return "optimized";
        case WeightMode::manual:
            return "manual";
    }
    return "unknown";
}

std::string_view to_string(RankOn mode) noexcept { return mode == RankOn::train ? "train" : "all"; }
std::string_view to_string(TuneOn mode) noexcept { return mode == TuneOn::train ? "train" : "test-leaky"; }
std::string_view to_string(FeatureSet set) noexcept { return set == FeatureSet::pipeline ? "pipeline" : "sota"; }
std::string_view to_string(StatTest test) noexcept { return test == StatTest::mannwhitney ? "mannwhitney" : "ttest"; }

WeightMode parse_weight_mode(std::string_view name) {
    static const std::pair<std::string_view, WeightMode> table[] = {
        {"equal", WeightMode::equal}, {"optimized", WeightMode::optimized}, {"manual", WeightMode::manual}};
    return parse_enum(name, table, "weight mode");
}

RankOn parse_rank_on(std::string_view name) {
    static const std::pair<std::string_view, RankOn> table[] = {{"train", RankOn::train}, {"all", RankOn::all}};
    return parse_enum(name, table, "rank-on mode");
}

TuneOn parse_tune_on(std::string_view name) {
    static const std::pair<std::string_view, TuneOn> table[] = {{"train", TuneOn::train},
                                                                {"test-leaky", TuneOn::test_leaky}};
    return parse_enum(name, table, "tune-on mode");
}

FeatureSet parse_feature_set(std::string_view name) {
    static const std::pair<std::string_view, FeatureSet> table[] = {{"pipeline", FeatureSet::pipeline},
                                                                    {"sota", FeatureSet::sota}};
    return parse_enum(name, table, "feature set");
}

StatTest parse_stat_test(std::string_view name) {
    static const std::pair<std::string_view, StatTest> table[] = {{"mannwhitney", StatTest::mannwhitney},
                                                                  {"ttest", StatTest::ttest}};
    return parse_enum(name, table, "statistical test");
}

void ExperimentConfig::validate() const {
    if (n_runs < 1) {
        throw ConfigError("n_runs must be at least 1");
    }
    if (!(split_ratio > 0.0 && split_ratio < 1.0)) {
        throw ConfigError("split ratio must lie strictly between 0 and 1");
    }
    if (k_features < 1) {
        throw ConfigError("k must be at least 1");
    }
    if (tune_folds < 2) {
        throw ConfigError("weight tuning needs at least 2 folds");
    }
    if (subset_size && (*subset_size < 2 || *subset_size % 2 != 0)) {
        throw ConfigError("subset size must be even and at least 2");
    }
    if (weight_mode == WeightMode::manual) {
        manual_weights.validate();
    }
    if (classifier == ClassifierKind::random_forest) {
        classifier_options.grid.validate();
    }
}

Summary sem(std::span<const double> values) {
    if (values.size() < 2) {
        throw ConfigError("sem needs at least two values");
    }
    Summary s;
    s.mean = stats::mean(values);
    s.sd = stats::sample_sd(values);
    s.sem = s.sd / std::sqrt(static_cast<double>(values.size()));
    return s;
}

std::vector<double> EvalReport::accuracies() const {
    std::vector<double> out;
    out.reserve(runs.size());
    for (const auto& r : runs) {
        out.push_back(r.accuracy);
    }
    return out;
}

namespace {

constexpr std::uint64_t kSubsetStream = 0x737562736574ULL;
constexpr std::uint64_t kSotaStream = 0x736f7461ULL;

bool eligible(const ProcessedParticipant& p, FeatureSet set) {
    return set == FeatureSet::sota ? p.has(Channel::sota) : p.has(Channel::fixation) && p.has(Channel::saccade);
}

// Indices into cohort.participants that an experiment draws its splits from.
struct Pool {
    std::vector<std::size_t> members;
    int excluded = 0;
};

std::vector<std::size_t> draw(std::vector<std::size_t> from, int n, Rng& rng) {
    rng.shuffle(std::span<std::size_t>(from));
    from.resize(static_cast<std::size_t>(n));
    return from;
}

Pool subset_pool(const ProcessedCohort& cohort, std::span<const std::size_t> candidates, int n_female,
                 int n_male, std::uint64_t seed) {
    std::vector<std::size_t> female;
    std::vector<std::size_t> male;
    for (auto i : candidates) {
        (cohort.participants[i].gender == Gender::female ? female : male).push_back(i);
    }
    if (static_cast<int>(female.size()) < n_female || static_cast<int>(male.size()) < n_male) {
        throw DataError("subset of " + std::to_string(n_female) + " F / " + std::to_string(n_male) +
                        " M requested but only " + std::to_string(female.size()) + " F / " +
                        std::to_string(male.size()) + " M are eligible");
    }
    Rng rng(seed);
    Pool pool;
    for (auto i : draw(female, n_female, rng)) {
        pool.members.push_back(i);
    }
    for (auto i : draw(male, n_male, rng)) {
        pool.members.push_back(i);
    }
    std::sort(pool.members.begin(), pool.members.end());
    return pool;
}

Pool experiment_pool(const ProcessedCohort& cohort, const ExperimentConfig& config) {
    Pool pool;
    for (std::size_t i = 0; i < cohort.participants.size(); ++i) {
        if (eligible(cohort.participants[i], config.feature_set)) {
            pool.members.push_back(i);
        } else {
            ++pool.excluded;
        }
    }
    if (config.subset_size) {
        const int half = *config.subset_size / 2;
        const auto seed = derive_seed(derive_seed(config.seed, kSubsetStream),
                                      static_cast<std::uint64_t>(*config.subset_size));
        const int excluded = pool.excluded;
        pool = subset_pool(cohort, pool.members, half, half, seed);
        pool.excluded = excluded;
    }
    return pool;
}

void guard_no_test_rows(const FeatureTable& table, const std::unordered_set<std::string>& test_ids,
                        std::string_view stage) {
    for (const auto& id : table.participant_ids) {
        if (test_ids.contains(id)) {
            throw std::logic_error("test participant " + id + " reached " + std::string(stage));
        }
    }
}

double accuracy_of(std::span<const double> p, std::span<const int> y) {
    double correct = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        correct += static_cast<double>((p[i] >= 0.5 ? 1 : 0) == y[i]);
    }
    return correct / static_cast<double>(y.size());
}

struct Tables {
    FeatureTable fixation;
    FeatureTable saccade;
    FeatureTable sota;
};

Tables pool_tables(const ProcessedCohort& cohort, const Pool& pool, FeatureSet set) {
    Tables t;
    t.fixation.channel = Channel::fixation;
    t.saccade.channel = Channel::saccade;
    t.sota.channel = Channel::sota;
    for (auto i : pool.members) {
        const auto& p = cohort.participants[i];
        if (set == FeatureSet::sota) {
            t.sota.add(p.participant_id, p.gender, *p.sota);
        } else {
            t.fixation.add(p.participant_id, p.gender, *p.fixation);
            t.saccade.add(p.participant_id, p.gender, *p.saccade);
        }
    }
    return t;
}

RunResult run_once(const Tables& tables, const ExperimentConfig& config, int run, int n_train, int n_test) {
    const auto& base = config.feature_set == FeatureSet::sota ? tables.sota : tables.fixation;
    RunResult result;
    result.run = run;
    result.seed = derive_seed(config.seed, static_cast<std::uint64_t>(run));

    std::vector<std::size_t> female;
    std::vector<std::size_t> male;
    for (std::size_t i = 0; i < base.size(); ++i) {
        (base.labels[i] == Gender::female ? female : male).push_back(i);
    }
    Rng rng(result.seed);
    rng.shuffle(std::span<std::size_t>(female));
    rng.shuffle(std::span<std::size_t>(male));
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
    for (int j = 0; j < n_train + n_test; ++j) {
        (j < n_train ? train : test).push_back(female[static_cast<std::size_t>(j)]);
        (j < n_train ? train : test).push_back(male[static_cast<std::size_t>(j)]);
    }
    std::sort(train.begin(), train.end());
    std::sort(test.begin(), test.end());
    for (auto i : train) {
        result.train_ids.push_back(base.participant_ids[i]);
    }
    for (auto i : test) {
        result.test_ids.push_back(base.participant_ids[i]);
    }
    const std::unordered_set<std::string> test_ids(result.test_ids.begin(), result.test_ids.end());

    const auto& opts = config.classifier_options;
    if (config.feature_set == FeatureSet::sota) {
        const auto train_table = tables.sota.select_rows(train);
        const auto test_table = tables.sota.select_rows(test);
        guard_no_test_rows(train_table, test_ids, "classifier training");
        const auto model = train_classifier(config.classifier, train_table, opts, derive_seed(result.seed, 1));
        result.accuracy = accuracy_of(predict_proba(model, test_table), test_table.class_labels());
        return result;
    }

    const auto fix_train = tables.fixation.select_rows(train);
    const auto sac_train = tables.saccade.select_rows(train);
    const auto k = static_cast<std::size_t>(config.k_features);
    if (config.rank_on == RankOn::train) {
        guard_no_test_rows(fix_train, test_ids, "feature ranking");
        result.fixation_features = select_top_k(anova_rank(fix_train), k);
        result.saccade_features = select_top_k(anova_rank(sac_train), k);
    } else {
        result.fixation_features = select_top_k(anova_rank(tables.fixation), k);
        result.saccade_features = select_top_k(anova_rank(tables.saccade), k);
    }

    const auto fix_train_k = fix_train.select_columns(result.fixation_features);
    const auto sac_train_k = sac_train.select_columns(result.saccade_features);
    const auto fix_test_k = tables.fixation.select_rows(test).select_columns(result.fixation_features);
    const auto sac_test_k = tables.saccade.select_rows(test).select_columns(result.saccade_features);
    guard_no_test_rows(fix_train_k, test_ids, "classifier training");
    guard_no_test_rows(sac_train_k, test_ids, "classifier training");

    const auto fix_model = train_classifier(config.classifier, fix_train_k, opts, derive_seed(result.seed, 1));
    const auto sac_model = train_classifier(config.classifier, sac_train_k, opts, derive_seed(result.seed, 2));
    const auto p_fix = predict_proba(fix_model, fix_test_k);
    const auto p_sac = predict_proba(sac_model, sac_test_k);
    const auto y = fix_test_k.class_labels();

    EnsembleWeights weights;
    if (config.weight_mode == WeightMode::manual) {
        weights = config.manual_weights;
    } else if (config.weight_mode == WeightMode::optimized) {
        if (config.tune_on == TuneOn::train) {
            guard_no_test_rows(fix_train_k, test_ids, "weight tuning");
            weights = optimize_weights(fix_train_k, sac_train_k, config.classifier, opts,
                                       derive_seed(result.seed, 3), config.tune_folds)
                          .weights;
        } else {
            weights = optimize_weights_for(p_fix, p_sac, y).weights;
        }
    }
    std::vector<double> fused(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        fused[i] = fuse(p_fix[i], p_sac[i], weights);
    }
    result.weights = weights;
    result.accuracy = accuracy_of(fused, y);
    result.fixation_accuracy = accuracy_of(p_fix, y);
    result.saccade_accuracy = accuracy_of(p_sac, y);
    return result;
}

EvalReport run_on_pool(const ProcessedCohort& cohort, const Pool& pool, const ExperimentConfig& config) {
    config.validate();
    EvalReport report;
    report.config = config;
    report.n_participants = static_cast<int>(pool.members.size());
    report.n_excluded = pool.excluded;
    report.leaky = config.feature_set == FeatureSet::pipeline &&
                   (config.rank_on == RankOn::all ||
                    (config.weight_mode == WeightMode::optimized && config.tune_on == TuneOn::test_leaky));
    if (pool.excluded > 0) {
        report.warnings.push_back(std::to_string(pool.excluded) +
                                  " participant(s) lack a needed channel and were excluded");
    }

    int n_female = 0;
    for (auto i : pool.members) {
        n_female += cohort.participants[i].gender == Gender::female ? 1 : 0;
    }
    const int n_class = std::min(n_female, static_cast<int>(pool.members.size()) - n_female);
    // Guard against 0.8 * n landing just under an integer.
    const int n_train = static_cast<int>(std::floor(config.split_ratio * n_class + 1e-9));
    const int n_test = n_class - n_train;
    if (n_train < 2 || n_test < 1) {
        throw DataError("a balanced split of " + std::to_string(n_class) +
                        " participants per class leaves too few for training or testing");
    }
    report.n_train_per_class = n_train;
    report.n_test_per_class = n_test;

    const auto tables = pool_tables(cohort, pool, config.feature_set);
    report.runs.resize(static_cast<std::size_t>(config.n_runs));
    parallel_for(report.runs.size(), config.jobs, [&](std::size_t r) {
        report.runs[r] = run_once(tables, config, static_cast<int>(r), n_train, n_test);
    });

    const auto acc = report.accuracies();
    if (acc.size() >= 2) {
        const auto s = sem(acc);
        report.mean_accuracy = s.mean;
        report.sd = s.sd;
        report.sem = s.sem;
    } else {
        report.mean_accuracy = acc.front();
    }
    report.interval_low = report.mean_accuracy - 2.0 * report.sem;
    report.interval_high = report.mean_accuracy + 2.0 * report.sem;
    if (config.feature_set == FeatureSet::pipeline && config.weight_mode == WeightMode::optimized) {
        double w = 0.0;
        for (const auto& r : report.runs) {
            w += r.weights->w_fix;
        }
        report.mean_weights = EnsembleWeights::from_fixation(w / static_cast<double>(report.runs.size()));
    }
    return report;
}

}  // namespace

EvalReport run_experiment(const ProcessedCohort& cohort, const ExperimentConfig& config) {
    config.validate();
    return run_on_pool(cohort, experiment_pool(cohort, config), config);
}

std::vector<EvalReport> sweep_feature_counts(const ProcessedCohort& cohort, std::span<const int> ks,
                                             const ExperimentConfig& config) {
    std::vector<EvalReport> out;
    for (int k : ks) {
        auto c = config;
        c.k_features = k;
        out.push_back(run_experiment(cohort, c));
    }
    return out;
}

SotaComparison sota_protocol(const ProcessedCohort& cohort, const ExperimentConfig& config,
                             const SotaSubset& subset) {
    config.validate();
    std::vector<std::size_t> candidates;
    int excluded = 0;
    for (std::size_t i = 0; i < cohort.participants.size(); ++i) {
        if (eligible(cohort.participants[i], FeatureSet::pipeline) &&
            eligible(cohort.participants[i], FeatureSet::sota)) {
            candidates.push_back(i);
        } else {
            ++excluded;
        }
    }
    auto pool = subset_pool(cohort, candidates, subset.n_female, subset.n_male,
                            derive_seed(config.seed, kSotaStream));
    pool.excluded = excluded;

    SotaComparison out;
    for (auto i : pool.members) {
        out.subset_ids.push_back(cohort.participants[i].participant_id);
    }
    auto c = config;
    c.subset_size.reset();
    c.feature_set = FeatureSet::pipeline;
    out.pipeline = run_on_pool(cohort, pool, c);
    c.feature_set = FeatureSet::sota;
    out.sota = run_on_pool(cohort, pool, c);
    return out;
}

std::vector<SdPoint> sd_vs_users(const ProcessedCohort& cohort, std::span<const int> sizes,
                                 const ExperimentConfig& config) {
    std::vector<SdPoint> curve;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (i > 0 && sizes[i] < sizes[i - 1]) {
            throw ConfigError("sizes must be ascending");
        }
        auto c = config;
        c.subset_size = sizes[i];
        const auto report = run_experiment(cohort, c);
        curve.push_back({sizes[i], report.mean_accuracy, report.sd, report.sem});
    }
    return curve;
}

AoiSpec AoiSpec::defaults() {
    return {{{"left_eye", default_left_eye_region()}, {"right_eye", default_right_eye_region()}}};
}

AoiSpec AoiSpec::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open AOI file " + path.string());
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("AOI file " + path.string() + ": " + e.what());
    }
    if (!j.is_object() || j.empty()) {
        throw DataError("AOI file must hold an object of name: [x0, y0, x1, y1]");
    }
    AoiSpec spec;
    for (const auto& [name, box] : j.items()) {
        if (!box.is_array() || box.size() != 4 || !std::all_of(box.begin(), box.end(), [](const auto& v) {
                return v.is_number();
            })) {
            throw DataError("AOI '" + name + "' must be [x0, y0, x1, y1]");
        }
        spec.regions[name] = {box[0].get<double>(), box[1].get<double>(), box[2].get<double>(),
                              box[3].get<double>()};
    }
    return spec;
}

void AoiSpec::validate(const ScreenGeometry& geometry) const {
    if (regions.empty()) {
        throw ConfigError("no AOI regions given");
    }
    for (const auto& [name, r] : regions) {
        if (!(r.x0 >= 0.0 && r.y0 >= 0.0 && r.x0 < r.x1 && r.y0 < r.y1 && r.x1 <= geometry.width_px &&
              r.y1 <= geometry.height_px)) {
            throw ConfigError("AOI '" + name + "' is empty or leaves the screen");
        }
    }
}

CohortStats cohort_stats(const ProcessedCohort& cohort, const AoiSpec& aoi, StatTest test) {
    if (aoi.regions.empty()) {
        throw ConfigError("no AOI regions given");
    }
    std::vector<std::string> measures{"path_length", "saccade_amplitude", "fixation_count"};
    for (const auto& [name, r] : aoi.regions) {
        measures.push_back(name + "_share");
    }
    // values[m][g]: measure m for gender g (0 = female).
    std::vector<std::array<std::vector<double>, 2>> values(measures.size());

    for (const auto& p : cohort.participants) {
        const int g = p.gender == Gender::female ? 0 : 1;
        double path = 0.0;
        for (std::size_t i = 1; i < p.smoothed.size(); ++i) {
            path += std::hypot(p.smoothed[i].x_px - p.smoothed[i - 1].x_px, p.smoothed[i].y_px - p.smoothed[i - 1].y_px);
        }
        values[0][g].push_back(path);

        std::vector<double> amplitudes;
        std::vector<std::pair<double, double>> centroids;
        for (const auto& s : p.segments) {
            const auto first = p.smoothed[s.start_idx];
            const auto last = p.smoothed[s.end_idx];
            if (s.kind == SegmentKind::saccade) {
                amplitudes.push_back(std::hypot(cohort.scale.kx * (last.x_px - first.x_px),
                                                cohort.scale.ky * (last.y_px - first.y_px)));
                continue;
            }
            double cx = 0.0;
            double cy = 0.0;
            for (std::size_t i = s.start_idx; i <= s.end_idx; ++i) {
                cx += p.smoothed[i].x_px;
                cy += p.smoothed[i].y_px;
            }
            const auto n = static_cast<double>(s.length());
            centroids.emplace_back(cx / n, cy / n);
        }
        if (!amplitudes.empty()) {
            values[1][g].push_back(stats::mean(amplitudes));
        }
        values[2][g].push_back(static_cast<double>(centroids.size()));
        if (centroids.empty()) {
            continue;
        }
        std::size_t m = 3;
        for (const auto& [name, r] : aoi.regions) {
            const auto inside = std::count_if(centroids.begin(), centroids.end(),
                                              [&](const auto& c) { return r.contains(c.first, c.second); });
            values[m++][g].push_back(100.0 * static_cast<double>(inside) / static_cast<double>(centroids.size()));
        }
    }

    CohortStats out;
    out.test = test;
    const std::size_t min_n = test == StatTest::ttest ? 2 : 1;
    for (std::size_t m = 0; m < measures.size(); ++m) {
        const auto& f = values[m][0];
        const auto& male = values[m][1];
        if (f.size() < min_n || male.size() < min_n) {
            throw DataError("cohort statistics for " + measures[m] + " need at least " + std::to_string(min_n) +
                            " participant(s) per gender");
        }
        MeasureRow row;
        row.measure = measures[m];
        row.female = {stats::mean(f), stats::sample_sd(f), static_cast<int>(f.size())};
        row.male = {stats::mean(male), stats::sample_sd(male), static_cast<int>(male.size())};
        const auto result = test == StatTest::mannwhitney ? stats::mann_whitney_u(f, male) : stats::welch_t_test(f, male);
        row.statistic = result.statistic;
        row.p_value = result.p_value;
        out.rows.push_back(row);
    }
    return out;
}

}  // namespace gazeforge
