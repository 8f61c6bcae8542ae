#include "catch_amalgamated.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

#include "gazeforge/errors.hpp"
#include "gazeforge/evaluation.hpp"
#include "gazeforge/rng.hpp"
#include "support.hpp"

using namespace gazeforge;
using Catch::Approx;

namespace {

ProcessedCohort make_cohort(int n, std::map<std::string, double> effect, std::uint64_t seed,
                            double duration_ms = 12000.0) {
    CohortSpec spec;
    spec.n_participants = n;
    spec.duration_ms = duration_ms;
    spec.class_effect = std::move(effect);
    spec.seed = seed;
    const auto raw = generate_synthetic_cohort(spec);
    PipelineConfig pc;
    pc.vt = 40.0;
    return process_cohort(raw, pc, 1);
}

const ProcessedCohort& weak_cohort() {
    static const auto c = make_cohort(40, {{"fixation_velocity", 2.0}}, 5);
    return c;
}

ExperimentConfig quick(int runs) {
    ExperimentConfig c;
    c.n_runs = runs;
    c.seed = 17;
    c.jobs = 1;
    return c;
}

}  // namespace

TEST_CASE("sample SD and SEM") {
    const std::vector<double> v{1, 2, 3, 4, 5};
    const auto s = sem(v);
    CHECK(s.mean == 3.0);
    CHECK(s.sd == Approx(std::sqrt(2.5)).margin(1e-15));
    CHECK(s.sem == Approx(std::sqrt(0.5)).margin(1e-15));
    const std::vector<double> flat{0.7, 0.7, 0.7};
    CHECK(sem(flat).sd == 0.0);
    CHECK(sem(flat).sem == 0.0);
    const std::vector<double> one{0.5};
    CHECK_THROWS_AS(sem(one), ConfigError);
}

TEST_CASE("splits are balanced and disjoint") {
    const auto report = run_experiment(weak_cohort(), quick(6));
    CHECK(report.n_participants == 40);
    CHECK(report.n_train_per_class == 16);
    CHECK(report.n_test_per_class == 4);
    std::map<std::string, Gender> gender;
    for (const auto& p : weak_cohort().participants) {
        gender[p.participant_id] = p.gender;
    }
    for (const auto& r : report.runs) {
        REQUIRE(r.train_ids.size() == 32);
        REQUIRE(r.test_ids.size() == 8);
        const std::set<std::string> train(r.train_ids.begin(), r.train_ids.end());
        int test_female = 0;
        for (const auto& id : r.test_ids) {
            REQUIRE(!train.contains(id));
            test_female += gender[id] == Gender::female ? 1 : 0;
        }
        REQUIRE(test_female == 4);
        REQUIRE(r.weights == EnsembleWeights{});
        REQUIRE(r.fixation_features.size() == 1);
    }
    CHECK(!report.leaky);
    CHECK(!report.mean_weights);
}

TEST_CASE("experiments are deterministic and independent of the job count") {
    auto c = quick(5);
    const auto a = run_experiment(weak_cohort(), c);
    c.jobs = 3;
    const auto b = run_experiment(weak_cohort(), c);
    CHECK(a.accuracies() == b.accuracies());
    for (std::size_t r = 0; r < a.runs.size(); ++r) {
        CHECK(a.runs[r].test_ids == b.runs[r].test_ids);
        CHECK(a.runs[r].seed == derive_seed(17, r));
    }
    c.seed = 18;
    const auto d = run_experiment(weak_cohort(), c);
    CHECK(d.runs[0].test_ids != a.runs[0].test_ids);
}

TEST_CASE("a separable cohort scores perfectly in every run") {
    const auto cohort = make_cohort(30, {{"fixation_velocity", 12.0}}, 9);
    // Only the fixation channel separates the classes, so fuse on it alone.
    auto c = quick(8);
    c.weight_mode = WeightMode::manual;
    c.manual_weights = EnsembleWeights{1.0, 0.0};
    const auto report = run_experiment(cohort, c);
    for (const auto& r : report.runs) {
        CHECK(r.fixation_accuracy == 1.0);
    }
    CHECK(report.mean_accuracy == 1.0);
    CHECK(report.sd == 0.0);
    CHECK(report.sem == 0.0);
    CHECK(report.interval_low == 1.0);
}

TEST_CASE("report summary follows the run accuracies") {
    const auto report = run_experiment(weak_cohort(), quick(7));
    const auto acc = report.accuracies();
    double mean = 0.0;
    for (double a : acc) {
        mean += a;
    }
    mean /= 7.0;
    double ss = 0.0;
    for (double a : acc) {
        ss += (a - mean) * (a - mean);
    }
    const double sd = std::sqrt(ss / 6.0);
    CHECK(report.mean_accuracy == Approx(mean).margin(1e-14));
    CHECK(report.sd == Approx(sd).margin(1e-14));
    CHECK(report.sem == Approx(sd / std::sqrt(7.0)).margin(1e-14));
    CHECK(report.interval_high - report.interval_low == Approx(4.0 * report.sem).margin(1e-14));

    const auto single = run_experiment(weak_cohort(), quick(1));
    CHECK(single.sd == 0.0);
    CHECK(single.sem == 0.0);
}

TEST_CASE("leaky modes are flagged and non-leaky modes never see test rows") {
    auto c = quick(3);
    c.weight_mode = WeightMode::optimized;
    c.tune_folds = 3;
    // The guard throws std::logic_error if a test row reaches fitting.
    REQUIRE_NOTHROW(run_experiment(weak_cohort(), c));
    const auto tuned = run_experiment(weak_cohort(), c);
    CHECK(!tuned.leaky);
    REQUIRE(tuned.mean_weights);
    CHECK_NOTHROW(tuned.mean_weights->validate());

    c.tune_on = TuneOn::test_leaky;
    CHECK(run_experiment(weak_cohort(), c).leaky);
    c.tune_on = TuneOn::train;
    c.rank_on = RankOn::all;
    CHECK(run_experiment(weak_cohort(), c).leaky);
    c.rank_on = RankOn::train;
    c.weight_mode = WeightMode::manual;
    c.manual_weights = EnsembleWeights{0.8, 0.2};
    const auto manual = run_experiment(weak_cohort(), c);
    CHECK(!manual.leaky);
    CHECK(manual.runs[0].weights == EnsembleWeights{0.8, 0.2});
}

TEST_CASE("configuration errors") {
    auto c = quick(0);
    CHECK_THROWS_AS(run_experiment(weak_cohort(), c), ConfigError);
    c = quick(2);
    c.split_ratio = 1.0;
    CHECK_THROWS_AS(run_experiment(weak_cohort(), c), ConfigError);
    c = quick(2);
    c.subset_size = 7;
    CHECK_THROWS_AS(run_experiment(weak_cohort(), c), ConfigError);
    c.subset_size = 100;
    CHECK_THROWS_AS(run_experiment(weak_cohort(), c), DataError);
    c = quick(2);
    c.split_ratio = 0.05;
    CHECK_THROWS_AS(run_experiment(weak_cohort(), c), DataError);
    CHECK_THROWS_AS(parse_weight_mode("best"), ConfigError);
    CHECK(parse_tune_on("test-leaky") == TuneOn::test_leaky);
}

TEST_CASE("a feature-count sweep shares its splits") {
    const std::vector<int> ks{1, 3};
    const auto reports = sweep_feature_counts(weak_cohort(), ks, quick(4));
    REQUIRE(reports.size() == 2);
    CHECK(reports[1].runs[0].fixation_features.size() == 3);
    for (std::size_t r = 0; r < 4; ++r) {
        CHECK(reports[0].runs[r].test_ids == reports[1].runs[r].test_ids);
    }
}

TEST_CASE("the six-feature comparison runs on one shared subset") {
    const auto cohort = make_cohort(50, {{"fixation_velocity", 2.0}}, 6);
    const auto cmp = sota_protocol(cohort, quick(3));
    CHECK(cmp.subset_ids.size() == 45);
    CHECK(cmp.pipeline.n_participants == 45);
    CHECK(cmp.sota.n_participants == 45);
    CHECK(cmp.sota.n_train_per_class == 16);
    CHECK(cmp.sota.n_test_per_class == 4);
    CHECK(!cmp.sota.runs[0].weights);
    for (std::size_t r = 0; r < 3; ++r) {
        CHECK(cmp.pipeline.runs[r].test_ids == cmp.sota.runs[r].test_ids);
    }
    const std::set<std::string> unique(cmp.subset_ids.begin(), cmp.subset_ids.end());
    CHECK(unique.size() == 45);
}

TEST_CASE("sd-vs-users repeats a repeated size") {
    const std::vector<int> sizes{10, 20, 20};
    const auto points = sd_vs_users(weak_cohort(), sizes, quick(5));
    REQUIRE(points.size() == 3);
    CHECK(points[0].n_users == 10);
    CHECK(points[1].sd == points[2].sd);
    CHECK(points[1].mean == points[2].mean);
    const std::vector<int> descending{20, 10};
    CHECK_THROWS_AS(sd_vs_users(weak_cohort(), descending, quick(2)), ConfigError);
}

TEST_CASE("cohort statistics see no difference between identical viewers") {
    CohortSpec spec;
    spec.n_participants = 2;
    spec.duration_ms = 8000.0;
    spec.seed = 3;
    const auto base = generate_synthetic_cohort(spec).front();
    std::vector<GazeTrajectory> copies;
    for (int i = 0; i < 8; ++i) {
        auto t = base;
        t.participant_id = "C" + std::to_string(i);
        t.gender = i % 2 == 0 ? Gender::female : Gender::male;
        copies.push_back(t);
    }
    PipelineConfig pc;
    pc.vt = 40.0;
    const auto cohort = process_cohort(copies, pc, 1);
    for (auto test : {StatTest::mannwhitney, StatTest::ttest}) {
        const auto stats = cohort_stats(cohort, AoiSpec::defaults(), test);
        REQUIRE(stats.rows.size() == 5);
        for (const auto& row : stats.rows) {
            CHECK(row.p_value == 1.0);
            CHECK(row.female.mean == row.male.mean);
        }
    }
}

TEST_CASE("cohort statistics detect a left-eye preference") {
    const auto cohort = make_cohort(30, {{"left_bias", -0.3}}, 8, 20000.0);
    const auto stats = cohort_stats(cohort, AoiSpec::defaults());
    const auto it = std::find_if(stats.rows.begin(), stats.rows.end(),
                                 [](const MeasureRow& r) { return r.measure == "left_eye_share"; });
    REQUIRE(it != stats.rows.end());
    CHECK(it->female.mean > it->male.mean);
    CHECK(it->p_value < 0.01);
    CHECK(it->female.n == 15);
}

TEST_CASE("AOI files") {
    const auto dir = testing::scratch_dir("aoi");
    {
        std::ofstream out(dir / "aoi.json");
        out << R"({"mouth": [500, 700, 780, 800]})";
    }
    const auto aoi = AoiSpec::load(dir / "aoi.json");
    REQUIRE(aoi.regions.size() == 1);
    CHECK(aoi.regions.at("mouth").x1 == 780);
    CHECK_NOTHROW(aoi.validate(ScreenGeometry{}));
    {
        std::ofstream out(dir / "bad.json");
        out << R"({"mouth": [500, 700]})";
    }
    CHECK_THROWS_AS(AoiSpec::load(dir / "bad.json"), DataError);
    AoiSpec off;
    off.regions["sky"] = Rect{0, 0, 2000, 10};
    CHECK_THROWS_AS(off.validate(ScreenGeometry{}), ConfigError);
}
