#include "catch_amalgamated.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "gazeforge/errors.hpp"
#include "gazeforge/ingest.hpp"
#include "support.hpp"

using namespace gazeforge;

namespace {

constexpr const char* kHeader = "participant_id,gender,trial_id,t_ms,x_px,y_px\n";

std::vector<GazeTrajectory> parse(const std::string& body, const LoadOptions& opts = {}) {
    std::istringstream in(std::string(kHeader) + body);
    return read_cohort(in, ScreenGeometry{}, opts);
}

}  // namespace

TEST_CASE("rows are grouped, sorted and trials joined") {
    // Out of order on purpose; trial 1 ends at t = 4, so trial 2 starts at 8.
    const auto cohort = parse(
        "P2,M,1,0,10,10\n"
        "P1,F,2,100,3,3\n"
        "P1,F,1,4,2,2\n"
        "P1,F,1,0,1,1\n"
        "P1,F,2,104,4,4\n");
    REQUIRE(cohort.size() == 2);
    const auto& p1 = cohort[0];
    CHECK(p1.participant_id == "P1");
    CHECK(p1.gender == Gender::female);
    REQUIRE(p1.samples.size() == 4);
    const std::vector<double> t{0, 4, 8, 12};
    const std::vector<double> x{1, 2, 3, 4};
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(p1.samples[i].t_ms == t[i]);
        CHECK(p1.samples[i].x_px == x[i]);
    }
    CHECK(cohort[1].gender == Gender::male);
}

TEST_CASE("32 trials totalling 130 s are capped at exactly 30000 samples") {
    std::vector<std::vector<GazeSample>> trials(32);
    // 32500 samples at 250 Hz = 130 s, split unevenly, each trial starting at t = 0.
    int total = 0;
    for (int k = 0; k < 32; ++k) {
        const int n = k < 20 ? 1016 : 1015;
        total += n;
        for (int i = 0; i < n; ++i) {
            trials[k].push_back({4.0 * i, 100.0, 100.0});
        }
    }
    REQUIRE(total == 32500);
    const auto joined = concat_trials(trials, 120000.0, 250.0);
    CHECK(joined.size() == 30000);
    CHECK(joined.back().t_ms == 4.0 * 29999);
    for (std::size_t i = 1; i < joined.size(); ++i) {
        REQUIRE(joined[i].t_ms - joined[i - 1].t_ms == 4.0);
    }
}

TEST_CASE("non-finite and off-screen samples are dropped") {
    const auto cohort = parse(
        "A,F,0,0,10,10\n"
        "A,F,0,4,NaN,10\n"
        "A,F,0,8,,\n"
        "A,F,0,12,-1,10\n"
        "A,F,0,16,10,2000\n"
        "A,F,0,20,20,20\n");
    REQUIRE(cohort[0].samples.size() == 2);
    CHECK(cohort[0].samples[1].x_px == 20.0);

    LoadOptions keep;
    keep.drop_offscreen = false;
    CHECK(parse("A,F,0,0,10,10\nA,F,0,4,-1,10\n", keep)[0].samples.size() == 2);
}

TEST_CASE("malformed input is rejected with the line number") {
    std::istringstream bad_header("id,gender,trial,t,x,y\nA,F,0,0,1,1\n");
    CHECK_THROWS_AS(read_cohort(bad_header, ScreenGeometry{}), DataError);

    auto message = [](const std::string& body) {
        try {
            parse(body);
        } catch (const DataError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK_THAT(message("A,F,0,0,1,1\nA,X,0,4,1,1\n"), Catch::Matchers::ContainsSubstring("line 3"));
    CHECK_THAT(message("A,F,0,0,1,1\nA,M,0,4,1,1\n"), Catch::Matchers::ContainsSubstring("conflicting"));
    CHECK_THAT(message("A,F,0,0,1,1\nA,F,0,0,2,2\n"), Catch::Matchers::ContainsSubstring("duplicate"));
    CHECK_THAT(message("A,F,0,0,1\n"), Catch::Matchers::ContainsSubstring("line 2"));
    CHECK_THAT(message("A,F,zero,0,1,1\n"), Catch::Matchers::ContainsSubstring("trial_id"));
    CHECK_THROWS_AS(load_cohort("/nonexistent/file.csv", ScreenGeometry{}), DataError);
}

TEST_CASE("byte-order mark and CRLF line ends are accepted") {
    std::istringstream in("\xEF\xBB\xBFparticipant_id,gender,trial_id,t_ms,x_px,y_px\r\nA,F,0,0,1,1\r\n");
    const auto cohort = read_cohort(in, ScreenGeometry{});
    REQUIRE(cohort.size() == 1);
    CHECK(cohort[0].samples.size() == 1);
}

TEST_CASE("write then read reproduces the cohort") {
    CohortSpec spec;
    spec.n_participants = 4;
    spec.duration_ms = 2000;
    spec.seed = 3;
    const auto cohort = generate_synthetic_cohort(spec);
    const auto path = testing::scratch_dir("ingest") / "cohort.csv";
    save_cohort(path, cohort);
    const auto back = load_cohort(path, ScreenGeometry{});
    CHECK(back == cohort);
}

TEST_CASE("screen geometry loads and validates") {
    const auto dir = testing::scratch_dir("geometry");
    {
        std::ofstream(dir / "g.json") << R"({"width_px": 1920, "viewing_distance_cm": 60})";
    }
    const auto g = ScreenGeometry::load(dir / "g.json");
    CHECK(g.width_px == 1920);
    CHECK(g.height_px == 1024);
    CHECK(g.viewing_distance_cm == 60);

    ScreenGeometry bad;
    bad.diagonal_cm = 0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("synthetic cohort layout and determinism") {
    CohortSpec spec;
    spec.n_participants = 6;
    spec.duration_ms = 3000;
    spec.seed = 11;
    const auto a = generate_synthetic_cohort(spec);
    const auto b = generate_synthetic_cohort(spec);
    CHECK(a == b);
    REQUIRE(a.size() == 6);
    CHECK(a[0].participant_id == "S0001");
    CHECK(a[5].participant_id == "S0006");
    for (int i = 0; i < 6; ++i) {
        CHECK(a[i].gender == (i < 3 ? Gender::female : Gender::male));
        CHECK(a[i].samples.size() == 750);
        for (const auto& s : a[i].samples) {
            REQUIRE(s.x_px >= 0.0);
            REQUIRE(s.x_px <= spec.geometry.width_px);
            REQUIRE(s.y_px >= 0.0);
            REQUIRE(s.y_px <= spec.geometry.height_px);
        }
    }
    spec.seed = 12;
    CHECK(generate_synthetic_cohort(spec) != a);
}

TEST_CASE("synthetic spec validation") {
    CohortSpec spec;
    spec.class_effect["mean_velocity"] = 3.0;
    CHECK_THROWS_AS(spec.validate(), ConfigError);
    spec.class_effect.clear();
    spec.n_participants = 5;
    CHECK_THROWS_AS(spec.validate(), ConfigError);
}
