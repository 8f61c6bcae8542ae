#include "catch_amalgamated.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gazeforge/cli.hpp"
#include "gazeforge/report.hpp"
#include "json.hpp"
#include "support.hpp"

using namespace gazeforge;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code = 0;
    std::string out;
    std::string err;
};

Outcome run(std::vector<std::string> args) {
    args.insert(args.begin(), "gazeforge");
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<fs::path> subdirs(const fs::path& dir) {
    std::vector<fs::path> out;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.is_directory()) {
            out.push_back(e.path());
        }
    }
    return out;
}

nlohmann::json read_json(const fs::path& p) {
    std::ifstream in(p);
    return nlohmann::json::parse(in);
}

// One synthetic cohort shared by the tests below.
const fs::path& cohort_csv() {
    static const fs::path path = [] {
        const auto dir = testing::scratch_dir("cli_cohort");
        const auto p = dir / "cohort.csv";
        const auto r = run({"synth", "--n", "24", "--duration-ms", "10000", "--seed", "4", "--effect",
                            "fixation_velocity=4", "--out", p.string()});
        REQUIRE(r.code == 0);
        return p;
    }();
    return path;
}

}  // namespace

TEST_CASE("synth then evaluate writes a complete results directory") {
    const auto out_dir = testing::scratch_dir("cli_eval");
    const auto r = run({"evaluate", "--data", cohort_csv().string(), "--runs", "4", "--vt", "40", "--seed", "9",
                        "--out-dir", out_dir.string()});
    INFO(r.err);
    REQUIRE(r.code == 0);
    CHECK(r.out.find("mean accuracy") != std::string::npos);
    const auto dirs = subdirs(out_dir);
    REQUIRE(dirs.size() == 1);
    CHECK(dirs[0].filename().string().ends_with("_seed9"));
    for (const char* f : {"manifest.json", "report.json", "runs.csv"}) {
        CHECK(fs::exists(dirs[0] / f));
    }
    const auto manifest = read_json(dirs[0] / "manifest.json");
    CHECK(manifest["command"] == "evaluate");
    CHECK(manifest["seed"] == 9);
    REQUIRE(manifest["inputs"].size() == 1);
    CHECK(manifest["inputs"][0]["sha256"] == sha256_file(cohort_csv()));
    CHECK(manifest["config"]["experiment"]["n_runs"] == 4);

    const auto report = read_json(dirs[0] / "report.json");
    CHECK(report["experiment"]["runs"].size() == 4);

    std::ifstream runs(dirs[0] / "runs.csv");
    std::string header;
    std::getline(runs, header);
    CHECK(header == "run,seed,accuracy,fixation_accuracy,saccade_accuracy,w_fix,w_sac");
    int lines = 0;
    for (std::string line; std::getline(runs, line);) {
        ++lines;
    }
    CHECK(lines == 4);
}

TEST_CASE("the seed falls back to GAZEFORGE_SEED") {
    const auto out_dir = testing::scratch_dir("cli_env");
    ::setenv("GAZEFORGE_SEED", "31", 1);
    const auto r = run({"evaluate", "--data", cohort_csv().string(), "--runs", "2", "--vt", "40", "--out-dir",
                        out_dir.string()});
    ::unsetenv("GAZEFORGE_SEED");
    REQUIRE(r.code == 0);
    const auto dirs = subdirs(out_dir);
    REQUIRE(dirs.size() == 1);
    CHECK(read_json(dirs[0] / "manifest.json")["seed"] == 31);

    ::setenv("GAZEFORGE_SEED", "abc", 1);
    const auto bad = run({"evaluate", "--data", cohort_csv().string(), "--runs", "2", "--out-dir", out_dir.string()});
    ::unsetenv("GAZEFORGE_SEED");
    CHECK(bad.code == 1);
}

TEST_CASE("exit codes") {
    CHECK(run({"evaluate", "--data", cohort_csv().string(), "--runs", "0"}).code == 1);
    CHECK(run({"evaluate", "--data", "/nonexistent/cohort.csv"}).code == 1);
    CHECK(run({"evaluate", "--data", cohort_csv().string(), "--classifier", "svm"}).code == 1);
    CHECK(run({"frobnicate"}).code == 1);

    const auto dir = testing::scratch_dir("cli_bad");
    {
        std::ofstream out(dir / "bad.csv");
        out << "participant_id,gender,trial_id,t_ms,x_px,y_px\nP1,F,1,0,10\n";
    }
    const auto r = run({"ingest", "--data", (dir / "bad.csv").string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("line 2") != std::string::npos);
}

TEST_CASE("help lists defaults") {
    const auto r = run({"evaluate", "--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("--runs") != std::string::npos);
    CHECK(r.out.find("50") != std::string::npos);
    CHECK(r.out.find("0.8") != std::string::npos);
}

TEST_CASE("ingest, features, rank and train") {
    const auto dir = testing::scratch_dir("cli_steps");
    const auto ing = run({"ingest", "--data", cohort_csv().string()});
    REQUIRE(ing.code == 0);
    CHECK(ing.out.find("participants 24") != std::string::npos);

    REQUIRE(run({"features", "--data", cohort_csv().string(), "--vt", "40", "--out-dir", (dir / "f").string()}).code ==
            0);
    for (const char* f : {"fixation_features.csv", "saccade_features.csv", "sota_features.csv"}) {
        CHECK(fs::exists(dir / "f" / f));
    }

    const auto rank = run({"rank", "--data", cohort_csv().string(), "--vt", "40", "--channel", "fixation"});
    REQUIRE(rank.code == 0);
    CHECK(rank.out.starts_with("channel,rank,feature,f_score\nfixation,1,"));

    const auto model_path = dir / "model.json";
    REQUIRE(run({"train", "--data", cohort_csv().string(), "--vt", "40", "--out", model_path.string()}).code == 0);
    const auto model = read_json(model_path);
    CHECK(model["format"] == "gazeforge-ensemble");
    CHECK(model.contains("manifest"));
}

TEST_CASE("sha256 of a known file") {
    const auto dir = testing::scratch_dir("cli_sha");
    {
        std::ofstream out(dir / "abc.txt", std::ios::binary);
        out << "abc";
    }
    CHECK(sha256_file(dir / "abc.txt") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
