#include "gazeforge/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"

#include "gazeforge/classifiers.hpp"
#include "gazeforge/ensemble.hpp"
#include "gazeforge/errors.hpp"
#include "gazeforge/evaluation.hpp"
#include "gazeforge/features.hpp"
#include "gazeforge/ingest.hpp"
#include "gazeforge/report.hpp"
#include "gazeforge/rng.hpp"
#include "gazeforge/text.hpp"

namespace fs = std::filesystem;

namespace gazeforge {

namespace {

struct PipelineArgs {
    std::string data;
    std::string geometry;
    int sg_order = 6;
    int sg_frame = 15;
    double vt = 20.0;
    CLI::Option* vt_option = nullptr;
    double mfd = 100.0;
    std::string vt_grid = "5,10,15,20,25,30,35,40,45,50";
    std::string aggregate = "pooled";
    double rate = 250.0;
    double cap_ms = 120000.0;
    bool keep_offscreen = false;
    int jobs = 0;
};

void add_pipeline_flags(CLI::App* app, PipelineArgs& a) {
    app->add_option("--data", a.data, "gaze CSV (participant_id,gender,trial_id,t_ms,x_px,y_px)")
        ->required()
        ->check(CLI::ExistingFile);
    app->add_option("--geometry", a.geometry, "screen geometry JSON (defaults: 1280x1024 px, 48.26 cm, 57 cm)")
        ->check(CLI::ExistingFile);
    app->add_option("--rate", a.rate, "sampling rate in Hz");
    app->add_option("--cap-ms", a.cap_ms, "per-participant recording cap in ms");
    app->add_flag("--keep-offscreen", a.keep_offscreen, "keep samples outside the screen");
    app->add_option("--sg-order", a.sg_order, "Savitzky-Golay polynomial order");
    app->add_option("--sg-frame", a.sg_frame, "Savitzky-Golay frame size (odd)");
    a.vt_option = app->add_option("--vt", a.vt, "velocity threshold in deg/s; omit to auto-select from --vt-grid");
    a.vt_option->default_str("auto");
    app->add_option("--mfd", a.mfd, "minimum fixation duration in ms");
    app->add_option("--vt-grid", a.vt_grid, "comma list of candidate thresholds for auto-selection");
    app->add_option("--aggregate", a.aggregate, "statistic aggregation across segments")
        ->check(CLI::IsMember({"pooled", "per-segment-mean"}));
    app->add_option("--jobs", a.jobs, "worker threads (0 = all cores)");
}

PipelineConfig pipeline_config(const PipelineArgs& a) {
    PipelineConfig c;
    if (!a.geometry.empty()) {
        c.geometry = ScreenGeometry::load(a.geometry);
    }
    c.smoothing = {a.sg_order, a.sg_frame};
    if (a.vt_option->count() > 0) {
        c.vt = a.vt;
    }
    c.mfd_ms = a.mfd;
    c.vt_grid = text::parse_double_list(a.vt_grid);
    c.aggregation = parse_aggregation(a.aggregate);
    c.validate();
    return c;
}

LoadOptions load_options(const PipelineArgs& a) { return {a.rate, a.cap_ms, !a.keep_offscreen}; }

nlohmann::json load_json(const PipelineArgs& a) {
    return {{"data", a.data}, {"sample_rate_hz", a.rate}, {"cap_ms", a.cap_ms}, {"drop_offscreen", !a.keep_offscreen}};
}

ProcessedCohort load_and_process(const PipelineArgs& a, const PipelineConfig& c, std::ostream& err) {
    const auto cohort = load_cohort(a.data, c.geometry, load_options(a));
    auto processed = process_cohort(cohort, c, a.jobs);
    for (const auto& w : processed.warnings) {
        err << "warning: " << w << '\n';
    }
    return processed;
}

struct ExperimentArgs {
    int runs = 50;
    CLI::Option* runs_option = nullptr;
    double split = 0.8;
    int k = 1;
    std::string ks = "1,2,3,4";
    std::string sizes = "20,40,80,160";
    std::string classifier = "logreg";
    double l2 = 1.0;
    std::string rf_trees = "100,300";
    std::string rf_depth = "3,5,0";
    std::string rf_min_leaf = "1,5";
    int rf_folds = 5;
    std::string weights = "equal";
    bool optimize = false;
    std::string tune_on = "train";
    int tune_folds = 5;
    std::string rank_on = "train";
    int subset = 0;
    std::string feature_set = "pipeline";
    std::uint64_t seed = 0;
    CLI::Option* seed_option = nullptr;
};

void add_classifier_flags(CLI::App* app, ExperimentArgs& a) {
    app->add_option("--classifier", a.classifier, "logreg or rf")->check(CLI::IsMember({"logreg", "rf"}));
    app->add_option("--l2", a.l2, "logistic-regression ridge strength on standardized features");
    app->add_option("--rf-trees", a.rf_trees, "random-forest grid: tree counts");
    app->add_option("--rf-depth", a.rf_depth, "random-forest grid: max depths (0 = unlimited)");
    app->add_option("--rf-min-leaf", a.rf_min_leaf, "random-forest grid: minimum leaf sizes");
    app->add_option("--rf-folds", a.rf_folds, "random-forest grid search: internal CV folds");
    app->add_option("--k", a.k, "top-ranked features per channel");
    app->add_option("--weights", a.weights, "'equal' or manual 'w_sac,w_fix'");
    app->add_flag("--optimize-weights", a.optimize, "tune fusion weights with Nelder-Mead");
    app->add_option("--tune-folds", a.tune_folds, "CV folds for weight tuning");
    a.seed_option = app->add_option("--seed", a.seed, "random seed (fallback: GAZEFORGE_SEED, then 0)");
}

std::uint64_t resolve_seed(const ExperimentArgs& a) {
    if (a.seed_option->count() > 0) {
        return a.seed;
    }
    if (const char* env = std::getenv("GAZEFORGE_SEED"); env != nullptr && *env != '\0') {
        long long v = 0;
        if (!text::parse_int(env, v) || v < 0) {
            throw ConfigError("GAZEFORGE_SEED must be a non-negative integer");
        }
        return static_cast<std::uint64_t>(v);
    }
    return 0;
}

ExperimentConfig experiment_config(const ExperimentArgs& a, int jobs) {
    ExperimentConfig c;
    c.n_runs = a.runs;
    c.split_ratio = a.split;
    c.k_features = a.k;
    c.classifier = parse_classifier_kind(a.classifier);
    if (a.optimize) {
        if (a.weights != "equal") {
            throw ConfigError("--optimize-weights and manual --weights are exclusive");
        }
        c.weight_mode = WeightMode::optimized;
    } else if (a.weights != "equal") {
        const auto w = text::parse_double_list(a.weights);
        if (w.size() != 2) {
            throw ConfigError("--weights takes 'equal' or 'w_sac,w_fix'");
        }
        c.weight_mode = WeightMode::manual;
        c.manual_weights = {w[1], w[0]};
    }
    c.rank_on = parse_rank_on(a.rank_on);
    c.tune_on = parse_tune_on(a.tune_on);
    c.tune_folds = a.tune_folds;
    c.seed = resolve_seed(a);
    if (a.subset > 0) {
        c.subset_size = a.subset;
    }
    c.feature_set = parse_feature_set(a.feature_set);
    c.classifier_options.logreg.l2 = a.l2;
    c.classifier_options.grid.n_trees = text::parse_int_list(a.rf_trees);
    c.classifier_options.grid.max_depth = text::parse_int_list(a.rf_depth);
    c.classifier_options.grid.min_leaf = text::parse_int_list(a.rf_min_leaf);
    c.classifier_options.grid.cv_folds = a.rf_folds;
    c.jobs = jobs;
    if (!(c.classifier_options.logreg.l2 >= 0.0)) {
        throw ConfigError("--l2 must be non-negative");
    }
    c.validate();
    return c;
}

fs::path make_run_dir(const fs::path& base, std::uint64_t seed) {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y%m%dT%H%M%SZ", &tm);
    const std::string name = std::string(stamp) + "_seed" + std::to_string(seed);
    fs::path dir = base / name;
    for (int i = 2; fs::exists(dir); ++i) {
        dir = base / (name + "_" + std::to_string(i));
    }
    fs::create_directories(dir);
    return dir;
}

template <class Fn>
void with_output(const std::string& path, std::ostream& out, Fn&& fn) {
    if (path.empty() || path == "-") {
        fn(out);
        return;
    }
    std::ofstream file(path);
    if (!file) {
        throw DataError("cannot write " + path);
    }
    fn(file);
}

nlohmann::json pipeline_manifest_config(const PipelineArgs& p, const PipelineConfig& c) {
    return {{"load", load_json(p)}, {"pipeline", to_json(c)}};
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"gazeforge: gaze-based gender prediction pipeline", "gazeforge"};
    app.option_defaults()->always_capture_default();
    app.require_subcommand(1);
    app.set_version_flag("--version", version());

    // ingest
    PipelineArgs ingest_args;
    std::string ingest_out;
    auto* ingest = app.add_subcommand("ingest", "validate a gaze CSV and write it back normalized");
    ingest->add_option("--data", ingest_args.data, "gaze CSV")->required()->check(CLI::ExistingFile);
    ingest->add_option("--geometry", ingest_args.geometry, "screen geometry JSON")->check(CLI::ExistingFile);
    ingest->add_option("--rate", ingest_args.rate, "sampling rate in Hz");
    ingest->add_option("--cap-ms", ingest_args.cap_ms, "per-participant recording cap in ms");
    ingest->add_flag("--keep-offscreen", ingest_args.keep_offscreen, "keep samples outside the screen");
    ingest->add_option("--out", ingest_out, "normalized CSV (one trial per participant)");

    // synth
    CohortSpec synth_spec;
    std::vector<std::string> synth_effects;
    std::string synth_out;
    std::string synth_geometry;
    auto* synth = app.add_subcommand("synth", "generate a synthetic labelled cohort");
    synth->add_option("--n", synth_spec.n_participants, "participants (first half female)");
    synth->add_option("--duration-ms", synth_spec.duration_ms, "recording length per participant");
    synth->add_option("--rate", synth_spec.sample_rate_hz, "sampling rate in Hz");
    synth->add_option("--noise", synth_spec.noise_sd_px, "positional noise SD in px");
    synth->add_option("--effect", synth_effects,
                      "class-M offset key=value; keys fixation_velocity, saccade_velocity, fixation_duration, left_bias");
    synth->add_option("--seed", synth_spec.seed, "generator seed");
    synth->add_option("--geometry", synth_geometry, "screen geometry JSON")->check(CLI::ExistingFile);
    synth->add_option("--out", synth_out, "output CSV")->required();

    // segment
    PipelineArgs segment_args;
    std::string segment_out;
    auto* segment = app.add_subcommand("segment", "smooth, run I-VT and write the segments");
    add_pipeline_flags(segment, segment_args);
    segment->add_option("--out", segment_out, "segments CSV (default stdout)");

    // features
    PipelineArgs features_args;
    std::string features_out;
    auto* features = app.add_subcommand("features", "write fixation, saccade and sota feature tables");
    add_pipeline_flags(features, features_args);
    features->add_option("--out-dir", features_out, "directory for the three CSV tables")->required();

    // rank
    PipelineArgs rank_args;
    std::string rank_out;
    std::string rank_channel = "both";
    auto* rank = app.add_subcommand("rank", "ANOVA F ranking over the whole cohort");
    add_pipeline_flags(rank, rank_args);
    rank->add_option("--channel", rank_channel, "fixation, saccade, sota or both")
        ->check(CLI::IsMember({"fixation", "saccade", "sota", "both"}));
    rank->add_option("--out", rank_out, "ranking CSV (default stdout)");

    // train
    PipelineArgs train_args;
    ExperimentArgs train_exp;
    std::string train_out;
    auto* train = app.add_subcommand("train", "fit both channel classifiers on the whole cohort and save them");
    add_pipeline_flags(train, train_args);
    add_classifier_flags(train, train_exp);
    train->add_option("--out", train_out, "model JSON")->required();

    // evaluate
    PipelineArgs eval_args;
    ExperimentArgs eval_exp;
    std::string eval_mode = "experiment";
    std::string eval_out = "results";
    auto* evaluate = app.add_subcommand("evaluate", "repeated balanced-split experiments");
    add_pipeline_flags(evaluate, eval_args);
    add_classifier_flags(evaluate, eval_exp);
    evaluate->add_option("--mode", eval_mode, "experiment, sweep, sota or sd-curve")
        ->check(CLI::IsMember({"experiment", "sweep", "sota", "sd-curve"}));
    eval_exp.runs_option = evaluate->add_option("--runs", eval_exp.runs, "runs per experiment (sota mode: 5 unless given)");
    evaluate->add_option("--split", eval_exp.split, "training share per class");
    evaluate->add_option("--ks", eval_exp.ks, "feature counts for --mode sweep");
    evaluate->add_option("--sizes", eval_exp.sizes, "ascending even cohort sizes for --mode sd-curve");
    evaluate->add_option("--tune-on", eval_exp.tune_on, "weight-tuning data: train or test-leaky")
        ->check(CLI::IsMember({"train", "test-leaky"}));
    evaluate->add_option("--rank-on", eval_exp.rank_on, "ANOVA ranking data: train or all")
        ->check(CLI::IsMember({"train", "all"}));
    evaluate->add_option("--subset", eval_exp.subset, "balanced random subset size (0 = whole cohort)");
    evaluate->add_option("--feature-set", eval_exp.feature_set, "pipeline or sota")
        ->check(CLI::IsMember({"pipeline", "sota"}));
    evaluate->add_option("--out-dir", eval_out, "parent of the per-experiment output directory");

    // stats
    PipelineArgs stats_args;
    std::string stats_aoi;
    std::string stats_test = "mannwhitney";
    std::string stats_out;
    auto* stats_cmd = app.add_subcommand("stats", "per-gender descriptive statistics and significance tests");
    add_pipeline_flags(stats_cmd, stats_args);
    stats_cmd->add_option("--aoi", stats_aoi, "AOI JSON {name: [x0, y0, x1, y1]} (default: left_eye, right_eye)")
        ->check(CLI::ExistingFile);
    stats_cmd->add_option("--stat-test", stats_test, "mannwhitney or ttest")
        ->check(CLI::IsMember({"mannwhitney", "ttest"}));
    stats_cmd->add_option("--out", stats_out, "JSON output (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*ingest) {
            ScreenGeometry geometry;
            if (!ingest_args.geometry.empty()) {
                geometry = ScreenGeometry::load(ingest_args.geometry);
            }
            const auto cohort = load_cohort(ingest_args.data, geometry, load_options(ingest_args));
            std::size_t samples = 0;
            for (const auto& p : cohort) {
                samples += p.samples.size();
                out << p.participant_id << ',' << gender_code(p.gender) << ',' << p.samples.size() << ','
                    << text::shortest(p.duration_ms()) << '\n';
            }
            out << "participants " << cohort.size() << ", samples " << samples << '\n';
            if (!ingest_out.empty()) {
                save_cohort(ingest_out, cohort);
            }
        } else if (*synth) {
            if (!synth_geometry.empty()) {
                synth_spec.geometry = ScreenGeometry::load(synth_geometry);
            }
            for (const auto& e : synth_effects) {
                const auto eq = e.find('=');
                if (eq == std::string::npos) {
                    throw ConfigError("--effect takes key=value, got '" + e + "'");
                }
                double v = 0.0;
                if (!text::parse_double(e.substr(eq + 1), v) || !std::isfinite(v)) {
                    throw ConfigError("--effect value must be a number, got '" + e + "'");
                }
                synth_spec.class_effect[e.substr(0, eq)] = v;
            }
            synth_spec.validate();
            save_cohort(synth_out, generate_synthetic_cohort(synth_spec));
        } else if (*segment) {
            const auto config = pipeline_config(segment_args);
            const auto cohort = load_and_process(segment_args, config, err);
            with_output(segment_out, out, [&](std::ostream& o) {
                o << "participant_id,segment,kind,start_idx,end_idx,start_ms,duration_ms\n";
                for (const auto& p : cohort.participants) {
                    for (std::size_t i = 0; i < p.segments.size(); ++i) {
                        const auto& s = p.segments[i];
                        o << p.participant_id << ',' << i << ',' << to_string(s.kind) << ',' << s.start_idx << ','
                          << s.end_idx << ',' << text::shortest(p.smoothed[s.start_idx].t_ms) << ','
                          << text::shortest(s.duration_ms) << '\n';
                    }
                }
            });
            err << "vt " << text::shortest(cohort.vt) << " deg/s\n";
        } else if (*features) {
            const auto config = pipeline_config(features_args);
            const auto cohort = load_and_process(features_args, config, err);
            fs::create_directories(features_out);
            for (auto channel : {Channel::fixation, Channel::saccade, Channel::sota}) {
                std::ofstream file(fs::path(features_out) / (std::string(to_string(channel)) + "_features.csv"));
                write_feature_table(file, cohort.table(channel));
            }
        } else if (*rank) {
            const auto config = pipeline_config(rank_args);
            const auto cohort = load_and_process(rank_args, config, err);
            std::vector<Channel> channels;
            if (rank_channel == "both") {
                channels = {Channel::fixation, Channel::saccade};
            } else {
                channels = {rank_channel == "fixation"  ? Channel::fixation
                            : rank_channel == "saccade" ? Channel::saccade
                                                        : Channel::sota};
            }
            with_output(rank_out, out, [&](std::ostream& o) {
                o << "channel,rank,feature,f_score\n";
                for (auto channel : channels) {
                    const auto ranking = anova_rank(cohort.table(channel));
                    for (std::size_t i = 0; i < ranking.size(); ++i) {
                        o << to_string(channel) << ',' << i + 1 << ',' << ranking[i].name << ','
                          << text::sig12(ranking[i].f_score) << '\n';
                    }
                }
            });
        } else if (*train) {
            const auto config = pipeline_config(train_args);
            const auto exp = experiment_config(train_exp, train_args.jobs);
            const auto cohort = load_and_process(train_args, config, err);
            RunManifest manifest;
            manifest.command = "train";
            manifest.seed = exp.seed;
            manifest.config = pipeline_manifest_config(train_args, config);
            manifest.config["experiment"] = to_json(exp);
            manifest.add_input(train_args.data);
            if (!train_args.geometry.empty()) {
                manifest.add_input(train_args.geometry);
            }

            FeatureTable fix;
            FeatureTable sac;
            fix.channel = Channel::fixation;
            sac.channel = Channel::saccade;
            for (const auto& p : cohort.participants) {
                if (p.fixation && p.saccade) {
                    fix.add(p.participant_id, p.gender, *p.fixation);
                    sac.add(p.participant_id, p.gender, *p.saccade);
                }
            }
            const auto k = static_cast<std::size_t>(exp.k_features);
            const auto fix_names = select_top_k(anova_rank(fix), k);
            const auto sac_names = select_top_k(anova_rank(sac), k);
            const auto fix_k = fix.select_columns(fix_names);
            const auto sac_k = sac.select_columns(sac_names);
            const auto fix_model =
                train_classifier(exp.classifier, fix_k, exp.classifier_options, derive_seed(exp.seed, 1));
            const auto sac_model =
                train_classifier(exp.classifier, sac_k, exp.classifier_options, derive_seed(exp.seed, 2));
            EnsembleWeights weights;
            if (exp.weight_mode == WeightMode::manual) {
                weights = exp.manual_weights;
            } else if (exp.weight_mode == WeightMode::optimized) {
                weights = optimize_weights(fix_k, sac_k, exp.classifier, exp.classifier_options,
                                           derive_seed(exp.seed, 3), exp.tune_folds)
                              .weights;
            }
            nlohmann::json model;
            model["format"] = "gazeforge-ensemble";
            model["version"] = 1;
            model["manifest"] = manifest.to_json();
            model["fixation"] = to_json(fix_model);
            model["saccade"] = to_json(sac_model);
            model["weights"] = {{"w_fix", weights.w_fix}, {"w_sac", weights.w_sac}};
            write_json(train_out, model);
        } else if (*evaluate) {
            if (eval_mode == "sota" && eval_exp.runs_option->count() == 0) {
                eval_exp.runs = 5;
            }
            const auto config = pipeline_config(eval_args);
            const auto exp = experiment_config(eval_exp, eval_args.jobs);
            const auto ks = text::parse_int_list(eval_exp.ks);
            const auto sizes = text::parse_int_list(eval_exp.sizes);

            RunManifest manifest;
            manifest.command = "evaluate";
            manifest.seed = exp.seed;
            manifest.config = pipeline_manifest_config(eval_args, config);
            manifest.config["experiment"] = to_json(exp);
            manifest.config["mode"] = eval_mode;
            if (eval_mode == "sweep") {
                manifest.config["ks"] = ks;
            } else if (eval_mode == "sd-curve") {
                manifest.config["sizes"] = sizes;
            }
            manifest.add_input(eval_args.data);
            if (!eval_args.geometry.empty()) {
                manifest.add_input(eval_args.geometry);
            }
            const auto dir = make_run_dir(eval_out, exp.seed);
            write_json(dir / "manifest.json", manifest.to_json());

            const auto cohort = load_and_process(eval_args, config, err);
            nlohmann::json report;
            report["cohort"] = to_json(cohort);
            std::vector<std::pair<double, double>> plot;
            if (eval_mode == "experiment") {
                const auto r = run_experiment(cohort, exp);
                report["experiment"] = to_json(r);
                std::ofstream runs(dir / "runs.csv");
                write_runs_csv(runs, r);
                out << "mean accuracy " << text::sig12(100.0 * r.mean_accuracy) << " % +- "
                    << text::sig12(100.0 * r.sem) << " % (SEM), SD " << text::sig12(100.0 * r.sd) << " %"
                    << (r.leaky ? " [leaky]" : "") << '\n';
            } else if (eval_mode == "sweep") {
                const auto reports = sweep_feature_counts(cohort, ks, exp);
                auto& rows = report["sweep"] = nlohmann::json::array();
                for (std::size_t i = 0; i < reports.size(); ++i) {
                    rows.push_back(to_json(reports[i]));
                    plot.emplace_back(ks[i], reports[i].mean_accuracy);
                    std::ofstream runs(dir / ("runs_k" + std::to_string(ks[i]) + ".csv"));
                    write_runs_csv(runs, reports[i]);
                    out << "k " << ks[i] << ": " << text::sig12(100.0 * reports[i].mean_accuracy) << " % +- "
                        << text::sig12(100.0 * reports[i].sem) << " %\n";
                }
            } else if (eval_mode == "sota") {
                const auto c = sota_protocol(cohort, exp);
                report["sota"] = to_json(c);
                out << "pipeline " << text::sig12(100.0 * c.pipeline.mean_accuracy) << " % (SD "
                    << text::sig12(100.0 * c.pipeline.sd) << " %)\n"
                    << "sota     " << text::sig12(100.0 * c.sota.mean_accuracy) << " % (SD "
                    << text::sig12(100.0 * c.sota.sd) << " %)\n";
            } else {
                const auto curve = sd_vs_users(cohort, sizes, exp);
                report["sd_curve"] = to_json(curve);
                for (const auto& p : curve) {
                    plot.emplace_back(p.n_users, p.sd);
                    out << "n " << p.n_users << ": SD " << text::sig12(100.0 * p.sd) << " %\n";
                }
            }
            if (!plot.empty()) {
                std::ofstream file(dir / "plot.csv");
                write_xy_csv(file, plot);
            }
            write_json(dir / "report.json", report);
            out << "wrote " << dir.string() << '\n';
        } else if (*stats_cmd) {
            const auto config = pipeline_config(stats_args);
            const auto aoi = stats_aoi.empty() ? AoiSpec::defaults() : AoiSpec::load(stats_aoi);
            aoi.validate(config.geometry);
            const auto cohort = load_and_process(stats_args, config, err);
            const auto result = cohort_stats(cohort, aoi, parse_stat_test(stats_test));
            with_output(stats_out, out, [&](std::ostream& o) { o << to_json(result).dump(2) << '\n'; });
        }
    } catch (const ConfigError& e) {
        err << "usage error: " << e.what() << '\n';
        return 1;
    } catch (const DataError& e) {
        err << "data error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}

}  // namespace gazeforge
