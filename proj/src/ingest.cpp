#include "gazeforge/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <tuple>

#include "json.hpp"

#include "gazeforge/errors.hpp"
#include "gazeforge/rng.hpp"
#include "gazeforge/signal.hpp"
#include "gazeforge/text.hpp"

namespace gazeforge {

char gender_code(Gender g) noexcept { return g == Gender::female ? 'F' : 'M'; }

Gender parse_gender(std::string_view code) {
    code = text::trim(code);
    if (code == "F") {
        return Gender::female;
    }
    if (code == "M") {
        return Gender::male;
    }
    throw DataError("unknown gender code '" + std::string(code) + "' (expected F or M)");
}

double GazeTrajectory::duration_ms() const {
    if (samples.empty()) {
        return 0.0;
    }
    return samples.back().t_ms - samples.front().t_ms;
}

std::vector<double> GazeTrajectory::timestamps() const {
    std::vector<double> ts(samples.size());
    std::transform(samples.begin(), samples.end(), ts.begin(),
                   [](const GazeSample& s) { return s.t_ms; });
    return ts;
}

void ScreenGeometry::validate() const {
    for (double v : {width_px, height_px, diagonal_cm, viewing_distance_cm}) {
        if (!std::isfinite(v) || v <= 0.0) {
            throw ConfigError("screen geometry fields must be finite and strictly positive");
        }
    }
}

ScreenGeometry ScreenGeometry::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open geometry file " + path.string());
    }
    ScreenGeometry g;
    try {
        const auto j = nlohmann::json::parse(in);
        g.width_px = j.value("width_px", g.width_px);
        g.height_px = j.value("height_px", g.height_px);
        g.diagonal_cm = j.value("diagonal_cm", g.diagonal_cm);
        g.viewing_distance_cm = j.value("viewing_distance_cm", g.viewing_distance_cm);
    } catch (const nlohmann::json::exception& e) {
        throw DataError("geometry file " + path.string() + ": " + e.what());
    }
    g.validate();
    return g;
}

Rect default_left_eye_region() { return {540.0, 430.0, 610.0, 480.0}; }
Rect default_right_eye_region() { return {670.0, 430.0, 740.0, 480.0}; }
Rect default_face_region() { return {460.0, 330.0, 820.0, 730.0}; }

std::vector<GazeSample> concat_trials(std::span<const std::vector<GazeSample>> trials,
                                      double cap_ms, double sample_rate_hz) {
    if (trials.empty()) {
        throw DataError("concat_trials: empty trial list");
    }
    if (!(sample_rate_hz > 0.0)) {
        throw ConfigError("concat_trials: sample rate must be positive");
    }
    const double period = 1000.0 / sample_rate_hz;
    std::vector<GazeSample> out;
    for (const auto& trial : trials) {
        if (trial.empty()) {
            throw DataError("concat_trials: empty trial");
        }
        const double shift = out.empty() ? 0.0 : out.back().t_ms + period - trial.front().t_ms;
        for (const auto& s : trial) {
            out.push_back({s.t_ms + shift, s.x_px, s.y_px});
        }
    }
    const double t0 = out.front().t_ms;
    const auto past_cap = std::find_if(out.begin(), out.end(), [&](const GazeSample& s) {
        return s.t_ms - t0 >= cap_ms;
    });
    out.erase(past_cap, out.end());
    return out;
}

namespace {

struct RawRow {
    long long trial = 0;
    GazeSample sample;
    std::size_t line = 0;
};

struct RawParticipant {
    Gender gender = Gender::female;
    std::vector<RawRow> rows;
};

constexpr std::string_view kHeader = "participant_id,gender,trial_id,t_ms,x_px,y_px";

[[noreturn]] void malformed(std::size_t line, const std::string& what) {
    throw DataError("line " + std::to_string(line) + ": " + what);
}

}  // namespace

std::vector<GazeTrajectory> read_cohort(std::istream& in, const ScreenGeometry& geometry,
                                        const LoadOptions& options) {
    geometry.validate();
    std::string line;
    if (!std::getline(in, line)) {
        throw DataError("empty gaze file (header required)");
    }
    if (!line.empty() && static_cast<unsigned char>(line[0]) == 0xEF) {
        line.erase(0, 3);  // UTF-8 byte-order mark
    }
    {
        std::string header;
        for (auto field : text::split(text::trim(line), ',')) {
            header += std::string(text::trim(field)) + ",";
        }
        header.pop_back();
        if (header != kHeader) {
            malformed(1, "header must be '" + std::string(kHeader) + "'");
        }
    }

    std::map<std::string, RawParticipant> participants;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        const auto trimmed = text::trim(line);
        if (trimmed.empty()) {
            continue;
        }
        const auto fields = text::split(trimmed, ',');
        if (fields.size() != 6) {
            malformed(line_no, "expected 6 fields, found " + std::to_string(fields.size()));
        }
        const std::string id(text::trim(fields[0]));
        if (id.empty()) {
            malformed(line_no, "empty participant_id");
        }
        Gender gender{};
        try {
            gender = parse_gender(fields[1]);
        } catch (const DataError& e) {
            malformed(line_no, e.what());
        }
        RawRow row;
        row.line = line_no;
        if (!text::parse_int(fields[2], row.trial)) {
            malformed(line_no, "trial_id is not an integer");
        }
        if (!text::parse_double(fields[3], row.sample.t_ms) || !std::isfinite(row.sample.t_ms) ||
            row.sample.t_ms < 0.0) {
            malformed(line_no, "t_ms must be a finite non-negative number");
        }
        if (!text::parse_double(fields[4], row.sample.x_px) ||
            !text::parse_double(fields[5], row.sample.y_px)) {
            malformed(line_no, "coordinates are not numbers");
        }

        auto [it, inserted] = participants.try_emplace(id);
        if (inserted) {
            it->second.gender = gender;
        } else if (it->second.gender != gender) {
            malformed(line_no, "participant " + id + " has conflicting gender codes");
        }

        const auto& s = row.sample;
        if (!std::isfinite(s.x_px) || !std::isfinite(s.y_px)) {
            continue;
        }
        if (options.drop_offscreen &&
            (s.x_px < 0.0 || s.y_px < 0.0 || s.x_px > geometry.width_px || s.y_px > geometry.height_px)) {
            continue;
        }
        it->second.rows.push_back(row);
    }

    std::vector<GazeTrajectory> cohort;
    cohort.reserve(participants.size());
    for (auto& [id, raw] : participants) {
        std::stable_sort(raw.rows.begin(), raw.rows.end(), [](const RawRow& a, const RawRow& b) {
            return std::tie(a.trial, a.sample.t_ms) < std::tie(b.trial, b.sample.t_ms);
        });
        std::vector<std::vector<GazeSample>> trials;
        for (std::size_t i = 0; i < raw.rows.size(); ++i) {
            const auto& row = raw.rows[i];
            if (i > 0 && raw.rows[i - 1].trial == row.trial &&
                raw.rows[i - 1].sample.t_ms == row.sample.t_ms) {
                malformed(row.line, "duplicate (participant, trial, t_ms) key for " + id);
            }
            if (i == 0 || raw.rows[i - 1].trial != row.trial) {
                trials.emplace_back();
            }
            trials.back().push_back(row.sample);
        }
        GazeTrajectory traj;
        traj.participant_id = id;
        traj.gender = raw.gender;
        traj.sample_rate_hz = options.sample_rate_hz;
        if (!trials.empty()) {
            traj.samples = concat_trials(trials, options.cap_ms, options.sample_rate_hz);
        }
        cohort.push_back(std::move(traj));
    }
    return cohort;
}

std::vector<GazeTrajectory> load_cohort(const std::filesystem::path& path,
                                        const ScreenGeometry& geometry,
                                        const LoadOptions& options) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open gaze file " + path.string());
    }
    try {
        return read_cohort(in, geometry, options);
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

void write_cohort(std::ostream& out, std::span<const GazeTrajectory> cohort) {
    out << kHeader << '\n';
    for (const auto& traj : cohort) {
        const char g = gender_code(traj.gender);
        for (const auto& s : traj.samples) {
            out << traj.participant_id << ',' << g << ",0," << text::shortest(s.t_ms) << ','
                << text::shortest(s.x_px) << ',' << text::shortest(s.y_px) << '\n';
        }
    }
}

void save_cohort(const std::filesystem::path& path, std::span<const GazeTrajectory> cohort) {
    std::ofstream out(path);
    if (!out) {
        throw DataError("cannot write " + path.string());
    }
    write_cohort(out, cohort);
}

void CohortSpec::validate() const {
    if (n_participants < 2 || n_participants % 2 != 0) {
        throw ConfigError("cohort size must be even and >= 2");
    }
    if (!(noise_sd_px >= 0.0)) {
        throw ConfigError("noise_sd_px must be >= 0");
    }
    if (!(duration_ms > 0.0) || !(sample_rate_hz > 0.0)) {
        throw ConfigError("duration and sample rate must be positive");
    }
    for (const auto& [key, value] : class_effect) {
        if (key != "fixation_velocity" && key != "saccade_velocity" && key != "fixation_duration" &&
            key != "left_bias") {
            throw ConfigError("unknown class effect '" + key + "'");
        }
        if (!std::isfinite(value)) {
            throw ConfigError("class effect '" + key + "' must be finite");
        }
    }
    geometry.validate();
}

namespace {

// Per-participant generative parameters.
struct Viewer {
    double drift_deg_s = 4.0;
    double saccade_deg_s = 200.0;
    double fixation_ms = 280.0;
    double left_share = 0.5;
};

constexpr double kEyeTargetProb = 0.6;
constexpr double kMinFixationMs = 120.0;
constexpr double kMinAmplitudeDeg = 1.0;
constexpr double kPullPerSecond = 5.0;

double round_to(double v, double quantum) { return std::round(v / quantum) * quantum; }

struct Point {
    double x;
    double y;
};

Point uniform_in(const Rect& r, Rng& rng) {
    return {rng.uniform(r.x0, r.x1), rng.uniform(r.y0, r.y1)};
}

Point draw_target(const Viewer& viewer, Rng& rng) {
    if (rng.bernoulli(kEyeTargetProb)) {
        return uniform_in(rng.bernoulli(viewer.left_share) ? default_left_eye_region()
                                                           : default_right_eye_region(),
                          rng);
    }
    return uniform_in(default_face_region(), rng);
}

GazeTrajectory generate_one(const CohortSpec& spec, int index, Gender gender) {
    Rng rng(derive_seed(spec.seed, static_cast<std::uint64_t>(index)));
    auto effect = [&](const char* key) {
        if (gender != Gender::male) {
            return 0.0;
        }
        const auto it = spec.class_effect.find(key);
        return it == spec.class_effect.end() ? 0.0 : it->second;
    };

    Viewer viewer;
    viewer.drift_deg_s = std::max(0.5, rng.normal(4.0, 0.8) + effect("fixation_velocity"));
    viewer.saccade_deg_s = std::max(40.0, rng.normal(200.0, 25.0) + effect("saccade_velocity"));
    viewer.fixation_ms = std::max(kMinFixationMs, rng.normal(280.0, 40.0) + effect("fixation_duration"));
    viewer.left_share = std::clamp(rng.normal(0.5 + effect("left_bias"), 0.05), 0.0, 1.0);

    const PixelScale scale = deg_per_px(spec.geometry);
    const double period_ms = 1000.0 / spec.sample_rate_hz;
    const double dt_s = period_ms / 1000.0;
    const auto n_total = static_cast<std::size_t>(std::ceil(spec.duration_ms / period_ms));

    GazeTrajectory traj;
    {
        std::ostringstream id;
        id << 'S' << std::setw(4) << std::setfill('0') << (index + 1);
        traj.participant_id = id.str();
    }
    traj.gender = gender;
    traj.sample_rate_hz = spec.sample_rate_hz;
    traj.samples.reserve(n_total);

    auto emit = [&](Point p) {
        const double x = std::clamp(p.x + spec.noise_sd_px * rng.normal(), 0.0, spec.geometry.width_px - 1.0);
        const double y = std::clamp(p.y + spec.noise_sd_px * rng.normal(), 0.0, spec.geometry.height_px - 1.0);
        const double t = static_cast<double>(traj.samples.size()) * period_ms;
        traj.samples.push_back({t, round_to(x, 0.01), round_to(y, 0.01)});
    };

    Point pos = draw_target(viewer, rng);
    Point target = pos;
    double heading = rng.uniform(0.0, 2.0 * std::numbers::pi);
    while (traj.samples.size() < n_total) {
        // Fixation: a velocity-space random walk (slowly turning heading,
        // jittered speed) plus a weak pull back towards the target.
        const double fix_ms = std::max(kMinFixationMs, rng.normal(viewer.fixation_ms, 0.3 * viewer.fixation_ms));
        const auto fix_steps = static_cast<std::size_t>(std::lround(fix_ms / period_ms));
        for (std::size_t i = 0; i < fix_steps && traj.samples.size() < n_total; ++i) {
            heading += rng.normal(0.0, 0.35);
            const double speed_px = viewer.drift_deg_s * std::max(0.0, 1.0 + 0.25 * rng.normal()) / scale.kx;
            pos.x += (speed_px * std::cos(heading) + kPullPerSecond * (target.x - pos.x)) * dt_s;
            pos.y += (speed_px * std::sin(heading) + kPullPerSecond * (target.y - pos.y)) * dt_s;
            emit(pos);
        }

        // Saccade: raised-cosine position profile, mean speed saccade_deg_s.
        Point next = draw_target(viewer, rng);
        for (int attempt = 0; attempt < 8; ++attempt) {
            if (std::hypot((next.x - pos.x) * scale.kx, (next.y - pos.y) * scale.ky) >= kMinAmplitudeDeg) {
                break;
            }
            next = draw_target(viewer, rng);
        }
        const double amp_deg = std::hypot((next.x - pos.x) * scale.kx, (next.y - pos.y) * scale.ky);
        const double sac_s = amp_deg / viewer.saccade_deg_s;
        const auto sac_steps = std::max<std::size_t>(2, static_cast<std::size_t>(std::lround(sac_s / dt_s)));
        const Point start = pos;
        for (std::size_t i = 1; i <= sac_steps && traj.samples.size() < n_total; ++i) {
            const double u = 0.5 * (1.0 - std::cos(std::numbers::pi * static_cast<double>(i) /
                                                   static_cast<double>(sac_steps)));
            pos = {start.x + (next.x - start.x) * u, start.y + (next.y - start.y) * u};
            emit(pos);
        }
        target = next;
    }
    return traj;
}

}  // namespace

std::vector<GazeTrajectory> generate_synthetic_cohort(const CohortSpec& spec) {
    spec.validate();
    std::vector<GazeTrajectory> cohort;
    cohort.reserve(static_cast<std::size_t>(spec.n_participants));
    const int half = spec.n_participants / 2;
    for (int i = 0; i < spec.n_participants; ++i) {
        cohort.push_back(generate_one(spec, i, i < half ? Gender::female : Gender::male));
    }
    return cohort;
}

}  // namespace gazeforge
