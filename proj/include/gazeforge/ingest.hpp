#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gazeforge {

enum class Gender { female, male };

// Female is the positive class throughout (label 1, probabilities are P(female)).
constexpr int class_label(Gender g) noexcept { return g == Gender::female ? 1 : 0; }

char gender_code(Gender g) noexcept;
Gender parse_gender(std::string_view code);

struct GazeSample {
    double t_ms = 0.0;
    double x_px = 0.0;
    double y_px = 0.0;

    friend bool operator==(const GazeSample&, const GazeSample&) = default;
};

struct GazeTrajectory {
    std::string participant_id;
    Gender gender = Gender::female;
    std::vector<GazeSample> samples;
    double sample_rate_hz = 250.0;

    double duration_ms() const;
    std::vector<double> timestamps() const;

    friend bool operator==(const GazeTrajectory&, const GazeTrajectory&) = default;
};

struct ScreenGeometry {
    double width_px = 1280.0;
    double height_px = 1024.0;
    double diagonal_cm = 48.26;
    double viewing_distance_cm = 57.0;

    // Throws ConfigError when a field is non-positive or non-finite.
    void validate() const;

    // Reads a JSON object with the four keys above; missing keys keep defaults.
    static ScreenGeometry load(const std::filesystem::path& path);
};

// Axis-aligned screen rectangle in pixels, closed on all sides.
struct Rect {
    double x0 = 0.0;
    double y0 = 0.0;
    double x1 = 0.0;
    double y1 = 0.0;

    bool contains(double x, double y) const noexcept {
        return x >= x0 && x <= x1 && y >= y0 && y <= y1;
    }
};

// Eye regions used by the synthetic generator and as default AOIs.
Rect default_left_eye_region();
Rect default_right_eye_region();
Rect default_face_region();

struct LoadOptions {
    double sample_rate_hz = 250.0;
    double cap_ms = 120000.0;
    bool drop_offscreen = true;
};

// Parses the gaze CSV schema
//   participant_id,gender,trial_id,t_ms,x_px,y_px
// Rows with non-finite (or, optionally, off-screen) coordinates are dropped;
// each participant's trials are concatenated and capped.
std::vector<GazeTrajectory> load_cohort(const std::filesystem::path& path,
                                        const ScreenGeometry& geometry,
                                        const LoadOptions& options = {});
std::vector<GazeTrajectory> read_cohort(std::istream& in, const ScreenGeometry& geometry,
                                        const LoadOptions& options = {});

// Writes one trial (trial_id 0) per trajectory using shortest round-trip decimals.
void write_cohort(std::ostream& out, std::span<const GazeTrajectory> cohort);
void save_cohort(const std::filesystem::path& path, std::span<const GazeTrajectory> cohort);

// Joins trials on one continuous timeline: trial k+1 starts one sampling
// period after the last sample of trial k. Samples at or beyond cap_ms from
// the first sample are dropped.
std::vector<GazeSample> concat_trials(std::span<const std::vector<GazeSample>> trials,
                                      double cap_ms, double sample_rate_hz);

// Known keys (offsets applied to class M, in the given units):
//   fixation_velocity  deg/s added to fixational drift speed
//   saccade_velocity   deg/s added to mean saccade speed
//   fixation_duration  ms added to mean fixation duration
//   left_bias          added to the probability that an eye-directed
//                      fixation lands on the left eye region
struct CohortSpec {
    int n_participants = 40;
    double duration_ms = 30000.0;
    double sample_rate_hz = 250.0;
    std::map<std::string, double> class_effect;
    double noise_sd_px = 0.3;
    std::uint64_t seed = 0;
    ScreenGeometry geometry;

    void validate() const;
};

// Deterministic under spec.seed. The first half of the participants are
// female, the rest male; ids are "S0001", "S0002", ...
std::vector<GazeTrajectory> generate_synthetic_cohort(const CohortSpec& spec);

}  // namespace gazeforge
