#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gazeforge/ingest.hpp"

namespace gazeforge {

struct SmoothingConfig {
    int poly_order = 6;
    int frame_size = 15;

    void validate() const;
};

// Least-squares polynomial smoothing weights for a window of frame_size
// samples, evaluated at window position eval_pos (0-based). The centred
// case eval_pos == frame_size / 2 gives the classic convolution kernel.
std::vector<double> savgol_coefficients(int poly_order, int frame_size, int eval_pos);

// Savitzky-Golay smoothing. Near the edges the fit uses the first/last
// frame_size samples and is evaluated off-centre, so no padding is needed.
// Throws SignalTooShort when the input is shorter than one frame.
std::vector<double> savgol_smooth(std::span<const double> values, const SmoothingConfig& config);

// Smooths the x and y channels independently; timestamps are untouched.
std::vector<GazeSample> savgol_smooth(std::span<const GazeSample> samples,
                                      const SmoothingConfig& config);

// Degrees of visual angle per pixel at screen centre.
struct PixelScale {
    double kx = 0.0;
    double ky = 0.0;
};

PixelScale deg_per_px(const ScreenGeometry& geometry);

// Per-sample angular kinematics; every series has one entry per sample.
struct KinematicSeries {
    std::vector<double> v;   // speed, deg/s
    std::vector<double> vx;  // deg/s, signed
    std::vector<double> vy;
    std::vector<double> a;   // d|v|/dt, deg/s^2
    std::vector<double> ax;  // d(vx)/dt
    std::vector<double> ay;

    std::size_t size() const noexcept { return v.size(); }
};

// Forward differences. The trailing entries that a forward difference
// cannot define repeat the last defined value. Needs at least 3 samples.
KinematicSeries kinematics(std::span<const GazeSample> samples, const PixelScale& scale);
KinematicSeries kinematics(const GazeTrajectory& trajectory, const ScreenGeometry& geometry);

}  // namespace gazeforge
