#include "gazeforge/signal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "gazeforge/errors.hpp"

namespace gazeforge {

void SmoothingConfig::validate() const {
    if (frame_size % 2 == 0 || frame_size <= poly_order || poly_order < 0) {
        throw ConfigError("smoothing: need odd frame_size > poly_order >= 0 (got order " +
                          std::to_string(poly_order) + ", frame " + std::to_string(frame_size) +
                          ")");
    }
}

std::vector<double> savgol_coefficients(int poly_order, int frame_size, int eval_pos) {
    SmoothingConfig{poly_order, frame_size}.validate();
    if (eval_pos < 0 || eval_pos >= frame_size) {
        throw ConfigError("savgol_coefficients: eval_pos outside the window");
    }
    // Offsets are scaled to [-1, 1] to keep the Vandermonde system well
    // conditioned at order 6. Evaluating the fit at offset 0 picks out the
    // constant term, so the weights are the first row of the pseudo-inverse.
    const int half = frame_size / 2;
    const double scale = static_cast<double>(std::max(half, 1));
    Eigen::MatrixXd design(frame_size, poly_order + 1);
    for (int j = 0; j < frame_size; ++j) {
        const double z = static_cast<double>(j - eval_pos) / scale;
        double p = 1.0;
        for (int k = 0; k <= poly_order; ++k) {
            design(j, k) = p;
            p *= z;
        }
    }
    const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(frame_size, frame_size);
    const Eigen::MatrixXd pinv = design.colPivHouseholderQr().solve(identity);
    std::vector<double> coeffs(static_cast<std::size_t>(frame_size));
    for (int j = 0; j < frame_size; ++j) {
        coeffs[static_cast<std::size_t>(j)] = pinv(0, j);
    }
    return coeffs;
}

std::vector<double> savgol_smooth(std::span<const double> values, const SmoothingConfig& config) {
    config.validate();
    const auto n = values.size();
    const auto frame = static_cast<std::size_t>(config.frame_size);
    if (n < frame) {
        throw SignalTooShort("too short to filter: " + std::to_string(n) +
                             " samples, frame size " + std::to_string(frame));
    }
    const std::size_t half = frame / 2;

    // kernels[p] evaluates the window fit at window position p.
    std::vector<std::vector<double>> kernels(frame);
    for (std::size_t p = 0; p < frame; ++p) {
        kernels[p] = savgol_coefficients(config.poly_order, config.frame_size, static_cast<int>(p));
    }

    std::vector<double> out(n);
    auto apply = [&](std::size_t window_start, const std::vector<double>& kernel) {
        double acc = 0.0;
        for (std::size_t j = 0; j < frame; ++j) {
            acc += kernel[j] * values[window_start + j];
        }
        return acc;
    };
    for (std::size_t i = 0; i < n; ++i) {
        if (i < half) {
            out[i] = apply(0, kernels[i]);
        } else if (i + half >= n) {
            const std::size_t start = n - frame;
            out[i] = apply(start, kernels[i - start]);
        } else {
            out[i] = apply(i - half, kernels[half]);
        }
    }
    return out;
}

std::vector<GazeSample> savgol_smooth(std::span<const GazeSample> samples,
                                      const SmoothingConfig& config) {
    std::vector<double> xs(samples.size());
    std::vector<double> ys(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        xs[i] = samples[i].x_px;
        ys[i] = samples[i].y_px;
    }
    const auto sx = savgol_smooth(xs, config);
    const auto sy = savgol_smooth(ys, config);
    std::vector<GazeSample> out(samples.begin(), samples.end());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i].x_px = sx[i];
        out[i].y_px = sy[i];
    }
    return out;
}

PixelScale deg_per_px(const ScreenGeometry& geometry) {
    geometry.validate();
    // Physical size follows the resolution aspect, so pixels are square and
    // one pitch serves both axes.
    const double pitch_cm = geometry.diagonal_cm / std::hypot(geometry.width_px, geometry.height_px);
    const double k = std::atan(pitch_cm / geometry.viewing_distance_cm) * 180.0 / std::numbers::pi;
    return {k, k};
}

namespace {

// Forward difference of `values` against time in seconds; entries past the
// last defined difference repeat it.
std::vector<double> forward_rate(std::span<const double> values, std::span<const double> dt_s,
                                 std::size_t defined) {
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < defined; ++i) {
        out[i] = (values[i + 1] - values[i]) / dt_s[i];
    }
    for (std::size_t i = defined; i < out.size(); ++i) {
        out[i] = out[defined - 1];
    }
    return out;
}

}  // namespace

KinematicSeries kinematics(std::span<const GazeSample> samples, const PixelScale& scale) {
    const auto n = samples.size();
    if (n < 3) {
        throw SignalTooShort("kinematics needs at least 3 samples, got " + std::to_string(n));
    }
    std::vector<double> dt_s(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        dt_s[i] = (samples[i + 1].t_ms - samples[i].t_ms) / 1000.0;
        if (!(dt_s[i] > 0.0)) {
            throw DataError("kinematics: timestamps must be strictly increasing");
        }
    }
    std::vector<double> xs(n);
    std::vector<double> ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = samples[i].x_px;
        ys[i] = samples[i].y_px;
    }

    KinematicSeries k;
    k.vx = forward_rate(xs, dt_s, n - 1);
    k.vy = forward_rate(ys, dt_s, n - 1);
    k.v.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        k.vx[i] *= scale.kx;
        k.vy[i] *= scale.ky;
        k.v[i] = std::hypot(k.vx[i], k.vy[i]);
    }
    // Velocities are defined for i < n-1, so accelerations for i < n-2.
    k.a = forward_rate(k.v, dt_s, n - 2);
    k.ax = forward_rate(k.vx, dt_s, n - 2);
    k.ay = forward_rate(k.vy, dt_s, n - 2);
    return k;
}

KinematicSeries kinematics(const GazeTrajectory& trajectory, const ScreenGeometry& geometry) {
    return kinematics(trajectory.samples, deg_per_px(geometry));
}

}  // namespace gazeforge
