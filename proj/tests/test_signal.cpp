#include "catch_amalgamated.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "gazeforge/errors.hpp"
#include "gazeforge/rng.hpp"
#include "gazeforge/signal.hpp"

using namespace gazeforge;
using Catch::Approx;

namespace {

void check_kernel(int order, int frame, const std::vector<double>& numerators, double denominator) {
    const auto c = savgol_coefficients(order, frame, frame / 2);
    REQUIRE(c.size() == numerators.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        CHECK(std::abs(c[i] - numerators[i] / denominator) < 1e-12);
    }
}

}  // namespace

TEST_CASE("centred kernels match the published convolution tables") {
    check_kernel(2, 5, {-3, 12, 17, 12, -3}, 35);
    check_kernel(2, 7, {-2, 3, 6, 7, 6, 3, -2}, 21);
    check_kernel(4, 7, {5, -30, 75, 131, 75, -30, 5}, 231);
    CHECK(std::abs(savgol_coefficients(2, 5, 2)[2] - 17.0 / 35.0) < 1e-12);
}

TEST_CASE("off-centre kernels are the least-squares fit evaluated at the end") {
    // Linear fit through 3 points evaluated at the last one: (-1, 2, 5) / 6.
    const auto c = savgol_coefficients(1, 3, 2);
    CHECK(c[0] == Approx(-1.0 / 6.0).margin(1e-12));
    CHECK(c[1] == Approx(2.0 / 6.0).margin(1e-12));
    CHECK(c[2] == Approx(5.0 / 6.0).margin(1e-12));
}

TEST_CASE("polynomials up to the filter order pass through unchanged") {
    Rng rng(17);
    const SmoothingConfig cfg{6, 15};
    for (int degree = 0; degree <= 6; ++degree) {
        std::vector<double> coef(static_cast<std::size_t>(degree + 1));
        for (auto& a : coef) {
            a = rng.uniform(-1.0, 1.0);
        }
        std::vector<double> y(201);
        for (std::size_t i = 0; i < y.size(); ++i) {
            const double x = -1.0 + 0.01 * static_cast<double>(i);
            double v = 0.0;
            for (auto it = coef.rbegin(); it != coef.rend(); ++it) {
                v = v * x + *it;
            }
            y[i] = v;
        }
        const auto s = savgol_smooth(y, cfg);
        for (std::size_t i = 0; i < y.size(); ++i) {
            REQUIRE(std::abs(s[i] - y[i]) <= 1e-8);
        }
    }
}

TEST_CASE("smoothing shrinks white noise") {
    Rng rng(2);
    std::vector<double> y(2000);
    for (auto& v : y) {
        v = rng.normal();
    }
    const auto s = savgol_smooth(y, SmoothingConfig{});
    double in = 0.0;
    double out = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        in += y[i] * y[i];
        out += s[i] * s[i];
    }
    CHECK(out < 0.7 * in);
}

TEST_CASE("smoothing rejects short input and bad settings") {
    std::vector<double> y(14, 1.0);
    CHECK_THROWS_AS(savgol_smooth(y, SmoothingConfig{6, 15}), SignalTooShort);
    CHECK_THROWS_AS(SmoothingConfig({6, 14}).validate(), ConfigError);
    CHECK_THROWS_AS(SmoothingConfig({7, 7}).validate(), ConfigError);
    CHECK_NOTHROW(savgol_smooth(std::vector<double>(15, 2.0), SmoothingConfig{6, 15}));
}

TEST_CASE("samples smooth per axis and keep timestamps") {
    std::vector<GazeSample> s;
    for (int i = 0; i < 30; ++i) {
        s.push_back({4.0 * i, 100.0 + i, 200.0 - 2.0 * i});
    }
    const auto out = savgol_smooth(s, SmoothingConfig{});
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(out[i].t_ms == s[i].t_ms);
        CHECK(out[i].x_px == Approx(s[i].x_px).margin(1e-9));
        CHECK(out[i].y_px == Approx(s[i].y_px).margin(1e-9));
    }
}

TEST_CASE("degrees per pixel for the default screen") {
    const auto k = deg_per_px(ScreenGeometry{});
    // 48.26 cm diagonal over a 1280 x 1024 grid, seen from 57 cm.
    const double pitch_cm = 48.26 / std::sqrt(1280.0 * 1280.0 + 1024.0 * 1024.0);
    const double expected = std::atan(pitch_cm / 57.0) * 180.0 / std::numbers::pi;
    CHECK(k.kx == Approx(expected).epsilon(1e-12));
    CHECK(k.ky == k.kx);
    CHECK(k.kx == Approx(0.0296).margin(5e-5));
}

TEST_CASE("uniform drift gives constant speed and zero acceleration") {
    const PixelScale scale{0.03, 0.03};
    // 75 deg/s split as 60 along x and 45 along y.
    const double vx_px = 60.0 / 0.03 / 1000.0;  // px per ms
    const double vy_px = -45.0 / 0.03 / 1000.0;
    std::vector<GazeSample> s;
    for (int i = 0; i < 50; ++i) {
        s.push_back({4.0 * i, 100.0 + vx_px * 4.0 * i, 500.0 + vy_px * 4.0 * i});
    }
    const auto k = kinematics(s, scale);
    REQUIRE(k.size() == 50);
    for (std::size_t i = 0; i < k.size(); ++i) {
        CHECK(k.v[i] == Approx(75.0).margin(1e-9));
        CHECK(k.vx[i] == Approx(60.0).margin(1e-9));
        CHECK(k.vy[i] == Approx(-45.0).margin(1e-9));
        CHECK(std::abs(k.a[i]) < 1e-6);
        CHECK(std::abs(k.ax[i]) < 1e-6);
    }
}

TEST_CASE("forward differences with repeated trailing values") {
    // x = t^2 (t in s, px), unit scale: v_i = (t_{i+1}^2 - t_i^2) / dt = t_i + t_{i+1}.
    std::vector<GazeSample> s;
    for (int i = 0; i < 6; ++i) {
        const double t = 0.1 * i;
        s.push_back({100.0 * i, t * t, 0.0});
    }
    const auto k = kinematics(s, PixelScale{1.0, 1.0});
    const std::vector<double> v{0.1, 0.3, 0.5, 0.7, 0.9, 0.9};
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(k.vx[i] == Approx(v[i]).margin(1e-12));
        CHECK(k.v[i] == Approx(v[i]).margin(1e-12));
    }
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(k.ax[i] == Approx(2.0).margin(1e-9));  // the last two entries repeat a[3]
    }
}

TEST_CASE("kinematics input checks") {
    std::vector<GazeSample> two{{0, 0, 0}, {4, 1, 1}};
    CHECK_THROWS_AS(kinematics(two, PixelScale{1, 1}), SignalTooShort);
    std::vector<GazeSample> stuck{{0, 0, 0}, {4, 1, 1}, {4, 2, 2}};
    CHECK_THROWS_AS(kinematics(stuck, PixelScale{1, 1}), DataError);
}
