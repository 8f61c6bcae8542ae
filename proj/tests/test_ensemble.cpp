#include "catch_amalgamated.hpp"

#include <cmath>
#include <limits>

#include "gazeforge/ensemble.hpp"
#include "gazeforge/errors.hpp"
#include "gazeforge/rng.hpp"
#include "oracles.hpp"

using namespace gazeforge;
using Catch::Approx;

TEST_CASE("fusion is the weighted mean of the channel probabilities") {
    CHECK(fuse(0.8, 0.4, EnsembleWeights{}) == Approx(0.6));
    CHECK(fuse(0.8, 0.4, EnsembleWeights{1.0, 0.0}) == 0.8);
    CHECK(fuse(0.6, 0.3, EnsembleWeights{0.696, 0.304}) == Approx(0.5088).margin(1e-12));

    Rng rng(3);
    for (int i = 0; i < 1000; ++i) {
        const double a = rng.uniform();
        const double b = rng.uniform();
        const auto w = EnsembleWeights::from_fixation(rng.uniform());
        const double p = fuse(a, b, w);
        REQUIRE(p >= std::min(a, b) - 1e-15);
        REQUIRE(p <= std::max(a, b) + 1e-15);
    }
}

TEST_CASE("weights are clamped and validated") {
    CHECK(EnsembleWeights::from_fixation(1.7) == EnsembleWeights{1.0, 0.0});
    CHECK(EnsembleWeights::from_fixation(-0.2) == EnsembleWeights{0.0, 1.0});
    CHECK(EnsembleWeights::from_fixation(0.25).w_sac == 0.75);
    CHECK_THROWS_AS((EnsembleWeights{0.7, 0.7}.validate()), ConfigError);
    CHECK_THROWS_AS((EnsembleWeights{1.2, -0.2}.validate()), ConfigError);
    CHECK_NOTHROW((EnsembleWeights{0.3, 0.7}.validate()));
}

TEST_CASE("nelder-mead finds simple minima") {
    const auto quad = nelder_mead([](std::span<const double> x) { return (x[0] - 2) * (x[0] - 2); }, {0.0});
    CHECK(quad.converged);
    CHECK(quad.x[0] == Approx(2.0).margin(1e-3));

    const auto abs1 = nelder_mead([](std::span<const double> x) { return std::abs(x[0] + 1.5); }, {3.0});
    CHECK(abs1.x[0] == Approx(-1.5).margin(1e-3));

    NmConfig tight;
    tight.x_tol = 1e-10;
    tight.f_tol = 1e-14;
    tight.max_iters = 500;
    const auto rosen = nelder_mead(
        [](std::span<const double> x) { return oracle::rosenbrock(std::vector<double>(x.begin(), x.end())); },
        {-1.2, 1.0}, tight);
    CHECK(rosen.x[0] == Approx(1.0).margin(1e-4));
    CHECK(rosen.x[1] == Approx(1.0).margin(1e-4));
    CHECK(rosen.iterations <= 500);
}

TEST_CASE("best objective never increases across iterations") {
    const auto r = nelder_mead(
        [](std::span<const double> x) { return oracle::rosenbrock(std::vector<double>(x.begin(), x.end())); },
        {-1.2, 1.0});
    REQUIRE(!r.best_per_iteration.empty());
    for (std::size_t i = 1; i < r.best_per_iteration.size(); ++i) {
        REQUIRE(r.best_per_iteration[i] <= r.best_per_iteration[i - 1]);
    }
    CHECK(r.best_per_iteration.back() == r.f);
}

TEST_CASE("a clamped linear objective settles on the boundary") {
    // Minimizing -w over w = clamp(theta, 0, 1) must reach w = 1.
    const auto r = nelder_mead(
        [](std::span<const double> x) { return -std::clamp(x[0], 0.0, 1.0); }, {0.5});
    CHECK(std::clamp(r.x[0], 0.0, 1.0) == 1.0);
    CHECK(r.f == -1.0);
}

TEST_CASE("nelder-mead rejects bad input") {
    const Objective ok = [](std::span<const double> x) { return x[0]; };
    CHECK_THROWS_AS(nelder_mead(ok, {}), ConfigError);
    CHECK_THROWS_AS(nelder_mead([](std::span<const double>) { return std::numeric_limits<double>::quiet_NaN(); },
                                {0.0}),
                    ConfigError);
    NmConfig bad;
    bad.rho = 1.5;
    CHECK_THROWS_AS(nelder_mead(ok, {0.0}, bad), ConfigError);
}

TEST_CASE("identical channel outputs give a flat accuracy surface") {
    const std::vector<double> p{0.9, 0.2, 0.7, 0.4, 0.6};
    const std::vector<int> y{1, 0, 1, 1, 0};
    const double base = fusion_objective(p, p, y, 0.5);
    for (double w : {0.0, 0.1, 0.37, 0.9, 1.0}) {
        CHECK(fusion_objective(p, p, y, w) == Approx(base).margin(1e-15));
    }
    // accuracy 3/5; Brier over (0.01, 0.04, 0.09, 0.36, 0.36)
    CHECK(base == Approx(-0.6 + kBrierTieBreak * 0.172).margin(1e-12));
}

TEST_CASE("weight search never ends worse than the start") {
    Rng rng(21);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t n = 20 + rng.below(40);
        std::vector<double> pf(n);
        std::vector<double> ps(n);
        std::vector<int> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = rng.bernoulli(0.5) ? 1 : 0;
            pf[i] = std::clamp(0.5 + (y[i] ? 0.2 : -0.2) * rng.uniform(0, 2) + rng.normal(0, 0.15), 0.0, 1.0);
            ps[i] = rng.uniform();
        }
        const auto fit = optimize_weights_for(pf, ps, y);
        REQUIRE(fit.objective <= fit.start_objective);
        REQUIRE(fit.objective == Approx(fusion_objective(pf, ps, y, fit.weights.w_fix)).margin(1e-15));
        REQUIRE_NOTHROW(fit.weights.validate());
    }
}

TEST_CASE("weight search leans on the informative channel") {
    const std::vector<double> pf{0.9, 0.8, 0.7, 0.3, 0.2, 0.1, 0.85, 0.15};
    const std::vector<double> ps{0.1, 0.9, 0.2, 0.8, 0.3, 0.7, 0.4, 0.6};
    const std::vector<int> y{1, 1, 1, 0, 0, 0, 1, 0};
    const auto fit = optimize_weights_for(pf, ps, y);
    CHECK(fit.weights.w_fix > 0.75);
    CHECK(fit.objective < -0.99);
}
