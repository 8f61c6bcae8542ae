#include "gazeforge/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gazeforge/errors.hpp"
#include "gazeforge/rng.hpp"

namespace gazeforge {

EnsembleWeights EnsembleWeights::from_fixation(double w_fix) {
    const double w = std::clamp(w_fix, 0.0, 1.0);
    return {w, 1.0 - w};
}

void EnsembleWeights::validate() const {
    if (!(w_fix >= 0.0 && w_fix <= 1.0 && w_sac >= 0.0 && w_sac <= 1.0) ||
        std::abs(w_fix + w_sac - 1.0) > 1e-12) {
        throw ConfigError("ensemble weights must lie in [0, 1] and sum to 1");
    }
}

double fuse(double p_fix, double p_sac, const EnsembleWeights& w) {
    return w.w_fix * p_fix + w.w_sac * p_sac;
}

void NmConfig::validate() const {
    if (!(alpha > 0.0) || !(gamma > 1.0) || !(rho > 0.0 && rho < 1.0) || !(sigma > 0.0 && sigma < 1.0)) {
        throw ConfigError("nelder-mead: need alpha > 0, gamma > 1, 0 < rho < 1, 0 < sigma < 1");
    }
    if (!(x_tol >= 0.0) || !(f_tol >= 0.0) || max_iters < 0 || !(initial_step != 0.0)) {
        throw ConfigError("nelder-mead: invalid tolerances, iteration cap or initial step");
    }
}

namespace {

struct Vertex {
    std::vector<double> x;
    double f = 0.0;
};

}  // namespace

NmResult nelder_mead(const Objective& f, std::vector<double> x0, const NmConfig& config) {
    config.validate();
    if (x0.empty()) {
        throw ConfigError("nelder-mead: empty start point");
    }
    const std::size_t d = x0.size();
    NmResult result;
    auto eval = [&](const std::vector<double>& x) {
        ++result.evaluations;
        return f(x);
    };

    std::vector<Vertex> simplex;
    simplex.reserve(d + 1);
    simplex.push_back({x0, eval(x0)});
    for (std::size_t i = 0; i < d; ++i) {
        auto x = x0;
        x[i] += config.initial_step;
        simplex.push_back({x, eval(x)});
    }
    for (const auto& v : simplex) {
        if (!std::isfinite(v.f)) {
            throw ConfigError("nelder-mead: objective is not finite at the initial simplex");
        }
    }

    auto order = [&] {
        std::stable_sort(simplex.begin(), simplex.end(),
                         [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
    };
    auto point = [&](const std::vector<double>& from, const std::vector<double>& to, double t) {
        std::vector<double> out(d);
        for (std::size_t i = 0; i < d; ++i) {
            out[i] = from[i] + t * (to[i] - from[i]);
        }
        return out;
    };

    order();
    while (true) {
        double diameter = 0.0;
        for (std::size_t v = 1; v <= d; ++v) {
            for (std::size_t i = 0; i < d; ++i) {
                diameter = std::max(diameter, std::abs(simplex[v].x[i] - simplex[0].x[i]));
            }
        }
        if (diameter <= config.x_tol && simplex[d].f - simplex[0].f <= config.f_tol) {
            result.converged = true;
            break;
        }
        if (result.iterations >= config.max_iters) {
            break;
        }

        std::vector<double> centroid(d, 0.0);
        for (std::size_t v = 0; v < d; ++v) {
            for (std::size_t i = 0; i < d; ++i) {
                centroid[i] += simplex[v].x[i] / static_cast<double>(d);
            }
        }
        Vertex& worst = simplex[d];
        const double f_best = simplex[0].f;
        const double f_second = simplex[d - 1].f;

        // point(c, w, -alpha) = c + alpha (c - w)
        Vertex reflected{point(centroid, worst.x, -config.alpha), 0.0};
        reflected.f = eval(reflected.x);

        bool shrink = false;
        if (reflected.f < f_best) {
            Vertex expanded{point(centroid, reflected.x, config.gamma), 0.0};
            expanded.f = eval(expanded.x);
            worst = expanded.f < reflected.f ? std::move(expanded) : std::move(reflected);
        } else if (reflected.f < f_second) {
            worst = std::move(reflected);
        } else if (reflected.f < worst.f) {
            Vertex contracted{point(centroid, reflected.x, config.rho), 0.0};
            contracted.f = eval(contracted.x);
            if (contracted.f <= reflected.f) {
                worst = std::move(contracted);
            } else {
                shrink = true;
            }
        } else {
            Vertex contracted{point(centroid, worst.x, config.rho), 0.0};
            contracted.f = eval(contracted.x);
            if (contracted.f < worst.f) {
                worst = std::move(contracted);
            } else {
                shrink = true;
            }
        }
        if (shrink) {
            for (std::size_t v = 1; v <= d; ++v) {
                simplex[v].x = point(simplex[0].x, simplex[v].x, config.sigma);
                simplex[v].f = eval(simplex[v].x);
            }
        }
        order();
        ++result.iterations;
        result.best_per_iteration.push_back(simplex[0].f);
    }

    result.x = simplex[0].x;
    result.f = simplex[0].f;
    return result;
}

double fusion_objective(std::span<const double> p_fix, std::span<const double> p_sac, std::span<const int> y,
                        double w_fix) {
    if (p_fix.size() != y.size() || p_sac.size() != y.size() || y.empty()) {
        throw ConfigError("fusion_objective: probability and label counts differ");
    }
    const auto w = EnsembleWeights::from_fixation(w_fix);
    double correct = 0.0;
    double brier = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double p = fuse(p_fix[i], p_sac[i], w);
        correct += static_cast<double>((p >= 0.5 ? 1 : 0) == y[i]);
        brier += (p - y[i]) * (p - y[i]);
    }
    const auto n = static_cast<double>(y.size());
    return -correct / n + kBrierTieBreak * brier / n;
}

NmConfig weight_search_config() {
    NmConfig config;
    config.initial_step = 0.25;
    return config;
}

WeightFit optimize_weights_for(std::span<const double> p_fix, std::span<const double> p_sac,
                               std::span<const int> y, const NmConfig& config) {
    const Objective objective = [&](std::span<const double> theta) {
        return fusion_objective(p_fix, p_sac, y, theta[0]);
    };
    WeightFit fit;
    fit.search = nelder_mead(objective, {0.5}, config);
    fit.weights = EnsembleWeights::from_fixation(fit.search.x[0]);
    fit.objective = fit.search.f;
    fit.start_objective = fusion_objective(p_fix, p_sac, y, 0.5);
    return fit;
}

WeightFit optimize_weights(const FeatureTable& fixation, const FeatureTable& saccade, ClassifierKind kind,
                           const ClassifierOptions& options, std::uint64_t seed, int folds) {
    if (fixation.participant_ids != saccade.participant_ids) {
        throw ConfigError("optimize_weights: channel tables list different participants");
    }
    const auto y = fixation.class_labels();
    const auto positives = std::count(y.begin(), y.end(), 1);
    const auto negatives = static_cast<std::ptrdiff_t>(y.size()) - positives;
    const int k = static_cast<int>(std::min<std::ptrdiff_t>(folds, std::min(positives, negatives)));
    if (k < 2) {
        throw DataError("optimize_weights: each class needs at least two training participants");
    }

    const auto assignment = stratified_folds(y, k, derive_seed(seed, 0x77656967ULL));
    std::vector<double> p_fix(y.size());
    std::vector<double> p_sac(y.size());
    for (int fold = 0; fold < k; ++fold) {
        std::vector<std::size_t> train;
        std::vector<std::size_t> held_out;
        for (std::size_t i = 0; i < y.size(); ++i) {
            (assignment[i] == fold ? held_out : train).push_back(i);
        }
        const auto fold_seed = derive_seed(seed, static_cast<std::uint64_t>(fold + 1));
        const auto fix_model = train_classifier(kind, fixation.select_rows(train), options, fold_seed);
        const auto sac_model = train_classifier(kind, saccade.select_rows(train), options, derive_seed(fold_seed, 1));
        const auto pf = predict_proba(fix_model, fixation.select_rows(held_out));
        const auto ps = predict_proba(sac_model, saccade.select_rows(held_out));
        for (std::size_t i = 0; i < held_out.size(); ++i) {
            p_fix[held_out[i]] = pf[i];
            p_sac[held_out[i]] = ps[i];
        }
    }
    return optimize_weights_for(p_fix, p_sac, y);
}

}  // namespace gazeforge
