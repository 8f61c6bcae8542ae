#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "gazeforge/classifiers.hpp"
#include "gazeforge/features.hpp"

namespace gazeforge {

// Convex weights of the fixation and saccade classifiers.
struct EnsembleWeights {
    double w_fix = 0.5;
    double w_sac = 0.5;

    // Clamps to [0, 1] and sets w_sac = 1 - w_fix.
    static EnsembleWeights from_fixation(double w_fix);
    void validate() const;

    friend bool operator==(const EnsembleWeights&, const EnsembleWeights&) = default;
};

// w_fix * p_fix + w_sac * p_sac; the fused class is female iff >= 0.5.
double fuse(double p_fix, double p_sac, const EnsembleWeights& w);

struct NmConfig {
    double alpha = 1.0;  // reflection
    double gamma = 2.0;  // expansion
    double rho = 0.5;    // contraction
    double sigma = 0.5;  // shrink
    double x_tol = 1e-4;
    double f_tol = 1e-6;
    int max_iters = 200;
    double initial_step = 0.1;  // offset of the extra simplex vertices along each axis

    void validate() const;
};

struct NmResult {
    std::vector<double> x;
    double f = 0.0;
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;
    std::vector<double> best_per_iteration;  // best objective after each iteration
};

using Objective = std::function<double(std::span<const double>)>;

// Nelder-Mead downhill simplex with reflect / expand / outside and inside
// contraction / shrink. Stops when the simplex diameter (max-norm distance
// of every vertex to the best) is <= x_tol and the objective spread is
// <= f_tol, or after max_iters. The spread alone is not enough: a simplex
// straddling a symmetric minimum has zero spread. Ordering ties keep the
// earlier vertex first.
NmResult nelder_mead(const Objective& f, std::vector<double> x0, const NmConfig& config = {});

// Training objective for fused predictions: negative accuracy plus a small
// Brier-score term that breaks ties between weightings of equal accuracy.
double fusion_objective(std::span<const double> p_fix, std::span<const double> p_sac,
                        std::span<const int> y, double w_fix);

inline constexpr double kBrierTieBreak = 0.01;

struct WeightFit {
    EnsembleWeights weights;
    double objective = 0.0;        // at the returned weights
    double start_objective = 0.0;  // at w_fix = 0.5
    NmResult search;
};

// Defaults for the weight search: first step 0.25 from the start point.
NmConfig weight_search_config();

// Tunes w_fix = clamp(theta, 0, 1) from theta = 0.5 against the given
// probabilities.
WeightFit optimize_weights_for(std::span<const double> p_fix, std::span<const double> p_sac,
                               std::span<const int> y, const NmConfig& config = weight_search_config());

// Out-of-fold probabilities of both channel classifiers under stratified
// k-fold cross-validation of the given (training) tables, then
// optimize_weights_for on them. Both tables must list the same participants.
WeightFit optimize_weights(const FeatureTable& fixation, const FeatureTable& saccade, ClassifierKind kind,
                           const ClassifierOptions& options, std::uint64_t seed, int folds = 5);

}  // namespace gazeforge
