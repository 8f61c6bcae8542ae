#pragma once

#include <span>
#include <vector>

// Small numeric helpers shared by feature extraction and reporting.
namespace gazeforge::stats {

double mean(std::span<const double> xs);
double median(std::span<const double> xs);

// Population SD (divisor n). Returns 0 for fewer than two values.
double population_sd(std::span<const double> xs);

// Sample SD (divisor n - 1). Returns 0 for fewer than two values.
double sample_sd(std::span<const double> xs);

// Moment statistics with the degenerate-input convention: zero variance
// gives skewness 0 and excess kurtosis 0.
struct Moments {
    double mean = 0.0;
    double median = 0.0;
    double max = 0.0;
    double min = 0.0;
    double sd = 0.0;        // population
    double skewness = 0.0;  // g1
    double kurtosis = 0.0;  // g2 (excess)
};

// Requires a non-empty input.
Moments describe(std::span<const double> xs);

// Average ranks (1-based) with ties sharing the mean rank.
std::vector<double> ranks(std::span<const double> xs);

double spearman(std::span<const double> xs, std::span<const double> ys);

struct TestResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

// Two-sided Mann-Whitney U with tie-corrected normal approximation and
// continuity correction. All-tied samples give p = 1.
TestResult mann_whitney_u(std::span<const double> a, std::span<const double> b);

// Two-sided Welch t-test. Zero variance in both groups gives p = 1 when the
// means agree and p = 0 otherwise.
TestResult welch_t_test(std::span<const double> a, std::span<const double> b);

}  // namespace gazeforge::stats
