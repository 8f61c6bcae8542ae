#include "gazeforge/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "gazeforge/errors.hpp"

namespace gazeforge::stats {

double mean(std::span<const double> xs) {
    if (xs.empty()) {
        return 0.0;
    }
    // Offsets from the first value, so a constant sample has its exact mean.
    const double shift = xs.front();
    double acc = 0.0;
    for (double x : xs) {
        acc += x - shift;
    }
    return shift + acc / static_cast<double>(xs.size());
}

double median(std::span<const double> xs) {
    if (xs.empty()) {
        return 0.0;
    }
    std::vector<double> sorted(xs.begin(), xs.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    if (n % 2 == 1) {
        return sorted[n / 2];
    }
    return 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
}

namespace {

double sum_sq_dev(std::span<const double> xs, double m) {
    double acc = 0.0;
    for (double x : xs) {
        acc += (x - m) * (x - m);
    }
    return acc;
}

}  // namespace

double population_sd(std::span<const double> xs) {
    if (xs.size() < 2) {
        return 0.0;
    }
    return std::sqrt(sum_sq_dev(xs, mean(xs)) / static_cast<double>(xs.size()));
}

double sample_sd(std::span<const double> xs) {
    if (xs.size() < 2) {
        return 0.0;
    }
    return std::sqrt(sum_sq_dev(xs, mean(xs)) / static_cast<double>(xs.size() - 1));
}

Moments describe(std::span<const double> xs) {
    if (xs.empty()) {
        throw ConfigError("describe: empty sample");
    }
    Moments m;
    m.mean = mean(xs);
    m.median = median(xs);
    const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
    m.min = *lo;
    m.max = *hi;

    const double n = static_cast<double>(xs.size());
    double m2 = 0.0;
    double m3 = 0.0;
    double m4 = 0.0;
    for (double x : xs) {
        const double d = x - m.mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    m.sd = std::sqrt(m2);

    // Variance below rounding noise of the data scale counts as zero.
    const double scale = std::max(std::abs(m.max), std::abs(m.min));
    if (m.max == m.min || m.sd <= 1e-12 * scale) {
        m.sd = m.max == m.min ? 0.0 : m.sd;
        return m;
    }
    m.skewness = m3 / std::pow(m2, 1.5);
    m.kurtosis = m4 / (m2 * m2) - 3.0;
    return m;
}

std::vector<double> ranks(std::span<const double> xs) {
    const std::size_t n = xs.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
    std::vector<double> out(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && xs[order[j + 1]] == xs[order[i]]) {
            ++j;
        }
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) {
            out[order[k]] = avg;
        }
        i = j + 1;
    }
    return out;
}

double spearman(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.size() < 2) {
        throw ConfigError("spearman: need two equal-length samples of size >= 2");
    }
    const auto rx = ranks(xs);
    const auto ry = ranks(ys);
    const double mx = mean(rx);
    const double my = mean(ry);
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) {
        return 0.0;
    }
    return sxy / std::sqrt(sxx * syy);
}

TestResult mann_whitney_u(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) {
        throw ConfigError("mann_whitney_u: both samples must be non-empty");
    }
    std::vector<double> pooled(a.begin(), a.end());
    pooled.insert(pooled.end(), b.begin(), b.end());
    const auto r = ranks(pooled);

    const double n1 = static_cast<double>(a.size());
    const double n2 = static_cast<double>(b.size());
    const double n = n1 + n2;
    const double rank_sum_a = std::accumulate(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(a.size()), 0.0);
    const double u1 = rank_sum_a - n1 * (n1 + 1.0) / 2.0;
    const double u = std::min(u1, n1 * n2 - u1);

    std::vector<double> sorted = pooled;
    std::sort(sorted.begin(), sorted.end());
    double tie_term = 0.0;
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) {
            ++j;
        }
        const double t = static_cast<double>(j - i);
        tie_term += t * t * t - t;
        i = j;
    }
    const double variance = n1 * n2 / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    if (variance <= 0.0) {
        return {u, 1.0};
    }
    const double mu = n1 * n2 / 2.0;
    const double z = std::max(0.0, std::abs(u1 - mu) - 0.5) / std::sqrt(variance);
    const boost::math::normal_distribution<double> std_normal;
    const double p = 2.0 * boost::math::cdf(boost::math::complement(std_normal, z));
    return {u, std::min(1.0, p)};
}

TestResult welch_t_test(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2) {
        throw ConfigError("welch_t_test: each sample needs at least two values");
    }
    const double m1 = mean(a);
    const double m2 = mean(b);
    const double v1 = std::pow(sample_sd(a), 2) / static_cast<double>(a.size());
    const double v2 = std::pow(sample_sd(b), 2) / static_cast<double>(b.size());
    if (v1 + v2 == 0.0) {
        return {0.0, m1 == m2 ? 1.0 : 0.0};
    }
    const double t = (m1 - m2) / std::sqrt(v1 + v2);
    const double df = (v1 + v2) * (v1 + v2) /
                      (v1 * v1 / static_cast<double>(a.size() - 1) +
                       v2 * v2 / static_cast<double>(b.size() - 1));
    const boost::math::students_t_distribution<double> dist(df);
    const double p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
    return {t, std::min(1.0, p)};
}

}  // namespace gazeforge::stats
