#include "gazeforge/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gazeforge/errors.hpp"
#include "gazeforge/stats.hpp"

namespace gazeforge {

std::string_view to_string(SegmentKind kind) noexcept {
    return kind == SegmentKind::fixation ? "fixation" : "saccade";
}

void IvtParams::validate() const {
    if (!(vt > 0.0) || !std::isfinite(vt)) {
        throw ConfigError("velocity threshold must be > 0");
    }
    if (!(mfd_ms >= 0.0) || !std::isfinite(mfd_ms)) {
        throw ConfigError("minimum fixation duration must be >= 0");
    }
}

double span_duration_ms(std::span<const double> t_ms, std::size_t start, std::size_t end,
                        double period_ms) {
    if (end + 1 < t_ms.size()) {
        return t_ms[end + 1] - t_ms[start];
    }
    return t_ms[end] - t_ms[start] + period_ms;
}

double median_period_ms(std::span<const double> t_ms) {
    if (t_ms.size() < 2) {
        return 0.0;
    }
    std::vector<double> diffs(t_ms.size() - 1);
    for (std::size_t i = 0; i + 1 < t_ms.size(); ++i) {
        diffs[i] = t_ms[i + 1] - t_ms[i];
    }
    return stats::median(diffs);
}

std::vector<Segment> ivt_segment(std::span<const double> speed, std::span<const double> t_ms,
                                 const IvtParams& params) {
    params.validate();
    if (speed.empty()) {
        throw ConfigError("ivt_segment: empty series");
    }
    if (speed.size() != t_ms.size()) {
        throw ConfigError("ivt_segment: speed and timestamps differ in length");
    }
    const double period = median_period_ms(t_ms);
    const std::size_t n = speed.size();

    std::vector<Segment> out;
    auto push = [&](SegmentKind kind, std::size_t start, std::size_t end) {
        if (!out.empty() && out.back().kind == kind) {
            out.back().end_idx = end;
        } else {
            out.push_back({kind, start, end, 0.0});
        }
    };

    std::size_t i = 0;
    while (i < n) {
        const bool slow = speed[i] < params.vt;
        std::size_t j = i;
        while (j + 1 < n && (speed[j + 1] < params.vt) == slow) {
            ++j;
        }
        const bool fixation = slow && span_duration_ms(t_ms, i, j, period) > params.mfd_ms;
        push(fixation ? SegmentKind::fixation : SegmentKind::saccade, i, j);
        i = j + 1;
    }
    for (auto& seg : out) {
        seg.duration_ms = span_duration_ms(t_ms, seg.start_idx, seg.end_idx, period);
    }
    return out;
}

std::vector<Segment> ivt_segment(const KinematicSeries& series, std::span<const double> t_ms,
                                 const IvtParams& params) {
    return ivt_segment(std::span<const double>(series.v), t_ms, params);
}

std::size_t count_fixations(std::span<const Segment> segments) noexcept {
    return static_cast<std::size_t>(std::count_if(segments.begin(), segments.end(), [](const Segment& s) {
        return s.kind == SegmentKind::fixation;
    }));
}

VtSelection select_vt(std::span<const SpeedTrace> cohort, double mfd_ms,
                      std::span<const double> candidate_vts) {
    if (candidate_vts.empty()) {
        throw ConfigError("select_vt: empty candidate grid");
    }
    if (!std::is_sorted(candidate_vts.begin(), candidate_vts.end())) {
        throw ConfigError("select_vt: candidate grid must be ascending");
    }
    if (cohort.empty()) {
        throw ConfigError("select_vt: empty cohort");
    }

    VtSelection sel;
    sel.fixation_counts.resize(candidate_vts.size());
    for (std::size_t c = 0; c < candidate_vts.size(); ++c) {
        const IvtParams params{candidate_vts[c], mfd_ms};
        for (const auto& trace : cohort) {
            sel.fixation_counts[c].push_back(count_fixations(ivt_segment(trace.speed, trace.t_ms, params)));
        }
    }

    double target = 0.0;
    for (std::size_t p = 0; p < cohort.size(); ++p) {
        std::size_t best = 0;
        for (const auto& counts : sel.fixation_counts) {
            best = std::max(best, counts[p]);
        }
        target += static_cast<double>(best);
    }
    sel.target = target / static_cast<double>(cohort.size());

    double best_gap = std::numeric_limits<double>::infinity();
    bool found = false;
    for (std::size_t c = 0; c < candidate_vts.size(); ++c) {
        const auto& counts = sel.fixation_counts[c];
        double total = 0.0;
        for (auto k : counts) {
            total += static_cast<double>(k);
        }
        sel.mean_counts.push_back(total / static_cast<double>(counts.size()));
        const bool everyone = std::all_of(counts.begin(), counts.end(), [](std::size_t k) { return k > 0; });
        const double gap = std::abs(sel.mean_counts.back() - sel.target);
        if (everyone && gap < best_gap) {
            best_gap = gap;
            sel.vt = candidate_vts[c];
            found = true;
        }
    }
    if (!found) {
        throw DataError("select_vt: no candidate threshold gives every participant a fixation "
                        "(grid too coarse/low)");
    }
    return sel;
}

}  // namespace gazeforge
