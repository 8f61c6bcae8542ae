#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "gazeforge/signal.hpp"

namespace gazeforge {

enum class SegmentKind { fixation, saccade };

std::string_view to_string(SegmentKind kind) noexcept;

struct IvtParams {
    double vt = 20.0;       // deg/s; a sample is slow when v < vt
    double mfd_ms = 100.0;  // slow runs must last strictly longer to be fixations

    void validate() const;
};

// Inclusive sample-index range of one fixation or saccade.
struct Segment {
    SegmentKind kind = SegmentKind::saccade;
    std::size_t start_idx = 0;
    std::size_t end_idx = 0;
    double duration_ms = 0.0;

    std::size_t length() const noexcept { return end_idx - start_idx + 1; }

    template <class T>
    std::span<const T> slice(std::span<const T> values) const {
        return values.subspan(start_idx, length());
    }

    friend bool operator==(const Segment&, const Segment&) = default;
};

// t[end + 1] - t[start], or t[end] - t[start] + period for the final segment.
double span_duration_ms(std::span<const double> t_ms, std::size_t start, std::size_t end,
                        double period_ms);

// Median spacing of the timestamps (0 for fewer than two samples).
double median_period_ms(std::span<const double> t_ms);

// I-VT: maximal runs with v < vt lasting longer than mfd become fixations;
// everything else, including short slow runs, merges into saccades. The
// output partitions [0, n) and adjacent segments differ in kind.
std::vector<Segment> ivt_segment(std::span<const double> speed, std::span<const double> t_ms,
                                 const IvtParams& params);
std::vector<Segment> ivt_segment(const KinematicSeries& series, std::span<const double> t_ms,
                                 const IvtParams& params);

std::size_t count_fixations(std::span<const Segment> segments) noexcept;

struct SpeedTrace {
    std::span<const double> speed;
    std::span<const double> t_ms;
};

struct VtSelection {
    double vt = 0.0;
    // fixation_counts[c][p]: fixations of participant p at candidate c.
    std::vector<std::vector<std::size_t>> fixation_counts;
    std::vector<double> mean_counts;
    double target = 0.0;  // mean over participants of their per-grid maximum
};

// Picks the candidate whose mean fixation count is closest to the mean of
// per-participant maxima, among candidates that give every participant at
// least one fixation. Ties go to the smaller threshold. Throws DataError
// when no candidate qualifies.
VtSelection select_vt(std::span<const SpeedTrace> cohort, double mfd_ms,
                      std::span<const double> candidate_vts);

}  // namespace gazeforge
