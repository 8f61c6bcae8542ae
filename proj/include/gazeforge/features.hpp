#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gazeforge/ingest.hpp"
#include "gazeforge/segmentation.hpp"
#include "gazeforge/signal.hpp"

namespace gazeforge {

enum class Channel { fixation, saccade, sota };

std::string_view to_string(Channel channel) noexcept;

// How sample statistics are aggregated across the segments of a channel.
enum class Aggregation { pooled, per_segment_mean };

std::string_view to_string(Aggregation aggregation) noexcept;
Aggregation parse_aggregation(std::string_view name);

// Fixed catalog order for a channel. Fixation and saccade channels share the
// 47 kinematic/spatial features; the saccade channel appends
// saccade_amplitude and saccade_ratio. The sota channel has six features.
const std::vector<std::string>& feature_catalog(Channel channel);

struct FeatureVector {
    Channel channel = Channel::fixation;
    std::vector<std::string> names;
    std::vector<double> values;

    double at(std::string_view name) const;
};

struct ChannelInput {
    std::span<const Segment> segments;    // all segments of the participant
    const KinematicSeries* series = nullptr;
    std::span<const GazeSample> samples;  // smoothed positions
    PixelScale scale;
};

// Features of one segment kind. Throws EmptyChannel when the participant has
// no segment of that kind.
FeatureVector extract_channel_features(const ChannelInput& input, SegmentKind kind,
                                       Aggregation aggregation = Aggregation::pooled);

struct SpatialGrid {
    int cells_per_side = 8;
    double width_px = 1280.0;
    double height_px = 1024.0;
};

// fixation_duration (mean, ms), spatial_density (occupied-cell fraction),
// rfdsd, saccade_count, saccade_amplitude (mean, deg), path_length (px).
// Needs at least one fixation and one saccade.
FeatureVector extract_sota_features(const ChannelInput& input, const SpatialGrid& grid);

// Participants x features design matrix for one channel.
struct FeatureTable {
    Channel channel = Channel::fixation;
    std::vector<std::string> feature_names;
    std::vector<std::string> participant_ids;
    std::vector<Gender> labels;
    std::vector<std::vector<double>> rows;

    std::size_t size() const noexcept { return rows.size(); }
    std::size_t width() const noexcept { return feature_names.size(); }

    // Appends a row; the vector's names must match feature_names (the first
    // row fixes them when the table is empty).
    void add(const std::string& participant_id, Gender label, const FeatureVector& features);

    std::vector<double> column(std::size_t j) const;
    std::size_t column_index(std::string_view name) const;
    std::vector<int> class_labels() const;

    FeatureTable select_rows(std::span<const std::size_t> indices) const;
    FeatureTable select_columns(std::span<const std::string> names) const;
};

// CSV: participant_id,label,<features...>; values with 12 significant digits.
void write_feature_table(std::ostream& out, const FeatureTable& table);
FeatureTable read_feature_table(std::istream& in, Channel channel);

struct RankedFeature {
    std::string name;
    double f_score = 0.0;
};

using AnovaRanking = std::vector<RankedFeature>;

// One-way two-group F statistic (MSB / MSW). Zero between- and
// within-group variance gives 0; zero within-group variance alone gives +inf.
double anova_f(std::span<const double> values, std::span<const int> labels);

// Descending by F; ties keep catalog order. Needs >= 2 members per class.
AnovaRanking anova_rank(const FeatureTable& table);

std::vector<std::string> select_top_k(const AnovaRanking& ranking, std::size_t k);

}  // namespace gazeforge
