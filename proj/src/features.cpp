#include "gazeforge/features.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>
#include <set>

#include "gazeforge/errors.hpp"
#include "gazeforge/stats.hpp"
#include "gazeforge/text.hpp"

namespace gazeforge {

std::string_view to_string(Channel channel) noexcept {
    switch (channel) {
        case Channel::fixation:
            return "fixation";
        case Channel::saccade:
            return "saccade";
        case Channel::sota:
            return "sota";
    }
    return "unknown";
}

std::string_view to_string(Aggregation aggregation) noexcept {
    return aggregation == Aggregation::pooled ? "pooled" : "per-segment-mean";
}

Aggregation parse_aggregation(std::string_view name) {
    if (name == "pooled") {
        return Aggregation::pooled;
    }
    if (name == "per-segment-mean") {
        return Aggregation::per_segment_mean;
    }
    throw ConfigError("unknown aggregation '" + std::string(name) + "'");
}

namespace {

constexpr std::array<std::string_view, 6> kSignals = {
    "angular_velocity",     "angular_velocity_x",     "angular_velocity_y",
    "angular_acceleration", "angular_acceleration_x", "angular_acceleration_y"};

constexpr std::array<std::string_view, 7> kStats = {"mean", "median", "max",    "min",
                                                     "sd",   "skewness", "kurtosis"};

constexpr std::array<std::string_view, 5> kSegmentFeatures = {
    "duration", "dispersion", "path_length", "distance_to_previous", "angle_to_previous"};

std::vector<std::string> build_catalog(bool saccade) {
    std::vector<std::string> names;
    for (auto signal : kSignals) {
        for (auto stat : kStats) {
            names.push_back(std::string(stat) + "_" + std::string(signal));
        }
    }
    for (auto f : kSegmentFeatures) {
        names.emplace_back(f);
    }
    if (saccade) {
        names.emplace_back("saccade_amplitude");
        names.emplace_back("saccade_ratio");
    }
    return names;
}

std::array<double, 7> unpack(const stats::Moments& m) {
    return {m.mean, m.median, m.max, m.min, m.sd, m.skewness, m.kurtosis};
}

std::array<std::span<const double>, 6> signals_of(const KinematicSeries& k) {
    return {std::span<const double>(k.v),  std::span<const double>(k.vx), std::span<const double>(k.vy),
            std::span<const double>(k.a),  std::span<const double>(k.ax), std::span<const double>(k.ay)};
}

struct Centroid {
    double x = 0.0;
    double y = 0.0;
};

Centroid centroid(std::span<const GazeSample> s) {
    Centroid c;
    for (const auto& p : s) {
        c.x += p.x_px;
        c.y += p.y_px;
    }
    c.x /= static_cast<double>(s.size());
    c.y /= static_cast<double>(s.size());
    return c;
}

double path_length_px(std::span<const GazeSample> s) {
    double total = 0.0;
    for (std::size_t i = 1; i < s.size(); ++i) {
        total += std::hypot(s[i].x_px - s[i - 1].x_px, s[i].y_px - s[i - 1].y_px);
    }
    return total;
}

double dispersion_px(std::span<const GazeSample> s) {
    const auto [xmin, xmax] = std::minmax_element(
        s.begin(), s.end(), [](const GazeSample& a, const GazeSample& b) { return a.x_px < b.x_px; });
    const auto [ymin, ymax] = std::minmax_element(
        s.begin(), s.end(), [](const GazeSample& a, const GazeSample& b) { return a.y_px < b.y_px; });
    return (xmax->x_px - xmin->x_px) + (ymax->y_px - ymin->y_px);
}

double amplitude_deg(std::span<const GazeSample> s, const PixelScale& scale) {
    return std::hypot((s.back().x_px - s.front().x_px) * scale.kx,
                      (s.back().y_px - s.front().y_px) * scale.ky);
}

std::vector<Segment> of_kind(std::span<const Segment> segments, SegmentKind kind) {
    std::vector<Segment> out;
    std::copy_if(segments.begin(), segments.end(), std::back_inserter(out),
                 [&](const Segment& s) { return s.kind == kind; });
    return out;
}

void check_input(const ChannelInput& input) {
    if (input.series == nullptr || input.series->size() != input.samples.size()) {
        throw ConfigError("feature extraction: kinematics and samples differ in length");
    }
}

}  // namespace

const std::vector<std::string>& feature_catalog(Channel channel) {
    static const std::vector<std::string> fixation = build_catalog(false);
    static const std::vector<std::string> saccade = build_catalog(true);
    static const std::vector<std::string> sota = {"fixation_duration", "spatial_density",
                                                  "rfdsd",             "saccade_count",
                                                  "saccade_amplitude", "path_length"};
    switch (channel) {
        case Channel::fixation:
            return fixation;
        case Channel::saccade:
            return saccade;
        case Channel::sota:
            return sota;
    }
    return fixation;
}

double FeatureVector::at(std::string_view name) const {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) {
        throw ConfigError("no feature named '" + std::string(name) + "'");
    }
    return values[static_cast<std::size_t>(it - names.begin())];
}

FeatureVector extract_channel_features(const ChannelInput& input, SegmentKind kind,
                                       Aggregation aggregation) {
    check_input(input);
    const auto segs = of_kind(input.segments, kind);
    if (segs.empty()) {
        throw EmptyChannel("no " + std::string(to_string(kind)) + " segments");
    }
    const Channel channel = kind == SegmentKind::fixation ? Channel::fixation : Channel::saccade;
    FeatureVector fv;
    fv.channel = channel;
    fv.names = feature_catalog(channel);
    fv.values.reserve(fv.names.size());

    const auto signals = signals_of(*input.series);
    for (const auto signal : signals) {
        std::array<double, 7> row{};
        if (aggregation == Aggregation::pooled) {
            std::vector<double> pooled;
            for (const auto& seg : segs) {
                const auto part = seg.slice(signal);
                pooled.insert(pooled.end(), part.begin(), part.end());
            }
            row = unpack(stats::describe(pooled));
        } else {
            for (const auto& seg : segs) {
                const auto one = unpack(stats::describe(seg.slice(signal)));
                for (std::size_t s = 0; s < row.size(); ++s) {
                    row[s] += one[s];
                }
            }
            for (auto& value : row) {
                value /= static_cast<double>(segs.size());
            }
        }
        fv.values.insert(fv.values.end(), row.begin(), row.end());
    }

    double duration = 0.0;
    double dispersion = 0.0;
    double path = 0.0;
    double distance = 0.0;
    double angle = 0.0;
    std::size_t with_previous = 0;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        const auto pts = segs[i].slice(input.samples);
        duration += segs[i].duration_ms;
        dispersion += dispersion_px(pts);
        path += path_length_px(pts);
        if (i > 0) {
            const auto prev = centroid(segs[i - 1].slice(input.samples));
            const auto cur = centroid(pts);
            distance += std::hypot(cur.x - prev.x, cur.y - prev.y);
            double theta = std::atan2(cur.y - prev.y, cur.x - prev.x);
            if (theta <= -std::numbers::pi) {
                theta = std::numbers::pi;  // keep angles in (-pi, pi]
            }
            angle += theta;
            ++with_previous;
        }
    }
    const auto count = static_cast<double>(segs.size());
    fv.values.push_back(duration / count);
    fv.values.push_back(dispersion / count);
    fv.values.push_back(path / count);
    fv.values.push_back(with_previous > 0 ? distance / static_cast<double>(with_previous) : 0.0);
    fv.values.push_back(with_previous > 0 ? angle / static_cast<double>(with_previous) : 0.0);

    if (channel == Channel::saccade) {
        double amplitude = 0.0;
        double ratio = 0.0;
        for (const auto& seg : segs) {
            amplitude += amplitude_deg(seg.slice(input.samples), input.scale);
            const auto v = seg.slice(std::span<const double>(input.series->v));
            ratio += *std::max_element(v.begin(), v.end()) / (seg.duration_ms / 1000.0);
        }
        fv.values.push_back(amplitude / count);
        fv.values.push_back(ratio / count);
    }
    return fv;
}

FeatureVector extract_sota_features(const ChannelInput& input, const SpatialGrid& grid) {
    check_input(input);
    const auto fixations = of_kind(input.segments, SegmentKind::fixation);
    const auto saccades = of_kind(input.segments, SegmentKind::saccade);
    if (fixations.empty() || saccades.empty()) {
        throw EmptyChannel("sota features need at least one fixation and one saccade");
    }
    if (grid.cells_per_side < 1 || !(grid.width_px > 0.0) || !(grid.height_px > 0.0)) {
        throw ConfigError("spatial grid needs >= 1 cell per side and a positive screen size");
    }

    double fix_total = 0.0;
    std::set<std::pair<int, int>> occupied;
    const int n = grid.cells_per_side;
    for (const auto& seg : fixations) {
        fix_total += seg.duration_ms;
        const auto c = centroid(seg.slice(input.samples));
        const int cx = std::clamp(static_cast<int>(std::floor(c.x / (grid.width_px / n))), 0, n - 1);
        const int cy = std::clamp(static_cast<int>(std::floor(c.y / (grid.height_px / n))), 0, n - 1);
        occupied.emplace(cx, cy);
    }
    double sac_total = 0.0;
    double amplitude = 0.0;
    for (const auto& seg : saccades) {
        sac_total += seg.duration_ms;
        amplitude += amplitude_deg(seg.slice(input.samples), input.scale);
    }

    FeatureVector fv;
    fv.channel = Channel::sota;
    fv.names = feature_catalog(Channel::sota);
    fv.values = {fix_total / static_cast<double>(fixations.size()),
                 static_cast<double>(occupied.size()) / static_cast<double>(n * n),
                 fix_total / sac_total,
                 static_cast<double>(saccades.size()),
                 amplitude / static_cast<double>(saccades.size()),
                 path_length_px(input.samples)};
    return fv;
}

void FeatureTable::add(const std::string& participant_id, Gender label, const FeatureVector& features) {
    if (rows.empty() && feature_names.empty()) {
        feature_names = features.names;
    } else if (features.names != feature_names) {
        throw ConfigError("feature table: row schema differs from table schema");
    }
    for (double v : features.values) {
        if (!std::isfinite(v)) {
            throw DataError("feature table: non-finite feature value for " + participant_id);
        }
    }
    participant_ids.push_back(participant_id);
    labels.push_back(label);
    rows.push_back(features.values);
}

std::vector<double> FeatureTable::column(std::size_t j) const {
    std::vector<double> out(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out[i] = rows[i][j];
    }
    return out;
}

std::size_t FeatureTable::column_index(std::string_view name) const {
    const auto it = std::find(feature_names.begin(), feature_names.end(), name);
    if (it == feature_names.end()) {
        throw ConfigError("feature table has no column '" + std::string(name) + "'");
    }
    return static_cast<std::size_t>(it - feature_names.begin());
}

std::vector<int> FeatureTable::class_labels() const {
    std::vector<int> out(labels.size());
    std::transform(labels.begin(), labels.end(), out.begin(), class_label);
    return out;
}

FeatureTable FeatureTable::select_rows(std::span<const std::size_t> indices) const {
    FeatureTable out;
    out.channel = channel;
    out.feature_names = feature_names;
    for (auto i : indices) {
        out.participant_ids.push_back(participant_ids.at(i));
        out.labels.push_back(labels.at(i));
        out.rows.push_back(rows.at(i));
    }
    return out;
}

FeatureTable FeatureTable::select_columns(std::span<const std::string> names) const {
    std::vector<std::size_t> cols;
    for (const auto& name : names) {
        cols.push_back(column_index(name));
    }
    FeatureTable out;
    out.channel = channel;
    out.feature_names.assign(names.begin(), names.end());
    out.participant_ids = participant_ids;
    out.labels = labels;
    out.rows.reserve(rows.size());
    for (const auto& row : rows) {
        std::vector<double> r;
        r.reserve(cols.size());
        for (auto c : cols) {
            r.push_back(row[c]);
        }
        out.rows.push_back(std::move(r));
    }
    return out;
}

void write_feature_table(std::ostream& out, const FeatureTable& table) {
    out << "participant_id,label";
    for (const auto& name : table.feature_names) {
        out << ',' << name;
    }
    out << '\n';
    for (std::size_t i = 0; i < table.size(); ++i) {
        out << table.participant_ids[i] << ',' << gender_code(table.labels[i]);
        for (double v : table.rows[i]) {
            out << ',' << text::sig12(v);
        }
        out << '\n';
    }
}

FeatureTable read_feature_table(std::istream& in, Channel channel) {
    std::string line;
    if (!std::getline(in, line)) {
        throw DataError("empty feature table");
    }
    const auto header = text::split(text::trim(line), ',');
    if (header.size() < 3 || text::trim(header[0]) != "participant_id" || text::trim(header[1]) != "label") {
        throw DataError("feature table header must start with participant_id,label");
    }
    FeatureVector schema;
    schema.channel = channel;
    for (std::size_t j = 2; j < header.size(); ++j) {
        schema.names.emplace_back(text::trim(header[j]));
    }
    FeatureTable table;
    table.channel = channel;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) {
            continue;
        }
        const auto fields = text::split(text::trim(line), ',');
        if (fields.size() != header.size()) {
            throw DataError("feature table line " + std::to_string(line_no) + ": wrong field count");
        }
        FeatureVector row = schema;
        row.values.resize(schema.names.size());
        for (std::size_t j = 2; j < fields.size(); ++j) {
            if (!text::parse_double(fields[j], row.values[j - 2])) {
                throw DataError("feature table line " + std::to_string(line_no) + ": bad number");
            }
        }
        table.add(std::string(text::trim(fields[0])), parse_gender(fields[1]), row);
    }
    if (table.feature_names.empty()) {
        table.feature_names = schema.names;
    }
    return table;
}

double anova_f(std::span<const double> values, std::span<const int> labels) {
    if (values.size() != labels.size()) {
        throw ConfigError("anova_f: values and labels differ in length");
    }
    std::array<double, 2> sum{};
    std::array<double, 2> count{};
    for (std::size_t i = 0; i < values.size(); ++i) {
        const auto g = static_cast<std::size_t>(labels[i] != 0);
        sum[g] += values[i];
        count[g] += 1.0;
    }
    if (count[0] < 1.0 || count[1] < 1.0 || values.size() < 3) {
        throw ConfigError("anova_f: need both groups and at least 3 observations");
    }
    const std::array<double, 2> group_mean = {sum[0] / count[0], sum[1] / count[1]};
    const double grand = (sum[0] + sum[1]) / (count[0] + count[1]);

    double ss_within = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double d = values[i] - group_mean[static_cast<std::size_t>(labels[i] != 0)];
        ss_within += d * d;
    }
    double ss_between = 0.0;
    for (std::size_t g = 0; g < 2; ++g) {
        ss_between += count[g] * (group_mean[g] - grand) * (group_mean[g] - grand);
    }
    const double ms_between = ss_between;  // k - 1 = 1
    const double ms_within = ss_within / (static_cast<double>(values.size()) - 2.0);

    // Rounding noise relative to the data scale counts as zero variance.
    double scale = 0.0;
    for (double v : values) {
        scale = std::max(scale, std::abs(v));
    }
    const double noise = 1e-24 * scale * scale;
    if (ms_within <= noise) {
        return ms_between <= noise ? 0.0 : std::numeric_limits<double>::infinity();
    }
    return ms_between / ms_within;
}

AnovaRanking anova_rank(const FeatureTable& table) {
    const auto labels = table.class_labels();
    const auto females = std::count(labels.begin(), labels.end(), 1);
    const auto males = static_cast<std::ptrdiff_t>(labels.size()) - females;
    if (females < 2 || males < 2) {
        throw DataError("anova_rank: both classes need at least two participants");
    }
    AnovaRanking ranking;
    ranking.reserve(table.width());
    for (std::size_t j = 0; j < table.width(); ++j) {
        ranking.push_back({table.feature_names[j], anova_f(table.column(j), labels)});
    }
    std::stable_sort(ranking.begin(), ranking.end(),
                     [](const RankedFeature& a, const RankedFeature& b) { return a.f_score > b.f_score; });
    return ranking;
}

std::vector<std::string> select_top_k(const AnovaRanking& ranking, std::size_t k) {
    if (k > ranking.size()) {
        throw ConfigError("select_top_k: k = " + std::to_string(k) + " exceeds " +
                          std::to_string(ranking.size()) + " ranked features");
    }
    std::vector<std::string> out;
    out.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        out.push_back(ranking[i].name);
    }
    return out;
}

}  // namespace gazeforge
