#pragma once

#include <cassert>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "pate/series.hpp"

namespace pate {

/// Pre-buffer sizes e range over {0..e_max}, post-buffer sizes d over {0..d_max}.
struct BufferConfig {
    std::size_t e_max = 100;
    std::size_t d_max = 100;

    std::size_t combos() const noexcept { return (e_max + 1) * (d_max + 1); }

    static BufferConfig diagonal(std::size_t k) { return {k, k}; }
};

inline constexpr std::uint32_t no_anomaly = std::numeric_limits<std::uint32_t>::max();

enum class Zone : std::uint8_t { outside, anomaly, post_buffer, pre_buffer };

struct ZoneTag {
    Zone zone = Zone::outside;
    std::uint32_t owner = no_anomaly;  // 0-based anomaly index

    friend bool operator==(const ZoneTag&, const ZoneTag&) = default;
};

/// One zone tag per time step for a fixed (e, d).
struct ZoneMap {
    std::vector<ZoneTag> tags;  // tags[t - 1] for t in [1, T]
    std::size_t e = 0;
    std::size_t d = 0;

    const ZoneTag& at(std::size_t t) const { return tags[t - 1]; }
    std::size_t horizon() const noexcept { return tags.size(); }
};

/// Last time step of the post-buffer of anomaly k, clipped at the series end
/// and at the start of the next anomaly. Equals n_k when the buffer is empty.
inline std::size_t post_buffer_end(const EventSet& anomalies, std::size_t k, std::size_t d) {
    std::size_t end = anomalies[k].end + d;
    end = std::min(end, anomalies.horizon());
    if (k + 1 < anomalies.size()) end = std::min(end, anomalies[k + 1].start - 1);
    return end;
}

/// First time step of the pre-buffer of anomaly k. The preceding anomaly's
/// post-buffer wins any overlap. Equals i_k when the buffer is empty.
inline std::size_t pre_buffer_start(const EventSet& anomalies, std::size_t k, std::size_t e,
                                    std::size_t d) {
    const std::size_t onset = anomalies[k].start;
    std::size_t start = onset > e ? onset - e : 1;
    if (k > 0) start = std::max(start, post_buffer_end(anomalies, k - 1, d) + 1);
    return std::min(start, onset);
}

inline ZoneMap build_zones(const EventSet& anomalies, std::size_t e, std::size_t d) {
    ZoneMap map;
    map.e = e;
    map.d = d;
    map.tags.assign(anomalies.horizon(), ZoneTag{});
    for (std::size_t k = 0; k < anomalies.size(); ++k) {
        const auto owner = static_cast<std::uint32_t>(k);
        const auto& a = anomalies[k];
        for (std::size_t t = pre_buffer_start(anomalies, k, e, d); t < a.start; ++t)
            map.tags[t - 1] = {Zone::pre_buffer, owner};
        for (std::size_t t = a.start; t <= a.end; ++t) map.tags[t - 1] = {Zone::anomaly, owner};
        for (std::size_t t = a.end + 1; t <= post_buffer_end(anomalies, k, d); ++t)
            map.tags[t - 1] = {Zone::post_buffer, owner};
    }
    return map;
}

enum class Category : std::uint8_t { none, true_detection, post_buffer, pre_buffer, outside };

struct PointCategory {
    Category category = Category::none;
    std::uint32_t owner = no_anomaly;

    friend bool operator==(const PointCategory&, const PointCategory&) = default;
};

using CategoryMap = std::vector<PointCategory>;  // indexed by t - 1

/// Categorizes every predicted point. Pre-buffer detections of an anomaly with
/// no true detection are reclassified as outside.
inline CategoryMap categorize(const LabelSeries& predictions, const ZoneMap& zones,
                              std::size_t anomaly_count) {
    if (predictions.size() != zones.horizon())
        throw InvalidInput("predictions and zones cover different lengths");
    std::vector<bool> detected(anomaly_count, false);
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        if (predictions[i] && zones.tags[i].zone == Zone::anomaly) detected[zones.tags[i].owner] = true;
    }
    CategoryMap out(predictions.size());
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        if (!predictions[i]) continue;
        const auto& tag = zones.tags[i];
        switch (tag.zone) {
            case Zone::anomaly: out[i] = {Category::true_detection, tag.owner}; break;
            case Zone::post_buffer: out[i] = {Category::post_buffer, tag.owner}; break;
            case Zone::pre_buffer:
                out[i] = detected[tag.owner] ? PointCategory{Category::pre_buffer, tag.owner}
                                             : PointCategory{Category::outside, no_anomaly};
                break;
            case Zone::outside: out[i] = {Category::outside, no_anomaly}; break;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Weight formulas. Distances are expressed as offsets so that the sums over
// the anomaly collapse to closed forms; tests check them against the sums.

/// TP weight of a post-buffer detection `offset` steps after the end of an
/// anomaly of `length` points, for post-buffer size d (1 <= offset <= d).
inline double post_buffer_tp_weight(std::size_t offset, std::size_t length, std::size_t d) {
    assert(offset >= 1 && offset <= d);
    const double half_spread = static_cast<double>(length - 1) / 2.0;
    return static_cast<double>(d - offset) / (static_cast<double>(d) + half_spread);
}

/// TP weight of a pre-buffer detection `offset` steps before the onset of an
/// anomaly of `length` points, for pre-buffer size e (1 <= offset <= e).
inline double pre_buffer_tp_weight(std::size_t offset, std::size_t length, std::size_t e) {
    assert(offset >= 1 && offset <= e);
    const double half_spread = static_cast<double>(length - 1) / 2.0;
    return static_cast<double>(e - offset) / (static_cast<double>(e) + half_spread);
}

/// Fraction of an anomaly's points that are true-detected.
inline double coverage(std::size_t detected, std::size_t length) {
    return static_cast<double>(detected) / static_cast<double>(length);
}

/// Onset-buffer length r = floor(coverage * length), evaluated in integers so
/// that it is exactly the number of detected points.
inline std::size_t onset_buffer_length(std::size_t detected, std::size_t length) {
    return (detected * length) / length;
}

/// FN weight of an undetected point at `offset` steps from the onset of a
/// partially missed anomaly of `length` points with onset buffer r.
inline double partial_miss_fn_weight(std::size_t offset, std::size_t r, std::size_t length) {
    if (offset <= r) return 1.0;
    // sum_{y=i}^{i+r} |t - y| with t = i + offset > i + r
    const auto num = static_cast<double>((r + 1) * offset - r * (r + 1) / 2);
    const auto den = static_cast<double>(length * (length - 1) / 2);
    if (den == 0.0) throw std::logic_error("zero partial-miss denominator");
    return 1.0 - num / den;
}

struct WeightField {
    std::vector<double> tp;
    std::vector<double> fp;
    std::vector<double> fn;

    explicit WeightField(std::size_t n = 0) : tp(n, 0.0), fp(n, 0.0), fn(n, 0.0) {}
    std::size_t size() const noexcept { return tp.size(); }
};

enum class MissState : std::uint8_t { detected_fully, partial, total };

/// Per-anomaly detection summary at one threshold.
struct PartialMissContext {
    std::size_t detected = 0;    // true-detected points
    std::size_t r = 0;           // onset-buffer length
    double cover = 0.0;
    bool buffer_hit = false;     // some post-buffer detection
    MissState state = MissState::total;
};

inline std::vector<PartialMissContext> miss_contexts(const CategoryMap& categories,
                                                     const EventSet& anomalies) {
    std::vector<PartialMissContext> ctx(anomalies.size());
    for (const auto& c : categories) {
        if (c.category == Category::true_detection) ++ctx[c.owner].detected;
        if (c.category == Category::post_buffer) ctx[c.owner].buffer_hit = true;
    }
    for (std::size_t k = 0; k < anomalies.size(); ++k) {
        auto& c = ctx[k];
        const std::size_t len = anomalies[k].length();
        c.cover = coverage(c.detected, len);
        c.r = onset_buffer_length(c.detected, len);
        if (c.detected == len) c.state = MissState::detected_fully;
        else if (c.detected > 0 || c.buffer_hit) c.state = MissState::partial;
        else c.state = MissState::total;
    }
    return ctx;
}

inline WeightField assign_weights(const CategoryMap& categories, const EventSet& anomalies,
                                  const ZoneMap& zones) {
    const std::size_t T = categories.size();
    if (T != zones.horizon() || T != anomalies.horizon())
        throw InvalidInput("categories, zones and anomalies cover different lengths");
    WeightField w(T);
    for (std::size_t i = 0; i < T; ++i) {
        const std::size_t t = i + 1;
        const auto& c = categories[i];
        switch (c.category) {
            case Category::none: break;
            case Category::true_detection: w.tp[i] = 1.0; break;
            case Category::outside: w.fp[i] = 1.0; break;
            case Category::post_buffer: {
                const auto& a = anomalies[c.owner];
                w.tp[i] = post_buffer_tp_weight(t - a.end, a.length(), zones.d);
                w.fp[i] = 1.0 - w.tp[i];
                break;
            }
            case Category::pre_buffer: {
                const auto& a = anomalies[c.owner];
                w.tp[i] = pre_buffer_tp_weight(a.start - t, a.length(), zones.e);
                w.fp[i] = 1.0 - w.tp[i];
                break;
            }
        }
    }
    const auto ctx = miss_contexts(categories, anomalies);
    for (std::size_t k = 0; k < anomalies.size(); ++k) {
        const auto& a = anomalies[k];
        if (ctx[k].state == MissState::detected_fully) continue;
        for (std::size_t t = a.start; t <= a.end; ++t) {
            if (categories[t - 1].category == Category::true_detection) continue;
            w.fn[t - 1] = ctx[k].state == MissState::total
                              ? 1.0
                              : partial_miss_fn_weight(t - a.start, ctx[k].r, a.length());
        }
    }
    return w;
}

/// Zones, categories and weights for one (e, d) at one binarized prediction.
inline WeightField weights_for(const LabelSeries& predictions, const EventSet& anomalies,
                               std::size_t e, std::size_t d) {
    const auto zones = build_zones(anomalies, e, d);
    const auto cats = categorize(predictions, zones, anomalies.size());
    return assign_weights(cats, anomalies, zones);
}

}  // namespace pate
