#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "pate/metrics.hpp"
#include "pate/series.hpp"
#include "pate/zoning.hpp"

namespace pate {

/// A fixed synthetic detection case: one anomaly, binary scores.
struct Scenario {
    std::string name;
    LabelSeries labels;
    ScoreSeries scores;
    Interval anomaly;
    std::vector<Interval> predictions;
    BufferConfig buffers;
};

/// Canonical geometry shared by the S and p suites. The pre-buffer spans
/// 21..30 and the post-buffer 46..55. The anomaly covers 4% of the series.
namespace geometry {
inline constexpr std::size_t length = 375;
inline constexpr Interval anomaly{31, 45};
inline constexpr std::size_t buffer = 10;

struct Layout {
    std::string_view id;
    Interval prediction;
};

// 1: early only, never touching the anomaly      6: covers it, spills both sides
// 2: early, then the first half                  7: first half from the onset
// 3: exact                                       8: second half
// 4: second half, then late                      9: first three quarters
// 5: late only                                  10: last three quarters
inline constexpr std::array<Layout, 10> layouts{{
    {"1", {22, 29}},
    {"2", {24, 38}},
    {"3", {31, 45}},
    {"4", {38, 52}},
    {"5", {47, 54}},
    {"6", {24, 52}},
    {"7", {31, 38}},
    {"8", {38, 45}},
    {"9", {31, 41}},
    {"10", {35, 45}},
}};
}  // namespace geometry

/// S1..S10 (threshold-swept suite) and p1..p10 (binary-prediction suite).
inline std::vector<std::string> scenario_names() {
    std::vector<std::string> out;
    for (const char* prefix : {"S", "p"})
        for (const auto& l : geometry::layouts) out.push_back(prefix + std::string(l.id));
    return out;
}

inline Scenario scenario(std::string_view name) {
    if (name.size() < 2 || (name[0] != 'S' && name[0] != 'p'))
        throw InvalidInput("unknown scenario '" + std::string(name) + "'");
    const auto id = name.substr(1);
    const auto it = std::find_if(geometry::layouts.begin(), geometry::layouts.end(),
                                 [&](const auto& l) { return l.id == id; });
    if (it == geometry::layouts.end())
        throw InvalidInput("unknown scenario '" + std::string(name) + "'");

    std::vector<std::uint8_t> y(geometry::length, 0);
    std::vector<double> s(geometry::length, 0.0);
    for (auto t = geometry::anomaly.start; t <= geometry::anomaly.end; ++t) y[t - 1] = 1;
    for (auto t = it->prediction.start; t <= it->prediction.end; ++t) s[t - 1] = 1.0;

    Scenario sc;
    sc.name = std::string(name);
    sc.labels = LabelSeries(std::move(y));
    sc.scores = ScoreSeries(std::move(s));
    sc.anomaly = geometry::anomaly;
    sc.predictions = {it->prediction};
    sc.buffers = {geometry::buffer, geometry::buffer};
    return sc;
}

/// PATE for the S suite, PATE-F1 for the p suite.
inline double scenario_score(const Scenario& sc, const EvalOptions& opt = {}) {
    if (sc.name[0] == 'S') return pate(sc.scores, sc.labels, sc.buffers, GridPolicy::exhaustive(), opt).pate;
    return pate_f1(threshold_scores(sc.scores, 1.0), sc.labels, sc.buffers, opt).pate_f1;
}

struct OrderingCheck {
    std::string higher;
    std::string lower;
};

struct ExactCheck {
    std::string name;
    double value;
};

inline constexpr double suite_tolerance = 1e-9;

inline std::vector<OrderingCheck> suite_orderings() {
    std::vector<OrderingCheck> out{{"S3", "S9"}, {"S9", "S10"}, {"S9", "S7"}, {"S7", "S8"},
                                   {"S6", "S8"}, {"S2", "S4"},  {"S4", "S5"}, {"S5", "S1"},
                                   {"S10", "S8"}};
    for (int k = 2; k <= 10; ++k) out.push_back({"S" + std::to_string(k), "S1"});
    for (const auto& [a, b] : std::vector<std::pair<const char*, const char*>>{
             {"p9", "p10"}, {"p7", "p8"}, {"p2", "p4"}, {"p4", "p5"}, {"p5", "p1"}})
        out.push_back({a, b});
    return out;
}

inline std::vector<ExactCheck> suite_exact_values() { return {{"S3", 1.0}, {"p3", 1.0}, {"p1", 0.0}}; }

/// Uniform [0, 1) from mt19937_64, using the top 53 bits of each draw so the
/// sequence does not depend on the standard library's distributions.
class UniformSource {
public:
    explicit UniformSource(std::uint64_t seed) : engine_(seed) {}
    double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    std::uint64_t below(std::uint64_t n) { return n ? engine_() % n : 0; }

private:
    std::mt19937_64 engine_;
};

inline ScoreSeries random_scores(std::size_t T, std::uint64_t seed) {
    if (T == 0) throw InvalidInput("series length must be at least 1");
    UniformSource src(seed);
    std::vector<double> v(T);
    for (auto& x : v) x = src.next();
    return ScoreSeries(std::move(v));
}

/// Labels with `events` anomalies of `event_length` points, placed uniformly
/// at random with at least one normal point between neighbours.
inline LabelSeries synthetic_labels(std::size_t T, std::size_t events, std::size_t event_length,
                                    std::uint64_t seed) {
    if (events * event_length + (events ? events - 1 : 0) > T)
        throw InvalidInput("anomalies do not fit into the series");
    UniformSource src(seed);
    const std::size_t free = T - events * event_length - (events ? events - 1 : 0);
    std::vector<std::size_t> cuts(events);
    for (auto& c : cuts) c = static_cast<std::size_t>(src.below(free + 1));
    std::sort(cuts.begin(), cuts.end());
    std::vector<std::uint8_t> y(T, 0);
    std::size_t pos = 0;  // 0-based
    std::size_t prev_cut = 0;
    for (std::size_t k = 0; k < events; ++k) {
        pos += cuts[k] - prev_cut + (k ? 1 : 0);
        prev_cut = cuts[k];
        std::fill(y.begin() + static_cast<std::ptrdiff_t>(pos),
                  y.begin() + static_cast<std::ptrdiff_t>(pos + event_length), std::uint8_t{1});
        pos += event_length;
    }
    return LabelSeries(std::move(y));
}

/// Labels at a target anomaly ratio, using events of `event_length` points.
inline LabelSeries synthetic_labels_ratio(std::size_t T, double ratio, std::size_t event_length,
                                          std::uint64_t seed) {
    const auto target = static_cast<double>(T) * ratio;
    const auto events = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(target / static_cast<double>(event_length))));
    return synthetic_labels(T, events, event_length, seed);
}

/// A weak detector: uniform noise lifted by `lift` on anomalous points.
inline ScoreSeries noisy_detector_scores(const LabelSeries& labels, double lift,
                                         std::uint64_t seed) {
    UniformSource src(seed);
    std::vector<double> v(labels.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = src.next() + (labels[i] ? lift : 0.0);
    return ScoreSeries(std::move(v));
}

struct LengthProfile {
    std::size_t length = 0;
    std::vector<double> weights;  // weights[s - 1] for offsets s = 1..d past the end
};

/// Post-buffer TP weight profiles for anomalies of several lengths.
inline std::vector<LengthProfile> length_study(const std::vector<std::size_t>& lengths,
                                               std::size_t d) {
    if (lengths.empty()) throw InvalidInput("length study needs at least one anomaly length");
    if (d < 1) throw InvalidInput("length study needs a post-buffer of at least 1");
    std::vector<LengthProfile> out;
    for (const auto len : lengths) {
        if (len < 1) throw InvalidInput("anomaly length must be at least 1");
        LengthProfile p{len, {}};
        for (std::size_t s = 1; s <= d; ++s) p.weights.push_back(post_buffer_tp_weight(s, len, d));
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace pate
