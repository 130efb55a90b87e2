#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pate {

/// Raised when a series or configuration violates its invariants.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Continuous anomaly scores, one per time step. Always non-empty and finite.
class ScoreSeries {
public:
    ScoreSeries() = default;

    explicit ScoreSeries(std::vector<double> values) : values_(std::move(values)) {
        if (values_.empty()) throw InvalidInput("score series must contain at least one value");
        for (std::size_t i = 0; i < values_.size(); ++i) {
            if (!std::isfinite(values_[i]))
                throw InvalidInput("score at time " + std::to_string(i + 1) + " is not finite");
        }
    }

    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const noexcept { return values_[i]; }
    std::span<const double> values() const noexcept { return values_; }

    /// True when every value is exactly 0 or 1.
    bool is_binary() const noexcept {
        return std::all_of(values_.begin(), values_.end(),
                           [](double v) { return v == 0.0 || v == 1.0; });
    }

private:
    std::vector<double> values_;
};

/// Binary ground truth (or binary predictions), one entry per time step.
class LabelSeries {
public:
    LabelSeries() = default;

    explicit LabelSeries(std::vector<std::uint8_t> values) : values_(std::move(values)) {
        if (values_.empty()) throw InvalidInput("label series must contain at least one value");
        for (std::size_t i = 0; i < values_.size(); ++i) {
            if (values_[i] > 1)
                throw InvalidInput("label at time " + std::to_string(i + 1) + " is not 0 or 1");
        }
    }

    static LabelSeries from_ints(const std::vector<int>& v) {
        std::vector<std::uint8_t> out(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (v[i] != 0 && v[i] != 1)
                throw InvalidInput("label at time " + std::to_string(i + 1) + " is not 0 or 1");
            out[i] = static_cast<std::uint8_t>(v[i]);
        }
        return LabelSeries(std::move(out));
    }

    std::size_t size() const noexcept { return values_.size(); }
    bool operator[](std::size_t i) const noexcept { return values_[i] != 0; }
    std::span<const std::uint8_t> values() const noexcept { return values_; }

    std::size_t positives() const noexcept {
        return static_cast<std::size_t>(std::count(values_.begin(), values_.end(), 1));
    }

    ScoreSeries as_scores() const {
        return ScoreSeries(std::vector<double>(values_.begin(), values_.end()));
    }

    friend bool operator==(const LabelSeries&, const LabelSeries&) = default;

private:
    std::vector<std::uint8_t> values_;
};

/// Closed interval of time steps, 1-based: [start, end].
struct Interval {
    std::size_t start = 1;
    std::size_t end = 1;

    std::size_t length() const noexcept { return end - start + 1; }
    bool contains(std::size_t t) const noexcept { return start <= t && t <= end; }

    friend bool operator==(const Interval&, const Interval&) = default;
};

enum class EventKind { anomaly, prediction };

/// Maximal runs of positive labels, sorted, disjoint and non-adjacent.
class EventSet {
public:
    EventSet() = default;

    EventSet(std::vector<Interval> events, EventKind kind, std::size_t horizon)
        : events_(std::move(events)), kind_(kind), horizon_(horizon) {
        for (std::size_t k = 0; k < events_.size(); ++k) {
            const auto& ev = events_[k];
            if (ev.start < 1 || ev.start > ev.end || ev.end > horizon_)
                throw InvalidInput("event interval out of range");
            if (k > 0 && events_[k - 1].end + 1 >= ev.start)
                throw InvalidInput("events must be sorted, disjoint and non-adjacent");
        }
    }

    std::size_t size() const noexcept { return events_.size(); }
    bool empty() const noexcept { return events_.empty(); }
    const Interval& operator[](std::size_t k) const noexcept { return events_[k]; }
    auto begin() const noexcept { return events_.begin(); }
    auto end() const noexcept { return events_.end(); }
    const std::vector<Interval>& intervals() const noexcept { return events_; }
    EventKind kind() const noexcept { return kind_; }
    std::size_t horizon() const noexcept { return horizon_; }

    /// Expands the events back into a binary series of length horizon().
    LabelSeries to_labels() const {
        std::vector<std::uint8_t> v(horizon_, 0);
        for (const auto& ev : events_)
            std::fill(v.begin() + static_cast<std::ptrdiff_t>(ev.start - 1),
                      v.begin() + static_cast<std::ptrdiff_t>(ev.end), std::uint8_t{1});
        return LabelSeries(std::move(v));
    }

private:
    std::vector<Interval> events_;
    EventKind kind_ = EventKind::anomaly;
    std::size_t horizon_ = 0;
};

inline EventSet extract_events(const LabelSeries& labels, EventKind kind = EventKind::anomaly) {
    std::vector<Interval> out;
    const auto v = labels.values();
    std::size_t t = 0;
    while (t < v.size()) {
        if (!v[t]) {
            ++t;
            continue;
        }
        std::size_t u = t;
        while (u + 1 < v.size() && v[u + 1]) ++u;
        out.push_back({t + 1, u + 1});
        t = u + 1;
    }
    return EventSet(std::move(out), kind, v.size());
}

/// Points with score >= threshold are predicted anomalous.
inline LabelSeries threshold_scores(const ScoreSeries& scores, double threshold) {
    std::vector<std::uint8_t> v(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) v[i] = scores[i] >= threshold ? 1 : 0;
    return LabelSeries(std::move(v));
}

/// How thresholds are chosen from a score series.
struct GridPolicy {
    enum class Kind { exhaustive, quantile };
    Kind kind = Kind::exhaustive;
    std::size_t points = 0;  // quantile only, >= 2

    static GridPolicy exhaustive() { return {}; }
    static GridPolicy quantile(std::size_t n) {
        if (n < 2) throw InvalidInput("quantile grid needs at least 2 points");
        return {Kind::quantile, n};
    }

    std::string describe() const {
        return kind == Kind::exhaustive ? std::string("exhaustive")
                                        : "quantile:" + std::to_string(points);
    }
};

/// Thresholds in strictly decreasing order. Element 0 is a sentinel just above
/// the maximum score (nothing predicted); the last element is the minimum
/// score (everything predicted).
inline std::vector<double> threshold_grid(const ScoreSeries& scores,
                                          GridPolicy policy = GridPolicy::exhaustive()) {
    std::vector<double> sorted(scores.values().begin(), scores.values().end());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());

    std::vector<double> picked;
    if (policy.kind == GridPolicy::Kind::exhaustive) {
        picked = std::move(sorted);
    } else {
        if (policy.points < 2) throw InvalidInput("quantile grid needs at least 2 points");
        const std::size_t n = sorted.size();
        picked.reserve(policy.points);
        for (std::size_t q = 0; q < policy.points; ++q) {
            // q-th of N evenly spaced ranks, highest first
            const std::size_t rank =
                (q * (n - 1) * 2 + (policy.points - 1)) / (2 * (policy.points - 1));
            picked.push_back(sorted[rank]);
        }
    }
    picked.erase(std::unique(picked.begin(), picked.end()), picked.end());

    std::vector<double> grid;
    grid.reserve(picked.size() + 1);
    grid.push_back(std::nextafter(picked.front(), std::numeric_limits<double>::infinity()));
    grid.insert(grid.end(), picked.begin(), picked.end());
    return grid;
}

}  // namespace pate
