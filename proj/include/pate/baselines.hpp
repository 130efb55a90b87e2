#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "pate/series.hpp"

namespace pate {

struct ConfusionCounts {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    std::size_t tn = 0;

    std::size_t total() const noexcept { return tp + fp + fn + tn; }
};

struct PrfScores {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

inline void require_same_length(std::size_t a, std::size_t b) {
    if (a != b)
        throw InvalidInput("series lengths differ (" + std::to_string(a) + " vs " +
                           std::to_string(b) + ")");
}

inline ConfusionCounts confusion(const LabelSeries& predictions, const LabelSeries& labels) {
    require_same_length(predictions.size(), labels.size());
    ConfusionCounts c;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const bool p = predictions[i], y = labels[i];
        if (p && y) ++c.tp;
        else if (p) ++c.fp;
        else if (y) ++c.fn;
        else ++c.tn;
    }
    return c;
}

inline PrfScores prf(const ConfusionCounts& c) {
    PrfScores s;
    s.precision = c.tp + c.fp ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp) : 0.0;
    s.recall = c.tp + c.fn ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn) : 0.0;
    const double sum = s.precision + s.recall;
    s.f1 = sum > 0.0 ? 2.0 * s.precision * s.recall / sum : 0.0;
    return s;
}

inline PrfScores standard_prf(const LabelSeries& predictions, const LabelSeries& labels) {
    return prf(confusion(predictions, labels));
}

/// Marks every anomaly event containing at least one predicted point as fully
/// predicted; everything else is copied.
inline LabelSeries point_adjust(const LabelSeries& predictions, const LabelSeries& labels) {
    require_same_length(predictions.size(), labels.size());
    std::vector<std::uint8_t> out(predictions.values().begin(), predictions.values().end());
    for (const auto& ev : extract_events(labels)) {
        bool hit = false;
        for (std::size_t t = ev.start; t <= ev.end && !hit; ++t) hit = predictions[t - 1];
        if (hit) std::fill(out.begin() + static_cast<std::ptrdiff_t>(ev.start - 1),
                           out.begin() + static_cast<std::ptrdiff_t>(ev.end), std::uint8_t{1});
    }
    return LabelSeries(std::move(out));
}

inline double pa_f1(const LabelSeries& predictions, const LabelSeries& labels) {
    return standard_prf(point_adjust(predictions, labels), labels).f1;
}

namespace detail {

/// Point-wise counts at every level of a threshold grid (level 0 = nothing
/// predicted). `adjusted` applies point adjustment at each level.
struct LevelCounts {
    std::vector<std::uint64_t> tp;
    std::vector<std::uint64_t> fp;
    std::uint64_t positives = 0;
    std::uint64_t negatives = 0;
};

inline LevelCounts level_counts(const ScoreSeries& scores, const LabelSeries& labels,
                                const std::vector<double>& grid, bool adjusted) {
    require_same_length(scores.size(), labels.size());
    const std::size_t G = grid.size() - 1;
    LevelCounts c;
    c.tp.assign(G + 2, 0);
    c.fp.assign(G + 2, 0);
    auto level_of = [&](double s) {
        const auto it = std::partition_point(grid.begin() + 1, grid.end(),
                                             [s](double th) { return th > s; });
        return static_cast<std::size_t>(it - grid.begin());  // G + 1 if never
    };
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (labels[i]) {
            ++c.positives;
            if (!adjusted) ++c.tp[level_of(scores[i])];
        } else {
            ++c.negatives;
            ++c.fp[level_of(scores[i])];
        }
    }
    if (adjusted) {
        // an event is fully credited from the level its best point enters
        for (const auto& ev : extract_events(labels)) {
            std::size_t first = G + 1;
            for (std::size_t t = ev.start; t <= ev.end; ++t)
                first = std::min(first, level_of(scores[t - 1]));
            c.tp[first] += ev.length();
        }
    }
    for (std::size_t j = 1; j <= G + 1; ++j) {
        c.tp[j] += c.tp[j - 1];
        c.fp[j] += c.fp[j - 1];
    }
    c.tp.pop_back();
    c.fp.pop_back();
    return c;
}

inline double roc_area(const LevelCounts& c) {
    if (c.positives == 0 || c.negatives == 0)
        throw InvalidInput("AUC-ROC is undefined when labels are all 0 or all 1");
    const auto P = static_cast<double>(c.positives);
    const auto N = static_cast<double>(c.negatives);
    double area = 0.0;
    for (std::size_t j = 1; j < c.tp.size(); ++j) {
        const double x0 = static_cast<double>(c.fp[j - 1]) / N, x1 = static_cast<double>(c.fp[j]) / N;
        const double y0 = static_cast<double>(c.tp[j - 1]) / P, y1 = static_cast<double>(c.tp[j]) / P;
        area += (x1 - x0) * (y0 + y1) / 2.0;
    }
    return area;
}

}  // namespace detail

inline double auc_roc(const ScoreSeries& scores, const LabelSeries& labels,
                      const std::vector<double>& grid) {
    return detail::roc_area(detail::level_counts(scores, labels, grid, false));
}

inline double pa_auc_roc(const ScoreSeries& scores, const LabelSeries& labels,
                         const std::vector<double>& grid) {
    return detail::roc_area(detail::level_counts(scores, labels, grid, true));
}

/// Point-wise AUC-PR with the same anchoring and integration rule as the
/// weighted curve: (recall 0, precision 1) when nothing is predicted,
/// trapezoid over recall in threshold order.
inline double auc_pr(const ScoreSeries& scores, const LabelSeries& labels,
                     const std::vector<double>& grid) {
    const auto c = detail::level_counts(scores, labels, grid, false);
    const auto P = static_cast<double>(c.positives);
    double area = 0.0, prev_r = 0.0, prev_p = 1.0;
    for (std::size_t j = 1; j < c.tp.size(); ++j) {
        const auto tp = static_cast<double>(c.tp[j]);
        const auto pred = static_cast<double>(c.tp[j] + c.fp[j]);
        const double p = pred > 0.0 ? tp / pred : 1.0;
        const double r = P > 0.0 ? tp / P : 0.0;
        area += (r - prev_r) * (prev_p + p) / 2.0;
        prev_r = r;
        prev_p = p;
    }
    return area;
}

}  // namespace pate
