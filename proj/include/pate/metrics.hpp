#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <limits>
#include <numeric>
#include <optional>
#include <tuple>
#include <utility>
#include <vector>

#include "pate/parallel.hpp"
#include "pate/series.hpp"
#include "pate/zoning.hpp"

#if defined(__GNUC__)
#define PATE_ALWAYS_INLINE __attribute__((always_inline))
#else
#define PATE_ALWAYS_INLINE
#endif

namespace pate {

struct PRPoint {
    double threshold = 0.0;
    double precision = 1.0;
    double recall = 0.0;
};

struct PRCurve {
    std::size_t e = 0;
    std::size_t d = 0;
    std::vector<PRPoint> points;  // sorted by recall, ties in threshold order
    double auc = 0.0;
};

struct PrecisionRecall {
    double precision = 1.0;
    double recall = 0.0;
};

/// Precision is 1 when nothing is predicted; recall is 0 when there is
/// nothing to recall.
inline PrecisionRecall precision_recall(double tp, double predicted_mass, double fn) {
    PrecisionRecall pr;
    pr.precision = predicted_mass > 0.0 ? tp / predicted_mass : 1.0;
    pr.recall = tp + fn > 0.0 ? tp / (tp + fn) : 0.0;
    return pr;
}

inline double f1_score(const PrecisionRecall& pr) {
    const double s = pr.precision + pr.recall;
    return s > 0.0 ? 2.0 * pr.precision * pr.recall / s : 0.0;
}

/// Weighted precision and recall, weights summed in ascending t.
inline PrecisionRecall weighted_pr(const WeightField& w) {
    double tp = 0.0, fp = 0.0, fn = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        tp += w.tp[i];
        fp += w.fp[i];
        fn += w.fn[i];
    }
    return precision_recall(tp, tp + fp, fn);
}

namespace detail {

/// Stable sort of (recall, precision) pairs by recall. Curves are usually
/// close to sorted, so insertion sort runs first and gives up to
/// std::stable_sort once it has moved too many elements.
inline void sort_by_recall(std::vector<std::pair<double, double>>& v) {
    const std::size_t budget = 16 * v.size() + 1024;
    std::size_t moves = 0;
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (!(v[i].first < v[i - 1].first)) continue;
        const auto x = v[i];
        std::size_t j = i;
        for (; j > 0 && v[j - 1].first > x.first; --j) v[j] = v[j - 1];
        v[j] = x;
        moves += i - j;
        if (moves > budget) {
            std::stable_sort(v.begin(), v.end(),
                             [](const auto& a, const auto& b) { return a.first < b.first; });
            return;
        }
    }
}

}  // namespace detail

/// Trapezoidal area over recall. Points arrive in decreasing-threshold order;
/// they are stably sorted by recall so equal-recall points keep that order.
inline double pr_area(std::vector<std::pair<double, double>> recall_precision) {
    detail::sort_by_recall(recall_precision);
    double area = 0.0;
    for (std::size_t i = 1; i < recall_precision.size(); ++i) {
        const auto& [r0, p0] = recall_precision[i - 1];
        const auto& [r1, p1] = recall_precision[i];
        area += (r1 - r0) * (p0 + p1) / 2.0;
    }
    return area;
}

/// Knobs that do not change the metric definition.
struct EvalOptions {
    unsigned threads = 0;  // 0 = hardware concurrency
    /// Test hook for the scenario harness: drops all post-buffer credit.
    bool debug_zero_post_credit = false;
};

namespace detail {

inline constexpr std::uint32_t never = std::numeric_limits<std::uint32_t>::max();

/// Fenwick tree over offsets of one anomaly, tracking detected points.
class OffsetTree {
public:
    explicit OffsetTree(std::size_t n = 0) : count_(n + 1, 0), sum_(n + 1, 0) {}

    void add(std::size_t offset) {
        for (std::size_t i = offset + 1; i < count_.size(); i += i & (~i + 1)) {
            count_[i] += 1;
            sum_[i] += static_cast<std::int64_t>(offset);
        }
    }

    /// Count and offset-sum of detected points with offset <= limit.
    std::pair<std::int64_t, std::int64_t> prefix(std::size_t limit) const {
        std::int64_t c = 0, s = 0;
        for (std::size_t i = std::min(limit + 1, count_.size() - 1); i > 0; i -= i & (~i + 1)) {
            c += count_[i];
            s += sum_[i];
        }
        return {c, s};
    }

private:
    std::vector<std::int64_t> count_;
    std::vector<std::int64_t> sum_;
};

// 128-bit so (r + 1) times a distance sum cannot overflow on long anomalies
__extension__ typedef __int128 wide_int;

/// Sum of FN weights over the undetected points of a partially detected
/// anomaly; split into an integer part and a subtracted fraction.
struct FnParts {
    std::int64_t whole = 0;
    double fraction = 0.0;
};

inline FnParts partial_miss_fn_total(const OffsetTree& tree, std::size_t detected,
                                     std::int64_t detected_sum, std::size_t length) {
    const auto L = static_cast<std::int64_t>(length);
    const auto r = static_cast<std::int64_t>(onset_buffer_length(detected, length));
    if (r >= L) return {};
    const auto [det_le, det_sum_le] = tree.prefix(static_cast<std::size_t>(r));
    const std::int64_t und_le = (r + 1) - det_le;
    const std::int64_t und_gt = (L - 1 - r) - (static_cast<std::int64_t>(detected) - det_le);
    const std::int64_t all_sum_gt = (L - 1) * L / 2 - r * (r + 1) / 2;
    const std::int64_t und_sum_gt = all_sum_gt - (detected_sum - det_sum_le);
    FnParts parts;
    parts.whole = und_le + und_gt;
    if (und_gt > 0) {
        const wide_int num = static_cast<wide_int>(r + 1) * und_sum_gt -
                             static_cast<wide_int>(und_gt) * (r * (r + 1) / 2);
        const double den = static_cast<double>(L * (L - 1) / 2);
        parts.fraction = static_cast<double>(num) / den;
    }
    return parts;
}

/// A change of the weighted TP or FN sum at one level.
struct ComboEvent {
    std::uint32_t level;
    double tp;
    double fn;
};

inline bool by_event_level(const ComboEvent& a, const ComboEvent& b) { return a.level < b.level; }

/// Anomaly points entering at a level: cumulative true detections and the FN
/// total assuming no post-buffer-only softening.
struct AnomalyStep {
    std::uint32_t level;
    double true_detections;
    double fn;
};

struct Candidate {
    std::uint32_t level;      // level at which the point is predicted
    std::uint32_t pre_level;  // level at which it can earn pre-buffer credit
    std::uint32_t prev;       // anomaly ending before the point
    std::uint32_t next;       // anomaly starting after the point
    std::uint32_t after;      // steps after prev's end
    std::uint32_t before;     // steps before next's onset
};

struct Run {
    std::uint32_t first;
    std::uint32_t last;
    double tp;
    double fn;
};

}  // namespace detail

/// Precomputed, combination-independent state for sweeping every threshold
/// of a grid at any (e, d) with e <= e_max, d <= d_max.
///
/// A sweep visits threshold levels in decreasing-threshold order. Between
/// levels where an anomaly point or a buffer point enters, the weighted TP
/// and FN sums are constant and only the prediction count grows, so each
/// such run is reported once with its first and last level.
class SweepPlan {
public:
    SweepPlan(const ScoreSeries& scores, const LabelSeries& labels, std::vector<double> grid,
              std::size_t e_max, std::size_t d_max)
        : grid_(std::move(grid)), e_max_(e_max), d_max_(d_max) {
        if (scores.size() != labels.size())
            throw InvalidInput("scores and labels have different lengths (" +
                               std::to_string(scores.size()) + " vs " +
                               std::to_string(labels.size()) + ")");
        if (grid_.size() < 2) throw InvalidInput("threshold grid needs at least two levels");
        anomalies_ = extract_events(labels);
        assign_levels(scores);
        build_anomaly_steps();
        build_candidates();
        build_corrections();
    }

    std::size_t levels() const noexcept { return grid_.size(); }
    const std::vector<double>& grid() const noexcept { return grid_; }
    const EventSet& anomalies() const noexcept { return anomalies_; }
    std::uint64_t predicted_at(std::size_t level) const { return npred_[level]; }

    /// Events that depend on d only: post-buffer credit and the FN softening
    /// of anomalies reached through their post-buffer first. Sorted by level.
    std::vector<detail::ComboEvent> post_events(std::size_t d, const EvalOptions& opt = {}) const {
        check_combo(0, d);
        std::vector<detail::ComboEvent> post;
        if (opt.debug_zero_post_credit) return post;
        for (const auto& c : by_level_) {
            if (c.prev == no_anomaly || c.after > d) continue;
            post.push_back({c.level, post_buffer_tp_weight(c.after, anomalies_[c.prev].length(), d), 0.0});
        }
        std::vector<detail::ComboEvent> out;
        out.reserve(post.size() + corrections_[d].size());
        std::merge(post.begin(), post.end(), corrections_[d].begin(), corrections_[d].end(),
                   std::back_inserter(out), detail::by_event_level);
        return out;
    }

    /// Calls sink(Run) for each constant-TP/FN run, in increasing level order.
    /// `post` must come from post_events(d, ...).
    template <class Sink>
    void sweep(std::size_t e, std::size_t d, const std::vector<detail::ComboEvent>& post,
               Sink&& sink) const {
        check_combo(e, d);
        thread_local std::vector<detail::ComboEvent> pre, events;
        const auto G = static_cast<std::uint32_t>(grid_.size() - 1);
        pre.clear();
        for (const auto& c : by_pre_level_) {
            if (c.before > e || c.pre_level > G) continue;
            if (c.prev != no_anomaly && c.after <= d) continue;
            pre.push_back({c.pre_level, pre_buffer_tp_weight(c.before, anomalies_[c.next].length(), e), 0.0});
        }
        events.clear();
        events.reserve(post.size() + pre.size() + 1);
        std::merge(post.begin(), post.end(), pre.begin(), pre.end(), std::back_inserter(events),
                   detail::by_event_level);
        events.push_back({detail::never, 0.0, 0.0});

        // steps_ and events both end with a `never` sentinel
        const detail::AnomalyStep* step = steps_.data();
        const detail::ComboEvent* ev = events.data();
        double td = 0.0, fn_base = initial_fn_, credit = 0.0, softening = 0.0;
        std::uint32_t next = std::min(step->level, ev->level);
        sink(detail::Run{0, std::min(next, G + 1) - 1, 0.0, fn_base});
        while (next <= G) {
            const std::uint32_t level = next;
            if (step->level == level) {
                td = step->true_detections;
                fn_base = step->fn;
                ++step;
            }
            for (; ev->level == level; ++ev) {
                credit += ev->tp;
                softening += ev->fn;
            }
            next = std::min(step->level, ev->level);
            sink(detail::Run{level, std::min(next, G + 1) - 1, td + credit, fn_base + softening});
        }
    }

    template <class Sink>
    void sweep(std::size_t e, std::size_t d, const EvalOptions& opt, Sink&& sink) const {
        sweep(e, d, post_events(d, opt), std::forward<Sink>(sink));
    }

    PrecisionRecall point(const detail::Run& run, std::size_t level) const {
        return precision_recall(run.tp, static_cast<double>(npred_[level]), run.fn);
    }

    /// Weighted AUC-PR for one (e, d), reusing the d-only events.
    double auc(std::size_t e, std::size_t d, const std::vector<detail::ComboEvent>& post) const {
        // Within a run recall is constant, so only its first and last level
        // matter and the segment between them adds no area.
        thread_local std::vector<std::pair<double, double>> pts;
        pts.resize(2 * (steps_.size() + post.size() + by_pre_level_.size() + 1));
        auto* out = pts.data();
        double prev_r = 0.0;
        bool monotone = true;
        const std::uint64_t* npred = npred_.data();
        sweep(e, d, post, [&](const detail::Run& run) PATE_ALWAYS_INLINE {
            const double total = run.tp + run.fn;
            const double r = total > 0.0 ? run.tp / total : 0.0;
            const auto n0 = static_cast<double>(npred[run.first]);
            monotone &= !(r < prev_r);
            prev_r = r;
            *out++ = {r, n0 > 0.0 ? run.tp / n0 : 1.0};
            if (run.last > run.first) {
                const auto n1 = static_cast<double>(npred[run.last]);
                *out++ = {r, n1 > 0.0 ? run.tp / n1 : 1.0};
            }
        });
        pts.resize(static_cast<std::size_t>(out - pts.data()));
        if (!monotone) detail::sort_by_recall(pts);
        double area = 0.0;
        for (std::size_t i = 1; i < pts.size(); ++i)
            area += (pts[i].first - pts[i - 1].first) * (pts[i - 1].second + pts[i].second) / 2.0;
        return area;
    }

    double auc(std::size_t e, std::size_t d, const EvalOptions& opt = {}) const {
        return auc(e, d, post_events(d, opt));
    }

    /// Full curve, one point per grid threshold.
    PRCurve curve(std::size_t e, std::size_t d, const EvalOptions& opt = {}) const {
        PRCurve c;
        c.e = e;
        c.d = d;
        c.points.reserve(grid_.size());
        sweep(e, d, opt, [&](const detail::Run& run) {
            for (std::uint32_t l = run.first; l <= run.last; ++l) {
                const auto pr = point(run, l);
                c.points.push_back({grid_[l], pr.precision, pr.recall});
            }
        });
        std::stable_sort(c.points.begin(), c.points.end(),
                         [](const PRPoint& a, const PRPoint& b) { return a.recall < b.recall; });
        for (std::size_t i = 1; i < c.points.size(); ++i) {
            const auto& p0 = c.points[i - 1];
            const auto& p1 = c.points[i];
            c.auc += (p1.recall - p0.recall) * (p0.precision + p1.precision) / 2.0;
        }
        return c;
    }

    /// Weighted precision/recall at one grid level.
    PrecisionRecall at_level(std::size_t level, std::size_t e, std::size_t d,
                             const EvalOptions& opt = {}) const {
        if (level >= grid_.size()) throw InvalidInput("threshold level out of range");
        PrecisionRecall out;
        sweep(e, d, opt, [&](const detail::Run& run) {
            if (run.first <= level && level <= run.last) out = point(run, level);
        });
        return out;
    }

private:
    void check_combo(std::size_t e, std::size_t d) const {
        if (e > e_max_ || d > d_max_) throw InvalidInput("buffer size exceeds planned maximum");
    }

    void assign_levels(const ScoreSeries& scores) {
        const std::size_t T = scores.size();
        const std::size_t G = grid_.size() - 1;
        for (std::size_t j = 1; j < grid_.size(); ++j) {
            if (!(grid_[j] < grid_[j - 1])) throw InvalidInput("threshold grid must strictly decrease");
        }
        level_.resize(T);
        std::vector<std::uint64_t> hist(G + 2, 0);
        const auto first = grid_.begin() + 1;
        for (std::size_t i = 0; i < T; ++i) {
            const double s = scores[i];
            // first level whose threshold is <= s
            const auto it = std::partition_point(first, grid_.end(), [s](double th) { return th > s; });
            const auto lvl = static_cast<std::uint32_t>(it - grid_.begin());
            level_[i] = lvl > G ? detail::never : lvl;
            ++hist[std::min<std::size_t>(lvl, G + 1)];
        }
        npred_.assign(G + 1, 0);
        for (std::size_t j = 1; j <= G; ++j) npred_[j] = npred_[j - 1] + hist[j];
    }

    void build_anomaly_steps() {
        const std::size_t N = anomalies_.size();
        td_level_.assign(N, detail::never);
        struct Entry {
            std::uint32_t level;
            std::uint32_t anomaly;
            std::uint32_t offset;
        };
        std::vector<Entry> entries;
        std::int64_t whole = 0;
        for (std::size_t k = 0; k < N; ++k) {
            const auto& a = anomalies_[k];
            whole += static_cast<std::int64_t>(a.length());
            for (std::size_t t = a.start; t <= a.end; ++t) {
                const auto lvl = level_[t - 1];
                td_level_[k] = std::min(td_level_[k], lvl);
                if (lvl != detail::never)
                    entries.push_back({lvl, static_cast<std::uint32_t>(k),
                                       static_cast<std::uint32_t>(t - a.start)});
            }
        }
        initial_fn_ = static_cast<double>(whole);
        std::sort(entries.begin(), entries.end(), [](const Entry& x, const Entry& y) {
            return std::tie(x.level, x.anomaly, x.offset) < std::tie(y.level, y.anomaly, y.offset);
        });

        std::vector<detail::OffsetTree> trees;
        trees.reserve(N);
        for (const auto& a : anomalies_) trees.emplace_back(a.length());
        std::vector<std::size_t> detected(N, 0);
        std::vector<std::int64_t> detected_sum(N, 0);
        std::vector<detail::FnParts> parts(N);
        for (std::size_t k = 0; k < N; ++k)
            parts[k].whole = static_cast<std::int64_t>(anomalies_[k].length());

        double fraction = 0.0;  // running sum of parts[k].fraction
        std::size_t with_fraction = 0;
        std::uint64_t td = 0;
        std::vector<std::uint32_t> touched;
        for (std::size_t i = 0; i < entries.size();) {
            const auto lvl = entries[i].level;
            touched.clear();
            for (; i < entries.size() && entries[i].level == lvl; ++i) {
                const auto& en = entries[i];
                trees[en.anomaly].add(en.offset);
                ++detected[en.anomaly];
                detected_sum[en.anomaly] += en.offset;
                ++td;
                if (touched.empty() || touched.back() != en.anomaly) touched.push_back(en.anomaly);
            }
            for (const auto k : touched) {
                const auto updated = detail::partial_miss_fn_total(
                    trees[k], detected[k], detected_sum[k], anomalies_[k].length());
                whole += updated.whole - parts[k].whole;
                if (parts[k].fraction != 0.0) --with_fraction;
                if (updated.fraction != 0.0) ++with_fraction;
                fraction += updated.fraction - parts[k].fraction;
                parts[k] = updated;
            }
            if (with_fraction == 0) fraction = 0.0;
            steps_.push_back({lvl, static_cast<double>(td), static_cast<double>(whole) - fraction});
        }
        steps_.push_back({detail::never, 0.0, 0.0});
    }

    void build_candidates() {
        const std::size_t T = level_.size();
        const std::size_t N = anomalies_.size();
        if (N == 0) return;
        std::vector<detail::Candidate> all;
        for (std::size_t k = 0; k <= N; ++k) {
            // gap between anomaly k-1 and anomaly k
            const std::size_t lo = k == 0 ? 1 : anomalies_[k - 1].end + 1;
            const std::size_t hi = k == N ? T : anomalies_[k].start - 1;
            for (std::size_t t = lo; t <= hi; ++t) {
                detail::Candidate c{};
                c.level = level_[t - 1];
                c.prev = k == 0 ? no_anomaly : static_cast<std::uint32_t>(k - 1);
                c.next = k == N ? no_anomaly : static_cast<std::uint32_t>(k);
                c.after = k == 0 ? detail::never : static_cast<std::uint32_t>(t - anomalies_[k - 1].end);
                c.before = k == N ? detail::never : static_cast<std::uint32_t>(anomalies_[k].start - t);
                const bool near_prev = c.prev != no_anomaly && c.after <= d_max_;
                const bool near_next = c.next != no_anomaly && c.before <= e_max_;
                if (!near_prev && !near_next) {
                    if (k == N) break;
                    // skip ahead to the region near the next anomaly
                    if (anomalies_[k].start > e_max_ + 1)
                        t = std::max(t, anomalies_[k].start - e_max_ - 1);
                    continue;
                }
                if (c.level == detail::never) continue;
                c.pre_level = near_next ? std::max(c.level, td_level_[c.next]) : detail::never;
                all.push_back(c);
            }
        }
        by_level_ = all;
        std::stable_sort(by_level_.begin(), by_level_.end(),
                         [](const auto& x, const auto& y) { return x.level < y.level; });
        for (const auto& c : all)
            if (c.pre_level != detail::never) by_pre_level_.push_back(c);
        std::stable_sort(by_pre_level_.begin(), by_pre_level_.end(),
                         [](const auto& x, const auto& y) { return x.pre_level < y.pre_level; });
    }

    /// Anomalies with post-buffer detections but no true detection carry the
    /// r = 0 partial-miss FN total (L - 1) instead of L.
    void build_corrections() {
        const std::size_t N = anomalies_.size();
        corrections_.assign(d_max_ + 1, {});
        std::vector<std::uint32_t> first_hit(N, detail::never);
        for (std::size_t d = 1; d <= d_max_; ++d) {
            auto& ev = corrections_[d];
            for (std::size_t k = 0; k < N; ++k) {
                const std::size_t t = anomalies_[k].end + d;
                if (t <= post_buffer_end(anomalies_, k, d))
                    first_hit[k] = std::min(first_hit[k], level_[t - 1]);
                if (anomalies_[k].length() < 2) continue;  // L - 1 == L - 0 softening is zero
                if (first_hit[k] == detail::never || first_hit[k] >= td_level_[k]) continue;
                ev.push_back({first_hit[k], 0.0, -1.0});
                if (td_level_[k] != detail::never) ev.push_back({td_level_[k], 0.0, 1.0});
            }
            std::stable_sort(ev.begin(), ev.end(),
                             [](const auto& x, const auto& y) { return x.level < y.level; });
        }
    }

    std::vector<double> grid_;
    std::size_t e_max_;
    std::size_t d_max_;
    EventSet anomalies_;
    std::vector<std::uint32_t> level_;
    std::vector<std::uint64_t> npred_;
    std::vector<std::uint32_t> td_level_;
    double initial_fn_ = 0.0;
    std::vector<detail::AnomalyStep> steps_;
    std::vector<detail::Candidate> by_level_;
    std::vector<detail::Candidate> by_pre_level_;
    std::vector<std::vector<detail::ComboEvent>> corrections_;
};

struct ComboValue {
    std::size_t e = 0;
    std::size_t d = 0;
    double value = 0.0;
};

/// Mean over the full E x D grid. Values are summed in e-major, d-minor order.
inline double combo_mean(const std::vector<ComboValue>& values) {
    double sum = 0.0;
    for (const auto& v : values) sum += v.value;
    return values.empty() ? 0.0 : sum / static_cast<double>(values.size());
}

/// Per-combination weighted AUC-PRs, in e-major, d-minor order. Work is split
/// by d so the d-only events are built once per column.
inline std::vector<ComboValue> combo_aucs(const SweepPlan& plan, const BufferConfig& cfg,
                                          const EvalOptions& opt = {}) {
    std::vector<ComboValue> out(cfg.combos());
    const std::size_t D = cfg.d_max + 1;
    detail::parallel_for(D, opt.threads, [&](std::size_t d) {
        const auto post = plan.post_events(d, opt);
        for (std::size_t e = 0; e <= cfg.e_max; ++e) out[e * D + d] = {e, d, plan.auc(e, d, post)};
    });
    return out;
}

struct PateResult {
    double pate = 0.0;
    std::vector<ComboValue> per_combo;
};

inline PateResult pate(const ScoreSeries& scores, const LabelSeries& labels,
                       const BufferConfig& cfg, GridPolicy grid = GridPolicy::exhaustive(),
                       const EvalOptions& opt = {}) {
    const SweepPlan plan(scores, labels, threshold_grid(scores, grid), cfg.e_max, cfg.d_max);
    PateResult r;
    r.per_combo = combo_aucs(plan, cfg, opt);
    r.pate = combo_mean(r.per_combo);
    return r;
}

inline PRCurve pr_curve(const ScoreSeries& scores, const LabelSeries& labels, std::size_t e,
                        std::size_t d, GridPolicy grid = GridPolicy::exhaustive(),
                        const EvalOptions& opt = {}) {
    const SweepPlan plan(scores, labels, threshold_grid(scores, grid), e, d);
    return plan.curve(e, d, opt);
}

struct PateF1Result {
    double pate_f1 = 0.0;
    std::vector<ComboValue> per_combo;
};

/// Binary predictions evaluated at their single operative threshold.
inline PateF1Result pate_f1(const LabelSeries& predictions, const LabelSeries& labels,
                            const BufferConfig& cfg, const EvalOptions& opt = {}) {
    // level 0: nothing predicted, level 1: the predictions themselves
    const std::vector<double> grid{std::nextafter(1.0, 2.0), 1.0};
    const SweepPlan plan(predictions.as_scores(), labels, grid, cfg.e_max, cfg.d_max);
    PateF1Result r;
    r.per_combo.resize(cfg.combos());
    detail::parallel_for(r.per_combo.size(), opt.threads, [&](std::size_t idx) {
        const std::size_t e = idx / (cfg.d_max + 1);
        const std::size_t d = idx % (cfg.d_max + 1);
        r.per_combo[idx] = {e, d, f1_score(plan.at_level(1, e, d, opt))};
    });
    r.pate_f1 = combo_mean(r.per_combo);
    return r;
}

/// PATE for each diagonal buffer size k (e_max = d_max = k), from one plan.
inline std::vector<std::pair<std::size_t, double>> buffer_sweep(
    const ScoreSeries& scores, const LabelSeries& labels, const std::vector<std::size_t>& sizes,
    GridPolicy grid = GridPolicy::exhaustive(), const EvalOptions& opt = {}) {
    if (sizes.empty()) return {};
    const std::size_t kmax = *std::max_element(sizes.begin(), sizes.end());
    const SweepPlan plan(scores, labels, threshold_grid(scores, grid), kmax, kmax);
    const auto aucs = combo_aucs(plan, BufferConfig::diagonal(kmax), opt);
    std::vector<std::pair<std::size_t, double>> out;
    for (const auto k : sizes) {
        double sum = 0.0;
        for (const auto& v : aucs)
            if (v.e <= k && v.d <= k) sum += v.value;
        out.emplace_back(k, sum / static_cast<double>((k + 1) * (k + 1)));
    }
    return out;
}

}  // namespace pate
