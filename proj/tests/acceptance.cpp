// Acceptance run: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (capped), 0 when everything passes.
//
//   pate_acceptance [--only N] [--cli PATH]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "pate/pate.hpp"
#include "run_command.hpp"
#include "temp_dir.hpp"
#include "test_util.hpp"

using namespace pate;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const auto n = v.size();
    return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

double scenario_value(const std::string& name) {
    const auto sc = scenario(name);
    if (name[0] == 'S') return pate::pate(sc.scores, sc.labels, sc.buffers).pate;
    return pate_f1(threshold_scores(sc.scores, 1.0), sc.labels, sc.buffers).pate_f1;
}

// 1. Exact values, tolerance 1e-9, under one second.
Outcome exact_values() {
    constexpr double tol = 1e-9;
    const auto t0 = Clock::now();
    const double s3 = scenario_value("S3"), p3 = scenario_value("p3"), p1 = scenario_value("p1");
    const double secs = seconds_since(t0);
    const bool ok = std::abs(s3 - 1.0) <= tol && std::abs(p3 - 1.0) <= tol && std::abs(p1) <= tol && secs < 1.0;
    return {ok, "S3=" + fmt("%.12g", s3) + " p3=" + fmt("%.12g", p3) + " p1=" + fmt("%.12g", p1) + " in " +
                    fmt("%.3f", secs) + " s"};
}

// 2. Scenario orderings, under five seconds.
Outcome orderings() {
    const auto t0 = Clock::now();
    std::map<std::string, double> v;
    for (const char* prefix : {"S", "p"})
        for (int k = 1; k <= 10; ++k) {
            const std::string n = prefix + std::to_string(k);
            v[n] = scenario_value(n);
        }
    std::vector<std::pair<std::string, std::string>> pairs{
        {"S3", "S9"}, {"S9", "S10"}, {"S9", "S7"}, {"S7", "S8"}, {"S6", "S8"}, {"S2", "S4"},
        {"S4", "S5"}, {"S5", "S1"},  {"S10", "S8"}, {"p9", "p10"}, {"p7", "p8"}, {"p2", "p4"},
        {"p4", "p5"}, {"p5", "p1"}};
    for (int k = 2; k <= 10; ++k) pairs.emplace_back("S" + std::to_string(k), "S1");
    const double secs = seconds_since(t0);
    std::string broken;
    for (const auto& [a, b] : pairs)
        if (!(v[a] > v[b])) broken += " " + a + ">" + b;
    const bool ok = broken.empty() && secs < 5.0;
    return {ok, std::to_string(pairs.size()) + " orderings, " +
                    (broken.empty() ? std::string("all hold") : "violated:" + broken) + ", " +
                    fmt("%.3f", secs) + " s"};
}

Category to_category(oracle::Cat c) {
    switch (c) {
        case oracle::Cat::td: return Category::true_detection;
        case oracle::Cat::post: return Category::post_buffer;
        case oracle::Cat::pre: return Category::pre_buffer;
        case oracle::Cat::out: return Category::outside;
        default: return Category::none;
    }
}

// 3. Production path against the naive interpreter on 200 small instances.
Outcome oracle_equivalence() {
    constexpr double tol = 1e-12;
    std::mt19937_64 rng(20240301);
    std::uniform_int_distribution<std::size_t> len(5, 40), buf(0, 5);
    std::size_t checked_levels = 0, category_mismatch = 0;
    double worst_weight = 0, worst_pr = 0;
    for (int inst = 0; inst < 200; ++inst) {
        const std::size_t T = len(rng);
        const auto in = testutil::random_instance(rng, T);
        const std::size_t e = buf(rng), d = buf(rng);
        const auto y = LabelSeries::from_ints(in.labels);
        const ScoreSeries s(in.scores);
        const auto events = extract_events(y);
        const auto grid = threshold_grid(s);
        const SweepPlan plan(s, y, grid, e, d);
        const auto zones = build_zones(events, e, d);
        for (std::size_t l = 0; l < grid.size(); ++l) {
            std::vector<int> pred(T);
            for (std::size_t t = 0; t < T; ++t) pred[t] = in.scores[t] >= grid[l];
            const auto ref = oracle::evaluate(in.labels, pred, static_cast<long>(e), static_cast<long>(d));
            const auto P = LabelSeries::from_ints(pred);
            const auto cats = categorize(P, zones, events.size());
            const auto w = assign_weights(cats, events, zones);
            for (std::size_t t = 0; t < T; ++t) {
                const bool owner_ok = ref.cat[t] == oracle::Cat::none || ref.cat[t] == oracle::Cat::out ||
                                      static_cast<long>(cats[t].owner) == ref.owner[t];
                if (cats[t].category != to_category(ref.cat[t]) || !owner_ok) ++category_mismatch;
                worst_weight = std::max({worst_weight, std::abs(w.tp[t] - ref.tp[t]), std::abs(w.fp[t] - ref.fp[t]),
                                         std::abs(w.fn[t] - ref.fn[t])});
            }
            const auto pr = plan.at_level(l, e, d);
            worst_pr = std::max({worst_pr, std::abs(pr.precision - ref.precision), std::abs(pr.recall - ref.recall)});
            ++checked_levels;
        }
    }
    const bool ok = category_mismatch == 0 && worst_weight <= tol && worst_pr <= tol;
    return {ok, std::to_string(checked_levels) + " thresholds, " + std::to_string(category_mismatch) +
                    " category mismatches, max weight error " + fmt("%.3g", worst_weight) +
                    ", max P/R error " + fmt("%.3g", worst_pr)};
}

// 4. Weight properties on 1000 random cases.
Outcome properties() {
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<std::size_t> len(10, 120), buf(0, 10), alen(1, 60), dd(1, 30);
    std::size_t violations = 0;
    std::string first;
    auto fail = [&](const std::string& what) {
        if (violations++ == 0) first = what;
    };
    for (int c = 0; c < 1000; ++c) {
        const std::size_t T = len(rng);
        const auto in = testutil::random_instance(rng, T);
        const auto pred = testutil::random_binary(rng, T, 0.25);
        const std::size_t e = buf(rng), d = buf(rng);
        const auto y = LabelSeries::from_ints(in.labels);
        const auto P = LabelSeries::from_ints(pred);
        const auto events = extract_events(y);
        const auto zones = build_zones(events, e, d);
        const auto cats = categorize(P, zones, events.size());
        const auto w = assign_weights(cats, events, zones);
        for (std::size_t t = 0; t < T; ++t) {
            for (const double v : {w.tp[t], w.fp[t], w.fn[t]})
                if (!(v >= 0.0 && v <= 1.0)) fail("weight outside [0,1]");
            const auto k = cats[t].category;
            if ((k == Category::post_buffer || k == Category::pre_buffer) && std::abs(w.tp[t] + w.fp[t] - 1.0) > 1e-15)
                fail("buffer weights do not sum to 1");
        }
        // an anomaly with no prediction inside it or in its post-buffer is totally missed
        for (std::size_t k = 0; k < events.size(); ++k) {
            const auto a = events[k];
            std::size_t stop = std::min(a.end + d, T);
            if (k + 1 < events.size()) stop = std::min(stop, events[k + 1].start - 1);
            bool touched = false;
            for (std::size_t t = a.start; t <= stop; ++t) touched = touched || pred[t - 1];
            if (!touched)
                for (std::size_t t = a.start; t <= a.end; ++t)
                    if (w.fn[t - 1] != 1.0) fail("totally missed point with w_fn != 1");
        }
        const std::size_t L = alen(rng), D = dd(rng);
        for (std::size_t s = 1; s < D; ++s) {
            if (!(post_buffer_tp_weight(s + 1, L, D) < post_buffer_tp_weight(s, L, D)))
                fail("post-buffer weight not strictly decreasing in offset");
            if (post_buffer_tp_weight(s, L + 1 + c % 7, D) > post_buffer_tp_weight(s, L, D))
                fail("longer anomaly received a larger weight");
        }
    }
    return {violations == 0, "1000 cases, " + std::to_string(violations) + " violations" +
                                 (first.empty() ? "" : " (first: " + first + ")")};
}

// 5. Zero buffers on binary scores against the standard AUC-PR.
Outcome degeneration() {
    std::mt19937_64 rng(5150);
    std::uniform_int_distribution<std::size_t> len(20, 200);
    double worst = 0;
    std::size_t over = 0;
    for (int i = 0; i < 100; ++i) {
        const std::size_t T = len(rng);
        const auto in = testutil::random_instance(rng, T);
        const auto y = LabelSeries::from_ints(in.labels);
        const ScoreSeries s(testutil::as_double(testutil::random_binary(rng, T, 0.3)));
        const double p = pate::pate(s, y, BufferConfig{0, 0}).pate;
        const double a = auc_pr(s, y, threshold_grid(s));
        worst = std::max(worst, std::abs(p - a));
        over += std::abs(p - a) > 1e-9;
    }
    return {over == 0, std::to_string(over) + "/100 instances differ by more than 1e-9, max |PATE - AUC-PR| " +
                           fmt("%.4g", worst)};
}

// 6. Point-adjust inflation on uniform random scores.
Outcome inflation() {
    const auto t0 = Clock::now();
    std::vector<double> pa, f1, pt;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto y = synthetic_labels(20000, 5, 500, 1000 + seed);
        const auto s = random_scores(20000, 5000 + seed);
        std::vector<double> v(s.values().begin(), s.values().end());
        std::sort(v.begin(), v.end());
        const double theta = v[static_cast<std::size_t>(std::floor(0.99 * static_cast<double>(v.size() - 1)))];
        const auto predicted = threshold_scores(s, theta);
        pa.push_back(pa_f1(predicted, y));
        f1.push_back(standard_prf(predicted, y).f1);
        EvalOptions opt;
        opt.threads = 1;
        pt.push_back(pate::pate(s, y, BufferConfig{100, 100}, GridPolicy::exhaustive(), opt).pate);
    }
    const double secs = seconds_since(t0);
    const double mpa = median(pa), mf1 = median(f1), mpt = median(pt);
    const bool ok = mpa >= 0.8 && mf1 <= 0.2 && mpt <= 0.3 && secs < 30.0;
    return {ok, "median PA-F1=" + fmt("%.4f", mpa) + " F1=" + fmt("%.4f", mf1) + " PATE=" + fmt("%.4f", mpt) +
                    " in " + fmt("%.2f", secs) + " s"};
}

// 7. Strictly increasing transforms leave PATE bitwise unchanged.
Outcome scale_invariance() {
    std::mt19937_64 rng(31337);
    std::uniform_int_distribution<std::size_t> len(30, 300), buf(0, 12);
    std::size_t mismatches = 0, skipped = 0;
    for (int i = 0; i < 50; ++i) {
        const std::size_t T = len(rng);
        auto in = testutil::random_instance(rng, T, 2 + i % 9);
        if (i % 2) {
            std::uniform_real_distribution<double> u(-2.0, 2.0);
            for (auto& x : in.scores) x = u(rng);
        }
        const auto y = LabelSeries::from_ints(in.labels);
        const BufferConfig b{buf(rng), buf(rng)};
        const double base = pate::pate(ScoreSeries(in.scores), y, b).pate;
        for (const auto& f : std::vector<std::function<double(double)>>{
                 [](double x) { return 3.5 * x - 7.25; }, [](double x) { return x * x * x + x; }}) {
            std::vector<double> t(T);
            std::transform(in.scores.begin(), in.scores.end(), t.begin(), f);
            // the floating-point image must still be strictly increasing
            bool order_kept = true;
            for (std::size_t a = 0; a < T && order_kept; ++a)
                for (std::size_t c = 0; c < T; ++c)
                    if ((in.scores[a] < in.scores[c]) != (t[a] < t[c])) {
                        order_kept = false;
                        break;
                    }
            if (!order_kept) {
                ++skipped;
                continue;
            }
            const double v = pate::pate(ScoreSeries(t), y, b).pate;
            if (std::memcmp(&v, &base, sizeof v) != 0) ++mismatches;
        }
    }
    return {mismatches == 0 && skipped == 0,
            "100 transformed evaluations, " + std::to_string(mismatches) + " not bitwise equal, " +
                std::to_string(skipped) + " transforms collapsed distinct scores"};
}

double time_pate(std::size_t T, std::size_t repeats) {
    const auto y = synthetic_labels_ratio(T, 0.12, 1500, 1);
    const auto s = noisy_detector_scores(y, 0.3, 2);
    EvalOptions opt;
    opt.threads = 1;
    std::vector<double> times;
    for (std::size_t r = 0; r < repeats; ++r) {
        const auto t0 = Clock::now();
        volatile double v = pate::pate(s, y, BufferConfig{100, 100}, GridPolicy::exhaustive(), opt).pate;
        (void)v;
        times.push_back(seconds_since(t0));
    }
    return median(times);
}

// 8. Runtime at full scale and linear growth in T.
Outcome performance() {
    const double full = time_pate(449900, 1);
    const std::vector<std::size_t> sizes{10000, 25000, 50000, 100000};
    std::vector<double> times;
    for (const auto T : sizes) times.push_back(time_pate(T, 3));
    // least-squares line through the origin, every point within 2x of it
    double num = 0, den = 0;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        num += static_cast<double>(sizes[i]) * times[i];
        den += static_cast<double>(sizes[i]) * static_cast<double>(sizes[i]);
    }
    const double slope = num / den;
    double worst = 1.0;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        const double fit = slope * static_cast<double>(sizes[i]);
        worst = std::max(worst, std::max(times[i] / fit, fit / times[i]));
    }
    std::string series;
    for (std::size_t i = 0; i < sizes.size(); ++i)
        series += " " + std::to_string(sizes[i] / 1000) + "k:" + fmt("%.3f", times[i]);
    const bool ok = full <= 20.0 && worst <= 2.0;
    return {ok, "T=449900 in " + fmt("%.2f", full) + " s; scaling" + series + " s, worst ratio to linear fit " +
                    fmt("%.2f", worst)};
}

// 9. Reports from the command-line tool do not depend on the thread count.
Outcome determinism(const std::string& cli) {
    if (cli.empty()) return {false, "no --cli path given"};
    testutil::TempDir dir;
    std::size_t differ = 0, failed = 0;
    for (int i = 0; i < 20; ++i) {
        const std::size_t T = 500 + 150 * static_cast<std::size_t>(i);
        const auto y = synthetic_labels(T, 1 + i % 5, 5 + 3 * static_cast<std::size_t>(i % 7), 900 + i);
        const auto s = i % 3 == 0 ? random_scores(T, 700 + i) : noisy_detector_scores(y, 0.35, 700 + i);
        const auto in = dir.path("in" + std::to_string(i) + ".csv");
        write_series_csv(in, s, y);
        std::string out[2];
        const unsigned threads[2] = {1, 8};
        for (int k = 0; k < 2; ++k) {
            const auto path = dir.path("r" + std::to_string(i) + "_" + std::to_string(threads[k]) + ".json");
            const auto r = testutil::run_command("PATE_LOG=quiet " + testutil::quote(cli) + " evaluate -i " +
                                                 testutil::quote(in) + " --ed 12 --curves --threads " +
                                                 std::to_string(threads[k]) + " -o " + testutil::quote(path));
            if (r.status != 0) ++failed;
            std::ifstream f(path, std::ios::binary);
            std::stringstream ss;
            ss << f.rdbuf();
            out[k] = ss.str();
        }
        if (out[0].empty() || out[0] != out[1]) ++differ;
    }
    return {differ == 0 && failed == 0, "20 inputs, " + std::to_string(differ) + " differing reports, " +
                                            std::to_string(failed) + " failed runs"};
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    std::string cli;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--only" && i + 1 < argc) only = std::atoi(argv[++i]);
        else if (a == "--cli" && i + 1 < argc) cli = argv[++i];
        else {
            std::fprintf(stderr, "usage: %s [--only N] [--cli PATH]\n", argv[0]);
            return 2;
        }
    }
    if (only < 0 || only > 9) {
        std::fprintf(stderr, "--only takes a criterion number from 1 to 9\n");
        return 2;
    }

    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"exact scenario values", exact_values},
        {"scenario orderings", orderings},
        {"oracle equivalence", oracle_equivalence},
        {"weight properties", properties},
        {"zero-buffer degeneration to AUC-PR", degeneration},
        {"point-adjust inflation", inflation},
        {"scale invariance", scale_invariance},
        {"performance", performance},
        {"thread determinism", [&] { return determinism(cli); }},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        if (only && static_cast<std::size_t>(only) != i + 1) continue;
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& ex) {
            o = {false, std::string("exception: ") + ex.what()};
        }
        std::printf("criterion %zu %s: %s (%s)\n", i + 1, criteria[i].first, o.pass ? "PASS" : "FAIL",
                    o.detail.c_str());
        std::fflush(stdout);
        failed += !o.pass;
    }
    return std::min(failed, 100);
}
