// Command-line front end: evaluate, compare, scenarios, bench.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pate/pate.hpp"

namespace {

enum class Verbosity { quiet, info, debug };

Verbosity verbosity() {
    const char* v = std::getenv("PATE_LOG");
    if (!v) return Verbosity::info;
    const std::string s(v);
    if (s == "quiet") return Verbosity::quiet;
    if (s == "debug") return Verbosity::debug;
    return Verbosity::info;
}

void log_debug(const std::string& msg) {
    if (verbosity() == Verbosity::debug) std::cerr << "[debug] " << msg << "\n";
}

void log_info(const std::string& msg) {
    if (verbosity() != Verbosity::quiet) std::cerr << msg << "\n";
}

/// Flags that mirror configuration keys. Values stay strings until the
/// config file (if any) has been applied, so flags win.
struct RunFlags {
    std::string config_path;
    std::vector<std::pair<CLI::Option*, std::string>> keyed;
    std::map<std::string, std::string> values;
    bool pate_f1 = false;
    bool curves = false;
    std::string ed_sweep;

    void add(CLI::App& app, const std::string& flag, const std::string& key, const std::string& help,
             const std::string& type) {
        keyed.emplace_back(app.add_option(flag, values[key], help)->type_name(type), key);
    }
};

void add_run_flags(CLI::App& app, RunFlags& f) {
    f.add(app, "--input,-i", "input", "scores file (csv2: score,label columns)", "PATH");
    f.add(app, "--labels", "labels", "labels file for --format split", "PATH");
    f.add(app, "--format", "format", "csv2 (default) or split", "FORMAT");
    f.add(app, "--e-max", "e_max", "largest pre-buffer size (default 100)", "N");
    f.add(app, "--d-max", "d_max", "largest post-buffer size (default 100)", "N");
    f.add(app, "--ed", "ed", "diagonal buffers: e_max = d_max = k", "K");
    f.add(app, "--grid", "grid", "threshold grid: exhaustive (default) or a quantile count N >= 2", "GRID");
    f.add(app, "--metrics", "metrics", "comma-separated metric names", "LIST");
    f.add(app, "--threads", "threads", "worker threads for the combination sweep (0 = all cores)", "N");
    f.add(app, "--out,-o", "out", "report path (JSON)", "PATH");
    f.add(app, "--threshold", "threshold", "operating threshold for PA-F1 and standard F1", "X");
    f.add(app, "--threshold-quantile", "threshold_quantile", "operating threshold as a score quantile", "Q");
    app.add_option("--config", f.config_path, "flat key=value configuration file")->type_name("PATH");
    app.add_flag("--pate-f1", f.pate_f1, "also compute PATE-F1 (binary scores only)");
    app.add_flag("--curves", f.curves, "include per-combination PR curves in the report");
    app.add_option("--ed-sweep", f.ed_sweep, "comma-separated diagonal sizes k; prints PATE per k")->type_name("LIST");
}

pate::RunConfig resolve(const RunFlags& f) {
    pate::RunConfig cfg;
    if (!f.config_path.empty())
        for (const auto& [k, v] : pate::read_key_values(f.config_path)) pate::apply_setting(cfg, k, v);
    // --ed first so explicit --e-max / --d-max still override it
    for (const char* key : {"ed", "e_max", "d_max"})
        for (const auto& [opt, k] : f.keyed)
            if (k == key && opt->count()) pate::apply_setting(cfg, k, f.values.at(k));
    for (const auto& [opt, k] : f.keyed)
        if (opt->count() && k != "ed" && k != "e_max" && k != "d_max")
            pate::apply_setting(cfg, k, f.values.at(k));
    if (f.pate_f1) cfg.metrics.insert("pate_f1");
    if (f.curves) cfg.curves = true;
    cfg.metrics.insert("pate");
    if (cfg.input.empty()) throw pate::InvalidInput("no input file given (--input)");
    if (cfg.format == pate::SeriesFormat::split && cfg.labels.empty())
        throw pate::InvalidInput("--format split needs --labels");
    return cfg;
}

std::vector<std::size_t> parse_size_list(const std::string& s, const char* what) {
    std::vector<std::size_t> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(pate::parse_size(what, item));
    if (out.empty()) throw pate::InvalidInput(std::string(what) + ": empty list");
    return out;
}

pate::MetricReport run_report(const RunFlags& f, pate::RunConfig& cfg, pate::LoadedSeries& data) {
    cfg = resolve(f);
    data = pate::read_series(cfg.input, cfg.format, cfg.labels);
    log_debug("read " + std::to_string(data.scores.size()) + " points from " + cfg.input);
    const auto t0 = std::chrono::steady_clock::now();
    auto rep = pate::build_report(data.scores, data.labels, cfg);
    const auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    log_debug("evaluated " + std::to_string(rep.per_combo.size()) + " combinations in " +
              std::to_string(secs) + " s");
    if (!cfg.output.empty()) pate::write_report(rep, cfg.output);
    return rep;
}

void print_ed_sweep(const RunFlags& f, const pate::RunConfig& cfg, const pate::LoadedSeries& data) {
    if (f.ed_sweep.empty()) return;
    pate::EvalOptions opt;
    opt.threads = cfg.threads;
    const auto rows = pate::buffer_sweep(data.scores, data.labels, parse_size_list(f.ed_sweep, "ed-sweep"),
                                         cfg.grid, opt);
    std::cout << "e=d   PATE\n";
    for (const auto& [k, v] : rows) {
        char line[64];
        std::snprintf(line, sizeof line, "%-5zu %.6f\n", k, v);
        std::cout << line;
    }
}

int cmd_evaluate(const RunFlags& f) {
    pate::RunConfig cfg;
    pate::LoadedSeries data;
    const auto rep = run_report(f, cfg, data);
    if (cfg.output.empty()) std::cout << pate::dump_report(rep);
    else log_info("PATE = " + pate::format_double(rep.pate) + " (report: " + cfg.output + ")");
    print_ed_sweep(f, cfg, data);
    return 0;
}

int cmd_compare(const RunFlags& f) {
    pate::RunConfig cfg;
    pate::LoadedSeries data;
    const auto rep = run_report(f, cfg, data);
    std::cout << pate::format_table(rep);
    print_ed_sweep(f, cfg, data);
    return 0;
}

int cmd_scenarios_run(bool inject_fault) {
    pate::EvalOptions opt;
    opt.debug_zero_post_credit = inject_fault;
    std::map<std::string, double> score;
    for (const auto& name : pate::scenario_names()) score[name] = pate::scenario_score(pate::scenario(name), opt);

    std::map<std::string, bool> ok;
    for (const auto& [name, v] : score) ok[name] = true;
    std::vector<std::string> failures;
    for (const auto& c : pate::suite_exact_values()) {
        if (std::abs(score[c.name] - c.value) > pate::suite_tolerance) {
            ok[c.name] = false;
            failures.push_back(c.name + " = " + pate::format_double(score[c.name]) + ", expected " +
                               pate::format_double(c.value));
        }
    }
    for (const auto& c : pate::suite_orderings()) {
        if (!(score[c.higher] > score[c.lower])) {
            ok[c.higher] = ok[c.lower] = false;
            failures.push_back(c.higher + " > " + c.lower + " violated");
        }
    }
    for (const auto& name : pate::scenario_names()) {
        char line[96];
        std::snprintf(line, sizeof line, "%-4s %-7s %.2f  %s\n", name.c_str(),
                      name[0] == 'S' ? "PATE" : "PATE-F1", score[name], ok[name] ? "PASS" : "FAIL");
        std::cout << line;
    }
    for (const auto& msg : failures) std::cout << "FAIL " << msg << "\n";
    std::cout << (failures.empty() ? "suite PASS\n" : "suite FAIL\n");
    return failures.empty() ? 0 : 1;
}

int cmd_scenarios_export(const std::string& dir) {
    std::filesystem::create_directories(dir);
    for (const auto& name : pate::scenario_names()) {
        const auto sc = pate::scenario(name);
        pate::write_series_csv((std::filesystem::path(dir) / (name + ".csv")).string(), sc.scores, sc.labels);
    }
    log_info("wrote " + std::to_string(pate::scenario_names().size()) + " scenario files to " + dir);
    return 0;
}

struct BenchFlags {
    std::size_t T = 100000;
    std::string ratios = "2,5,10";
    std::size_t e_max = 100;
    std::size_t d_max = 100;
    std::size_t repeats = 3;
    std::size_t event_length = 1500;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    std::string out;
};

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

int cmd_bench(const BenchFlags& b) {
    if (b.T < 1000) throw pate::InvalidInput("bench needs T >= 1000");
    if (b.repeats < 1) throw pate::InvalidInput("bench needs at least one repeat");
    std::vector<double> ratios;
    {
        std::stringstream ss(b.ratios);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (item.empty()) continue;
            const auto v = pate::detail::to_number(item);
            if (!v || *v <= 0.0 || *v >= 100.0)
                throw pate::InvalidInput("ratio '" + item + "' must be a percentage in (0, 100)");
            ratios.push_back(*v);
        }
        if (ratios.empty()) throw pate::InvalidInput("no anomaly ratios given");
    }

    const pate::BufferConfig buffers{b.e_max, b.d_max};
    pate::EvalOptions opt;
    opt.threads = b.threads;
    using Fn = std::function<double(const pate::ScoreSeries&, const pate::LabelSeries&)>;
    const std::vector<std::pair<std::string, Fn>> metrics{
        {"pate", [&](const auto& s, const auto& y) { return pate::pate(s, y, buffers, {}, opt).pate; }},
        {"pa_f1", [](const auto& s, const auto& y) {
             return pate::pa_f1(pate::threshold_scores(s, pate::score_quantile(s, 0.99)), y);
         }},
        {"standard_f1", [](const auto& s, const auto& y) {
             return pate::standard_prf(pate::threshold_scores(s, pate::score_quantile(s, 0.99)), y).f1;
         }},
        {"auc_roc", [](const auto& s, const auto& y) { return pate::auc_roc(s, y, pate::threshold_grid(s)); }},
        {"pa_auc_roc", [](const auto& s, const auto& y) { return pate::pa_auc_roc(s, y, pate::threshold_grid(s)); }},
        {"auc_pr", [](const auto& s, const auto& y) { return pate::auc_pr(s, y, pate::threshold_grid(s)); }},
    };

    nlohmann::json dump;
    dump["T"] = b.T;
    dump["e_max"] = b.e_max;
    dump["d_max"] = b.d_max;
    dump["repeats"] = b.repeats;
    dump["event_length"] = b.event_length;
    dump["seed"] = b.seed;
    dump["threads"] = b.threads;
    dump["rows"] = nlohmann::json::array();

    std::printf("%-7s", "ratio%");
    for (const auto& [name, fn] : metrics) std::printf(" %12s", (name + "_s").c_str());
    std::printf(" %10s\n", "pate");
    for (const double ratio : ratios) {
        const auto labels = pate::synthetic_labels_ratio(b.T, ratio / 100.0, b.event_length, b.seed);
        const auto scores = pate::noisy_detector_scores(labels, 0.3, b.seed + 1);
        nlohmann::json row;
        row["ratio_percent"] = ratio;
        std::printf("%-7g", ratio);
        double pate_value = 0.0;
        for (const auto& [name, fn] : metrics) {
            std::vector<double> times;
            double value = 0.0;
            for (std::size_t r = 0; r < b.repeats; ++r) {
                const auto t0 = std::chrono::steady_clock::now();
                value = fn(scores, labels);
                times.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
            }
            row["seconds"][name] = median(times);
            row["values"][name] = value;
            if (name == "pate") pate_value = value;
            std::printf(" %12.4f", median(times));
        }
        std::printf(" %10.6f\n", pate_value);
        dump["rows"].push_back(std::move(row));
    }
    if (!b.out.empty()) {
        std::ofstream out(b.out, std::ios::binary);
        if (!out) throw pate::DataError(pate::DataErrorKind::unwritable, "cannot write '" + b.out + "'");
        out << dump.dump(2) << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"PATE: proximity-aware evaluation of time-series anomaly detectors"};
    app.set_version_flag("--version", std::string(pate::version));
    app.require_subcommand(1);

    RunFlags eval_flags, compare_flags;
    auto* evaluate = app.add_subcommand("evaluate", "compute PATE and baselines, write a JSON report");
    add_run_flags(*evaluate, eval_flags);
    auto* compare = app.add_subcommand("compare", "print PATE next to the baseline metrics");
    add_run_flags(*compare, compare_flags);

    auto* scenarios = app.add_subcommand("scenarios", "synthetic scenario suite");
    scenarios->require_subcommand(1);
    bool inject_fault = false;
    auto* run = scenarios->add_subcommand("run", "score S1-S10 and p1-p10 and check the orderings");
    run->add_flag("--inject-fault", inject_fault, "drop post-buffer credit (harness self-test)")
        ->group("");
    std::string export_dir;
    auto* exp = scenarios->add_subcommand("export", "write the 20 scenarios as CSV files");
    exp->add_option("--dir", export_dir, "output directory")->required();

    BenchFlags bench_flags;
    auto* bench = app.add_subcommand("bench", "time the metrics on synthetic series");
    bench->add_option("--T", bench_flags.T, "series length (>= 1000)");
    bench->add_option("--ratios", bench_flags.ratios, "anomaly ratios in percent, comma-separated");
    bench->add_option("--e-max", bench_flags.e_max, "largest pre-buffer size");
    bench->add_option("--d-max", bench_flags.d_max, "largest post-buffer size");
    bench->add_option("--repeats", bench_flags.repeats, "timed repeats per metric (median is reported)");
    bench->add_option("--event-length", bench_flags.event_length, "points per anomaly event");
    bench->add_option("--seed", bench_flags.seed, "generator seed");
    bench->add_option("--threads", bench_flags.threads, "worker threads for PATE (default 1)");
    bench->add_option("--out,-o", bench_flags.out, "JSON dump path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (evaluate->parsed()) return cmd_evaluate(eval_flags);
        if (compare->parsed()) return cmd_compare(compare_flags);
        if (run->parsed()) return cmd_scenarios_run(inject_fault);
        if (exp->parsed()) return cmd_scenarios_export(export_dir);
        if (bench->parsed()) return cmd_bench(bench_flags);
    } catch (const pate::InvalidInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
