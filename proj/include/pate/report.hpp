#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "pate/baselines.hpp"
#include "pate/io.hpp"
#include "pate/metrics.hpp"
#include "pate/version.hpp"

namespace pate {

struct ComboEntry {
    std::size_t e = 0;
    std::size_t d = 0;
    std::optional<double> auc;
    std::optional<double> f1;
};

struct MetricReport {
    double pate = 0.0;
    std::optional<double> pate_f1;
    std::map<std::string, std::optional<double>> baselines;  // null when undefined
    std::vector<ComboEntry> per_combo;                       // e-major, d-minor
    std::optional<std::vector<PRCurve>> curves;
    nlohmann::json config = nlohmann::json::object();
    std::string version{pate::version};
};

/// Threshold used for the binary baselines (PA-F1, standard F1). Explicit
/// value first, then an explicit quantile; binary scores use 1, anything else
/// the 0.99 quantile (nearest rank).
struct OperatingThreshold {
    double value = 1.0;
    std::string rule;
};

inline double score_quantile(const ScoreSeries& scores, double q) {
    std::vector<double> v(scores.values().begin(), scores.values().end());
    std::sort(v.begin(), v.end());
    const auto idx = static_cast<std::size_t>(std::floor(q * static_cast<double>(v.size() - 1)));
    return v[std::min(idx, v.size() - 1)];
}

inline OperatingThreshold operating_threshold(const ScoreSeries& scores, const RunConfig& cfg) {
    if (cfg.threshold) return {*cfg.threshold, "given"};
    if (cfg.threshold_quantile)
        return {score_quantile(scores, *cfg.threshold_quantile),
                "quantile:" + format_double(*cfg.threshold_quantile)};
    if (scores.is_binary()) return {1.0, "binary"};
    return {score_quantile(scores, 0.99), "quantile:0.99"};
}

inline nlohmann::json config_echo(const RunConfig& cfg, const OperatingThreshold& op) {
    nlohmann::json j;
    j["e_max"] = cfg.e_max;
    j["d_max"] = cfg.d_max;
    j["grid"] = cfg.grid.describe();
    j["metrics"] = std::vector<std::string>(cfg.metrics.begin(), cfg.metrics.end());
    j["format"] = std::string(format_name(cfg.format));
    j["input"] = cfg.input;
    if (cfg.format == SeriesFormat::split) j["labels"] = cfg.labels;
    j["threshold"] = op.value;
    j["threshold_rule"] = op.rule;
    j["curves"] = cfg.curves;
    if (cfg.seed) j["seed"] = *cfg.seed;
    return j;
}

/// Every metric the configuration asks for, from one pass over the plan.
inline MetricReport build_report(const ScoreSeries& scores, const LabelSeries& labels,
                                 const RunConfig& cfg, const EvalOptions& base = {}) {
    require_same_length(scores.size(), labels.size());
    EvalOptions opt = base;
    opt.threads = cfg.threads;

    const bool want_f1 = cfg.wants("pate_f1");
    if (want_f1 && !scores.is_binary()) throw InvalidInput("binary predictions required for pate_f1");

    const BufferConfig buffers{cfg.e_max, cfg.d_max};
    const auto grid = threshold_grid(scores, cfg.grid);
    const SweepPlan plan(scores, labels, grid, cfg.e_max, cfg.d_max);

    MetricReport rep;
    const auto aucs = combo_aucs(plan, buffers, opt);
    rep.pate = combo_mean(aucs);
    rep.per_combo.reserve(aucs.size());
    for (const auto& v : aucs) rep.per_combo.push_back({v.e, v.d, v.value, std::nullopt});

    if (want_f1) {
        const auto f1 = pate_f1(threshold_scores(scores, 1.0), labels, buffers, opt);
        rep.pate_f1 = f1.pate_f1;
        for (std::size_t i = 0; i < f1.per_combo.size(); ++i) rep.per_combo[i].f1 = f1.per_combo[i].value;
    }

    const auto op = operating_threshold(scores, cfg);
    const auto predicted = threshold_scores(scores, op.value);
    const auto pos = labels.positives();
    const bool one_class = pos == 0 || pos == labels.size();
    if (cfg.wants("pa_f1")) rep.baselines["pa_f1"] = pa_f1(predicted, labels);
    if (cfg.wants("standard_f1")) rep.baselines["standard_f1"] = standard_prf(predicted, labels).f1;
    if (cfg.wants("auc_roc"))
        rep.baselines["auc_roc"] = one_class ? std::nullopt : std::optional(auc_roc(scores, labels, grid));
    if (cfg.wants("pa_auc_roc"))
        rep.baselines["pa_auc_roc"] =
            one_class ? std::nullopt : std::optional(pa_auc_roc(scores, labels, grid));
    if (cfg.wants("auc_pr")) rep.baselines["auc_pr"] = auc_pr(scores, labels, grid);

    if (cfg.curves) {
        std::vector<PRCurve> curves(aucs.size());
        detail::parallel_for(curves.size(), opt.threads,
                             [&](std::size_t i) { curves[i] = plan.curve(aucs[i].e, aucs[i].d, opt); });
        rep.curves = std::move(curves);
    }
    rep.config = config_echo(cfg, op);
    return rep;
}

inline nlohmann::json to_json(const MetricReport& rep) {
    auto opt_value = [](const std::optional<double>& v) -> nlohmann::json {
        return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
    };
    nlohmann::json j;
    j["pate"] = rep.pate;
    j["pate_f1"] = opt_value(rep.pate_f1);
    j["baselines"] = nlohmann::json::object();
    for (const auto& [name, v] : rep.baselines) j["baselines"][name] = opt_value(v);
    j["per_combo"] = nlohmann::json::array();
    for (const auto& c : rep.per_combo) {
        nlohmann::json row{{"e", c.e}, {"d", c.d}};
        if (c.auc) row["auc"] = *c.auc;
        if (c.f1) row["f1"] = *c.f1;
        j["per_combo"].push_back(std::move(row));
    }
    if (rep.curves) {
        j["curves"] = nlohmann::json::array();
        for (const auto& c : *rep.curves) {
            nlohmann::json pts = nlohmann::json::array();
            for (const auto& p : c.points)
                pts.push_back({{"theta", p.threshold}, {"precision", p.precision}, {"recall", p.recall}});
            j["curves"].push_back({{"e", c.e}, {"d", c.d}, {"auc", c.auc}, {"points", std::move(pts)}});
        }
    }
    j["config"] = rep.config;
    j["version"] = rep.version;
    return j;
}

inline std::string dump_report(const MetricReport& rep) { return to_json(rep).dump(2) + "\n"; }

inline void write_report(const MetricReport& rep, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError(DataErrorKind::unwritable, "cannot write '" + path + "'");
    out << dump_report(rep);
    if (!out.flush()) throw DataError(DataErrorKind::unwritable, "cannot write '" + path + "'");
}

/// Rows of the comparison table, in display order.
inline std::vector<std::pair<std::string, std::optional<double>>> comparison_rows(
    const MetricReport& rep) {
    std::vector<std::pair<std::string, std::optional<double>>> rows{{"PATE", rep.pate}};
    if (rep.pate_f1) rows.emplace_back("PATE-F1", rep.pate_f1);
    static const std::vector<std::pair<std::string, std::string>> names{
        {"pa_f1", "PA-F1"},           {"standard_f1", "Standard-F1"}, {"pa_auc_roc", "PA-AUC-ROC"},
        {"auc_roc", "AUC-ROC"},       {"auc_pr", "AUC-PR"}};
    for (const auto& [key, label] : names) {
        const auto it = rep.baselines.find(key);
        if (it != rep.baselines.end()) rows.emplace_back(label, it->second);
    }
    return rows;
}

/// Aligned table; the last column is the exact value written to the report.
inline std::string format_table(const MetricReport& rep) {
    const auto rows = comparison_rows(rep);
    std::size_t width = 6;
    for (const auto& r : rows) width = std::max(width, r.first.size());
    std::ostringstream os;
    auto pad = [](std::string s, std::size_t w) {
        s.resize(std::max(w, s.size()), ' ');
        return s;
    };
    os << pad("metric", width) << "  " << pad("value", 9) << "  exact\n";
    for (const auto& [name, v] : rows) {
        char rounded[32];
        if (v) std::snprintf(rounded, sizeof rounded, "%.2f", *v);
        os << pad(name, width) << "  " << pad(v ? rounded : "undefined", 9) << "  "
           << (v ? format_double(*v) : "null") << "\n";
    }
    return os.str();
}

}  // namespace pate
