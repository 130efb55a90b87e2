#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "pate/series.hpp"

namespace pate {

enum class DataErrorKind {
    missing_file,
    empty_file,
    bad_header,
    parse,
    non_finite,
    bad_label,
    length_mismatch,
    unwritable,
};

/// Input/output failure carrying its kind; the message names the file and,
/// where it applies, the line.
class DataError : public InvalidInput {
public:
    DataError(DataErrorKind kind, const std::string& what) : InvalidInput(what), kind_(kind) {}
    DataErrorKind kind() const noexcept { return kind_; }

private:
    DataErrorKind kind_;
};

enum class SeriesFormat { csv2, split };

inline SeriesFormat parse_format(std::string_view s) {
    if (s == "csv2") return SeriesFormat::csv2;
    if (s == "split") return SeriesFormat::split;
    throw InvalidInput("unknown format '" + std::string(s) + "' (expected csv2 or split)");
}

inline std::string_view format_name(SeriesFormat f) { return f == SeriesFormat::csv2 ? "csv2" : "split"; }

struct LoadedSeries {
    ScoreSeries scores;
    LabelSeries labels;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

struct Line {
    std::size_t number;  // 1-based line in the file
    std::string text;
};

/// Non-blank lines with CR stripped and a leading UTF-8 BOM removed.
inline std::vector<Line> read_lines(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError(DataErrorKind::missing_file, "cannot open '" + path + "'");
    std::vector<Line> out;
    std::string text;
    std::size_t number = 0;
    while (std::getline(in, text)) {
        ++number;
        if (number == 1 && text.rfind("\xEF\xBB\xBF", 0) == 0) text.erase(0, 3);
        const auto t = trim(text);
        if (!t.empty()) out.push_back({number, std::string(t)});
    }
    if (out.empty()) throw DataError(DataErrorKind::empty_file, "'" + path + "' is empty");
    return out;
}

inline std::optional<double> to_number(std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    return v;
}

inline std::string where(const std::string& path, std::size_t line) {
    return path + " line " + std::to_string(line);
}

inline double parse_score(std::string_view field, const std::string& path, std::size_t line) {
    const auto v = to_number(field);
    if (!v)
        throw DataError(DataErrorKind::parse, where(path, line) + ": cannot parse score '" +
                                                  std::string(trim(field)) + "'");
    if (!std::isfinite(*v))
        throw DataError(DataErrorKind::non_finite, where(path, line) + ": score '" +
                                                       std::string(trim(field)) + "' is not finite");
    return *v;
}

inline std::uint8_t parse_label(std::string_view field, const std::string& path, std::size_t line) {
    const auto v = to_number(field);
    if (!v || (*v != 0.0 && *v != 1.0))
        throw DataError(DataErrorKind::bad_label, where(path, line) + ": label '" +
                                                      std::string(trim(field)) + "' is not 0 or 1");
    return static_cast<std::uint8_t>(*v);
}

inline LoadedSeries read_csv2(const std::string& path) {
    const auto lines = read_lines(path);
    const auto header = lines.front().text;
    const auto comma = header.find(',');
    if (comma == std::string::npos || trim(std::string_view(header).substr(0, comma)) != "score" ||
        trim(std::string_view(header).substr(comma + 1)) != "label")
        throw DataError(DataErrorKind::bad_header,
                        where(path, lines.front().number) + ": expected header 'score,label'");
    if (lines.size() == 1)
        throw DataError(DataErrorKind::empty_file, "'" + path + "' has a header but no rows");

    std::vector<double> scores;
    std::vector<std::uint8_t> labels;
    scores.reserve(lines.size() - 1);
    labels.reserve(lines.size() - 1);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::string_view row = lines[i].text;
        const auto c = row.find(',');
        if (c == std::string_view::npos || row.find(',', c + 1) != std::string_view::npos)
            throw DataError(DataErrorKind::parse,
                            where(path, lines[i].number) + ": expected two fields 'score,label'");
        scores.push_back(parse_score(row.substr(0, c), path, lines[i].number));
        labels.push_back(parse_label(row.substr(c + 1), path, lines[i].number));
    }
    return {ScoreSeries(std::move(scores)), LabelSeries(std::move(labels))};
}

/// One value per line; a first line that is not a number is taken as a header.
template <class Parse>
auto read_column(const std::string& path, Parse parse) {
    const auto lines = read_lines(path);
    std::size_t first = to_number(lines.front().text) ? 0 : 1;
    if (first == lines.size())
        throw DataError(DataErrorKind::empty_file, "'" + path + "' has a header but no rows");
    std::vector<decltype(parse(std::string_view{}, path, std::size_t{}))> out;
    out.reserve(lines.size() - first);
    for (std::size_t i = first; i < lines.size(); ++i)
        out.push_back(parse(lines[i].text, path, lines[i].number));
    return out;
}

}  // namespace detail

/// Reads scores and labels. For `split`, `path` holds the scores and
/// `labels_path` the labels.
inline LoadedSeries read_series(const std::string& path, SeriesFormat format,
                                const std::string& labels_path = {}) {
    if (format == SeriesFormat::csv2) return detail::read_csv2(path);
    if (labels_path.empty()) throw InvalidInput("split format needs a labels file");
    auto scores = detail::read_column(path, detail::parse_score);
    auto labels = detail::read_column(labels_path, detail::parse_label);
    if (scores.size() != labels.size())
        throw DataError(DataErrorKind::length_mismatch,
                        "length mismatch: '" + path + "' has " + std::to_string(scores.size()) +
                            " rows, '" + labels_path + "' has " + std::to_string(labels.size()));
    return {ScoreSeries(std::move(scores)), LabelSeries(std::move(labels))};
}

/// Shortest representation that parses back to the same double.
inline std::string format_double(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

inline void write_series_csv(const std::string& path, const ScoreSeries& scores,
                             const LabelSeries& labels) {
    if (scores.size() != labels.size())
        throw InvalidInput("scores and labels have different lengths");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError(DataErrorKind::unwritable, "cannot write '" + path + "'");
    out << "score,label\n";
    for (std::size_t i = 0; i < scores.size(); ++i)
        out << format_double(scores[i]) << ',' << (labels[i] ? '1' : '0') << '\n';
    if (!out.flush()) throw DataError(DataErrorKind::unwritable, "cannot write '" + path + "'");
}

// ---------------------------------------------------------------------------
// Run configuration

inline const std::set<std::string>& known_metrics() {
    static const std::set<std::string> names{"pate",       "pate_f1", "pa_f1",  "standard_f1",
                                             "pa_auc_roc", "auc_roc", "auc_pr"};
    return names;
}

struct RunConfig {
    std::size_t e_max = 100;
    std::size_t d_max = 100;
    GridPolicy grid = GridPolicy::exhaustive();
    std::set<std::string> metrics{"pate", "pa_f1", "standard_f1", "pa_auc_roc", "auc_roc", "auc_pr"};
    std::string input;
    std::string labels;
    SeriesFormat format = SeriesFormat::csv2;
    std::string output;
    std::optional<std::uint64_t> seed;
    std::optional<double> threshold;           // operating threshold for F1-type baselines
    std::optional<double> threshold_quantile;  // or a quantile of the scores
    bool curves = false;
    unsigned threads = 0;

    bool wants(const std::string& metric) const { return metrics.count(metric) != 0; }
};

inline std::size_t parse_size(std::string_view key, std::string_view value) {
    std::size_t v = 0;
    const auto t = detail::trim(value);
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
        throw InvalidInput(std::string(key) + ": expected a non-negative integer, got '" +
                           std::string(value) + "'");
    return v;
}

inline std::set<std::string> parse_metrics(std::string_view list) {
    std::set<std::string> out;
    std::size_t pos = 0;
    while (pos <= list.size()) {
        const auto comma = std::min(list.find(',', pos), list.size());
        const auto name = std::string(detail::trim(list.substr(pos, comma - pos)));
        if (!name.empty()) {
            if (!known_metrics().count(name)) throw InvalidInput("unknown metric '" + name + "'");
            out.insert(name);
        }
        pos = comma + 1;
    }
    if (out.empty()) throw InvalidInput("metric list is empty");
    return out;
}

/// "exhaustive" or a quantile count N >= 2.
inline GridPolicy parse_grid(std::string_view value) {
    const auto t = detail::trim(value);
    if (t == "exhaustive") return GridPolicy::exhaustive();
    return GridPolicy::quantile(parse_size("grid", t));
}

/// Sets one key of a flat key=value configuration.
inline void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value) {
    const auto v = std::string(detail::trim(value));
    if (key == "e_max") cfg.e_max = parse_size(key, v);
    else if (key == "d_max") cfg.d_max = parse_size(key, v);
    else if (key == "ed") cfg.e_max = cfg.d_max = parse_size(key, v);
    else if (key == "grid") cfg.grid = parse_grid(v);
    else if (key == "metrics") cfg.metrics = parse_metrics(v);
    else if (key == "input") cfg.input = v;
    else if (key == "labels") cfg.labels = v;
    else if (key == "format") cfg.format = parse_format(v);
    else if (key == "out") cfg.output = v;
    else if (key == "seed") cfg.seed = parse_size(key, v);
    else if (key == "threads") cfg.threads = static_cast<unsigned>(parse_size(key, v));
    else if (key == "curves") {
        if (v != "true" && v != "false") throw InvalidInput("curves: expected true or false");
        cfg.curves = v == "true";
    } else if (key == "threshold" || key == "threshold_quantile") {
        const auto x = detail::to_number(v);
        if (!x || !std::isfinite(*x)) throw InvalidInput(std::string(key) + ": expected a number");
        if (key == "threshold") cfg.threshold = *x;
        else {
            if (*x < 0.0 || *x > 1.0) throw InvalidInput("threshold_quantile must lie in [0, 1]");
            cfg.threshold_quantile = *x;
        }
    } else {
        throw InvalidInput("unknown configuration key '" + std::string(key) + "'");
    }
}

/// Reads `key = value` lines; '#' starts a comment. Keys are returned in file
/// order so later lines win.
inline std::vector<std::pair<std::string, std::string>> read_key_values(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError(DataErrorKind::missing_file, "cannot open '" + path + "'");
    std::vector<std::pair<std::string, std::string>> out;
    std::string text;
    std::size_t number = 0;
    while (std::getline(in, text)) {
        ++number;
        const auto hash = text.find('#');
        const auto t = detail::trim(std::string_view(text).substr(0, hash));
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string_view::npos)
            throw DataError(DataErrorKind::parse, detail::where(path, number) + ": expected key=value");
        out.emplace_back(std::string(detail::trim(t.substr(0, eq))),
                         std::string(detail::trim(t.substr(eq + 1))));
    }
    return out;
}

}  // namespace pate
