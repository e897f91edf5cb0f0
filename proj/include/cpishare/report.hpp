#pragma once

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"  // vendored nlohmann/json

#include "cpishare/errors.hpp"
#include "cpishare/regression.hpp"
#include "cpishare/scenario.hpp"
#include "cpishare/search.hpp"
#include "cpishare/stability.hpp"
#include "cpishare/stats.hpp"
#include "cpishare/version.hpp"

namespace cpishare {

using json = nlohmann::json;

/// FNV-1a 64-bit, used to fingerprint input files in the manifest.
inline std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x00000100000001B3ull;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

inline std::string utc_timestamp() {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// Provenance block embedded in every report. The timestamp is the only
/// non-deterministic field and stays inside this block, so report bodies are
/// byte-identical for identical inputs and flags.
struct RunManifest {
    std::string command;
    std::string version = kVersion;
    std::string timestamp = utc_timestamp();
    std::vector<std::pair<std::string, std::string>> inputs;  // name -> content digest
    std::vector<std::pair<std::string, std::string>> config;  // resolved flag -> value
};

// ---- number formatting ----

/// Fixed three decimals, the table precision used throughout TSV reports.
inline std::string fmt3(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

/// Shortest round-trip decimal form, for machine-readable values.
inline std::string fmt_full(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

// ---- manifest ----

inline std::string manifest_tsv(const RunManifest& m) {
    std::string out;
    out += "# manifest\tcommand=" + m.command + "\n";
    out += "# manifest\tversion=" + m.version + "\n";
    out += "# manifest\ttimestamp=" + m.timestamp + "\n";
    for (const auto& [name, digest] : m.inputs) out += "# manifest\tinput\t" + name + "=" + digest + "\n";
    for (const auto& [key, value] : m.config) out += "# manifest\tconfig\t" + key + "=" + value + "\n";
    return out;
}

inline json manifest_json(const RunManifest& m) {
    json inputs = json::object();
    for (const auto& [name, digest] : m.inputs) inputs[name] = digest;
    json config = json::object();
    for (const auto& [key, value] : m.config) config[key] = value;
    return json{{"command", m.command},
                {"version", m.version},
                {"timestamp", m.timestamp},
                {"inputs", inputs},
                {"config", config}};
}

/// Drops manifest lines / the manifest object so two reports can be compared
/// for the determinism guarantee.
inline std::string strip_manifest_tsv(std::string_view tsv) {
    std::string out;
    std::size_t pos = 0;
    while (pos <= tsv.size()) {
        std::size_t eol = tsv.find('\n', pos);
        if (eol == std::string_view::npos) eol = tsv.size();
        std::string_view line = tsv.substr(pos, eol - pos);
        if (line.rfind("# manifest", 0) != 0 && !line.empty()) {
            out += line;
            out += '\n';
        }
        if (eol == tsv.size()) break;
        pos = eol + 1;
    }
    return out;
}

// ---- model (de)serialization ----

inline json model_to_json(const ModelSpec& spec) {
    return json{{"code1", spec.code1}, {"lag1", spec.lag1}, {"b1", spec.b1},
                {"code2", spec.code2}, {"lag2", spec.lag2}, {"b2", spec.b2},
                {"c", spec.c},         {"d", spec.d}};
}

inline ModelSpec model_from_json(const json& j) {
    ModelSpec spec;
    spec.code1 = j.at("code1").get<std::string>();
    spec.code2 = j.at("code2").get<std::string>();
    spec.lag1 = j.at("lag1").get<int>();
    spec.lag2 = j.at("lag2").get<int>();
    spec.b1 = j.at("b1").get<double>();
    spec.b2 = j.at("b2").get<double>();
    spec.c = j.at("c").get<double>();
    spec.d = j.at("d").get<double>();
    return spec;
}

/// Accepts a bare model object, {"model": ...}, or a search report (takes the
/// best model), so reports can be fed straight back into the scenario tools.
inline ModelSpec model_from_any_json(const json& j) {
    if (j.contains("code1")) return model_from_json(j);
    if (j.contains("model")) return model_from_json(j.at("model"));
    if (j.contains("best")) return model_from_json(j.at("best").at("model"));
    raise(Errc::InvalidArgument, "JSON carries no model object");
}

inline json fit_to_json(const FitResult& fit) {
    return json{{"model", model_to_json(fit.spec)}, {"sterr", fit.sterr}, {"ssr", fit.ssr},
                {"r2", fit.r2},                     {"n_obs", fit.n_obs}};
}

// ---- search report ----

inline const char* kFitTableHeader = "rank\tC1\tt1\tb1\tC2\tt2\tb2\tc\td\tsterr\tr2\tn_obs";

inline std::string fit_table_row(int rank, const FitResult& fit) {
    const ModelSpec& s = fit.spec;
    std::string out = std::to_string(rank);
    out += '\t' + s.code1 + '\t' + std::to_string(s.lag1) + '\t' + fmt3(s.b1);
    out += '\t' + s.code2 + '\t' + std::to_string(s.lag2) + '\t' + fmt3(s.b2);
    out += '\t' + fmt3(s.c) + '\t' + fmt3(s.d) + '\t' + fmt3(fit.sterr) + '\t' + fmt3(fit.r2) + '\t' +
           std::to_string(fit.n_obs);
    return out;
}

inline std::string search_report_tsv(const RunManifest& manifest, const SearchResult& result) {
    std::string out = manifest_tsv(manifest);
    out += "candidates\ttotal=" + std::to_string(result.n_candidates) +
           "\trejected=" + std::to_string(result.n_rejected) + "\n";
    out += kFitTableHeader;
    out += '\n';
    for (std::size_t i = 0; i < result.ranked.size(); ++i) {
        out += fit_table_row(static_cast<int>(i) + 1, result.ranked[i]);
        out += '\n';
    }
    return out;
}

inline json search_report_json(const RunManifest& manifest, const SearchResult& result) {
    json ranked = json::array();
    for (const auto& fit : result.ranked) ranked.push_back(fit_to_json(fit));
    return json{{"manifest", manifest_json(manifest)},
                {"n_candidates", result.n_candidates},
                {"n_rejected", result.n_rejected},
                {"best", fit_to_json(result.best)},
                {"ranked", ranked}};
}

// ---- stability report ----

inline std::string stability_report_tsv(const RunManifest& manifest, const StabilityReport& report, int quorum) {
    std::string out = manifest_tsv(manifest);
    out += "anchor\tC1\tt1\tb1\tC2\tt2\tb2\tc\td\tsterr\tcandidates\trejected\n";
    for (const auto& a : report.anchors) {
        out += format_month(a.anchor);
        if (a.best) {
            const ModelSpec& s = a.best->spec;
            out += '\t' + s.code1 + '\t' + std::to_string(s.lag1) + '\t' + fmt3(s.b1);
            out += '\t' + s.code2 + '\t' + std::to_string(s.lag2) + '\t' + fmt3(s.b2);
            out += '\t' + fmt3(s.c) + '\t' + fmt3(s.d) + '\t' + fmt3(a.best->sterr);
            out += '\t' + std::to_string(a.n_candidates) + '\t' + std::to_string(a.n_rejected);
        } else {
            out += "\tfailed: " + a.error;
        }
        out += '\n';
    }
    bool strict = reliability_verdict(report, ReliabilityMode::Strict);
    bool majority = reliability_verdict(report, ReliabilityMode::Majority, quorum);
    out += "verdict\tstrict=" + std::string(strict ? "reliable" : "unreliable") + "\n";
    out += "verdict\tmajority=" + std::string(majority ? "reliable" : "unreliable") +
           "\tquorum=" + std::to_string(quorum > 0 ? quorum : static_cast<int>(report.anchors.size()) - 1) + "\n";
    out += "majority_pair\t" + report.majority_pair.first + "\t" + report.majority_pair.second + "\tcount=" +
           std::to_string(report.majority_count) + "\n";
    if (report.majority_count > 0) {
        out += "drift\tlag1\t" + std::to_string(report.lag1_drift.lo) + "\t" + std::to_string(report.lag1_drift.hi) + "\n";
        out += "drift\tlag2\t" + std::to_string(report.lag2_drift.lo) + "\t" + std::to_string(report.lag2_drift.hi) + "\n";
        out += "drift\tb1\t" + fmt3(report.b1_drift.lo) + "\t" + fmt3(report.b1_drift.hi) + "\n";
        out += "drift\tb2\t" + fmt3(report.b2_drift.lo) + "\t" + fmt3(report.b2_drift.hi) + "\n";
        out += "drift\tc\t" + fmt3(report.c_drift.lo) + "\t" + fmt3(report.c_drift.hi) + "\n";
        out += "drift\td\t" + fmt3(report.d_drift.lo) + "\t" + fmt3(report.d_drift.hi) + "\n";
    }
    return out;
}

inline json stability_report_json(const RunManifest& manifest, const StabilityReport& report, int quorum) {
    json anchors = json::array();
    for (const auto& a : report.anchors) {
        json entry{{"anchor", format_month(a.anchor)}};
        if (a.best) {
            entry["best"] = fit_to_json(*a.best);
            entry["n_candidates"] = a.n_candidates;
            entry["n_rejected"] = a.n_rejected;
        } else {
            entry["error"] = a.error;
        }
        anchors.push_back(entry);
    }
    json drift = json::object();
    if (report.majority_count > 0) {
        drift = json{{"lag1", {report.lag1_drift.lo, report.lag1_drift.hi}},
                     {"lag2", {report.lag2_drift.lo, report.lag2_drift.hi}},
                     {"b1", {report.b1_drift.lo, report.b1_drift.hi}},
                     {"b2", {report.b2_drift.lo, report.b2_drift.hi}},
                     {"c", {report.c_drift.lo, report.c_drift.hi}},
                     {"d", {report.d_drift.lo, report.d_drift.hi}},
                     {"sterr", {report.sterr_drift.lo, report.sterr_drift.hi}}};
    }
    return json{{"manifest", manifest_json(manifest)},
                {"anchors", anchors},
                {"strict_reliable", reliability_verdict(report, ReliabilityMode::Strict)},
                {"majority_reliable", reliability_verdict(report, ReliabilityMode::Majority, quorum)},
                {"majority_pair", {report.majority_pair.first, report.majority_pair.second}},
                {"majority_count", report.majority_count},
                {"drift", drift}};
}

// ---- correlation report ----

inline std::string correlation_report_tsv(const RunManifest& manifest, const CorrelationMatrix& m) {
    auto matrix_block = [&](const std::string& title, auto&& cell_text) {
        std::string out = title;
        for (const auto& label : m.labels) out += '\t' + label;
        out += '\n';
        for (std::size_t i = 0; i < m.labels.size(); ++i) {
            out += m.labels[i];
            for (std::size_t j = 0; j < m.labels.size(); ++j) out += '\t' + cell_text(m.at(i, j));
            out += '\n';
        }
        return out;
    };
    std::string out = manifest_tsv(manifest);
    out += matrix_block("cc", [](const CorrelationMatrix::Cell& c) { return c.cc ? fmt3(*c.cc) : std::string("na"); });
    if (m.scanned) {
        out += matrix_block("cc_lag_max",
                            [](const CorrelationMatrix::Cell& c) { return c.best ? fmt3(c.best->cc) : std::string("na"); });
        out += matrix_block("lag_at_max",
                            [](const CorrelationMatrix::Cell& c) { return c.best ? std::to_string(c.best->lag) : std::string("na"); });
    }
    return out;
}

inline json correlation_report_json(const RunManifest& manifest, const CorrelationMatrix& m) {
    json cells = json::array();
    for (std::size_t i = 0; i < m.labels.size(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.labels.size(); ++j) {
            const auto& c = m.at(i, j);
            json cell = json::object();
            cell["cc"] = c.cc ? json(*c.cc) : json(nullptr);
            if (m.scanned) {
                cell["cc_lag_max"] = c.best ? json(c.best->cc) : json(nullptr);
                cell["lag_at_max"] = c.best ? json(c.best->lag) : json(nullptr);
            }
            row.push_back(cell);
        }
        cells.push_back(row);
    }
    return json{{"manifest", manifest_json(manifest)}, {"labels", m.labels}, {"cells", cells}};
}

// ---- unit root / cointegration reports ----

inline json adf_to_json(const AdfResult& r) {
    return json{{"statistic", r.statistic},
                {"lag_order", r.lag_order},
                {"n_obs", r.n_obs},
                {"critical_values", {{"1", r.critical[0]}, {"5", r.critical[1]}, {"10", r.critical[2]}}},
                {"level", r.level},
                {"reject_unit_root", r.reject_unit_root}};
}

inline std::string adf_report_tsv(const RunManifest& manifest, const std::string& label, const AdfResult& r) {
    std::string out = manifest_tsv(manifest);
    out += "series\t" + label + "\n";
    out += "statistic\t" + fmt3(r.statistic) + "\n";
    out += "lag_order\t" + std::to_string(r.lag_order) + "\n";
    out += "n_obs\t" + std::to_string(r.n_obs) + "\n";
    out += "critical_1pct\t" + fmt3(r.critical[0]) + "\n";
    out += "critical_5pct\t" + fmt3(r.critical[1]) + "\n";
    out += "critical_10pct\t" + fmt3(r.critical[2]) + "\n";
    out += "level\t" + std::to_string(r.level) + "\n";
    out += "reject_unit_root\t" + std::string(r.reject_unit_root ? "true" : "false") + "\n";
    return out;
}

inline std::string coint_report_tsv(const RunManifest& manifest, const EngleGrangerResult& r) {
    std::string out = manifest_tsv(manifest);
    out += "slope\t" + fmt3(r.slope) + "\n";
    out += "intercept\t" + fmt3(r.intercept) + "\n";
    out += "n_obs\t" + std::to_string(r.n_obs) + "\n";
    out += "residual_statistic\t" + fmt3(r.residual_adf.statistic) + "\n";
    out += "residual_lag_order\t" + std::to_string(r.residual_adf.lag_order) + "\n";
    out += "critical_1pct\t" + fmt3(r.residual_adf.critical[0]) + "\n";
    out += "critical_5pct\t" + fmt3(r.residual_adf.critical[1]) + "\n";
    out += "critical_10pct\t" + fmt3(r.residual_adf.critical[2]) + "\n";
    out += "level\t" + std::to_string(r.residual_adf.level) + "\n";
    out += "cointegrated\t" + std::string(r.cointegrated ? "true" : "false") + "\n";
    if (r.actual_stationary_warning) out += "warning\tactual series already looks stationary\n";
    if (r.predicted_stationary_warning) out += "warning\tpredicted series already looks stationary\n";
    return out;
}

inline json coint_report_json(const RunManifest& manifest, const EngleGrangerResult& r) {
    return json{{"manifest", manifest_json(manifest)},
                {"slope", r.slope},
                {"intercept", r.intercept},
                {"n_obs", r.n_obs},
                {"residual_adf", adf_to_json(r.residual_adf)},
                {"cointegrated", r.cointegrated},
                {"actual_stationary_warning", r.actual_stationary_warning},
                {"predicted_stationary_warning", r.predicted_stationary_warning}};
}

// ---- scenario reports ----

inline std::string sensitivity_report_tsv(const RunManifest& manifest, const ModelSpec& spec, double price,
                                          double ratio, const UnitSensitivity& s) {
    std::string out = manifest_tsv(manifest);
    out += "model\t" + spec.code1 + "(" + std::to_string(spec.lag1) + ")\t" + spec.code2 + "(" +
           std::to_string(spec.lag2) + ")\n";
    out += "coefficient_ratio\t" + fmt3(ratio) + "\n";
    out += "current_price\t" + fmt3(price) + "\n";
    out += "dollars_per_unit\t" + fmt3(s.dollars_per_unit) + "\n";
    out += "percent_per_unit\t" + fmt3(s.percent_per_unit) + "\n";
    return out;
}

inline std::string compare_report_tsv(const RunManifest& manifest, const std::vector<ComparedModel>& ranking) {
    std::string out = manifest_tsv(manifest);
    out += "rank\tlabel\tentry\tend\treturn_pct\n";
    for (std::size_t i = 0; i < ranking.size(); ++i) {
        const auto& r = ranking[i];
        out += std::to_string(i + 1) + '\t' + r.label + '\t' + fmt3(r.entry_price) + '\t' + fmt3(r.end_price) +
               '\t' + fmt3(r.return_pct) + '\n';
    }
    return out;
}

inline json compare_report_json(const RunManifest& manifest, const std::vector<ComparedModel>& ranking) {
    json rows = json::array();
    for (const auto& r : ranking) {
        rows.push_back(json{{"label", r.label},
                            {"entry_price", r.entry_price},
                            {"end_price", r.end_price},
                            {"return_pct", r.return_pct}});
    }
    return json{{"manifest", manifest_json(manifest)}, {"ranking", rows}};
}

// ---- series table (normalize / project output) ----

inline std::string series_table_tsv(const RunManifest& manifest,
                                    const std::vector<std::pair<std::string, MonthlySeries>>& columns) {
    std::string out = manifest_tsv(manifest);
    out += "date";
    MonthKey lo = columns.front().second.start();
    MonthKey hi = columns.front().second.end();
    for (const auto& [label, s] : columns) {
        out += '\t' + label;
        lo = std::min(lo, s.start());
        hi = std::max(hi, s.end());
    }
    out += '\n';
    for (int k = 0; k <= months_between(lo, hi); ++k) {
        MonthKey m = add_months(lo, k);
        out += format_month(m);
        for (const auto& [_, s] : columns) {
            out += '\t';
            if (s.contains(m)) out += fmt_full(s.at(m));
        }
        out += '\n';
    }
    return out;
}

}  // namespace cpishare
