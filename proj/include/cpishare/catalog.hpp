#pragma once

#include <charconv>
#include <cstdlib>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cpishare/errors.hpp"
#include "cpishare/month.hpp"
#include "cpishare/series.hpp"

namespace cpishare {

/// Named collection of monthly index series. Codes are unique, non-empty and
/// kept in lexicographic order, which fixes the enumeration order everywhere.
class CpiCatalog {
public:
    CpiCatalog() = default;

    void add(std::string code, MonthlySeries series) {
        if (code.empty()) raise(Errc::InvalidArgument, "series code must be non-empty");
        auto [it, inserted] = entries_.emplace(std::move(code), std::move(series));
        if (!inserted) raise(Errc::DuplicateCode, "duplicate series code '" + it->first + "'");
    }

    bool has(std::string_view code) const { return entries_.find(code) != entries_.end(); }

    const MonthlySeries& get(std::string_view code) const {
        auto it = entries_.find(code);
        if (it == entries_.end()) raise(Errc::UnknownCode, "no series with code '" + std::string(code) + "'");
        return it->second;
    }

    std::size_t size() const { return entries_.size(); }

    std::vector<std::string> codes() const {
        std::vector<std::string> out;
        out.reserve(entries_.size());
        for (const auto& [code, _] : entries_) out.push_back(code);
        return out;
    }

    const std::map<std::string, MonthlySeries, std::less<>>& entries() const { return entries_; }

    /// Newest month available across all series; empty catalog has none.
    std::optional<MonthKey> latest_month() const {
        std::optional<MonthKey> latest;
        for (const auto& [_, s] : entries_) {
            if (!latest || *latest < s.end()) latest = s.end();
        }
        return latest;
    }

    friend bool operator==(const CpiCatalog&, const CpiCatalog&) = default;

private:
    std::map<std::string, MonthlySeries, std::less<>> entries_;
};

namespace detail {

inline std::vector<std::string_view> split_csv_row(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t pos = 0;
    while (true) {
        std::size_t comma = line.find(',', pos);
        if (comma == std::string_view::npos) {
            cells.push_back(line.substr(pos));
            break;
        }
        cells.push_back(line.substr(pos, comma - pos));
        pos = comma + 1;
    }
    return cells;
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline double parse_cell_number(std::string_view cell, int line_no) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
        raise(Errc::MalformedRow, "line " + std::to_string(line_no) + ": cell '" + std::string(cell) +
                                      "' is not a number");
    }
    return value;
}

}  // namespace detail

/// Parses the wide CSV format: header `date,CODE1,CODE2,...`, one row per
/// month with strictly consecutive `YYYY-MM` dates. A column may be empty at
/// its leading/trailing edge (series spans differ); an empty cell inside a
/// column's span is an InteriorGap error.
inline CpiCatalog parse_catalog_csv(std::istream& in) {
    std::string line;
    int line_no = 0;

    // header
    if (!std::getline(in, line)) raise(Errc::MalformedRow, "empty input, expected a header row");
    ++line_no;
    auto header = detail::split_csv_row(line);
    if (header.empty() || detail::trim(header[0]) != "date") {
        raise(Errc::MalformedRow, "header must start with 'date'");
    }
    std::vector<std::string> codes;
    for (std::size_t i = 1; i < header.size(); ++i) {
        auto code = detail::trim(header[i]);
        if (code.empty()) raise(Errc::MalformedRow, "empty series code in header");
        for (const auto& seen : codes) {
            if (seen == code) raise(Errc::DuplicateCode, "duplicate series code '" + std::string(code) + "'");
        }
        codes.emplace_back(code);
    }

    const std::size_t n_cols = codes.size();
    std::vector<MonthKey> dates;
    std::vector<std::vector<std::optional<double>>> cells(n_cols);

    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        auto row = detail::split_csv_row(line);
        if (row.size() != n_cols + 1) {
            raise(Errc::MalformedRow, "line " + std::to_string(line_no) + ": expected " +
                                          std::to_string(n_cols + 1) + " columns, got " + std::to_string(row.size()));
        }
        MonthKey date = parse_month(detail::trim(row[0]));
        if (!dates.empty() && months_between(dates.back(), date) != 1) {
            raise(Errc::NonMonotoneDates, "line " + std::to_string(line_no) + ": " + format_month(date) +
                                              " does not follow " + format_month(dates.back()) +
                                              " by exactly one month");
        }
        dates.push_back(date);
        for (std::size_t c = 0; c < n_cols; ++c) {
            auto cell = detail::trim(row[c + 1]);
            if (cell.empty()) {
                cells[c].push_back(std::nullopt);
            } else {
                cells[c].push_back(detail::parse_cell_number(cell, line_no));
            }
        }
    }

    CpiCatalog catalog;
    for (std::size_t c = 0; c < n_cols; ++c) {
        const auto& col = cells[c];
        std::size_t first = 0;
        while (first < col.size() && !col[first]) ++first;
        if (first == col.size()) raise(Errc::MalformedRow, "column '" + codes[c] + "' has no values");
        std::size_t last = col.size() - 1;
        while (!col[last]) --last;
        std::vector<double> values;
        values.reserve(last - first + 1);
        for (std::size_t k = first; k <= last; ++k) {
            if (!col[k]) {
                raise(Errc::InteriorGap, "column '" + codes[c] + "' is empty at " +
                                             format_month(dates[k]) + " inside its span");
            }
            values.push_back(*col[k]);
        }
        catalog.add(codes[c], MonthlySeries(dates[first], std::move(values)));
    }
    return catalog;
}

inline CpiCatalog parse_catalog_csv(const std::string& text) {
    std::istringstream in(text);
    return parse_catalog_csv(in);
}

/// Inverse of parse_catalog_csv; numbers use shortest round-trip formatting so
/// parse(write(catalog)) == catalog.
inline std::string write_catalog_csv(const CpiCatalog& catalog) {
    if (catalog.size() == 0) raise(Errc::EmptyCatalog, "cannot serialize an empty catalog");
    MonthKey lo = catalog.entries().begin()->second.start();
    MonthKey hi = lo;
    for (const auto& [_, s] : catalog.entries()) {
        lo = std::min(lo, s.start());
        hi = std::max(hi, s.end());
    }
    std::string out = "date";
    for (const auto& [code, _] : catalog.entries()) {
        out += ',';
        out += code;
    }
    out += '\n';
    char buf[40];
    for (int k = 0; k <= months_between(lo, hi); ++k) {
        MonthKey m = add_months(lo, k);
        out += format_month(m);
        for (const auto& [_, s] : catalog.entries()) {
            out += ',';
            if (s.contains(m)) {
                auto res = std::to_chars(buf, buf + sizeof(buf), s.at(m));
                out.append(buf, res.ptr);
            }
        }
        out += '\n';
    }
    return out;
}

/// Coverage report for a fit window. A candidate fit over [start, anchor] with
/// lag tau needs CPI values on [start - tau, anchor - tau]; across the whole
/// lag range [-allowed_lead, max_lag] that is [start - max_lag, anchor + allowed_lead].
struct WindowValidation {
    struct Entry {
        std::string code;
        bool ok{};
        MonthKey have_from{};
        MonthKey have_to{};
    };

    int allowed_lead{};
    MonthKey cpi_required_from{};
    MonthKey cpi_required_to{};
    bool price_ok{};
    std::vector<Entry> cpi;

    bool all_ok() const {
        if (!price_ok) return false;
        for (const auto& e : cpi) {
            if (!e.ok) return false;
        }
        return true;
    }
};

inline WindowValidation validate_window(const CpiCatalog& catalog, const MonthlySeries& price, MonthKey start,
                                        MonthKey anchor, int max_lag, int max_lead) {
    if (anchor < start) raise(Errc::InvalidArgument, "anchor precedes start");
    if (max_lag < 0 || max_lead < 0) raise(Errc::InvalidArgument, "lag/lead caps must be non-negative");

    WindowValidation report;
    auto latest = catalog.latest_month();
    int lead_room = latest ? months_between(anchor, *latest) : 0;
    report.allowed_lead = std::max(0, std::min(max_lead, lead_room));
    report.cpi_required_from = add_months(start, -max_lag);
    report.cpi_required_to = add_months(anchor, report.allowed_lead);
    report.price_ok = price.covers(start, anchor);
    for (const auto& [code, s] : catalog.entries()) {
        report.cpi.push_back({code, s.covers(report.cpi_required_from, report.cpi_required_to), s.start(), s.end()});
    }
    return report;
}

}  // namespace cpishare
