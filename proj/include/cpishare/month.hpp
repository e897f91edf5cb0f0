#pragma once

#include <compare>
#include <cstdio>
#include <string>
#include <string_view>

#include "cpishare/errors.hpp"

namespace cpishare {

/// A calendar month. Ordering is calendar order; arithmetic is in whole months.
struct MonthKey {
    int year{};
    int month{};  // 1..12

    friend auto operator<=>(const MonthKey&, const MonthKey&) = default;
};

/// Months since 0000-01; the working integer representation of a MonthKey.
inline int month_index(MonthKey m) { return m.year * 12 + (m.month - 1); }

inline MonthKey month_from_index(int idx) {
    int year = idx / 12;
    int rem = idx % 12;
    if (rem < 0) {
        year -= 1;
        rem += 12;
    }
    return MonthKey{year, rem + 1};
}

inline MonthKey add_months(MonthKey m, int n) { return month_from_index(month_index(m) + n); }

/// b - a in months.
inline int months_between(MonthKey a, MonthKey b) { return month_index(b) - month_index(a); }

inline bool valid_month(MonthKey m) { return m.month >= 1 && m.month <= 12; }

/// Model time axis: fractional years since January 2000.
inline double trend_time(MonthKey m) { return (m.year - 2000) + (m.month - 1) / 12.0; }

inline std::string format_month(MonthKey m) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d", m.year, m.month);
    return buf;
}

/// Parses "YYYY-MM".
inline MonthKey parse_month(std::string_view text) {
    auto fail = [&] { raise(Errc::MalformedRow, "expected YYYY-MM date, got '" + std::string(text) + "'"); };
    if (text.size() != 7 || text[4] != '-') fail();
    for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u}) {
        if (text[i] < '0' || text[i] > '9') fail();
    }
    int year = (text[0] - '0') * 1000 + (text[1] - '0') * 100 + (text[2] - '0') * 10 + (text[3] - '0');
    int month = (text[5] - '0') * 10 + (text[6] - '0');
    MonthKey m{year, month};
    if (!valid_month(m)) fail();
    return m;
}

}  // namespace cpishare
