#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "cpishare/errors.hpp"
#include "cpishare/month.hpp"

namespace cpishare {

/// A gapless monthly-indexed sequence of finite values. Element k holds the
/// value for start()+k months. Alignment between two series is always done by
/// calendar month, never by array position.
class MonthlySeries {
public:
    MonthlySeries(MonthKey start, std::vector<double> values) : start_(start), values_(std::move(values)) {
        if (!valid_month(start_)) raise(Errc::InvalidArgument, "month out of range in series start");
        if (values_.empty()) raise(Errc::InvalidArgument, "series must hold at least one value");
        for (double v : values_) {
            if (!std::isfinite(v)) raise(Errc::NonFiniteValue, "series values must be finite");
        }
    }

    MonthKey start() const { return start_; }
    MonthKey end() const { return add_months(start_, static_cast<int>(values_.size()) - 1); }
    int size() const { return static_cast<int>(values_.size()); }

    const std::vector<double>& values() const { return values_; }

    bool contains(MonthKey m) const {
        int k = months_between(start_, m);
        return k >= 0 && k < size();
    }

    bool covers(MonthKey from, MonthKey to) const { return contains(from) && contains(to) && from <= to; }

    double at(MonthKey m) const {
        int k = months_between(start_, m);
        if (k < 0 || k >= size()) {
            raise(Errc::MissingMonth, "no value for " + format_month(m) + " (series spans " +
                                          format_month(start_) + ".." + format_month(end()) + ")");
        }
        return values_[static_cast<std::size_t>(k)];
    }

    /// Contiguous view of n values beginning at `from`; bounds-checked.
    std::span<const double> window(MonthKey from, int n) const {
        int k = months_between(start_, from);
        if (k < 0 || n < 1 || k + n > size()) {
            raise(Errc::MissingMonth, "window " + format_month(from) + "+" + std::to_string(n) +
                                          " not covered by series " + format_month(start_) + ".." +
                                          format_month(end()));
        }
        return {values_.data() + k, static_cast<std::size_t>(n)};
    }

    MonthlySeries slice(MonthKey from, MonthKey to) const {
        auto w = window(from, months_between(from, to) + 1);
        return MonthlySeries(from, std::vector<double>(w.begin(), w.end()));
    }

    friend bool operator==(const MonthlySeries&, const MonthlySeries&) = default;

private:
    MonthKey start_;
    std::vector<double> values_;
};

/// Shifts the calendar axis: the result at month m equals s at month m - tau.
/// Positive tau therefore delays the series (a lag); negative tau is a lead.
inline MonthlySeries lag_shift(const MonthlySeries& s, int tau) {
    return MonthlySeries(add_months(s.start(), tau), s.values());
}

/// Month-over-month change; the result starts one month after s.
inline MonthlySeries first_difference(const MonthlySeries& s) {
    if (s.size() < 2) raise(Errc::TooShort, "first difference needs at least two values");
    std::vector<double> d(static_cast<std::size_t>(s.size() - 1));
    const auto& v = s.values();
    for (std::size_t k = 0; k + 1 < v.size(); ++k) d[k] = v[k + 1] - v[k];
    return MonthlySeries(add_months(s.start(), 1), std::move(d));
}

/// Rescales the whole series so the maximum over [win_from, win_to] becomes 1.
inline MonthlySeries normalize_to_peak(const MonthlySeries& s, MonthKey win_from, MonthKey win_to) {
    if (win_to < win_from) raise(Errc::InvalidArgument, "window end precedes window start");
    MonthKey lo = std::max(s.start(), win_from);
    MonthKey hi = std::min(s.end(), win_to);
    if (hi < lo) {
        raise(Errc::EmptyIntersection, "window " + format_month(win_from) + ".." + format_month(win_to) +
                                           " does not intersect series span");
    }
    auto w = s.window(lo, months_between(lo, hi) + 1);
    double peak = *std::max_element(w.begin(), w.end());
    if (!(peak > 0.0)) raise(Errc::NonPositivePeak, "maximum over window is not positive");
    std::vector<double> out(s.values());
    for (double& v : out) v /= peak;
    return MonthlySeries(s.start(), std::move(out));
}

/// Calendar overlap of two series, empty if they do not intersect.
struct Overlap {
    MonthKey from{};
    int length{};  // 0 when empty
};

inline Overlap overlap_of(const MonthlySeries& a, const MonthlySeries& b) {
    MonthKey lo = std::max(a.start(), b.start());
    MonthKey hi = std::min(a.end(), b.end());
    if (hi < lo) return {};
    return {lo, months_between(lo, hi) + 1};
}

}  // namespace cpishare
