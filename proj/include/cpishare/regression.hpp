#pragma once

#include <array>
#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cpishare/catalog.hpp"
#include "cpishare/errors.hpp"
#include "cpishare/linalg.hpp"
#include "cpishare/month.hpp"
#include "cpishare/series.hpp"

namespace cpishare {

/// Candidates with a reciprocal condition estimate below this are rejected as
/// rank deficient instead of returning unstable coefficients.
inline constexpr double kRankDeficientRcond = 1e-10;

/// Price decomposition: p(m) = b1*CPI1(m-lag1) + b2*CPI2(m-lag2) + c*trend_time(m) + d.
/// Positive lags read the index before the price month; negative lags (leads)
/// read a future index value.
struct ModelSpec {
    std::string code1;
    std::string code2;
    int lag1{};
    int lag2{};
    double b1{};
    double b2{};
    double c{};
    double d{};

    friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

inline constexpr int kNumCoefficients = 4;  // b1, b2, c, d

struct FitResult {
    ModelSpec spec;
    MonthlySeries residuals;  // actual minus predicted over the fitted window
    double ssr{};
    double sterr{};  // sqrt(ssr / (n_obs - 4))
    double r2{};
    int n_obs{};
};

namespace detail {

/// Shared workspace for the fit path; reused across candidates in the search.
struct FitWorkspace {
    LstsqWorkspace ls;
    std::vector<double> trend;
    std::vector<double> ones;
    MonthKey window_start{};
    int window_len{-1};

    void prepare_window(MonthKey start, int n) {
        if (window_len == n && window_start == start) return;
        trend.resize(static_cast<std::size_t>(n));
        ones.assign(static_cast<std::size_t>(n), 1.0);
        for (int k = 0; k < n; ++k) trend[static_cast<std::size_t>(k)] = trend_time(add_months(start, k));
        window_start = start;
        window_len = n;
    }
};

struct CoreFit {
    std::array<double, kNumCoefficients> coef{};
    double ssr{};
    double rcond{};
};

/// One least-squares solve of the four-column design. All public fit paths and
/// the search scan go through here so they produce bit-identical numbers.
inline CoreFit fit_core(std::span<const double> price, std::span<const double> cpi1, std::span<const double> cpi2,
                        FitWorkspace& ws) {
    std::array<std::span<const double>, kNumCoefficients> cols = {cpi1, cpi2, std::span<const double>(ws.trend),
                                                                  std::span<const double>(ws.ones)};
    LstsqResult r = lstsq(cols, price, /*with_se=*/false, ws.ls);
    CoreFit out;
    out.coef = {r.coef[0], r.coef[1], r.coef[2], r.coef[3]};
    out.ssr = r.ssr;
    out.rcond = r.rcond;
    return out;
}

}  // namespace detail

/// Least-squares fit of one fixed (code, lag) pair over price months
/// [start, anchor]. Every sample month needs the price plus both lagged index
/// values; missing coverage is InsufficientData, a near-singular design is
/// RankDeficient.
inline FitResult fit_candidate(const MonthlySeries& price, const CpiCatalog& catalog, std::string_view code1,
                               int lag1, std::string_view code2, int lag2, MonthKey start, MonthKey anchor,
                               int min_obs = 60) {
    if (code1 == code2) raise(Errc::InvalidArgument, "a model needs two different index codes");
    if (anchor < start) raise(Errc::InvalidArgument, "anchor precedes start");
    const MonthlySeries& s1 = catalog.get(code1);
    const MonthlySeries& s2 = catalog.get(code2);

    const int n = months_between(start, anchor) + 1;
    if (n < min_obs || n <= kNumCoefficients) {
        raise(Errc::InsufficientData, "window holds " + std::to_string(n) + " months, need at least " +
                                          std::to_string(std::max(min_obs, kNumCoefficients + 1)));
    }
    if (!price.covers(start, anchor)) {
        raise(Errc::InsufficientData, "price series does not cover " + format_month(start) + ".." +
                                          format_month(anchor));
    }
    auto lag_covered = [&](const MonthlySeries& s, int lag) {
        return s.covers(add_months(start, -lag), add_months(anchor, -lag));
    };
    if (!lag_covered(s1, lag1) || !lag_covered(s2, lag2)) {
        raise(Errc::InsufficientData, "index coverage missing for lags (" + std::to_string(lag1) + ", " +
                                          std::to_string(lag2) + ")");
    }

    detail::FitWorkspace ws;
    ws.prepare_window(start, n);
    auto y = price.window(start, n);
    auto c1 = s1.window(add_months(start, -lag1), n);
    auto c2 = s2.window(add_months(start, -lag2), n);
    detail::CoreFit core = detail::fit_core(y, c1, c2, ws);
    if (core.rcond < kRankDeficientRcond) {
        raise(Errc::RankDeficient, "design is rank deficient (rcond=" + std::to_string(core.rcond) + ") for pair " +
                                       std::string(code1) + "/" + std::string(code2));
    }

    FitResult out{ModelSpec{std::string(code1), std::string(code2), lag1, lag2, core.coef[0], core.coef[1],
                            core.coef[2], core.coef[3]},
                  MonthlySeries(start, ws.ls.resid), core.ssr, 0.0, 0.0, n};
    out.sterr = std::sqrt(core.ssr / (n - kNumCoefficients));
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= n;
    double tss = 0.0;
    for (double v : y) tss += (v - mean) * (v - mean);
    out.r2 = tss > 0.0 ? std::max(0.0, 1.0 - core.ssr / tss) : (core.ssr <= 0.0 ? 1.0 : 0.0);
    return out;
}

/// Evaluates the fitted decomposition at one month.
inline double evaluate_model(const ModelSpec& spec, const CpiCatalog& catalog, MonthKey m) {
    const MonthlySeries& s1 = catalog.get(spec.code1);
    const MonthlySeries& s2 = catalog.get(spec.code2);
    return spec.b1 * s1.at(add_months(m, -spec.lag1)) + spec.b2 * s2.at(add_months(m, -spec.lag2)) +
           spec.c * trend_time(m) + spec.d;
}

/// R^2 of the simple regression of actual on predicted over their calendar
/// overlap; equals the squared Pearson coefficient, so it lies in [0, 1].
inline double actual_vs_predicted_r2(const MonthlySeries& actual, const MonthlySeries& predicted) {
    Overlap ov = overlap_of(actual, predicted);
    if (ov.length < 3) raise(Errc::InsufficientOverlap, "need at least 3 overlapping months");
    auto a = actual.window(ov.from, ov.length);
    auto p = predicted.window(ov.from, ov.length);
    double ma = 0.0, mp = 0.0;
    for (int i = 0; i < ov.length; ++i) {
        ma += a[static_cast<std::size_t>(i)];
        mp += p[static_cast<std::size_t>(i)];
    }
    ma /= ov.length;
    mp /= ov.length;
    double saa = 0.0, spp = 0.0, sap = 0.0;
    for (int i = 0; i < ov.length; ++i) {
        double da = a[static_cast<std::size_t>(i)] - ma;
        double dp = p[static_cast<std::size_t>(i)] - mp;
        saa += da * da;
        spp += dp * dp;
        sap += da * dp;
    }
    if (saa <= 0.0) raise(Errc::DegenerateVariance, "actual series has zero variance on the overlap");
    if (spp <= 0.0) return 0.0;  // constant prediction explains nothing
    double r2 = (sap * sap) / (saa * spp);
    return std::min(1.0, r2);
}

}  // namespace cpishare
