#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cpishare/errors.hpp"
#include "cpishare/linalg.hpp"
#include "cpishare/month.hpp"
#include "cpishare/series.hpp"

namespace cpishare {

inline constexpr int kMinCorrelationOverlap = 24;

namespace detail {

struct Moments {
    double mean_a{}, mean_b{}, saa{}, sbb{}, sab{};
    int n{};
};

inline Moments aligned_moments(const MonthlySeries& a, const MonthlySeries& b) {
    Overlap ov = overlap_of(a, b);
    Moments m;
    m.n = ov.length;
    if (ov.length == 0) return m;
    auto xa = a.window(ov.from, ov.length);
    auto xb = b.window(ov.from, ov.length);
    for (int i = 0; i < ov.length; ++i) {
        m.mean_a += xa[static_cast<std::size_t>(i)];
        m.mean_b += xb[static_cast<std::size_t>(i)];
    }
    m.mean_a /= ov.length;
    m.mean_b /= ov.length;
    for (int i = 0; i < ov.length; ++i) {
        double da = xa[static_cast<std::size_t>(i)] - m.mean_a;
        double db = xb[static_cast<std::size_t>(i)] - m.mean_b;
        m.saa += da * da;
        m.sbb += db * db;
        m.sab += da * db;
    }
    return m;
}

}  // namespace detail

/// Pearson coefficient over the calendar-aligned overlap of the two series.
inline double pearson_cc(const MonthlySeries& a, const MonthlySeries& b,
                         int min_overlap = kMinCorrelationOverlap) {
    detail::Moments m = detail::aligned_moments(a, b);
    if (m.n < min_overlap) {
        raise(Errc::InsufficientOverlap,
              "overlap of " + std::to_string(m.n) + " months, need " + std::to_string(min_overlap));
    }
    if (m.saa <= 0.0 || m.sbb <= 0.0) raise(Errc::DegenerateVariance, "zero variance on the overlap");
    return m.sab / std::sqrt(m.saa * m.sbb);
}

struct LagScanResult {
    double cc{};  // signed coefficient at the winning shift
    int lag{};    // months b was shifted; positive = b lagged (moved later)
};

/// Scans shifts of b over -max_shift..max_shift months and returns the signed
/// coefficient whose absolute value is largest. Equal |cc| prefers the smaller
/// |shift|, then a negative shift over the positive one. Shifts whose overlap
/// is too short are skipped; if none is admissible the scan fails.
inline LagScanResult lag_scan_cc(const MonthlySeries& a, const MonthlySeries& b, int max_shift = 11,
                                 int min_overlap = kMinCorrelationOverlap) {
    if (max_shift < 0) raise(Errc::InvalidArgument, "max_shift must be non-negative");
    std::optional<LagScanResult> best;
    auto consider = [&](int shift) {
        detail::Moments m = detail::aligned_moments(a, lag_shift(b, shift));
        if (m.n < min_overlap || m.saa <= 0.0 || m.sbb <= 0.0) return;
        double cc = m.sab / std::sqrt(m.saa * m.sbb);
        if (!best || std::abs(cc) > std::abs(best->cc)) best = LagScanResult{cc, shift};
    };
    consider(0);
    for (int s = 1; s <= max_shift; ++s) {  // visit order implements the tie preference
        consider(-s);
        consider(s);
    }
    if (!best) raise(Errc::InsufficientOverlap, "no shift leaves enough overlapping months");
    return *best;
}

struct CorrelationMatrix {
    struct Cell {
        std::optional<double> cc;            // empty when the pair was not computable
        std::optional<LagScanResult> best;   // filled in scan mode
    };

    std::vector<std::string> labels;  // input order
    std::vector<Cell> cells;          // row-major, size labels^2
    bool scanned{};

    Cell& at(std::size_t i, std::size_t j) { return cells[i * labels.size() + j]; }
    const Cell& at(std::size_t i, std::size_t j) const { return cells[i * labels.size() + j]; }
};

/// Symmetric matrix of pairwise Pearson coefficients; scan mode adds the
/// lag-maximized coefficient per cell. Pairs that violate the overlap or
/// variance preconditions yield unavailable cells instead of failing the run.
inline CorrelationMatrix correlation_matrix(const std::vector<std::pair<std::string, MonthlySeries>>& series,
                                            bool scan, int max_shift = 11) {
    CorrelationMatrix m;
    for (const auto& [label, _] : series) m.labels.push_back(label);
    m.scanned = scan;
    m.cells.resize(series.size() * series.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
        m.at(i, i).cc = 1.0;
        if (scan) m.at(i, i).best = LagScanResult{1.0, 0};
        for (std::size_t j = i + 1; j < series.size(); ++j) {
            CorrelationMatrix::Cell cell;
            try {
                cell.cc = pearson_cc(series[i].second, series[j].second);
            } catch (const Error&) {
            }
            if (scan) {
                try {
                    cell.best = lag_scan_cc(series[i].second, series[j].second, max_shift);
                } catch (const Error&) {
                }
            }
            m.at(i, j) = cell;
            if (cell.best) cell.best->lag = -cell.best->lag;  // shift of a relative to b
            m.at(j, i) = cell;
        }
    }
    return m;
}

/// Critical values by the MacKinnon (2010) response surfaces,
/// cv(n) = b0 + b1/n + b2/n^2 + b3/n^3, for the no-trend ("c") variant.
/// n_vars = 1 is the plain unit-root test; n_vars = 2 gives the stricter
/// values for residuals of a two-variable cointegrating regression.
inline std::array<double, 3> mackinnon_critical_values(int n_vars, int n_obs) {
    static constexpr double surface[2][3][4] = {
        {{-3.43035, -6.5393, -16.786, -79.433},
         {-2.86154, -2.8903, -4.234, -40.040},
         {-2.56677, -1.5384, -2.809, 0.0}},
        {{-3.89644, -10.9519, -33.527, 0.0},
         {-3.33613, -6.1101, -6.823, 0.0},
         {-3.04445, -4.2412, -2.720, 0.0}},
    };
    if (n_vars < 1 || n_vars > 2) raise(Errc::InvalidArgument, "critical values tabulated for 1 or 2 variables");
    if (n_obs < 1) raise(Errc::InvalidArgument, "n_obs must be positive");
    std::array<double, 3> cv{};
    double n = n_obs;
    for (int level = 0; level < 3; ++level) {
        const double* b = surface[n_vars - 1][level];
        cv[static_cast<std::size_t>(level)] = b[0] + b[1] / n + b[2] / (n * n) + b[3] / (n * n * n);
    }
    return cv;
}

/**
 * Result of the augmented Dickey-Fuller regression
 *
 *   dy_t = alpha + beta*y_{t-1} + sum_{i=1..p} gamma_i*dy_{t-i} + e_t
 *
 * statistic = beta / se(beta). The null hypothesis is a unit root (beta = 0);
 * it is rejected when the statistic falls below the critical value, i.e. the
 * series looks stationary.
 */
struct AdfResult {
    double statistic{};
    int lag_order{};
    int n_obs{};                          // regression rows
    std::array<double, 3> critical{};     // 1%, 5%, 10%
    int level{};                          // 1, 5 or 10
    bool reject_unit_root{};

    double critical_at_level() const {
        return critical[level == 1 ? 0 : level == 5 ? 1 : 2];
    }
};

inline int check_level(int level) {
    if (level != 1 && level != 5 && level != 10) raise(Errc::InvalidArgument, "level must be 1, 5 or 10");
    return level;
}

/// Schwert's rule, the default lag order: floor(12 * (T/100)^(1/4)).
inline int adf_auto_lag(int n) { return static_cast<int>(std::floor(12.0 * std::pow(n / 100.0, 0.25))); }

/// How the lagged-difference order is chosen when none is given explicitly.
/// Schwert always uses the rule above; Bic fits every order up to that cap on
/// a common sample and keeps the BIC minimizer, which preserves power when the
/// series needs few lags.
enum class AdfLagSelection { Schwert, Bic };

namespace detail {

struct AdfRegression {
    double statistic{};
    double ssr{};
    int n_obs{};
};

/// One ADF regression at fixed lag order p over rows t = first_row..T-1:
/// dy_t = a + b*y_{t-1} + sum gamma_i dy_{t-i}. Returns b's t-statistic.
inline AdfRegression adf_regression(std::span<const double> y, std::span<const double> dy, int p, int first_row) {
    const int T = static_cast<int>(y.size());
    const int n = T - first_row;
    const int k = p + 2;
    std::vector<double> ones(static_cast<std::size_t>(n), 1.0);
    std::vector<double> ylag(static_cast<std::size_t>(n));
    std::vector<double> rhs(static_cast<std::size_t>(n));
    std::vector<std::vector<double>> dlags(static_cast<std::size_t>(p),
                                           std::vector<double>(static_cast<std::size_t>(n)));
    for (int r = 0; r < n; ++r) {
        int t = first_row + r;
        ylag[static_cast<std::size_t>(r)] = y[static_cast<std::size_t>(t - 1)];
        rhs[static_cast<std::size_t>(r)] = dy[static_cast<std::size_t>(t - 1)];
        for (int i = 1; i <= p; ++i) {
            dlags[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(r)] =
                dy[static_cast<std::size_t>(t - 1 - i)];
        }
    }
    std::vector<std::span<const double>> cols;
    cols.reserve(static_cast<std::size_t>(k));
    cols.emplace_back(ones);
    cols.emplace_back(ylag);
    for (const auto& c : dlags) cols.emplace_back(c);

    LstsqWorkspace ws;
    LstsqResult fit = lstsq(cols, rhs, /*with_se=*/true, ws);
    if (fit.rcond < 1e-13 || fit.coef_se.empty() || !(fit.coef_se[1] > 0.0)) {
        raise(Errc::DegenerateSeries, "unit-root regression is singular");
    }
    AdfRegression out;
    out.statistic = fit.coef[1] / fit.coef_se[1];
    out.ssr = fit.ssr;
    out.n_obs = n;
    return out;
}

inline AdfResult adf_statistic(std::span<const double> y, int level, std::optional<int> lag_order, int n_vars,
                               AdfLagSelection selection) {
    const int T = static_cast<int>(y.size());
    if (T < 3) raise(Errc::TooShort, "series too short for a unit-root regression");
    const int pmax = lag_order ? *lag_order : adf_auto_lag(T);
    if (pmax < 0) raise(Errc::InvalidArgument, "lag order must be non-negative");
    if (T - 1 - pmax < 30) {
        raise(Errc::TooShort, "only " + std::to_string(T - 1 - pmax) + " usable rows after forming " +
                                  std::to_string(pmax) + " lagged differences, need 30");
    }

    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= T;
    double var = 0.0;
    for (double v : y) var += (v - mean) * (v - mean);
    if (var <= 0.0) raise(Errc::DegenerateSeries, "series has zero variance");

    std::vector<double> dy(static_cast<std::size_t>(T - 1));
    for (int t = 1; t < T; ++t) {
        dy[static_cast<std::size_t>(t - 1)] = y[static_cast<std::size_t>(t)] - y[static_cast<std::size_t>(t - 1)];
    }

    int p = pmax;
    if (!lag_order && selection == AdfLagSelection::Bic) {
        // order comparison on the common sample trimmed for the largest order
        double best = std::numeric_limits<double>::infinity();
        for (int q = 0; q <= pmax; ++q) {
            AdfRegression reg = adf_regression(y, dy, q, pmax + 1);
            double n = reg.n_obs;
            double bic = n * std::log(reg.ssr / n) + (q + 2) * std::log(n);
            if (bic < best) {
                best = bic;
                p = q;
            }
        }
    }

    AdfRegression reg = adf_regression(y, dy, p, p + 1);  // full sample for the chosen order
    AdfResult out;
    out.statistic = reg.statistic;
    out.lag_order = p;
    out.n_obs = reg.n_obs;
    out.critical = mackinnon_critical_values(n_vars, reg.n_obs);
    out.level = check_level(level);
    out.reject_unit_root = out.statistic < out.critical_at_level();
    return out;
}

}  // namespace detail

/// Augmented Dickey-Fuller test with a constant and no trend. The default lag
/// order is Schwert's rule; pass AdfLagSelection::Bic to pick the order by BIC
/// below that cap instead. The series is declared stationary (unit root
/// rejected) when the statistic is below the MacKinnon critical value.
inline AdfResult adf_test(const MonthlySeries& s, int level = 5, std::optional<int> lag_order = std::nullopt,
                          AdfLagSelection selection = AdfLagSelection::Schwert) {
    check_level(level);
    return detail::adf_statistic(s.values(), level, lag_order, /*n_vars=*/1, selection);
}

/// Two-step residual-based cointegration test: regress actual on predicted
/// with an intercept, then unit-root-test the residuals against the stricter
/// two-variable critical values. Cointegrated iff the residual unit root is
/// rejected. The residual test picks its lag order by BIC under the Schwert
/// cap; the fixed cap itself leaves near-white residuals over-parameterized
/// and misses obvious cointegration. If either input already looks stationary
/// on its own the verdict is still produced but flagged.
struct EngleGrangerResult {
    double intercept{};
    double slope{};
    AdfResult residual_adf;
    bool cointegrated{};
    bool actual_stationary_warning{};
    bool predicted_stationary_warning{};
    int n_obs{};
};

inline EngleGrangerResult engle_granger_test(const MonthlySeries& actual, const MonthlySeries& predicted,
                                             int level = 5, std::optional<int> lag_order = std::nullopt) {
    check_level(level);
    Overlap ov = overlap_of(actual, predicted);
    if (ov.length < 60) {
        raise(Errc::InsufficientOverlap,
              "overlap of " + std::to_string(ov.length) + " months, need 60");
    }
    auto ya = actual.window(ov.from, ov.length);
    auto yp = predicted.window(ov.from, ov.length);

    std::vector<double> ones(static_cast<std::size_t>(ov.length), 1.0);
    std::array<std::span<const double>, 2> cols = {std::span<const double>(ones), yp};
    LstsqWorkspace ws;
    LstsqResult fit = lstsq(cols, ya, /*with_se=*/false, ws);
    if (fit.rcond < 1e-13) raise(Errc::DegenerateVariance, "predicted series has no usable variation");

    EngleGrangerResult out;
    out.intercept = fit.coef[0];
    out.slope = fit.coef[1];
    out.n_obs = ov.length;
    out.residual_adf = detail::adf_statistic(ws.resid, level, lag_order, /*n_vars=*/2, AdfLagSelection::Bic);
    out.cointegrated = out.residual_adf.reject_unit_root;

    auto stationary = [&](const MonthlySeries& s) {
        try {
            return adf_test(s.slice(ov.from, add_months(ov.from, ov.length - 1)), level).reject_unit_root;
        } catch (const Error&) {
            return false;
        }
    };
    out.actual_stationary_warning = stationary(actual);
    out.predicted_stationary_warning = stationary(predicted);
    return out;
}

}  // namespace cpishare
