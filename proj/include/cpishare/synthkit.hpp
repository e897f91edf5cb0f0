#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "cpishare/catalog.hpp"
#include "cpishare/errors.hpp"
#include "cpishare/regression.hpp"
#include "cpishare/rng.hpp"
#include "cpishare/search.hpp"
#include "cpishare/series.hpp"

namespace cpishare {

/// Ground truth for a synthetic price: the generating model plus the noise
/// level and the seed of the noise stream.
struct TruthSpec {
    ModelSpec model;
    double noise_sigma{};
    std::uint64_t seed{};
    MonthKey from{};
    MonthKey to{};
};

/// Zero-padded synthetic code, e.g. "C07"; lexicographic order equals numeric order.
inline std::string synth_code(int i, int n_series) {
    int width = 2;
    for (int v = n_series - 1; v >= 100; v /= 10) ++width;
    char buf[16];
    std::snprintf(buf, sizeof(buf), "C%0*d", std::min(width, 9), i);
    return buf;
}

/// Catalog of index-like series: positive, drifting geometric random walks.
/// The shared upward drift gives the high level correlations real index pools
/// show, while the per-series innovations keep any pair plus trend and
/// intercept at full rank and identifiable. One SplitMix64 stream seeded with
/// `seed` is consumed in code order, so equal seeds give identical catalogs.
inline CpiCatalog generate_catalog(int n_series, MonthKey from, MonthKey to, std::uint64_t seed) {
    if (n_series < 2) raise(Errc::InvalidArgument, "need at least two series");
    int n = months_between(from, to) + 1;
    if (n < 36) raise(Errc::SpanTooShort, "span of " + std::to_string(n) + " months, need 36");

    Prng rng(seed);
    CpiCatalog catalog;
    for (int i = 0; i < n_series; ++i) {
        double level = 100.0 + 150.0 * rng.uniform();   // starting index level
        double drift = 0.0015 + 0.0030 * rng.uniform(); // monthly growth rate
        double vol = 0.0100 + 0.0120 * rng.uniform();   // monthly innovation scale
        std::vector<double> values(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k) {
            values[static_cast<std::size_t>(k)] = level;
            level *= 1.0 + drift + vol * rng.normal();
        }
        catalog.add(synth_code(i, n_series), MonthlySeries(from, std::move(values)));
    }
    return catalog;
}

/// Applies the truth model month by month and adds seeded N(0, noise_sigma^2)
/// noise, one normal draw per month in calendar order.
inline MonthlySeries synthesize_price(const TruthSpec& truth, const CpiCatalog& catalog) {
    if (truth.to < truth.from) raise(Errc::InvalidArgument, "empty synthesis span");
    if (truth.noise_sigma < 0.0) raise(Errc::InvalidArgument, "noise sigma must be non-negative");
    int n = months_between(truth.from, truth.to) + 1;
    Prng rng(truth.seed);
    std::vector<double> values(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        double v = evaluate_model(truth.model, catalog, add_months(truth.from, k));
        if (truth.noise_sigma > 0.0) v += truth.noise_sigma * rng.normal();
        values[static_cast<std::size_t>(k)] = v;
    }
    return MonthlySeries(truth.from, std::move(values));
}

/// Outcome of one ground-truth recovery attempt.
struct RecoveryTrial {
    bool recovered_pair{};
    bool recovered_lags{};
    double coeff_max_rel_err{};
    SearchResult search;
};

/// Canonical orientation (code1 < code2) of a spec, swapping the pair if needed.
inline ModelSpec canonical_spec(ModelSpec spec) {
    if (spec.code2 < spec.code1) {
        std::swap(spec.code1, spec.code2);
        std::swap(spec.lag1, spec.lag2);
        std::swap(spec.b1, spec.b2);
    }
    return spec;
}

/// Synthesizes a price from `truth`, runs the exhaustive search, and compares
/// the winner against the generating model.
inline RecoveryTrial recovery_trial(const TruthSpec& truth, const CpiCatalog& catalog, const SearchConfig& config,
                                    int threads = 0) {
    MonthlySeries price = synthesize_price(truth, catalog);
    SearchResult result = best_fit_search(price, catalog, config, threads);

    ModelSpec want = canonical_spec(truth.model);
    const ModelSpec& got = result.best.spec;
    RecoveryTrial trial{want.code1 == got.code1 && want.code2 == got.code2,
                        want.lag1 == got.lag1 && want.lag2 == got.lag2, 0.0, std::move(result)};
    trial.recovered_lags = trial.recovered_lags && trial.recovered_pair;

    double err = 0.0;
    auto rel = [](double estimated, double expected) {
        return std::abs(estimated - expected) / std::max(std::abs(expected), 1e-12);
    };
    err = std::max(err, rel(got.b1, want.b1));
    err = std::max(err, rel(got.b2, want.b2));
    err = std::max(err, rel(got.c, want.c));
    err = std::max(err, rel(got.d, want.d));
    trial.coeff_max_rel_err = err;
    return trial;
}

/// Pure random walk y_t = y_{t-1} + z_t with y_0 = z_0; unit-root by construction.
inline MonthlySeries random_walk(int n, std::uint64_t seed, MonthKey start = MonthKey{2000, 1}) {
    if (n < 1) raise(Errc::InvalidArgument, "need at least one value");
    Prng rng(seed);
    std::vector<double> values(static_cast<std::size_t>(n));
    double level = 0.0;
    for (int k = 0; k < n; ++k) {
        level += rng.normal();
        values[static_cast<std::size_t>(k)] = level;
    }
    return MonthlySeries(start, std::move(values));
}

/// Stationary AR(1): x_t = phi * x_{t-1} + z_t with x_0 = z_0.
inline MonthlySeries ar1_series(double phi, int n, std::uint64_t seed, MonthKey start = MonthKey{2000, 1}) {
    if (n < 1) raise(Errc::InvalidArgument, "need at least one value");
    Prng rng(seed);
    std::vector<double> values(static_cast<std::size_t>(n));
    double x = 0.0;
    for (int k = 0; k < n; ++k) {
        x = phi * x + rng.normal();
        values[static_cast<std::size_t>(k)] = x;
    }
    return MonthlySeries(start, std::move(values));
}

}  // namespace cpishare
