#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "cpishare/catalog.hpp"
#include "cpishare/errors.hpp"
#include "cpishare/month.hpp"
#include "cpishare/parallel.hpp"
#include "cpishare/regression.hpp"
#include "cpishare/series.hpp"

namespace cpishare {

struct SearchConfig {
    MonthKey start{2003, 7};
    MonthKey anchor{};
    int max_lag = 11;
    int max_lead = 8;
    MonthKey latest_cpi{};  // newest month with published index values
    int top_k = 10;
    int min_obs = 60;
};

/// Lead cap actually usable at this anchor: an index can only lag the price
/// as far as published data reaches past the anchor month.
inline int effective_lead(const SearchConfig& cfg) {
    return std::max(0, std::min(cfg.max_lead, months_between(cfg.anchor, cfg.latest_cpi)));
}

struct Candidate {
    std::string code1;
    std::string code2;
    int lag1{};
    int lag2{};
};

struct SearchResult {
    FitResult best;
    std::vector<FitResult> ranked;  // ascending sterr, deterministic tie-break
    std::size_t n_candidates{};
    std::size_t n_rejected{};
};

namespace detail {

/// Maps a flat candidate index to (pair, lag, lag). Pairs run over sorted code
/// indices i < j with i outer, lags run lag_lo..lag_hi each, lag1 outer. This
/// fixed order is the canonical enumeration and the tie-break's last resort.
struct CandidateGrid {
    std::size_t n_codes{};
    int lag_lo{};  // -effective lead
    int lag_hi{};  //  max lag

    std::size_t lag_count() const { return static_cast<std::size_t>(lag_hi - lag_lo + 1); }
    std::size_t pair_count() const { return n_codes * (n_codes - 1) / 2; }
    std::size_t total() const { return pair_count() * lag_count() * lag_count(); }

    struct Decoded {
        std::size_t i, j;
        int lag1, lag2;
    };

    Decoded decode(std::size_t idx) const {
        std::size_t L = lag_count();
        std::size_t pair = idx / (L * L);
        std::size_t rem = idx % (L * L);
        int lag1 = lag_lo + static_cast<int>(rem / L);
        int lag2 = lag_lo + static_cast<int>(rem % L);
        // invert pair index for i < j listed row-major
        std::size_t i = 0;
        std::size_t row_len = n_codes - 1;
        while (pair >= row_len) {
            pair -= row_len;
            ++i;
            --row_len;
        }
        return {i, i + 1 + pair, lag1, lag2};
    }
};

struct CandidateKey {
    double sterr;
    int abs_lag_sum;
    std::size_t i, j;
    int lag1, lag2;
};

/// Ranking order: smallest sterr first; ties within 1e-12 relative prefer the
/// smaller |lag1|+|lag2|, then the lexicographically earlier pair, then the
/// smaller (lag1, lag2).
inline bool candidate_better(const CandidateKey& a, const CandidateKey& b) {
    double diff = a.sterr - b.sterr;
    double tol = 1e-12 * std::max(std::abs(a.sterr), std::abs(b.sterr));
    if (std::abs(diff) > tol) return diff < 0.0;
    if (a.abs_lag_sum != b.abs_lag_sum) return a.abs_lag_sum < b.abs_lag_sum;
    if (a.i != b.i) return a.i < b.i;
    if (a.j != b.j) return a.j < b.j;
    if (a.lag1 != b.lag1) return a.lag1 < b.lag1;
    return a.lag2 < b.lag2;
}

}  // namespace detail

/// All distinct unordered code pairs crossed with every admissible lag
/// combination, in canonical order (code1 < code2 lexicographically).
inline std::vector<Candidate> enumerate_candidates(const CpiCatalog& catalog, const SearchConfig& cfg) {
    if (catalog.size() < 2) raise(Errc::EmptyCatalog, "need at least two index series to form a pair");
    std::vector<std::string> codes = catalog.codes();
    detail::CandidateGrid grid{codes.size(), -effective_lead(cfg), cfg.max_lag};
    std::vector<Candidate> out;
    out.reserve(grid.total());
    for (std::size_t idx = 0; idx < grid.total(); ++idx) {
        auto d = grid.decode(idx);
        out.push_back({codes[d.i], codes[d.j], d.lag1, d.lag2});
    }
    return out;
}

/// Exhaustive best-fit search over enumerate_candidates. Candidate fits run in
/// parallel; selection is a single deterministic pass over the per-candidate
/// errors, so the result does not depend on the worker count.
inline SearchResult best_fit_search(const MonthlySeries& price, const CpiCatalog& catalog, const SearchConfig& cfg,
                                    int threads = 0) {
    if (catalog.size() < 2) raise(Errc::EmptyCatalog, "need at least two index series to form a pair");
    const int n = months_between(cfg.start, cfg.anchor) + 1;
    if (n < cfg.min_obs || n <= kNumCoefficients) {
        raise(Errc::InsufficientData, "window holds " + std::to_string(n) + " months, need at least " +
                                          std::to_string(std::max(cfg.min_obs, kNumCoefficients + 1)));
    }
    if (!price.covers(cfg.start, cfg.anchor)) {
        raise(Errc::InsufficientData,
              "price series does not cover " + format_month(cfg.start) + ".." + format_month(cfg.anchor));
    }

    std::vector<std::string> codes = catalog.codes();
    detail::CandidateGrid grid{codes.size(), -effective_lead(cfg), cfg.max_lag};
    const std::size_t total = grid.total();

    // Admissible lag range per code, from its data span: the fit needs values
    // on [start - lag, anchor - lag].
    const int start_idx = month_index(cfg.start);
    const int anchor_idx = month_index(cfg.anchor);
    std::vector<const MonthlySeries*> series(codes.size());
    std::vector<int> code_lag_lo(codes.size()), code_lag_hi(codes.size());
    for (std::size_t i = 0; i < codes.size(); ++i) {
        series[i] = &catalog.get(codes[i]);
        code_lag_lo[i] = anchor_idx - month_index(series[i]->end());
        code_lag_hi[i] = start_idx - month_index(series[i]->start());
    }

    auto y = price.window(cfg.start, n);
    const double rejected = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> sterr(total, rejected);

    parallel_blocks(total, threads, 2048, [&](std::size_t begin, std::size_t end) {
        detail::FitWorkspace ws;
        ws.prepare_window(cfg.start, n);
        for (std::size_t idx = begin; idx < end; ++idx) {
            auto d = grid.decode(idx);
            if (d.lag1 < code_lag_lo[d.i] || d.lag1 > code_lag_hi[d.i]) continue;
            if (d.lag2 < code_lag_lo[d.j] || d.lag2 > code_lag_hi[d.j]) continue;
            auto c1 = series[d.i]->window(add_months(cfg.start, -d.lag1), n);
            auto c2 = series[d.j]->window(add_months(cfg.start, -d.lag2), n);
            detail::CoreFit core = detail::fit_core(y, c1, c2, ws);
            if (core.rcond < kRankDeficientRcond) continue;
            sterr[idx] = std::sqrt(core.ssr / (n - kNumCoefficients));
        }
    });

    // Deterministic selection pass in canonical index order.
    auto key_of = [&](std::size_t idx) {
        auto d = grid.decode(idx);
        return detail::CandidateKey{sterr[idx], std::abs(d.lag1) + std::abs(d.lag2), d.i, d.j, d.lag1, d.lag2};
    };
    const std::size_t want = cfg.top_k > 0 ? static_cast<std::size_t>(cfg.top_k) : 1;
    std::vector<std::pair<detail::CandidateKey, std::size_t>> top;  // kept sorted, best first
    top.reserve(want + 1);
    std::size_t n_rejected = 0;
    for (std::size_t idx = 0; idx < total; ++idx) {
        if (std::isnan(sterr[idx])) {
            ++n_rejected;
            continue;
        }
        detail::CandidateKey key = key_of(idx);
        if (top.size() == want && !detail::candidate_better(key, top.back().first)) continue;
        auto pos = top.begin();
        while (pos != top.end() && detail::candidate_better(pos->first, key)) ++pos;
        top.insert(pos, {key, idx});
        if (top.size() > want) top.pop_back();
    }
    if (top.empty()) {
        raise(Errc::NoFeasibleCandidate, "all " + std::to_string(total) + " candidates were rejected");
    }

    SearchResult out{FitResult{ModelSpec{}, MonthlySeries(cfg.start, {0.0}), 0, 0, 0, 0}, {}, total, n_rejected};
    out.ranked.reserve(top.size());
    for (const auto& [key, idx] : top) {
        auto d = grid.decode(idx);
        out.ranked.push_back(fit_candidate(price, catalog, codes[d.i], d.lag1, codes[d.j], d.lag2, cfg.start,
                                           cfg.anchor, cfg.min_obs));
    }
    out.best = out.ranked.front();
    return out;
}

}  // namespace cpishare
