#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cpishare/errors.hpp"
#include "cpishare/search.hpp"

namespace cpishare {

/// Re-runs the best-fit search for a window of consecutive anchor months.
/// Earlier anchors admit more leading-index candidates (published data reaches
/// further past them), so their candidate sets are supersets of later ones.
struct StabilityReport {
    struct AnchorOutcome {
        MonthKey anchor{};
        std::optional<FitResult> best;
        std::string error;  // set when the search at this anchor failed
        std::size_t n_candidates{};
        std::size_t n_rejected{};
    };

    template <typename T>
    struct Range {
        T lo{};
        T hi{};
    };

    std::vector<AnchorOutcome> anchors;  // oldest first, newest last
    bool pair_consistent{};              // every anchor succeeded with one unordered pair
    std::pair<std::string, std::string> majority_pair;
    int majority_count{};

    // Ranges across the anchors that selected the majority pair.
    Range<int> lag1_drift, lag2_drift;
    Range<double> b1_drift, b2_drift, c_drift, d_drift, sterr_drift;
};

inline StabilityReport backtrack_models(const MonthlySeries& price, const CpiCatalog& catalog, MonthKey anchor,
                                        int window, const SearchConfig& base, int threads = 0) {
    if (window < 2) raise(Errc::InvalidArgument, "stability window must span at least two months");

    StabilityReport report;
    for (int k = window - 1; k >= 0; --k) {
        StabilityReport::AnchorOutcome outcome;
        outcome.anchor = add_months(anchor, -k);
        SearchConfig cfg = base;
        cfg.anchor = outcome.anchor;
        try {
            SearchResult r = best_fit_search(price, catalog, cfg, threads);
            outcome.best = std::move(r.best);
            outcome.n_candidates = r.n_candidates;
            outcome.n_rejected = r.n_rejected;
        } catch (const Error& e) {
            outcome.error = e.what();
        }
        report.anchors.push_back(std::move(outcome));
    }

    std::map<std::pair<std::string, std::string>, int> pair_votes;
    int successes = 0;
    for (const auto& a : report.anchors) {
        if (!a.best) continue;
        ++successes;
        ++pair_votes[{a.best->spec.code1, a.best->spec.code2}];
    }
    report.pair_consistent = successes == static_cast<int>(report.anchors.size()) && pair_votes.size() == 1;
    for (const auto& [pair, count] : pair_votes) {
        if (count > report.majority_count) {  // map order makes ties land on the earlier pair
            report.majority_count = count;
            report.majority_pair = pair;
        }
    }

    bool first = true;
    for (const auto& a : report.anchors) {
        if (!a.best) continue;
        const auto& s = a.best->spec;
        if (std::pair{s.code1, s.code2} != report.majority_pair) continue;
        auto widen = [&](auto& range, auto v) {
            if (first) {
                range.lo = range.hi = v;
            } else {
                range.lo = std::min(range.lo, v);
                range.hi = std::max(range.hi, v);
            }
        };
        widen(report.lag1_drift, s.lag1);
        widen(report.lag2_drift, s.lag2);
        widen(report.b1_drift, s.b1);
        widen(report.b2_drift, s.b2);
        widen(report.c_drift, s.c);
        widen(report.d_drift, s.d);
        widen(report.sterr_drift, a.best->sterr);
        first = false;
    }
    return report;
}

enum class ReliabilityMode { Strict, Majority };

/// Strict: the defining pair is identical across every anchor in the window.
/// Majority: the most common pair appears at least `quorum` times
/// (quorum <= 0 means window - 1), tolerating a single-month fluctuation.
inline bool reliability_verdict(const StabilityReport& report, ReliabilityMode mode, int quorum = 0) {
    if (mode == ReliabilityMode::Strict) return report.pair_consistent;
    if (quorum <= 0) quorum = static_cast<int>(report.anchors.size()) - 1;
    return report.majority_count >= quorum;
}

}  // namespace cpishare
