#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cpishare/catalog.hpp"
#include "cpishare/errors.hpp"
#include "cpishare/regression.hpp"
#include "cpishare/series.hpp"

namespace cpishare {

/// Assumed future index levels per code. Must cover every (month - lag)
/// lookup a projected model performs, i.e. the horizon plus the lag reach.
using ScenarioPath = CpiCatalog;

/// b1 / b2 — how the two defining indices trade off inside a model.
inline double coefficient_ratio(const ModelSpec& spec) {
    if (spec.b2 == 0.0) raise(Errc::ZeroDenominator, "b2 is zero");
    return spec.b1 / spec.b2;
}

struct UnitSensitivity {
    double dollars_per_unit{};  // price change per one-unit move of the first index
    double percent_per_unit{};  // the same move relative to the current price
};

inline UnitSensitivity unit_sensitivity(const ModelSpec& spec, double current_price) {
    if (!(current_price > 0.0)) raise(Errc::NonPositivePrice, "current price must be positive");
    return {spec.b1, 100.0 * spec.b1 / current_price};
}

/// Applies the model forward over [from, to] using the path's index levels.
inline MonthlySeries project_price(const ModelSpec& spec, const ScenarioPath& path, MonthKey from, MonthKey to) {
    if (to < from) raise(Errc::InvalidArgument, "projection range is empty");
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(months_between(from, to) + 1));
    for (int k = 0; k <= months_between(from, to); ++k) {
        values.push_back(evaluate_model(spec, path, add_months(from, k)));
    }
    return MonthlySeries(from, std::move(values));
}

struct ComparedModel {
    std::string label;
    double entry_price{};
    double end_price{};
    double return_pct{};  // (end - entry) / entry * 100
};

/// Projects every labeled model over the horizon and ranks them by the
/// percent return from entry to the horizon's end, best first. Equal returns
/// keep the input label order.
inline std::vector<ComparedModel> compare_models(const std::vector<std::pair<std::string, ModelSpec>>& specs,
                                                 const ScenarioPath& path, MonthKey from, MonthKey to,
                                                 const std::map<std::string, double>& entry_prices) {
    std::vector<ComparedModel> out;
    out.reserve(specs.size());
    for (const auto& [label, spec] : specs) {
        auto it = entry_prices.find(label);
        if (it == entry_prices.end()) raise(Errc::InvalidArgument, "no entry price for label '" + label + "'");
        if (!(it->second > 0.0)) raise(Errc::NonPositivePrice, "entry price for '" + label + "' must be positive");
        MonthlySeries projected = project_price(spec, path, from, to);
        double end_price = projected.at(to);
        out.push_back({label, it->second, end_price, 100.0 * (end_price - it->second) / it->second});
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const ComparedModel& a, const ComparedModel& b) { return a.return_pct > b.return_pct; });
    return out;
}

}  // namespace cpishare
