#pragma once

// Shared test utilities: quick series builders and the independent
// normal-equations oracle the QR fit is checked against.

#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "cpishare/catalog.hpp"
#include "cpishare/month.hpp"
#include "cpishare/regression.hpp"
#include "cpishare/series.hpp"

namespace testkit {

using cpishare::MonthKey;
using cpishare::MonthlySeries;

inline MonthlySeries series(MonthKey start, std::vector<double> values) {
    return MonthlySeries(start, std::move(values));
}

/// Price built as an exact model output: b1*cpi1(m-lag1) + b2*cpi2(m-lag2) + c*t + d.
inline MonthlySeries exact_price(const cpishare::CpiCatalog& catalog, const cpishare::ModelSpec& spec,
                                 MonthKey from, MonthKey to) {
    std::vector<double> values;
    for (int k = 0; k <= cpishare::months_between(from, to); ++k) {
        values.push_back(cpishare::evaluate_model(spec, catalog, cpishare::add_months(from, k)));
    }
    return MonthlySeries(from, std::move(values));
}

/// Plain normal-equations least squares: solves (X'X) b = X'y by Gauss-Jordan
/// elimination with partial pivoting. Deliberately a different algorithm and
/// code path from the library's QR solver.
struct NormalEquationsFit {
    std::vector<double> coef;
    double ssr{};
};

inline NormalEquationsFit normal_equations_fit(const std::vector<std::vector<double>>& cols,
                                               const std::vector<double>& y) {
    const std::size_t k = cols.size();
    const std::size_t n = y.size();
    std::vector<std::vector<double>> gram(k, std::vector<double>(k + 1, 0.0));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            double s = 0.0;
            for (std::size_t r = 0; r < n; ++r) s += cols[i][r] * cols[j][r];
            gram[i][j] = s;
        }
        double s = 0.0;
        for (std::size_t r = 0; r < n; ++r) s += cols[i][r] * y[r];
        gram[i][k] = s;
    }
    for (std::size_t col = 0; col < k; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < k; ++r) {
            if (std::abs(gram[r][col]) > std::abs(gram[pivot][col])) pivot = r;
        }
        if (gram[pivot][col] == 0.0) throw std::runtime_error("oracle: singular normal equations");
        std::swap(gram[col], gram[pivot]);
        for (std::size_t r = 0; r < k; ++r) {
            if (r == col) continue;
            double f = gram[r][col] / gram[col][col];
            for (std::size_t c = col; c <= k; ++c) gram[r][c] -= f * gram[col][c];
        }
    }
    NormalEquationsFit fit;
    fit.coef.resize(k);
    for (std::size_t i = 0; i < k; ++i) fit.coef[i] = gram[i][k] / gram[i][i];
    for (std::size_t r = 0; r < n; ++r) {
        double pred = 0.0;
        for (std::size_t i = 0; i < k; ++i) pred += cols[i][r] * fit.coef[i];
        double e = y[r] - pred;
        fit.ssr += e * e;
    }
    return fit;
}

/// The four-column design of a candidate fit, materialized the slow way.
inline std::vector<std::vector<double>> candidate_design(const cpishare::CpiCatalog& catalog,
                                                         const std::string& code1, int lag1,
                                                         const std::string& code2, int lag2, MonthKey start,
                                                         int n) {
    std::vector<std::vector<double>> cols(4, std::vector<double>(static_cast<std::size_t>(n)));
    for (int r = 0; r < n; ++r) {
        MonthKey m = cpishare::add_months(start, r);
        cols[0][static_cast<std::size_t>(r)] = catalog.get(code1).at(cpishare::add_months(m, -lag1));
        cols[1][static_cast<std::size_t>(r)] = catalog.get(code2).at(cpishare::add_months(m, -lag2));
        cols[2][static_cast<std::size_t>(r)] = cpishare::trend_time(m);
        cols[3][static_cast<std::size_t>(r)] = 1.0;
    }
    return cols;
}

}  // namespace testkit
