#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "cpishare/errors.hpp"

namespace cpishare {

/// Output of a dense least-squares solve.
struct LstsqResult {
    std::vector<double> coef;        // one per input column
    std::vector<double> coef_se;     // filled only when requested
    double ssr{};                    // residual sum of squares, original scale
    double rcond{};                  // min|R_ii| / max|R_ii| of the column-equilibrated R
    std::size_t n_rows{};
};

/// Reusable buffers so repeated solves (the candidate scan) do not allocate.
class LstsqWorkspace {
public:
    std::vector<double> a;      // n x k, column-major, destroyed by the factorization
    std::vector<double> qty;    // Q^T y
    std::vector<double> scale;  // column 2-norms
    std::vector<double> rinv;   // k x k upper triangle of R^{-1}
    std::vector<double> resid;  // residuals, original scale
};

/// Least squares min ||X b - y|| by Householder QR with column equilibration.
///
/// Columns are scaled to unit 2-norm before factorization; rcond of the scaled
/// R diagonal is reported so callers can reject near-singular designs.
/// Residuals are recomputed from the original columns, so coef/ssr are exact
/// functions of the inputs regardless of the scaling.
inline LstsqResult lstsq(std::span<const std::span<const double>> cols, std::span<const double> y,
                         bool with_se, LstsqWorkspace& ws) {
    const std::size_t n = y.size();
    const std::size_t k = cols.size();
    if (k == 0 || n < k) raise(Errc::InsufficientData, "least squares needs more rows than columns");
    for (const auto& c : cols) {
        if (c.size() != n) raise(Errc::InvalidArgument, "column length mismatch in least squares");
    }

    ws.a.resize(n * k);
    ws.qty.assign(y.begin(), y.end());
    ws.scale.resize(k);

    for (std::size_t j = 0; j < k; ++j) {
        double norm = 0.0;
        for (std::size_t i = 0; i < n; ++i) norm += cols[j][i] * cols[j][i];
        norm = std::sqrt(norm);
        double s = norm > 0.0 ? 1.0 / norm : 1.0;
        ws.scale[j] = norm > 0.0 ? norm : 1.0;
        double* col = ws.a.data() + j * n;
        for (std::size_t i = 0; i < n; ++i) col[i] = cols[j][i] * s;
    }

    // Householder triangularization, reflectors applied to remaining columns and to y.
    for (std::size_t j = 0; j < k; ++j) {
        double* col = ws.a.data() + j * n;
        double norm = 0.0;
        for (std::size_t i = j; i < n; ++i) norm += col[i] * col[i];
        norm = std::sqrt(norm);
        if (norm == 0.0) continue;  // zero trailing column; R_jj stays 0 and rcond flags it
        double alpha = col[j] > 0.0 ? -norm : norm;
        double v0 = col[j] - alpha;
        double vnorm2 = v0 * v0;
        for (std::size_t i = j + 1; i < n; ++i) vnorm2 += col[i] * col[i];
        col[j] = v0;  // column j below the diagonal temporarily holds v
        if (vnorm2 > 0.0) {
            for (std::size_t m = j + 1; m < k; ++m) {
                double* target = ws.a.data() + m * n;
                double dot = 0.0;
                for (std::size_t i = j; i < n; ++i) dot += col[i] * target[i];
                double f = 2.0 * dot / vnorm2;
                for (std::size_t i = j; i < n; ++i) target[i] -= f * col[i];
            }
            double dot = 0.0;
            for (std::size_t i = j; i < n; ++i) dot += col[i] * ws.qty[i];
            double f = 2.0 * dot / vnorm2;
            for (std::size_t i = j; i < n; ++i) ws.qty[i] -= f * col[i];
        }
        col[j] = alpha;  // R_jj
    }

    double dmin = std::abs(ws.a[0]);
    double dmax = dmin;
    for (std::size_t j = 1; j < k; ++j) {
        double d = std::abs(ws.a[j * n + j]);
        dmin = std::min(dmin, d);
        dmax = std::max(dmax, d);
    }

    LstsqResult out;
    out.n_rows = n;
    out.rcond = dmax > 0.0 ? dmin / dmax : 0.0;
    out.coef.assign(k, 0.0);
    if (out.rcond > 0.0) {
        // back-substitute R b~ = (Q^T y)[0:k], then undo the column scaling
        for (std::size_t j = k; j-- > 0;) {
            double v = ws.qty[j];
            for (std::size_t m = j + 1; m < k; ++m) v -= ws.a[m * n + j] * out.coef[m];
            out.coef[j] = v / ws.a[j * n + j];
        }
        for (std::size_t j = 0; j < k; ++j) out.coef[j] /= ws.scale[j];
    }

    ws.resid.resize(n);
    double ssr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double fit = 0.0;
        for (std::size_t j = 0; j < k; ++j) fit += cols[j][i] * out.coef[j];
        double r = y[i] - fit;
        ws.resid[i] = r;
        ssr += r * r;
    }
    out.ssr = ssr;

    if (with_se && out.rcond > 0.0 && n > k) {
        // se_j = s * ||row j of R^{-1}||, unscaled; s^2 = ssr / (n - k)
        ws.rinv.assign(k * k, 0.0);
        for (std::size_t j = 0; j < k; ++j) {
            ws.rinv[j * k + j] = 1.0 / ws.a[j * n + j];
            for (std::size_t i = j; i-- > 0;) {
                double v = 0.0;
                for (std::size_t m = i + 1; m <= j; ++m) v += ws.a[m * n + i] * ws.rinv[j * k + m];
                ws.rinv[j * k + i] = -v / ws.a[i * n + i];
            }
        }
        double s2 = ssr / static_cast<double>(n - k);
        out.coef_se.assign(k, 0.0);
        for (std::size_t i = 0; i < k; ++i) {
            double row2 = 0.0;
            for (std::size_t j = i; j < k; ++j) {
                double v = ws.rinv[j * k + i];
                row2 += v * v;
            }
            out.coef_se[i] = std::sqrt(s2 * row2) / ws.scale[i];
        }
    }
    return out;
}

}  // namespace cpishare
