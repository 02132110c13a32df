#include "sigfolio/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "sigfolio/error.hpp"
#include "sigfolio/kernels.hpp"
#include "sigfolio/linalg.hpp"

namespace sigfolio {

namespace {

const PriceStream& stream_for(const std::vector<PriceStream>& streams, const std::string& symbol) {
    for (const auto& s : streams)
        if (s.symbol == symbol) return s;
    throw Error("no price stream for symbol " + symbol);
}

std::vector<double> weights_as_vector(const CovarianceEstimate& cov, const WeightVector& w) {
    std::vector<double> out;
    out.reserve(cov.size());
    for (const auto& sym : cov.symbols) {
        auto it = w.weights.find(sym);
        out.push_back(it == w.weights.end() ? 0.0 : it->second);
    }
    return out;
}

WeightVector to_weight_vector(const std::vector<std::string>& symbols,
                              const std::vector<double>& w) {
    WeightVector out;
    for (std::size_t i = 0; i < symbols.size(); ++i) out.weights[symbols[i]] = w[i];
    return out;
}

double quad_form(const std::vector<double>& q, const std::vector<double>& w, std::size_t n,
                 std::vector<double>& qw) {
    kernels::matvec(q.data(), w.data(), qw.data(), n, n);
    return kernels::dot(w.data(), qw.data(), n);
}

double pg_residual(const std::vector<double>& q, const std::vector<double>& w, std::size_t n,
                   double eta_ref, std::vector<double>& qw) {
    kernels::matvec(q.data(), w.data(), qw.data(), n, n);
    std::vector<double> trial(n);
    for (std::size_t i = 0; i < n; ++i) trial[i] = w[i] - eta_ref * 2.0 * qw[i];
    const std::vector<double> probe = project_simplex(std::move(trial));
    return std::sqrt(kernels::squared_distance(w.data(), probe.data(), n)) / eta_ref;
}

// Closed-form solve on the face the iterate currently sits on: minimize
// x' Q x subject to sum x = 1 over the active coordinates. Accepted only when
// the solution is feasible, no worse, and stationary; steepest descent alone
// zigzags on ill-conditioned Q and cannot reach the 1e-10 residual budget.
bool polish_on_face(const std::vector<double>& q, std::size_t n, double eta_ref, double tol,
                    std::vector<double>& w) {
    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < n; ++i)
        if (w[i] > 1e-9) active.push_back(i);
    const std::size_t m = active.size();
    if (m == 0) return false;

    // Gaussian elimination with partial pivoting on [Q_A | 1].
    std::vector<double> a(m * (m + 1));
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t c = 0; c < m; ++c) a[r * (m + 1) + c] = q[active[r] * n + active[c]];
        a[r * (m + 1) + m] = 1.0;
    }
    double scale = 0.0;
    for (std::size_t i = 0; i < m * (m + 1); ++i) scale = std::max(scale, std::abs(a[i]));
    for (std::size_t col = 0; col < m; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < m; ++r)
            if (std::abs(a[r * (m + 1) + col]) > std::abs(a[pivot * (m + 1) + col])) pivot = r;
        if (std::abs(a[pivot * (m + 1) + col]) < 1e-13 * std::max(scale, 1e-300)) return false;
        if (pivot != col)
            for (std::size_t c = col; c <= m; ++c)
                std::swap(a[pivot * (m + 1) + c], a[col * (m + 1) + c]);
        const double inv = 1.0 / a[col * (m + 1) + col];
        for (std::size_t r = col + 1; r < m; ++r) {
            const double factor = a[r * (m + 1) + col] * inv;
            for (std::size_t c = col; c <= m; ++c)
                a[r * (m + 1) + c] -= factor * a[col * (m + 1) + c];
        }
    }
    std::vector<double> x(m);
    for (std::size_t r = m; r-- > 0;) {
        double acc = a[r * (m + 1) + m];
        for (std::size_t c = r + 1; c < m; ++c) acc -= a[r * (m + 1) + c] * x[c];
        x[r] = acc / a[r * (m + 1) + r];
    }
    double total = 0.0;
    for (double v : x) total += v;
    if (!(total != 0.0) || !std::isfinite(total)) return false;
    for (double& v : x) v /= total;
    for (double v : x)
        if (!(v >= 0.0)) return false;

    std::vector<double> candidate(n, 0.0);
    for (std::size_t r = 0; r < m; ++r) candidate[active[r]] = x[r];

    std::vector<double> qw(n);
    const double f_old = quad_form(q, w, n, qw);
    const double f_new = quad_form(q, candidate, n, qw);
    if (f_new > f_old + 1e-12 * (1.0 + std::abs(f_old))) return false;
    if (pg_residual(q, candidate, n, eta_ref, qw) >= tol) return false;
    w = std::move(candidate);
    return true;
}

// Projected gradient descent for min x' Q x over the simplex, with
// backtracking on the step and periodic active-face polishing. Q is expected
// trace-normalized (mean diagonal ~ 1) so the tolerance is scale-free.
std::vector<double> pgd_simplex(const std::vector<double>& q, std::size_t n,
                                const SolverOptions& options) {
    std::vector<double> w(n, 1.0 / double(n));
    double lipschitz = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) row += std::abs(q[i * n + j]);
        lipschitz = std::max(lipschitz, 2.0 * row);
    }
    if (lipschitz <= 0.0) return w;  // zero matrix: every point is optimal
    const double eta_ref = 1.0 / lipschitz;

    std::vector<double> grad(n), trial(n), qw(n);
    double eta = eta_ref;
    double residual = 0.0;
    for (int it = 0; it < options.max_iter; ++it) {
        kernels::matvec(q.data(), w.data(), qw.data(), n, n);
        for (std::size_t i = 0; i < n; ++i) grad[i] = 2.0 * qw[i];

        for (std::size_t i = 0; i < n; ++i) trial[i] = w[i] - eta_ref * grad[i];
        const std::vector<double> probe = project_simplex(trial);
        residual = std::sqrt(kernels::squared_distance(w.data(), probe.data(), n)) / eta_ref;
        if (residual < options.tol) return w;

        if (it > 0 && it % 20 == 0 && polish_on_face(q, n, eta_ref, options.tol, w)) return w;

        const double f_w = kernels::dot(w.data(), qw.data(), n);
        eta = std::min(eta * 1.5, 1e6 * eta_ref);
        std::vector<double> next;
        while (true) {
            for (std::size_t i = 0; i < n; ++i) trial[i] = w[i] - eta * grad[i];
            next = project_simplex(trial);
            kernels::matvec(q.data(), next.data(), qw.data(), n, n);
            const double f_next = kernels::dot(next.data(), qw.data(), n);
            double lin = 0.0, dist2 = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double d = next[i] - w[i];
                lin += grad[i] * d;
                dist2 += d * d;
            }
            if (f_next <= f_w + lin + dist2 / (2.0 * eta) + 1e-18) break;
            eta *= 0.5;
            if (eta < 1e-12 * eta_ref) {
                next = probe;
                break;
            }
        }
        w = std::move(next);
    }
    if (polish_on_face(q, n, eta_ref, options.tol, w)) return w;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", residual);
    throw Error(std::string("simplex optimizer did not converge: residual ") + buf + " after " +
                std::to_string(options.max_iter) + " iterations");
}

}  // namespace

ReturnMatrix compute_returns(const std::vector<PriceStream>& streams,
                             const std::vector<std::string>& symbols, Date window_start,
                             Date window_end) {
    if (symbols.empty()) throw Error("compute_returns: empty symbol list");
    if (!(window_start < window_end)) throw Error("compute_returns: empty window");
    ReturnMatrix rm;
    rm.symbols = symbols;
    const std::size_t n = symbols.size();
    const std::size_t rows = std::size_t(window_end - window_start);
    rm.dates.reserve(rows);
    for (Date d = window_start + 1; d <= window_end; ++d) rm.dates.push_back(d);
    rm.data.assign(rows * n, 0.0);
    for (std::size_t c = 0; c < n; ++c) {
        const auto& stream = stream_for(streams, symbols[c]);
        if (!stream.covers_daily(window_start, window_end))
            throw Error("gap in " + symbols[c] + " over return window " +
                        format_date(window_start) + ".." + format_date(window_end));
        const std::size_t base = *stream.index_of(window_start);
        for (std::size_t r = 0; r < rows; ++r) {
            const double prev = stream.observations[base + r].close;
            const double cur = stream.observations[base + r + 1].close;
            rm.data[r * n + c] = cur / prev - 1.0;
        }
    }
    return rm;
}

CovarianceEstimate estimate_covariance(const ReturnMatrix& returns, double ridge) {
    const std::size_t rows = returns.rows();
    const std::size_t n = returns.symbols.size();
    if (rows < kMinCovarianceRows)
        throw Error("covariance needs at least " + std::to_string(kMinCovarianceRows) +
                    " return rows, got " + std::to_string(rows));
    if (ridge < 0.0) throw Error("ridge must be non-negative");

    std::vector<double> mean(n, 0.0);
    for (std::size_t r = 0; r < rows; ++r)
        kernels::axpy(1.0, returns.data.data() + r * n, mean.data(), n);
    for (double& m : mean) m /= double(rows);

    CovarianceEstimate cov;
    cov.symbols = returns.symbols;
    cov.matrix.assign(n * n, 0.0);
    std::vector<double> centered(n);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t j = 0; j < n; ++j) centered[j] = returns.at(r, j) - mean[j];
        kernels::outer_accumulate(cov.matrix.data(), centered.data(), n, centered.data(), n);
    }
    for (double& v : cov.matrix) v /= double(rows);

    double trace = 0.0;
    for (std::size_t i = 0; i < n; ++i) trace += cov.at(i, i);
    const double ridge_term = ridge * trace / double(n);
    for (std::size_t i = 0; i < n; ++i) cov.matrix[i * n + i] += ridge_term;

    cov.sigma.resize(n);
    for (std::size_t i = 0; i < n; ++i) cov.sigma[i] = std::sqrt(std::max(cov.at(i, i), 0.0));
    return cov;
}

WeightVector equal_weight(const std::vector<std::string>& symbols) {
    if (symbols.empty()) throw Error("equal_weight: empty symbol list");
    WeightVector w;
    const double v = 1.0 / double(symbols.size());
    for (const auto& s : symbols) w.weights[s] = v;
    return w;
}

WeightVector min_variance(const CovarianceEstimate& cov, const SolverOptions& options) {
    const std::size_t n = cov.size();
    if (n == 0) throw Error("min_variance: empty covariance");
    double trace = 0.0;
    for (std::size_t i = 0; i < n; ++i) trace += cov.at(i, i);
    if (trace <= 0.0) {
        // Zero covariance: every simplex point has zero variance.
        return equal_weight(cov.symbols);
    }
    const double tau = trace / double(n);
    std::vector<double> q(cov.matrix);
    for (double& v : q) v /= tau;
    return to_weight_vector(cov.symbols, pgd_simplex(q, n, options));
}

WeightVector max_diversification(const CovarianceEstimate& cov, const SolverOptions& options) {
    const std::size_t n = cov.size();
    if (n == 0) throw Error("max_diversification: empty covariance");
    for (std::size_t i = 0; i < n; ++i)
        if (!(cov.sigma[i] > 0.0))
            throw Error("max_diversification: degenerate asset " + cov.symbols[i] +
                        " with zero volatility");
    // Volatility-normalized covariance (the correlation matrix); minimum
    // variance on it maximizes the diversification ratio after mapping back.
    std::vector<double> corr(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            corr[i * n + j] = cov.at(i, j) / (cov.sigma[i] * cov.sigma[j]);
    const std::vector<double> y = pgd_simplex(corr, n, options);
    std::vector<double> w(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        w[i] = y[i] / cov.sigma[i];
        total += w[i];
    }
    for (double& v : w) v /= total;
    return to_weight_vector(cov.symbols, w);
}

double portfolio_variance(const CovarianceEstimate& cov, const WeightVector& w) {
    const std::vector<double> x = weights_as_vector(cov, w);
    const std::size_t n = cov.size();
    std::vector<double> sx(n);
    kernels::matvec(cov.matrix.data(), x.data(), sx.data(), n, n);
    return kernels::dot(x.data(), sx.data(), n);
}

double diversification_ratio(const CovarianceEstimate& cov, const WeightVector& w) {
    const std::vector<double> x = weights_as_vector(cov, w);
    const double num = kernels::dot(x.data(), cov.sigma.data(), cov.size());
    const double var = portfolio_variance(cov, w);
    if (var <= 0.0) throw Error("diversification ratio undefined for zero-variance portfolio");
    return num / std::sqrt(var);
}

}  // namespace sigfolio
