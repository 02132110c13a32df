#pragma once

#include <map>
#include <string>
#include <vector>

#include "sigfolio/data.hpp"

namespace sigfolio {

// Daily simple returns close_t/close_{t-1} - 1, one column per symbol, no
// missing entries. The first window date is consumed as the basis.
struct ReturnMatrix {
    std::vector<std::string> symbols;
    std::vector<Date> dates;   // one per return row
    std::vector<double> data;  // row-major rows() x symbols.size()

    std::size_t rows() const { return dates.size(); }
    double at(std::size_t row, std::size_t col) const {
        return data[row * symbols.size() + col];
    }
};

struct CovarianceEstimate {
    std::vector<std::string> symbols;
    std::vector<double> matrix;  // row-major n x n, symmetric
    std::vector<double> sigma;   // per-asset volatility, sqrt(diagonal)

    std::size_t size() const { return symbols.size(); }
    double at(std::size_t i, std::size_t j) const { return matrix[i * size() + j]; }
};

// Non-negative weights summing to one.
struct WeightVector {
    std::map<std::string, double> weights;
};

// Covariance rows below this count are considered too noisy to optimize on.
inline constexpr std::size_t kMinCovarianceRows = 15;

ReturnMatrix compute_returns(const std::vector<PriceStream>& streams,
                             const std::vector<std::string>& symbols, Date window_start,
                             Date window_end);

// Population-normalized sample covariance plus ridge * (trace/n) on the
// diagonal. Requires at least kMinCovarianceRows rows.
CovarianceEstimate estimate_covariance(const ReturnMatrix& returns, double ridge);

WeightVector equal_weight(const std::vector<std::string>& symbols);

struct SolverOptions {
    int max_iter = 10000;
    double tol = 1e-10;  // projected-gradient norm on the trace-normalized problem
};

// Long-only global minimum-variance portfolio: minimize w' Sigma w over the
// simplex by projected gradient descent with backtracking. Throws Error on
// non-convergence (with the residual in the message).
WeightVector min_variance(const CovarianceEstimate& cov, const SolverOptions& options = {});

// Long-only maximum-diversification portfolio: maximize (w'sigma)/sqrt(w'Sigma w).
// Solved by minimum variance on the volatility-normalized covariance, mapped
// back through w_i = y_i / sigma_i and renormalized.
WeightVector max_diversification(const CovarianceEstimate& cov,
                                 const SolverOptions& options = {});

// (w' sigma) / sqrt(w' Sigma w) for weights aligned with cov.symbols.
double diversification_ratio(const CovarianceEstimate& cov, const WeightVector& w);

// w' Sigma w for weights aligned with cov.symbols.
double portfolio_variance(const CovarianceEstimate& cov, const WeightVector& w);

}  // namespace sigfolio
