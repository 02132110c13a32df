#pragma once

// Independent oracles for the test suites. Everything here deliberately
// avoids the library's closed-form signature path: the signature oracle
// evaluates the iterated integrals directly by quadrature on a refined grid.

#include <cstdint>
#include <random>
#include <vector>

#include "sigfolio/allocation.hpp"
#include "sigfolio/clustering.hpp"
#include "sigfolio/signature.hpp"

namespace sigfolio::testing {

// Iterated integrals of a polyline by cumulative trapezoidal sums on a grid
// with `substeps` sub-intervals per segment. Returns the flattened
// coefficients (levels 1..level) in the library's word order.
std::vector<double> riemann_signature(const PiecewiseLinearPath& path, int level, int substeps);

// Quadratic variation of a scalar stream: sum of squared increments.
double quadratic_variation(const std::vector<double>& values);

// O(n^2) drawdown over every (peak, trough) pair.
double drawdown_bruteforce(const std::vector<double>& values);

// Recomputes the k-means loss from a model's assignments and centroids.
double kmeans_loss(const ClusterModel& model, const std::vector<FeatureVector>& points);

// Deterministic uniform in [0, 1) from the raw 64-bit stream.
double u01(std::mt19937_64& rng);

// Uniform point on the probability simplex (exponential spacings).
std::vector<double> random_simplex_point(std::mt19937_64& rng, std::size_t n);

// Random PSD covariance A A^T / n with N(0,1)-ish entries.
CovarianceEstimate random_covariance(std::mt19937_64& rng, std::size_t n,
                                     const std::vector<std::string>& symbols);

// Random piecewise-linear path in d dimensions with per-segment coordinate
// increments uniform in [-1, 1].
PiecewiseLinearPath random_path(std::mt19937_64& rng, int dim, int segments);

}  // namespace sigfolio::testing
