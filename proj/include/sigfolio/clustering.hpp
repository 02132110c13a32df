#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sigfolio/signature.hpp"

namespace sigfolio {

// Per-coordinate affine rescaling fitted across one date's asset set.
// Signature coefficients span several orders of magnitude across levels, so
// k-means runs on standardized features. Population standard deviation;
// coordinates with stdev below the floor are zeroed instead of divided.
class Standardizer {
public:
    static constexpr double kStdevFloor = 1e-12;

    static Standardizer fit(const std::vector<FeatureVector>& features);

    std::vector<double> apply(const std::vector<double>& values) const;
    std::vector<double> invert(const std::vector<double>& standardized) const;

    const std::vector<double>& mean() const { return mean_; }
    const std::vector<double>& stdev() const { return stdev_; }

private:
    std::vector<double> mean_;
    std::vector<double> stdev_;
};

// fit + apply over a whole feature set.
std::pair<Standardizer, std::vector<FeatureVector>> standardize(
    const std::vector<FeatureVector>& features);

struct ClusterModel {
    int k = 0;
    std::vector<std::vector<double>> centroids;  // centroid of cluster j at index j-1
    std::map<std::string, int> assignments;      // symbol -> cluster index in 1..k
    int iterations_run = 0;
    double final_loss = 0.0;
    std::vector<double> loss_history;  // loss after each assign+update iteration
};

struct KMeansOptions {
    int max_iter = 300;
    double tol = 1e-8;  // max centroid displacement
};

// Lloyd iterations with k-means++ seeding from a seeded deterministic
// generator. Ties in assignment go to the lowest cluster index; a cluster
// that empties out is reseeded to the point farthest from its centroid.
// Bitwise deterministic for fixed inputs and seed.
ClusterModel kmeans_fit(const std::vector<FeatureVector>& points, int k, std::uint64_t seed,
                        const KMeansOptions& options = {});

// Cluster index (1..k) -> symbol of the member closest to the centroid.
// Ties break to the lexicographically smallest symbol; empty clusters are
// absent from the map.
using Representatives = std::map<int, std::string>;

Representatives select_representatives(const ClusterModel& model,
                                       const std::vector<FeatureVector>& standardized_points);

// Projection onto the top-2 principal components of the sample covariance,
// for cluster scatter reports. Components ordered by descending eigenvalue;
// each component's largest-magnitude loading is made positive.
std::vector<std::array<double, 2>> project_2d(const std::vector<FeatureVector>& points);

}  // namespace sigfolio
