#include "sigfolio/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "sigfolio/error.hpp"
#include "sigfolio/kernels.hpp"
#include "sigfolio/linalg.hpp"

namespace sigfolio {

namespace {

// Uniform double in [0, 1) from the raw 64-bit stream; avoids the
// implementation-defined std::uniform_real_distribution so fits are
// reproducible bit for bit.
double next_u01(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }

std::size_t check_features(const std::vector<FeatureVector>& features, std::size_t min_count) {
    if (features.size() < min_count)
        throw Error("need at least " + std::to_string(min_count) + " feature vectors");
    const std::size_t dim = features.front().values.size();
    for (const auto& f : features)
        if (f.values.size() != dim) throw Error("feature vectors must share one length");
    return dim;
}

}  // namespace

Standardizer Standardizer::fit(const std::vector<FeatureVector>& features) {
    const std::size_t dim = check_features(features, 2);
    const double n = double(features.size());
    Standardizer s;
    s.mean_.assign(dim, 0.0);
    s.stdev_.assign(dim, 0.0);
    for (const auto& f : features)
        for (std::size_t j = 0; j < dim; ++j) s.mean_[j] += f.values[j];
    for (double& m : s.mean_) m /= n;
    for (const auto& f : features)
        for (std::size_t j = 0; j < dim; ++j) {
            const double d = f.values[j] - s.mean_[j];
            s.stdev_[j] += d * d;
        }
    for (double& v : s.stdev_) v = std::sqrt(v / n);
    return s;
}

std::vector<double> Standardizer::apply(const std::vector<double>& values) const {
    if (values.size() != mean_.size()) throw Error("standardizer dimension mismatch");
    std::vector<double> out(values.size());
    for (std::size_t j = 0; j < values.size(); ++j)
        out[j] = stdev_[j] < kStdevFloor ? 0.0 : (values[j] - mean_[j]) / stdev_[j];
    return out;
}

std::vector<double> Standardizer::invert(const std::vector<double>& standardized) const {
    if (standardized.size() != mean_.size()) throw Error("standardizer dimension mismatch");
    std::vector<double> out(standardized.size());
    for (std::size_t j = 0; j < standardized.size(); ++j)
        out[j] = stdev_[j] < kStdevFloor ? mean_[j] : standardized[j] * stdev_[j] + mean_[j];
    return out;
}

std::pair<Standardizer, std::vector<FeatureVector>> standardize(
    const std::vector<FeatureVector>& features) {
    Standardizer s = Standardizer::fit(features);
    std::vector<FeatureVector> out;
    out.reserve(features.size());
    for (const auto& f : features) out.push_back({f.symbol, s.apply(f.values)});
    return {std::move(s), std::move(out)};
}

ClusterModel kmeans_fit(const std::vector<FeatureVector>& points, int k, std::uint64_t seed,
                        const KMeansOptions& options) {
    const std::size_t n = points.size();
    if (k < 1) throw Error("k must be >= 1");
    if (n < std::size_t(k)) throw Error("k exceeds the number of points");
    if (!(options.tol > 0.0)) throw Error("tolerance must be positive");
    const std::size_t dim = check_features(points, 1);

    std::mt19937_64 rng(seed);
    std::vector<std::vector<double>> centroids;
    centroids.reserve(std::size_t(k));
    std::vector<char> chosen(n, 0);

    // k-means++ seeding: first centroid uniform, the rest D^2-weighted.
    {
        const std::size_t first = std::min(n - 1, std::size_t(next_u01(rng) * double(n)));
        centroids.push_back(points[first].values);
        chosen[first] = 1;
        std::vector<double> d2(n);
        for (std::size_t i = 0; i < n; ++i)
            d2[i] = kernels::squared_distance(points[i].values.data(),
                                              centroids[0].data(), dim);
        while (centroids.size() < std::size_t(k)) {
            const double total = kernels::sum(d2.data(), n);
            std::size_t pick = n;
            if (total > 0.0) {
                const double r = next_u01(rng) * total;
                double cum = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    cum += d2[i];
                    if (cum > r && d2[i] > 0.0) {
                        pick = i;
                        break;
                    }
                }
                if (pick == n) {  // numeric edge: fall back to the last positive weight
                    for (std::size_t i = n; i-- > 0;)
                        if (d2[i] > 0.0) {
                            pick = i;
                            break;
                        }
                }
            }
            if (pick == n) {  // all remaining points coincide with a centroid
                for (std::size_t i = 0; i < n; ++i)
                    if (!chosen[i]) {
                        pick = i;
                        break;
                    }
            }
            chosen[pick] = 1;
            centroids.push_back(points[pick].values);
            const auto& c = centroids.back();
            for (std::size_t i = 0; i < n; ++i)
                d2[i] = std::min(d2[i],
                                 kernels::squared_distance(points[i].values.data(), c.data(), dim));
        }
    }

    std::vector<int> assign(n, 0);
    std::vector<std::vector<double>> next(std::size_t(k), std::vector<double>(dim, 0.0));
    std::vector<std::size_t> counts(std::size_t(k), 0);
    ClusterModel model;
    model.k = k;

    int iter = 0;
    for (; iter < options.max_iter; ++iter) {
        // Assignment: nearest centroid, ties to the lowest index.
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            int best_j = 0;
            for (int j = 0; j < k; ++j) {
                const double d = kernels::squared_distance(points[i].values.data(),
                                                           centroids[std::size_t(j)].data(), dim);
                if (d < best) {
                    best = d;
                    best_j = j;
                }
            }
            assign[i] = best_j;
        }

        // Update: mean of members; empty clusters reseed to the point
        // farthest from their current centroid.
        for (int j = 0; j < k; ++j) {
            std::fill(next[std::size_t(j)].begin(), next[std::size_t(j)].end(), 0.0);
            counts[std::size_t(j)] = 0;
        }
        for (std::size_t i = 0; i < n; ++i) {
            auto& acc = next[std::size_t(assign[i])];
            kernels::axpy(1.0, points[i].values.data(), acc.data(), dim);
            ++counts[std::size_t(assign[i])];
        }
        for (int j = 0; j < k; ++j) {
            auto& c = next[std::size_t(j)];
            if (counts[std::size_t(j)] > 0) {
                const double inv = 1.0 / double(counts[std::size_t(j)]);
                for (double& x : c) x *= inv;
            } else {
                std::size_t far_i = 0;
                double far_d = -1.0;
                for (std::size_t i = 0; i < n; ++i) {
                    const double d = kernels::squared_distance(
                        points[i].values.data(), centroids[std::size_t(j)].data(), dim);
                    if (d > far_d) {
                        far_d = d;
                        far_i = i;
                    }
                }
                c = points[far_i].values;
            }
        }

        double movement = 0.0;
        for (int j = 0; j < k; ++j)
            movement = std::max(movement,
                                std::sqrt(kernels::squared_distance(
                                    centroids[std::size_t(j)].data(),
                                    next[std::size_t(j)].data(), dim)));
        centroids.swap(next);

        double loss = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            loss += kernels::squared_distance(points[i].values.data(),
                                              centroids[std::size_t(assign[i])].data(), dim);
        model.loss_history.push_back(loss);

        if (movement < options.tol) {
            ++iter;
            break;
        }
    }

    model.centroids = std::move(centroids);
    model.iterations_run = iter;
    model.final_loss = model.loss_history.empty() ? 0.0 : model.loss_history.back();
    for (std::size_t i = 0; i < n; ++i) model.assignments[points[i].symbol] = assign[i] + 1;
    return model;
}

Representatives select_representatives(const ClusterModel& model,
                                       const std::vector<FeatureVector>& standardized_points) {
    Representatives reps;
    std::map<int, double> best;
    // Points sorted by symbol so strict comparison keeps the
    // lexicographically smallest symbol on distance ties.
    std::vector<const FeatureVector*> ordered;
    ordered.reserve(standardized_points.size());
    for (const auto& p : standardized_points) ordered.push_back(&p);
    std::sort(ordered.begin(), ordered.end(),
              [](const FeatureVector* a, const FeatureVector* b) { return a->symbol < b->symbol; });
    for (const FeatureVector* p : ordered) {
        auto it = model.assignments.find(p->symbol);
        if (it == model.assignments.end())
            throw Error("point " + p->symbol + " not present in cluster model");
        const int cluster = it->second;
        const auto& c = model.centroids[std::size_t(cluster - 1)];
        const double d =
            kernels::squared_distance(p->values.data(), c.data(), p->values.size());
        auto bit = best.find(cluster);
        if (bit == best.end() || d < bit->second) {
            best[cluster] = d;
            reps[cluster] = p->symbol;
        }
    }
    return reps;
}

std::vector<std::array<double, 2>> project_2d(const std::vector<FeatureVector>& points) {
    const std::size_t dim = check_features(points, 2);
    if (dim < 2) throw Error("project_2d needs feature dimension >= 2");
    const std::size_t n = points.size();

    std::vector<double> mean(dim, 0.0);
    for (const auto& p : points) kernels::axpy(1.0, p.values.data(), mean.data(), dim);
    for (double& m : mean) m /= double(n);

    std::vector<double> cov(dim * dim, 0.0);
    std::vector<double> centered(dim);
    for (const auto& p : points) {
        for (std::size_t j = 0; j < dim; ++j) centered[j] = p.values[j] - mean[j];
        kernels::outer_accumulate(cov.data(), centered.data(), dim, centered.data(), dim);
    }
    for (double& c : cov) c /= double(n);

    const SymmetricEigen eig = jacobi_eigen(cov, dim);
    std::array<std::vector<double>, 2> axes;
    for (std::size_t comp = 0; comp < 2; ++comp) {
        axes[comp].assign(eig.vectors.begin() + std::ptrdiff_t(comp * dim),
                          eig.vectors.begin() + std::ptrdiff_t((comp + 1) * dim));
        std::size_t arg = 0;
        for (std::size_t j = 1; j < dim; ++j)
            if (std::abs(axes[comp][j]) > std::abs(axes[comp][arg])) arg = j;
        if (axes[comp][arg] < 0.0)
            for (double& x : axes[comp]) x = -x;
    }

    std::vector<std::array<double, 2>> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < dim; ++j) centered[j] = points[i].values[j] - mean[j];
        out[i] = {kernels::dot(centered.data(), axes[0].data(), dim),
                  kernels::dot(centered.data(), axes[1].data(), dim)};
    }
    return out;
}

}  // namespace sigfolio
