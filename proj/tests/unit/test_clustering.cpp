#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "oracles.hpp"
#include "sigfolio/clustering.hpp"
#include "sigfolio/error.hpp"

using namespace sigfolio;
using namespace sigfolio::testing;

namespace {

std::vector<FeatureVector> random_points(std::mt19937_64& rng, std::size_t n, std::size_t dim) {
    std::vector<FeatureVector> pts;
    for (std::size_t i = 0; i < n; ++i) {
        FeatureVector f;
        f.symbol = "P" + std::to_string(100 + i);
        f.values.resize(dim);
        for (double& v : f.values) v = 10.0 * (u01(rng) - 0.5);
        pts.push_back(std::move(f));
    }
    return pts;
}

// `centers` spaced far apart relative to `spread`.
std::vector<FeatureVector> planted_blobs(std::mt19937_64& rng, int k, int per_cluster,
                                         std::size_t dim, double separation, double spread,
                                         std::vector<int>* truth = nullptr) {
    std::vector<std::vector<double>> centers;
    for (int j = 0; j < k; ++j) {
        std::vector<double> c(dim, 0.0);
        c[std::size_t(j) % dim] = separation * double(j + 1);
        centers.push_back(std::move(c));
    }
    std::vector<FeatureVector> pts;
    for (int j = 0; j < k; ++j)
        for (int i = 0; i < per_cluster; ++i) {
            FeatureVector f;
            f.symbol = "B" + std::to_string(j) + "_" + std::to_string(i);
            f.values = centers[std::size_t(j)];
            for (double& v : f.values) v += spread * (2.0 * u01(rng) - 1.0);
            if (truth) truth->push_back(j);
            pts.push_back(std::move(f));
        }
    return pts;
}

}  // namespace

TEST_CASE("standardize") {
    SUBCASE("two-point symmetry under the population convention") {
        std::vector<FeatureVector> pts{{"A", {0.0}}, {"B", {2.0}}};
        auto [s, out] = standardize(pts);
        CHECK(out[0].values[0] == doctest::Approx(-1.0).epsilon(1e-14));
        CHECK(out[1].values[0] == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("identical vectors become all-zero columns") {
        std::vector<FeatureVector> pts{{"A", {3.0, -1.0}}, {"B", {3.0, -1.0}}};
        auto [s, out] = standardize(pts);
        for (const auto& p : out)
            for (double v : p.values) CHECK(v == 0.0);
    }
    SUBCASE("random columns get mean 0 and population stdev 1") {
        std::mt19937_64 rng(31);
        const auto pts = random_points(rng, 5, 7);
        auto [s, out] = standardize(pts);
        for (std::size_t j = 0; j < 7; ++j) {
            double mean = 0.0;
            for (const auto& p : out) mean += p.values[j];
            mean /= double(out.size());
            double var = 0.0;
            for (const auto& p : out) var += (p.values[j] - mean) * (p.values[j] - mean);
            var /= double(out.size());
            CHECK(std::abs(mean) <= 1e-12);
            CHECK(std::abs(std::sqrt(var) - 1.0) <= 1e-12);
        }
    }
    SUBCASE("apply then invert recovers inputs") {
        std::mt19937_64 rng(37);
        const auto pts = random_points(rng, 6, 4);
        const Standardizer s = Standardizer::fit(pts);
        for (const auto& p : pts) {
            const auto back = s.invert(s.apply(p.values));
            for (std::size_t j = 0; j < p.values.size(); ++j)
                CHECK(back[j] ==
                      doctest::Approx(p.values[j]).epsilon(1e-12));
        }
    }
    SUBCASE("fewer than two vectors is an error") {
        std::vector<FeatureVector> one{{"A", {1.0}}};
        CHECK_THROWS_AS(standardize(one), Error);
    }
}

TEST_CASE("kmeans_fit") {
    SUBCASE("k equal to point count makes singleton clusters with zero loss") {
        std::mt19937_64 rng(41);
        const auto pts = random_points(rng, 6, 3);
        const auto model = kmeans_fit(pts, 6, 123);
        CHECK(model.final_loss == doctest::Approx(0.0).epsilon(1e-15));
        std::set<int> used;
        for (const auto& [sym, c] : model.assignments) {
            CHECK(c >= 1);
            CHECK(c <= 6);
            used.insert(c);
        }
        CHECK(used.size() == 6);
    }

    SUBCASE("two separated pairs recover the groups") {
        std::vector<FeatureVector> pts{{"A", {0.0, 0.0}},
                                       {"B", {0.2, 0.0}},
                                       {"C", {10.0, 10.0}},
                                       {"D", {10.2, 10.0}}};
        const auto model = kmeans_fit(pts, 2, 7);
        CHECK(model.assignments.at("A") == model.assignments.at("B"));
        CHECK(model.assignments.at("C") == model.assignments.at("D"));
        CHECK(model.assignments.at("A") != model.assignments.at("C"));
        // Centroids are the group means.
        for (int c : {model.assignments.at("A"), model.assignments.at("C")}) {
            const auto& centroid = model.centroids[std::size_t(c - 1)];
            if (c == model.assignments.at("A")) {
                CHECK(centroid[0] == doctest::Approx(0.1).epsilon(1e-14));
                CHECK(centroid[1] == doctest::Approx(0.0).epsilon(1e-14));
            } else {
                CHECK(centroid[0] == doctest::Approx(10.1).epsilon(1e-14));
                CHECK(centroid[1] == doctest::Approx(10.0).epsilon(1e-14));
            }
        }
    }

    SUBCASE("random 30-dim problem: reported loss matches a re-evaluation") {
        std::mt19937_64 rng(43);
        const auto pts = random_points(rng, 50, 30);
        const auto model = kmeans_fit(pts, 4, 999);
        const double recomputed = kmeans_loss(model, pts);
        CHECK(std::abs(model.final_loss - recomputed) <= 1e-9 * std::max(1.0, recomputed));
        REQUIRE(!model.loss_history.empty());
        CHECK(model.final_loss <= model.loss_history.front() + 1e-12);
        for (std::size_t i = 1; i < model.loss_history.size(); ++i)
            CHECK(model.loss_history[i] <= model.loss_history[i - 1] + 1e-9);
    }

    SUBCASE("determinism: identical inputs and seed give identical models") {
        std::mt19937_64 rng(47);
        const auto pts = random_points(rng, 40, 10);
        const auto a = kmeans_fit(pts, 5, 2718);
        const auto b = kmeans_fit(pts, 5, 2718);
        CHECK(a.iterations_run == b.iterations_run);
        CHECK(a.final_loss == b.final_loss);
        REQUIRE(a.centroids.size() == b.centroids.size());
        for (std::size_t j = 0; j < a.centroids.size(); ++j)
            for (std::size_t d = 0; d < a.centroids[j].size(); ++d)
                CHECK(a.centroids[j][d] == b.centroids[j][d]);
        CHECK(a.assignments == b.assignments);
    }

    SUBCASE("converged model is an assignment fixpoint") {
        std::mt19937_64 rng(53);
        const auto pts = random_points(rng, 30, 8);
        const auto model = kmeans_fit(pts, 3, 31337);
        for (const auto& p : pts) {
            double best = 1e300;
            int best_j = 0;
            for (int j = 0; j < model.k; ++j) {
                double d = 0.0;
                for (std::size_t c = 0; c < p.values.size(); ++c) {
                    const double diff = p.values[c] - model.centroids[std::size_t(j)][c];
                    d += diff * diff;
                }
                if (d < best) {
                    best = d;
                    best_j = j + 1;
                }
            }
            CHECK(model.assignments.at(p.symbol) == best_j);
        }
    }

    SUBCASE("k larger than the point count is an error") {
        std::mt19937_64 rng(59);
        const auto pts = random_points(rng, 3, 2);
        CHECK_THROWS_AS(kmeans_fit(pts, 4, 1), Error);
    }

    SUBCASE("duplicate points with k above the distinct count still terminate") {
        // Forces the empty-cluster repair path: only two distinct locations
        // for three clusters.
        std::vector<FeatureVector> pts{
            {"A", {0.0}}, {"B", {0.0}}, {"C", {5.0}}, {"D", {5.0}}};
        const auto model = kmeans_fit(pts, 3, 17);
        CHECK(model.assignments.size() == 4);
        for (const auto& [sym, c] : model.assignments) {
            CHECK(c >= 1);
            CHECK(c <= 3);
        }
        // Identical points always land in the same cluster.
        CHECK(model.assignments.at("A") == model.assignments.at("B"));
        CHECK(model.assignments.at("C") == model.assignments.at("D"));
        for (std::size_t i = 1; i < model.loss_history.size(); ++i)
            CHECK(model.loss_history[i] <= model.loss_history[i - 1] + 1e-12);
        const auto reps = select_representatives(model, pts);
        CHECK(reps.size() <= 3);
        CHECK(reps.size() >= 2);
    }
}

TEST_CASE("select_representatives") {
    SUBCASE("singleton cluster keeps its only member") {
        std::vector<FeatureVector> pts{{"A", {0.0}}, {"B", {100.0}}};
        const auto model = kmeans_fit(pts, 2, 5);
        const auto reps = select_representatives(model, pts);
        REQUIRE(reps.size() == 2);
        std::set<std::string> symbols;
        for (const auto& [c, s] : reps) symbols.insert(s);
        CHECK(symbols == std::set<std::string>{"A", "B"});
    }

    SUBCASE("closest member wins") {
        // One cluster by construction: k = 1.
        std::vector<FeatureVector> pts{{"A", {0.4}}, {"B", {1.0}}, {"C", {-1.0}}};
        const auto model = kmeans_fit(pts, 1, 5);
        const auto reps = select_representatives(model, pts);
        REQUIRE(reps.size() == 1);
        // Centroid is ~0.1333; A at 0.4 is nearest.
        CHECK(reps.at(1) == "A");
    }

    SUBCASE("distance ties break to the lexicographically smallest symbol") {
        std::vector<FeatureVector> pts{{"Z", {1.0}}, {"M", {-1.0}}, {"A", {1.0}}};
        ClusterModel model;
        model.k = 1;
        model.centroids = {{0.0}};
        model.assignments = {{"Z", 1}, {"M", 1}, {"A", 1}};
        const auto reps = select_representatives(model, pts);
        CHECK(reps.at(1) == "A");
    }

    SUBCASE("planted clusters produce one representative per group") {
        std::mt19937_64 rng(61);
        std::vector<int> truth;
        const auto pts = planted_blobs(rng, 4, 5, 6, 50.0, 0.5, &truth);
        const auto model = kmeans_fit(pts, 4, 4096);
        const auto reps = select_representatives(model, pts);
        REQUIRE(reps.size() == 4);
        // Each representative must come from a distinct planted group.
        std::set<int> groups;
        for (const auto& [cluster, symbol] : reps) {
            for (std::size_t i = 0; i < pts.size(); ++i)
                if (pts[i].symbol == symbol) groups.insert(truth[i]);
        }
        CHECK(groups.size() == 4);
    }
}

TEST_CASE("project_2d") {
    SUBCASE("collinear data has zero second coordinate") {
        std::vector<FeatureVector> pts;
        for (int i = 0; i < 8; ++i)
            pts.push_back({"L" + std::to_string(i),
                           {double(i) * 2.0, double(i) * -1.0, double(i) * 0.5}});
        const auto proj = project_2d(pts);
        for (const auto& p : proj) CHECK(std::abs(p[1]) <= 1e-10);
    }

    SUBCASE("exactly 2-d data keeps pairwise distances") {
        std::mt19937_64 rng(67);
        std::vector<FeatureVector> pts;
        for (int i = 0; i < 10; ++i) {
            const double a = u01(rng), b = u01(rng);
            // Embedded plane in 5 dims.
            pts.push_back({"P" + std::to_string(i),
                           {a + b, 2 * a - b, 0.5 * b, -a, a + 0.25 * b}});
        }
        const auto proj = project_2d(pts);
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t j = i + 1; j < pts.size(); ++j) {
                double orig = 0.0;
                for (std::size_t c = 0; c < 5; ++c) {
                    const double d = pts[i].values[c] - pts[j].values[c];
                    orig += d * d;
                }
                const double dx = proj[i][0] - proj[j][0];
                const double dy = proj[i][1] - proj[j][1];
                const double flat = dx * dx + dy * dy;
                CHECK(std::abs(std::sqrt(orig) - std::sqrt(flat)) <=
                      1e-10 * std::max(1.0, std::sqrt(orig)));
            }
    }

    SUBCASE("component variances are ordered") {
        std::mt19937_64 rng(71);
        const auto pts = random_points(rng, 25, 6);
        const auto proj = project_2d(pts);
        double m1 = 0.0, m2 = 0.0;
        for (const auto& p : proj) {
            m1 += p[0];
            m2 += p[1];
        }
        m1 /= double(proj.size());
        m2 /= double(proj.size());
        double v1 = 0.0, v2 = 0.0;
        for (const auto& p : proj) {
            v1 += (p[0] - m1) * (p[0] - m1);
            v2 += (p[1] - m2) * (p[1] - m2);
        }
        CHECK(v1 >= v2);
    }

    SUBCASE("fewer than two points is an error") {
        std::vector<FeatureVector> one{{"A", {1.0, 2.0}}};
        CHECK_THROWS_AS(project_2d(one), Error);
    }
}
