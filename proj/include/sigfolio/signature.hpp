#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

// Truncated path signatures of piecewise-linear paths. The signature of one
// linear segment has the closed form delta^(x)k / k!, and signatures of
// concatenated paths compose through the truncated tensor product (Chen's
// identity), so the signature of a whole polyline is an exact left fold of
// segment signatures. Coefficients are stored level-major: level k is a
// contiguous block of dim^k values, word (i_1..i_k) at row-major index
// sum_j (i_j - 1) * dim^(k-j). Flattened across levels this is the
// (length, then lexicographic) word order used for feature vectors.

namespace sigfolio {

// Multi-index over channels 1..dim. Empty word = the constant term.
struct Word {
    std::vector<int> letters;

    std::size_t length() const { return letters.size(); }

    // Dot-joined rendering, e.g. "1.2.2".
    std::string render() const;
};

// All words of a given length over {1..dim}, in lexicographic order (the
// storage order of a level block).
std::vector<Word> words_of_level(int dim, int level);

class Signature {
public:
    // Signature of a constant path: 1 at the empty word, 0 elsewhere.
    static Signature identity(int dim, int level);

    // Closed form for one linear segment with the given increment:
    // coefficient of (i_1..i_k) is delta_{i_1}*...*delta_{i_k} / k!.
    static Signature from_segment(std::span<const double> delta, int level);

    int dimension() const { return dim_; }
    int level() const { return level_; }

    // Level block k (1-based), dim^k coefficients.
    std::span<const double> level_block(int k) const;

    // Coefficient of a word; the empty word yields exactly 1.
    double coefficient(const Word& w) const;

    // Total number of coefficients including the constant term.
    std::size_t coefficient_count() const;

    // Levels 1..K concatenated (constant term dropped).
    std::vector<double> flatten() const;

    // Chen's identity: replaces this with the signature of this-path followed
    // by rhs-path. Truncated tensor product, in place.
    void concatenate(const Signature& rhs);

private:
    Signature(int dim, int level);

    int dim_ = 0;
    int level_ = 0;
    std::vector<std::vector<double>> levels_;  // levels_[k-1] has dim^k entries
};

Signature chen_concatenate(const Signature& a, const Signature& b);

// Convenience alias for the spec-level operation name.
Signature segment_signature(std::span<const double> delta, int level);

struct PiecewiseLinearPath {
    int dim = 0;
    std::vector<double> points;  // row-major, points.size() == dim * n_points

    PiecewiseLinearPath(int dimension, std::vector<double> pts);

    std::size_t n_points() const { return points.size() / std::size_t(dim); }
    std::span<const double> point(std::size_t i) const {
        return {points.data() + i * std::size_t(dim), std::size_t(dim)};
    }
};

// Truncated signature of a polyline: left fold of segment signatures under
// Chen concatenation. A single-point path yields the identity signature.
Signature path_signature(const PiecewiseLinearPath& path, int level);

// Doubles a scalar stream of N+1 values into the 2-d lead-lag polyline with
// 2N+1 points: even points (X_i, X_i), odd points (X_{i+1}, X_i). Channel 1
// is the lead, channel 2 the lag.
PiecewiseLinearPath lead_lag_transform(std::span<const double> values);

// ln(close_i) - ln(close_0); first entry exactly 0. Throws on non-positive
// prices.
std::vector<double> log_rebase(std::span<const double> closes);

struct FeatureVector {
    std::string symbol;
    std::vector<double> values;
};

// Number of features produced per asset at a truncation level (channel
// dimension 2): 2 + 4 + ... + 2^level.
std::size_t feature_length(int level);

// Per-asset clustering features: flattened signature of the lead-lag path of
// the log-rebased close window.
FeatureVector asset_features(const std::string& symbol, std::span<const double> window_closes,
                             int level);

}  // namespace sigfolio
