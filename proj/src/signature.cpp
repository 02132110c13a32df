#include "sigfolio/signature.hpp"

#include <cmath>
#include <cstddef>

#include "sigfolio/error.hpp"
#include "sigfolio/kernels.hpp"

namespace sigfolio {

namespace {

std::size_t pow_size(int base, int exp) {
    std::size_t out = 1;
    for (int i = 0; i < exp; ++i) {
        out *= std::size_t(base);
        if (out > (std::size_t(1) << 26))
            throw Error("signature level block too large (dim^level overflow guard)");
    }
    return out;
}

void check_dim_level(int dim, int level) {
    if (dim < 1) throw Error("signature dimension must be >= 1");
    if (level < 1) throw Error("signature level must be >= 1");
}

}  // namespace

std::string Word::render() const {
    std::string out;
    for (std::size_t i = 0; i < letters.size(); ++i) {
        if (i) out += '.';
        out += std::to_string(letters[i]);
    }
    return out;
}

std::vector<Word> words_of_level(int dim, int level) {
    check_dim_level(dim, level);
    const std::size_t count = pow_size(dim, level);
    std::vector<Word> out;
    out.reserve(count);
    for (std::size_t idx = 0; idx < count; ++idx) {
        Word w;
        w.letters.assign(std::size_t(level), 1);
        std::size_t rem = idx;
        for (int pos = level - 1; pos >= 0; --pos) {
            w.letters[std::size_t(pos)] = int(rem % std::size_t(dim)) + 1;
            rem /= std::size_t(dim);
        }
        out.push_back(std::move(w));
    }
    return out;
}

Signature::Signature(int dim, int level) : dim_(dim), level_(level) {
    check_dim_level(dim, level);
    levels_.resize(std::size_t(level));
    for (int k = 1; k <= level; ++k) levels_[std::size_t(k - 1)].assign(pow_size(dim, k), 0.0);
}

Signature Signature::identity(int dim, int level) { return Signature(dim, level); }

Signature Signature::from_segment(std::span<const double> delta, int level) {
    const int dim = int(delta.size());
    Signature sig(dim, level);
    auto& first = sig.levels_[0];
    for (int c = 0; c < dim; ++c) first[std::size_t(c)] = delta[std::size_t(c)];
    for (int k = 2; k <= level; ++k) {
        const auto& prev = sig.levels_[std::size_t(k - 2)];
        auto& cur = sig.levels_[std::size_t(k - 1)];
        const double inv = 1.0 / k;
        std::size_t i = 0;
        for (double p : prev)
            for (int c = 0; c < dim; ++c) cur[i++] = p * delta[std::size_t(c)] * inv;
    }
    return sig;
}

Signature segment_signature(std::span<const double> delta, int level) {
    return Signature::from_segment(delta, level);
}

std::span<const double> Signature::level_block(int k) const {
    if (k < 1 || k > level_) throw Error("level out of range");
    const auto& blk = levels_[std::size_t(k - 1)];
    return {blk.data(), blk.size()};
}

double Signature::coefficient(const Word& w) const {
    if (w.letters.empty()) return 1.0;
    const int k = int(w.length());
    if (k > level_) throw Error("word longer than truncation level");
    std::size_t idx = 0;
    for (int letter : w.letters) {
        if (letter < 1 || letter > dim_) throw Error("word letter out of channel range");
        idx = idx * std::size_t(dim_) + std::size_t(letter - 1);
    }
    return levels_[std::size_t(k - 1)][idx];
}

std::size_t Signature::coefficient_count() const {
    std::size_t total = 1;
    for (const auto& blk : levels_) total += blk.size();
    return total;
}

std::vector<double> Signature::flatten() const {
    std::vector<double> out;
    out.reserve(coefficient_count() - 1);
    for (const auto& blk : levels_) out.insert(out.end(), blk.begin(), blk.end());
    return out;
}

void Signature::concatenate(const Signature& rhs) {
    if (rhs.dim_ != dim_ || rhs.level_ != level_)
        throw Error("cannot concatenate signatures with mismatched dimension or level");
    // Top level down so the lower levels of *this still hold the left factor
    // when they feed the cross terms.
    for (int n = level_; n >= 1; --n) {
        auto& dest = levels_[std::size_t(n - 1)];
        for (int j = n - 1; j >= 1; --j) {
            const auto& left = levels_[std::size_t(j - 1)];
            const auto& right = rhs.levels_[std::size_t(n - j - 1)];
            kernels::outer_accumulate(dest.data(), left.data(), left.size(), right.data(),
                                      right.size());
        }
        const auto& right_full = rhs.levels_[std::size_t(n - 1)];
        kernels::axpy(1.0, right_full.data(), dest.data(), dest.size());
    }
}

Signature chen_concatenate(const Signature& a, const Signature& b) {
    Signature out = a;
    out.concatenate(b);
    return out;
}

PiecewiseLinearPath::PiecewiseLinearPath(int dimension, std::vector<double> pts)
    : dim(dimension), points(std::move(pts)) {
    if (dim < 1) throw Error("path dimension must be >= 1");
    if (points.empty() || points.size() % std::size_t(dim) != 0)
        throw Error("path needs at least one point and a whole number of coordinates");
    for (double v : points)
        if (!std::isfinite(v)) throw Error("path coordinates must be finite");
}

Signature path_signature(const PiecewiseLinearPath& path, int level) {
    check_dim_level(path.dim, level);
    Signature sig = Signature::identity(path.dim, level);
    const std::size_t n = path.n_points();
    std::vector<double> delta(std::size_t(path.dim));
    for (std::size_t i = 0; i + 1 < n; ++i) {
        auto p = path.point(i);
        auto q = path.point(i + 1);
        bool moved = false;
        for (int c = 0; c < path.dim; ++c) {
            delta[std::size_t(c)] = q[std::size_t(c)] - p[std::size_t(c)];
            moved = moved || delta[std::size_t(c)] != 0.0;
        }
        if (!moved) continue;  // zero segment contributes the identity
        sig.concatenate(Signature::from_segment(delta, level));
    }
    return sig;
}

PiecewiseLinearPath lead_lag_transform(std::span<const double> values) {
    if (values.empty()) throw Error("lead-lag transform needs a non-empty stream");
    const std::size_t n_steps = values.size() - 1;
    std::vector<double> pts;
    pts.reserve((2 * n_steps + 1) * 2);
    for (std::size_t j = 0; j <= 2 * n_steps; ++j) {
        const std::size_t lead = (j + 1) / 2;
        const std::size_t lag = j / 2;
        pts.push_back(values[lead]);
        pts.push_back(values[lag]);
    }
    return PiecewiseLinearPath(2, std::move(pts));
}

std::vector<double> log_rebase(std::span<const double> closes) {
    std::vector<double> out(closes.size());
    if (closes.empty()) return out;
    if (closes[0] <= 0.0) throw Error("log rebase requires positive prices");
    const double base = std::log(closes[0]);
    out[0] = 0.0;
    for (std::size_t i = 1; i < closes.size(); ++i) {
        if (closes[i] <= 0.0) throw Error("log rebase requires positive prices");
        out[i] = std::log(closes[i]) - base;
    }
    return out;
}

std::size_t feature_length(int level) {
    check_dim_level(2, level);
    return pow_size(2, level + 1) - 2;
}

FeatureVector asset_features(const std::string& symbol, std::span<const double> window_closes,
                             int level) {
    const auto rebased = log_rebase(window_closes);
    const auto path = lead_lag_transform(rebased);
    return FeatureVector{symbol, path_signature(path, level).flatten()};
}

}  // namespace sigfolio
