#include "sigfolio/backtest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "sigfolio/clustering.hpp"
#include "sigfolio/error.hpp"
#include "sigfolio/signature.hpp"

namespace sigfolio {

namespace {

const PriceStream& stream_for(const std::vector<PriceStream>& streams, const std::string& symbol) {
    for (const auto& s : streams)
        if (s.symbol == symbol) return s;
    throw Error("no price stream for symbol " + symbol);
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

void validate(const StrategyConfig& config) {
    if (config.fee_rate < 0.0 || config.fee_rate > 0.01)
        throw Error("fee_rate must lie in [0, 0.01]");
    if (config.k < 1) throw Error("k must be >= 1");
    if (config.level < 1) throw Error("signature level must be >= 1");
    if (config.ridge < 0.0) throw Error("ridge must be >= 0");
}

// Representatives of the signature clusters at one rebalance date, sorted.
std::vector<std::string> select_universe(const StrategyConfig& config,
                                         const std::vector<PriceStream>& streams,
                                         const std::vector<std::string>& eligible, Date t) {
    if (eligible.size() < 2) return eligible;  // nothing to cluster
    std::vector<FeatureVector> features;
    features.reserve(eligible.size());
    for (const auto& symbol : eligible) {
        const auto slice = window_slice(stream_for(streams, symbol), t, config.policy);
        std::vector<double> closes;
        closes.reserve(slice.size());
        for (const auto& obs : slice) closes.push_back(obs.close);
        features.push_back(asset_features(symbol, closes, config.level));
    }
    std::vector<FeatureVector> standardized = standardize(features).second;
    const int k = std::min<int>(config.k, int(standardized.size()));
    const ClusterModel model =
        kmeans_fit(standardized, k, per_date_seed(config.seed, t));
    const Representatives reps = select_representatives(model, standardized);
    std::vector<std::string> out;
    out.reserve(reps.size());
    for (const auto& [cluster, symbol] : reps) out.push_back(symbol);
    std::sort(out.begin(), out.end());
    return out;
}

struct AllocationOutcome {
    WeightVector weights;
    bool ew_fallback = false;
};

AllocationOutcome allocate(const StrategyConfig& config, const std::vector<PriceStream>& streams,
                           const std::vector<std::string>& universe, Date t) {
    if (config.allocator == AllocatorKind::EW) return {equal_weight(universe), false};

    // Common return window: each asset contributes its policy window; the
    // covariance uses the rectangular intersection. Assets with fewer than
    // the floor count of returns sit this date out.
    std::vector<std::string> opt_universe;
    Date common_start{std::numeric_limits<std::int32_t>::min()};
    for (const auto& symbol : universe) {
        const auto slice = window_slice(stream_for(streams, symbol), t, config.policy);
        const Date first = slice.front().date;
        if (std::size_t(t - first) >= kMinCovarianceRows) {
            opt_universe.push_back(symbol);
            common_start = std::max(common_start, first);
        }
    }
    if (opt_universe.empty()) return {equal_weight(universe), true};

    const ReturnMatrix returns = compute_returns(streams, opt_universe, common_start, t);
    const CovarianceEstimate cov = estimate_covariance(returns, config.ridge);
    if (config.allocator == AllocatorKind::MVP) return {min_variance(cov), false};
    return {max_diversification(cov), false};
}

}  // namespace

const char* allocator_name(AllocatorKind a) {
    switch (a) {
        case AllocatorKind::EW: return "EW";
        case AllocatorKind::MVP: return "MVP";
        case AllocatorKind::MDP: return "MDP";
    }
    return "EW";
}

std::string default_strategy_name(const StrategyConfig& config) {
    std::string alloc = allocator_name(config.allocator);
    if (!config.filtered) return "PORTFOLIO_" + alloc;
    const std::string policy = config.policy.is_fot() ? "FOT" : "RW";
    return "PORTFOLIO_SIG_CLUSTER_" + alloc + "_" + policy;
}

std::uint64_t per_date_seed(std::uint64_t seed, Date d) {
    return splitmix64(seed ^ (0x9E3779B97F4A7C15ULL * std::uint64_t(std::uint32_t(d.days))));
}

double holdings_value(const Holdings& holdings, const std::map<std::string, double>& prices) {
    double value = holdings.cash;
    for (const auto& [symbol, units] : holdings.units) {
        auto it = prices.find(symbol);
        if (it == prices.end()) throw Error("no price for held symbol " + symbol);
        value += units * it->second;
    }
    return value;
}

RebalanceOutcome apply_rebalance(const Holdings& holdings, const WeightVector& target,
                                 const std::map<std::string, double>& prices, double fee_rate) {
    std::set<std::string> symbols;
    for (const auto& [symbol, units] : holdings.units)
        if (units != 0.0) symbols.insert(symbol);
    double weight_sum = 0.0;
    for (const auto& [symbol, weight] : target.weights) {
        if (weight < -1e-12) throw Error("negative target weight for " + symbol);
        symbols.insert(symbol);
        weight_sum += weight;
    }
    if (std::abs(weight_sum - 1.0) > 1e-8)
        throw Error("target weights must sum to 1, got " + std::to_string(weight_sum));

    std::map<std::string, double> held_value;
    double v_pre = holdings.cash;
    for (const auto& symbol : symbols) {
        auto it = prices.find(symbol);
        if (it == prices.end()) throw Error("no price for symbol " + symbol + " at rebalance");
        auto uit = holdings.units.find(symbol);
        const double value = uit == holdings.units.end() ? 0.0 : uit->second * it->second;
        held_value[symbol] = value;
        v_pre += value;
    }
    if (!(v_pre > 0.0)) throw Error("portfolio value must stay positive");

    auto turnover_at = [&](double v_post) {
        double turnover = 0.0;
        for (const auto& symbol : symbols) {
            auto wit = target.weights.find(symbol);
            const double w = wit == target.weights.end() ? 0.0 : wit->second;
            turnover += std::abs(w * v_post - held_value[symbol]);
        }
        return turnover;
    };

    // V_post = V_pre - fee_rate * turnover(V_post); geometric contraction for
    // fee_rate << 1.
    double v_post = v_pre;
    for (int i = 0; i < 50; ++i) {
        const double next = v_pre - fee_rate * turnover_at(v_post);
        if (std::abs(next - v_post) <= 1e-14 * std::max(1.0, v_pre)) {
            v_post = next;
            break;
        }
        v_post = next;
    }
    const double turnover = turnover_at(v_post);
    const double fee = fee_rate * turnover;
    v_post = v_pre - fee;

    RebalanceOutcome out;
    out.turnover = turnover;
    out.fee = fee;
    for (const auto& [symbol, weight] : target.weights) {
        if (weight <= 0.0) continue;
        double units = weight * v_post / prices.at(symbol);
        // Unit changes below 1e-12 relative are numerical dust, not orders;
        // keeping the old position makes no-op rebalances bitwise stable.
        auto oit = holdings.units.find(symbol);
        if (oit != holdings.units.end() &&
            std::abs(units - oit->second) <=
                1e-12 * std::max(std::abs(units), std::abs(oit->second)))
            units = oit->second;
        out.holdings.units[symbol] = units;
    }
    out.holdings.cash = v_post * std::max(0.0, 1.0 - weight_sum);
    for (const auto& symbol : symbols) {
        auto oit = holdings.units.find(symbol);
        auto nit = out.holdings.units.find(symbol);
        const double old_units = oit == holdings.units.end() ? 0.0 : oit->second;
        const double new_units = nit == out.holdings.units.end() ? 0.0 : nit->second;
        if (new_units != old_units) ++out.trades;
    }
    return out;
}

BacktestResult run_backtest(const StrategyConfig& config, const std::vector<PriceStream>& streams,
                            Date start, Date end) {
    validate(config);
    const UniverseCalendar calendar = build_calendar(streams, start, end, config.policy);

    BacktestResult result;
    result.strategy = config.name.empty() ? default_strategy_name(config) : config.name;

    Holdings holdings;
    holdings.cash = 1.0;
    std::size_t next_rebalance = 0;

    for (Date d = calendar.rebalance_dates.front(); d <= end; ++d) {
        // Mark to market before the day's trade; carries the last close
        // forward across mid-week gaps and delistings.
        double value = holdings.cash;
        for (const auto& [symbol, units] : holdings.units) {
            const auto close = stream_for(streams, symbol).close_on_or_before(d);
            if (!close) throw Error("no close available for held symbol " + symbol);
            value += units * *close;
        }
        result.dates.push_back(d);
        result.values.push_back(value);

        if (next_rebalance < calendar.rebalance_dates.size() &&
            calendar.rebalance_dates[next_rebalance] == d) {
            ++next_rebalance;
            const auto& eligible = calendar.eligible_at(d);
            const std::vector<std::string> universe =
                config.filtered ? select_universe(config, streams, eligible, d) : eligible;

            AllocationOutcome allocation = allocate(config, streams, universe, d);

            std::map<std::string, double> prices;
            for (const auto& [symbol, weight] : allocation.weights.weights) {
                const auto close = stream_for(streams, symbol).close_at(d);
                if (!close) throw Error("no close for " + symbol + " at " + format_date(d));
                prices[symbol] = *close;
            }
            for (const auto& [symbol, units] : holdings.units) {
                if (prices.count(symbol)) continue;
                const auto close = stream_for(streams, symbol).close_on_or_before(d);
                if (!close) throw Error("no close available for held symbol " + symbol);
                prices[symbol] = *close;
            }

            RebalanceOutcome outcome =
                apply_rebalance(holdings, allocation.weights, prices, config.fee_rate);
            holdings = std::move(outcome.holdings);

            RebalanceRecord record;
            record.date = d;
            record.universe = universe;
            record.weights = allocation.weights;
            record.units = holdings.units;
            record.fee = outcome.fee;
            record.turnover = outcome.turnover;
            record.trades = outcome.trades;
            record.ew_fallback = allocation.ew_fallback;
            result.total_trades += outcome.trades;
            result.total_fees += outcome.fee;
            result.total_turnover += outcome.turnover;
            record.trades_cum = result.total_trades;
            result.rebalances.push_back(std::move(record));
        }
    }
    return result;
}

std::vector<double> rebase_annually(const std::vector<Date>& dates,
                                    const std::vector<double>& values) {
    if (dates.empty() || dates.size() != values.size())
        throw Error("rebase_annually: dates and values must be non-empty and aligned");
    std::vector<double> out(values.size());
    double base = values.front();
    int current_year = year_of(dates.front());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const int y = year_of(dates[i]);
        if (y != current_year) {
            current_year = y;
            base = values[i];
        }
        out[i] = values[i] / base;
    }
    return out;
}

}  // namespace sigfolio
