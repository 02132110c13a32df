#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sigfolio/allocation.hpp"
#include "sigfolio/data.hpp"

namespace sigfolio {

enum class AllocatorKind { EW, MVP, MDP };

const char* allocator_name(AllocatorKind a);

struct StrategyConfig {
    std::string name;  // output label, e.g. PORTFOLIO_SIG_CLUSTER_EW_FOT
    AllocatorKind allocator = AllocatorKind::EW;
    bool filtered = false;  // apply signature clustering before allocating
    WindowPolicy policy = WindowPolicy::rw();
    int k = 4;
    int level = 4;
    double fee_rate = 0.0020;
    std::uint64_t seed = 0;
    double ridge = 1e-8;
};

// Default output label following the paper-style naming scheme.
std::string default_strategy_name(const StrategyConfig& config);

struct Holdings {
    std::map<std::string, double> units;
    double cash = 0.0;
};

double holdings_value(const Holdings& holdings, const std::map<std::string, double>& prices);

struct RebalanceOutcome {
    Holdings holdings;
    double fee = 0.0;
    double turnover = 0.0;
    int trades = 0;
};

// Trades the portfolio to `target` at the given prices. The post-trade value
// solves V_post = V_pre - fee_rate * turnover(V_post) by fixed-point
// iteration; the returned fee equals fee_rate * turnover exactly. A symbol
// counts as traded when its unit holding changes by more than 1e-12 relative.
RebalanceOutcome apply_rebalance(const Holdings& holdings, const WeightVector& target,
                                 const std::map<std::string, double>& prices, double fee_rate);

struct RebalanceRecord {
    Date date;
    std::vector<std::string> universe;  // symbols allocation ran on
    WeightVector weights;
    std::map<std::string, double> units;  // post-trade
    double fee = 0.0;
    double turnover = 0.0;
    int trades = 0;
    long trades_cum = 0;
    bool ew_fallback = false;  // optimizer universe was empty after floors
};

struct BacktestResult {
    std::string strategy;
    std::vector<Date> dates;  // daily, first rebalance date .. end
    std::vector<double> values;
    std::vector<RebalanceRecord> rebalances;
    long total_trades = 0;
    double total_fees = 0.0;
    double total_turnover = 0.0;
};

// Weekly loop: eligibility -> (optionally) features/clustering/selection ->
// allocation -> trade at that date's close, then buy-and-hold drift until the
// next Monday. Daily values are marked before the day's trade so the series
// starts at exactly 1.0.
BacktestResult run_backtest(const StrategyConfig& config, const std::vector<PriceStream>& streams,
                            Date start, Date end);

// Divides each calendar year's values by the value on that year's first date.
std::vector<double> rebase_annually(const std::vector<Date>& dates,
                                    const std::vector<double>& values);

// Deterministic per-date stream for the clustering stage.
std::uint64_t per_date_seed(std::uint64_t seed, Date d);

}  // namespace sigfolio
