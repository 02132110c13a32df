#pragma once

#include <array>
#include <string>
#include <vector>

#include "sigfolio/backtest.hpp"
#include "sigfolio/clustering.hpp"
#include "sigfolio/metrics.hpp"

namespace sigfolio {

// Shortest round-trip decimal rendering; identical inputs give identical
// bytes, which the rerun-determinism contract relies on.
std::string format_double(double v);

void write_values_csv(const std::string& path, const std::vector<Date>& dates,
                      const std::vector<double>& values);

void write_rebalances_csv(const std::string& path, const BacktestResult& result);

// `date,symbol,weight,strategy` across all strategies of a run.
void write_weights_csv(const std::string& path, const std::vector<BacktestResult>& results);

struct SummaryRow {
    std::string strategy;
    MetricSummary metrics;
    long total_trades = 0;
    double total_fees = 0.0;
};

void write_summary_csv(const std::string& path, const std::vector<SummaryRow>& rows);

// `symbol,cluster,pc1,pc2,is_representative`
void write_clusters_csv(const std::string& path, const ClusterModel& model,
                        const Representatives& reps,
                        const std::vector<FeatureVector>& points,
                        const std::vector<std::array<double, 2>>& projected);

// Debug dump `symbol,word,value` with words over the 2-channel lead-lag
// alphabet rendered as dot-joined letters.
void write_features_csv(const std::string& path, const std::vector<FeatureVector>& features,
                        int level);

}  // namespace sigfolio
