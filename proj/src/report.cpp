#include "sigfolio/report.hpp"

#include <cstdio>
#include <fstream>

#include "sigfolio/error.hpp"

namespace sigfolio {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    return out;
}

}  // namespace

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    // Trim to the shortest representation that still round-trips.
    for (int prec = 1; prec < 17; ++prec) {
        char probe[32];
        std::snprintf(probe, sizeof probe, "%.*g", prec, v);
        double back{};
        std::sscanf(probe, "%lf", &back);
        if (back == v) return probe;
    }
    return buf;
}

void write_values_csv(const std::string& path, const std::vector<Date>& dates,
                      const std::vector<double>& values) {
    if (dates.size() != values.size()) throw Error("dates and values lengths differ");
    auto out = open_out(path);
    out << "date,value\n";
    for (std::size_t i = 0; i < dates.size(); ++i)
        out << format_date(dates[i]) << ',' << format_double(values[i]) << '\n';
}

void write_rebalances_csv(const std::string& path, const BacktestResult& result) {
    auto out = open_out(path);
    out << "date,symbol,weight,units,fee,trades_cum\n";
    for (const auto& record : result.rebalances) {
        for (const auto& [symbol, weight] : record.weights.weights) {
            auto uit = record.units.find(symbol);
            const double units = uit == record.units.end() ? 0.0 : uit->second;
            out << format_date(record.date) << ',' << symbol << ',' << format_double(weight)
                << ',' << format_double(units) << ',' << format_double(record.fee) << ','
                << record.trades_cum << '\n';
        }
    }
}

void write_weights_csv(const std::string& path, const std::vector<BacktestResult>& results) {
    auto out = open_out(path);
    out << "date,symbol,weight,strategy\n";
    for (const auto& result : results)
        for (const auto& record : result.rebalances)
            for (const auto& [symbol, weight] : record.weights.weights)
                out << format_date(record.date) << ',' << symbol << ',' << format_double(weight)
                    << ',' << result.strategy << '\n';
}

void write_summary_csv(const std::string& path, const std::vector<SummaryRow>& rows) {
    auto out = open_out(path);
    out << "strategy,ann_return,ann_vol,sharpe,calmar,mdd,total_trades,total_fees\n";
    for (const auto& row : rows) {
        const auto& m = row.metrics;
        out << row.strategy << ',' << format_double(m.annualized_return) << ','
            << format_double(m.annualized_volatility) << ','
            << (m.sharpe_defined ? format_double(m.sharpe) : "nan") << ','
            << (m.calmar_defined ? format_double(m.calmar) : "nan") << ','
            << format_double(m.mdd) << ',' << row.total_trades << ','
            << format_double(row.total_fees) << '\n';
    }
}

void write_clusters_csv(const std::string& path, const ClusterModel& model,
                        const Representatives& reps,
                        const std::vector<FeatureVector>& points,
                        const std::vector<std::array<double, 2>>& projected) {
    if (points.size() != projected.size()) throw Error("points and projection lengths differ");
    auto out = open_out(path);
    out << "symbol,cluster,pc1,pc2,is_representative\n";
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& symbol = points[i].symbol;
        auto ait = model.assignments.find(symbol);
        if (ait == model.assignments.end()) throw Error("no assignment for " + symbol);
        const int cluster = ait->second;
        auto rit = reps.find(cluster);
        const bool is_rep = rit != reps.end() && rit->second == symbol;
        out << symbol << ',' << cluster << ',' << format_double(projected[i][0]) << ','
            << format_double(projected[i][1]) << ',' << (is_rep ? 1 : 0) << '\n';
    }
}

void write_features_csv(const std::string& path, const std::vector<FeatureVector>& features,
                        int level) {
    auto out = open_out(path);
    out << "symbol,word,value\n";
    std::vector<std::string> word_names;
    for (int k = 1; k <= level; ++k)
        for (const auto& w : words_of_level(2, k)) word_names.push_back(w.render());
    for (const auto& f : features) {
        if (f.values.size() != word_names.size())
            throw Error("feature length does not match level " + std::to_string(level));
        for (std::size_t i = 0; i < word_names.size(); ++i)
            out << f.symbol << ',' << word_names[i] << ',' << format_double(f.values[i]) << '\n';
    }
}

}  // namespace sigfolio
