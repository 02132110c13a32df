// sigfolio: signature-clustered crypto portfolio backtester.
//
// Subcommands:
//   backtest --config <file> [--seed <u64>]
//   clusters --config <file> --date <YYYY-MM-DD> --policy <fot|rw>
//            [--seed <u64>] [--features <file>]
//   validate --data <file>
//
// Exit codes: 0 success, 1 runtime error, 2 config/validation error.

#include <filesystem>
#include <iostream>
#include <optional>
#include <vector>

#include <CLI11.hpp>

#include "sigfolio/backtest.hpp"
#include "sigfolio/clustering.hpp"
#include "sigfolio/config.hpp"
#include "sigfolio/error.hpp"
#include "sigfolio/metrics.hpp"
#include "sigfolio/report.hpp"
#include "sigfolio/signature.hpp"

namespace fs = std::filesystem;
using namespace sigfolio;

namespace {

// Removes files written so far when a run aborts midway.
class OutputTracker {
public:
    std::string track(std::string path) {
        paths_.push_back(path);
        return path;
    }
    void discard_all() {
        for (const auto& p : paths_) {
            std::error_code ec;
            fs::remove(p, ec);
        }
    }
    void commit() { paths_.clear(); }
    ~OutputTracker() { discard_all(); }

private:
    std::vector<std::string> paths_;
};

int cmd_backtest(const std::string& config_path, std::optional<std::uint64_t> seed_override) {
    const RunConfig config = load_run_config(config_path, seed_override);
    const auto streams = load_prices(config.data_path);
    fs::create_directories(config.output_dir);

    OutputTracker tracker;
    std::vector<SummaryRow> summary;
    std::vector<BacktestResult> results;
    for (const auto& strategy : config.strategies) {
        BacktestResult result = run_backtest(strategy, streams, config.start, config.end);
        const std::string base = config.output_dir + "/";
        write_values_csv(tracker.track(base + "values_" + result.strategy + ".csv"),
                         result.dates, result.values);
        write_values_csv(tracker.track(base + "values_rebased_" + result.strategy + ".csv"),
                         result.dates, rebase_annually(result.dates, result.values));
        write_rebalances_csv(tracker.track(base + "rebalances_" + result.strategy + ".csv"),
                             result);
        SummaryRow row;
        row.strategy = result.strategy;
        row.metrics = summarize(result.dates, result.values);
        row.total_trades = result.total_trades;
        row.total_fees = result.total_fees;
        summary.push_back(std::move(row));
        std::cout << result.strategy << ": " << result.rebalances.size() << " rebalances, "
                  << result.total_trades << " trades\n";
        for (const auto& record : result.rebalances)
            if (record.ew_fallback)
                std::cout << "note: " << result.strategy << " " << format_date(record.date)
                          << ": equal-weight fallback (optimizer universe empty)\n";
        results.push_back(std::move(result));
    }
    write_weights_csv(tracker.track(config.output_dir + "/weights.csv"), results);
    write_summary_csv(tracker.track(config.output_dir + "/summary.csv"), summary);
    tracker.commit();
    std::cout << "wrote " << config.output_dir << "/summary.csv\n";
    return 0;
}

int cmd_clusters(const std::string& config_path, const std::string& date_text,
                 const std::string& policy_text, std::optional<std::uint64_t> seed_override,
                 const std::string& features_path) {
    const RunConfig config = load_run_config(config_path, seed_override);
    Date date{};
    try {
        date = parse_date(date_text);
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    WindowPolicy policy = WindowPolicy::rw(config.rw_length_days);
    std::string policy_label = "rw";
    if (policy_text == "fot") {
        policy = WindowPolicy::fot(config.fot_origin);
        policy_label = "fot";
    } else if (policy_text != "rw") {
        throw ConfigError("--policy must be fot or rw");
    }

    // Clustering parameters follow the first filtered strategy using this
    // policy, falling back to the first strategy.
    int k = config.strategies.front().k;
    int level = config.strategies.front().level;
    for (const auto& s : config.strategies)
        if (s.filtered && s.policy.kind == policy.kind) {
            k = s.k;
            level = s.level;
            break;
        }

    const auto streams = load_prices(config.data_path);
    const UniverseCalendar calendar = build_calendar(streams, config.start, config.end, policy);
    if (!calendar.is_rebalance_date(date))
        throw ConfigError(date_text + " is not a rebalance date of this run");

    std::vector<FeatureVector> features;
    for (const auto& symbol : calendar.eligible_at(date)) {
        for (const auto& stream : streams) {
            if (stream.symbol != symbol) continue;
            const auto slice = window_slice(stream, date, policy);
            std::vector<double> closes;
            for (const auto& obs : slice) closes.push_back(obs.close);
            features.push_back(asset_features(symbol, closes, level));
        }
    }
    if (features.size() < 2) throw Error("need at least 2 eligible assets to cluster");

    const auto standardized = standardize(features).second;
    const int k_eff = std::min<int>(k, int(standardized.size()));
    const ClusterModel model =
        kmeans_fit(standardized, k_eff, per_date_seed(config.seed, date));
    const Representatives reps = select_representatives(model, standardized);
    const auto projected = project_2d(standardized);

    fs::create_directories(config.output_dir);
    const std::string out_path =
        config.output_dir + "/clusters_" + policy_label + "_" + date_text + ".csv";
    write_clusters_csv(out_path, model, reps, standardized, projected);
    std::cout << "wrote " << out_path << " (" << features.size() << " assets, " << reps.size()
              << " representatives)\n";
    if (!features_path.empty()) {
        write_features_csv(features_path, features, level);
        std::cout << "wrote " << features_path << "\n";
    }
    return 0;
}

int cmd_validate(const std::string& data_path) {
    const ScanResult scan = scan_prices(data_path);
    for (const auto& stream : scan.streams) {
        std::cout << stream.symbol << ": " << stream.observations.size() << " closes, "
                  << format_date(stream.first_date()) << " .. "
                  << format_date(stream.last_date()) << "\n";
    }
    bool structural = false;
    for (const auto& diag : scan.diagnostics) {
        std::cout << (diag.structural ? "error: " : "note: ") << diag.message << "\n";
        structural = structural || diag.structural;
    }
    std::cout << scan.diagnostics.size() << " issues\n";
    return structural ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Signature-clustered crypto portfolio backtester"};
    app.require_subcommand(1);

    std::string config_path, data_path, date_text, policy_text = "rw", features_path;
    std::optional<std::uint64_t> seed_override;

    auto* backtest_cmd = app.add_subcommand("backtest", "Run all configured strategies");
    backtest_cmd->add_option("--config", config_path, "JSON run config")->required();
    backtest_cmd->add_option("--seed", seed_override, "Override the config seed");

    auto* clusters_cmd =
        app.add_subcommand("clusters", "Emit the cluster report for one rebalance date");
    clusters_cmd->add_option("--config", config_path, "JSON run config")->required();
    clusters_cmd->add_option("--date", date_text, "Rebalance date (YYYY-MM-DD)")->required();
    clusters_cmd->add_option("--policy", policy_text, "fot or rw")->required();
    clusters_cmd->add_option("--seed", seed_override, "Override the config seed");
    clusters_cmd->add_option("--features", features_path, "Also dump raw features CSV here");

    auto* validate_cmd = app.add_subcommand("validate", "Check a price CSV for problems");
    validate_cmd->add_option("--data", data_path, "Price CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (backtest_cmd->parsed()) return cmd_backtest(config_path, seed_override);
        if (clusters_cmd->parsed())
            return cmd_clusters(config_path, date_text, policy_text, seed_override,
                                features_path);
        if (validate_cmd->parsed()) return cmd_validate(data_path);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
