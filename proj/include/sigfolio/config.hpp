#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sigfolio/backtest.hpp"

namespace sigfolio {

// Run description parsed from the JSON config file. Fields mirror
// StrategyConfig; per-strategy entries inherit the run-level defaults.
struct RunConfig {
    std::string data_path;
    std::string output_dir;
    Date start{};
    Date end{};
    std::uint64_t seed = 0;
    Date fot_origin{};
    int rw_length_days = 30;
    std::vector<StrategyConfig> strategies;
};

// Parses and validates; throws ConfigError with the offending field name.
RunConfig load_run_config(const std::string& path,
                          std::optional<std::uint64_t> seed_override = std::nullopt);

}  // namespace sigfolio
