#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sigfolio/data.hpp"

namespace sigfolio::testing {

// Synthetic geometric-random-walk universe: n_assets daily streams starting
// at `start`, optionally staggering listing dates by `stagger_days` each.
std::vector<PriceStream> gbm_universe(int n_assets, Date start, int n_days, std::uint64_t seed,
                                      int stagger_days = 0);

void write_prices_csv(const std::string& path, const std::vector<PriceStream>& streams);

// Fresh scratch directory under the system temp dir.
std::string make_temp_dir(const std::string& tag);

// Reads a whole file (for byte-identity checks).
std::string slurp(const std::string& path);

}  // namespace sigfolio::testing
