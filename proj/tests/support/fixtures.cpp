#include "fixtures.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "sigfolio/error.hpp"
#include "sigfolio/report.hpp"

namespace sigfolio::testing {

std::vector<PriceStream> gbm_universe(int n_assets, Date start, int n_days, std::uint64_t seed,
                                      int stagger_days) {
    std::vector<PriceStream> streams;
    for (int a = 0; a < n_assets; ++a) {
        std::mt19937_64 rng(seed + std::uint64_t(a) * 7919);
        PriceStream s;
        char name[16];
        std::snprintf(name, sizeof name, "A%02d", a);
        s.symbol = name;
        const Date first = start + a * stagger_days;
        double price = 50.0 + 100.0 * u01(rng);
        const double drift = 0.0004 * (u01(rng) - 0.3);
        const double vol = 0.01 + 0.05 * u01(rng);
        for (Date d = first; d < start + n_days; ++d) {
            s.observations.push_back({d, price});
            // Box-Muller normal step.
            const double z = std::sqrt(-2.0 * std::log(1.0 - u01(rng))) *
                             std::cos(6.283185307179586 * u01(rng));
            price *= std::exp(drift + vol * z);
        }
        streams.push_back(std::move(s));
    }
    return streams;
}

void write_prices_csv(const std::string& path, const std::vector<PriceStream>& streams) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write fixture '" + path + "'");
    out << "date,symbol,close\n";
    for (const auto& s : streams)
        for (const auto& obs : s.observations)
            out << format_date(obs.date) << ',' << s.symbol << ','
                << format_double(obs.close) << '\n';
}

std::string make_temp_dir(const std::string& tag) {
    static std::atomic<int> counter{0};
    const auto dir = std::filesystem::temp_directory_path() /
                     ("sigfolio_" + tag + "_" + std::to_string(counter++));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir.string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace sigfolio::testing
