#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "fixtures.hpp"
#include "sigfolio/dates.hpp"

using namespace sigfolio;
using namespace sigfolio::testing;

namespace {

int run_cli(const std::string& args, const std::string& log_path) {
    const std::string cmd = std::string(SIGFOLIO_CLI_PATH) + " " + args + " > " + log_path +
                            " 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

struct CliFixture {
    std::string dir = make_temp_dir("cli");
    std::string data = dir + "/prices.csv";
    std::string config = dir + "/run.json";
    std::string out = dir + "/out";

    explicit CliFixture(const std::string& start = "2021-03-01",
                        const std::string& end = "2022-03-07") {
        write_prices_csv(data, gbm_universe(10, parse_date("2021-01-04"), 500, 777));
        write_config(start, end);
    }

    void write_config(const std::string& start, const std::string& end) {
        std::ofstream cfg(config);
        cfg << "{\n"
            << "  \"data\": \"" << data << "\",\n"
            << "  \"output_dir\": \"" << out << "\",\n"
            << "  \"start\": \"" << start << "\",\n"
            << "  \"end\": \"" << end << "\",\n"
            << "  \"seed\": 42,\n"
            << "  \"fot_origin\": \"2021-01-04\",\n"
            << "  \"strategies\": [\n"
            << "    {\"allocator\": \"EW\",  \"filtered\": false, \"policy\": \"FOT\"},\n"
            << "    {\"allocator\": \"EW\",  \"filtered\": true,  \"policy\": \"FOT\"},\n"
            << "    {\"allocator\": \"EW\",  \"filtered\": true,  \"policy\": \"RW\"},\n"
            << "    {\"allocator\": \"MVP\", \"filtered\": true,  \"policy\": \"FOT\"},\n"
            << "    {\"allocator\": \"MDP\", \"filtered\": true,  \"policy\": \"FOT\"},\n"
            << "    {\"allocator\": \"MDP\", \"filtered\": true,  \"policy\": \"RW\"}\n"
            << "  ]\n"
            << "}\n";
    }
};

std::size_t count_lines(const std::string& text) {
    std::size_t n = 0;
    for (char c : text)
        if (c == '\n') ++n;
    return n;
}

}  // namespace

TEST_CASE("backtest subcommand runs six strategies and is reproducible") {
    CliFixture fx;
    const int rc = run_cli("backtest --config " + fx.config, fx.dir + "/log1.txt");
    REQUIRE(rc == 0);

    const std::string summary = slurp(fx.out + "/summary.csv");
    CHECK(count_lines(summary) == 7);  // header + 6 strategies
    CHECK(summary.find("PORTFOLIO_EW") != std::string::npos);
    CHECK(summary.find("PORTFOLIO_SIG_CLUSTER_EW_FOT") != std::string::npos);
    CHECK(summary.find("PORTFOLIO_SIG_CLUSTER_EW_RW") != std::string::npos);
    CHECK(summary.find("PORTFOLIO_SIG_CLUSTER_MVP_FOT") != std::string::npos);
    CHECK(summary.find("PORTFOLIO_SIG_CLUSTER_MDP_FOT") != std::string::npos);
    CHECK(summary.find("PORTFOLIO_SIG_CLUSTER_MDP_RW") != std::string::npos);

    const std::string values = slurp(fx.out + "/values_PORTFOLIO_EW.csv");
    CHECK(values.rfind("date,value\n", 0) == 0);

    const std::string weights = slurp(fx.out + "/weights.csv");
    CHECK(weights.rfind("date,symbol,weight,strategy\n", 0) == 0);
    CHECK(weights.find(",PORTFOLIO_SIG_CLUSTER_EW_RW\n") != std::string::npos);

    // Rerun with the same seed: byte-identical summary.
    const int rc2 = run_cli("backtest --config " + fx.config, fx.dir + "/log2.txt");
    REQUIRE(rc2 == 0);
    CHECK(slurp(fx.out + "/summary.csv") == summary);

    // A different seed changes the clustered strategies.
    const int rc3 = run_cli("backtest --config " + fx.config + " --seed 43",
                            fx.dir + "/log3.txt");
    REQUIRE(rc3 == 0);
    // (not asserting inequality: clusters may coincide; just must still parse)
    CHECK(count_lines(slurp(fx.out + "/summary.csv")) == 7);
}

TEST_CASE("invalid date range exits with code 2 and names the field") {
    CliFixture fx("2022-03-07", "2021-03-01");
    const std::string log = fx.dir + "/log.txt";
    const int rc = run_cli("backtest --config " + fx.config, log);
    CHECK(rc == 2);
    const std::string text = slurp(log);
    CHECK(text.find("start") != std::string::npos);
}

TEST_CASE("clusters subcommand emits the report") {
    CliFixture fx;
    // 2021-06-07 is a Monday inside the run.
    const int rc = run_cli("clusters --config " + fx.config +
                               " --date 2021-06-07 --policy rw --features " + fx.dir +
                               "/features.csv",
                           fx.dir + "/log.txt");
    REQUIRE(rc == 0);
    const std::string report = slurp(fx.out + "/clusters_rw_2021-06-07.csv");
    CHECK(count_lines(report) == 11);  // header + 10 assets
    CHECK(report.rfind("symbol,cluster,pc1,pc2,is_representative\n", 0) == 0);
    int reps = 0;
    std::istringstream in(report);
    std::string line;
    std::getline(in, line);
    std::set<std::string> clusters;
    while (std::getline(in, line)) {
        if (line.size() >= 2 && line.substr(line.size() - 2) == ",1") ++reps;
        const auto first_comma = line.find(',');
        const auto second_comma = line.find(',', first_comma + 1);
        clusters.insert(line.substr(first_comma + 1, second_comma - first_comma - 1));
    }
    CHECK(reps == 4);
    CHECK(clusters.size() == 4);

    const std::string features = slurp(fx.dir + "/features.csv");
    CHECK(count_lines(features) == 1 + 10 * 30);  // header + 30 words per asset
    CHECK(features.find("A00,1.2.2,") != std::string::npos);

    // A non-rebalance date is a validation error.
    const int rc2 = run_cli("clusters --config " + fx.config + " --date 2021-06-08 --policy rw",
                            fx.dir + "/log2.txt");
    CHECK(rc2 == 2);
}

TEST_CASE("validate subcommand") {
    const auto dir = make_temp_dir("cli_validate");

    SUBCASE("clean fixture reports 0 issues") {
        const std::string data = dir + "/clean.csv";
        write_prices_csv(data, gbm_universe(3, parse_date("2022-01-03"), 60, 5));
        const std::string log = dir + "/log.txt";
        CHECK(run_cli("validate --data " + data, log) == 0);
        CHECK(slurp(log).find("0 issues") != std::string::npos);
    }

    SUBCASE("gap is reported but not structural") {
        const std::string data = dir + "/gap.csv";
        {
            std::ofstream out(data);
            out << "date,symbol,close\n"
                << "2022-01-03,BTC,1.0\n"
                << "2022-01-04,BTC,1.1\n"
                << "2022-01-06,BTC,1.2\n";
        }
        const std::string log = dir + "/log.txt";
        CHECK(run_cli("validate --data " + data, log) == 0);
        const std::string text = slurp(log);
        CHECK(text.find("gap in BTC") != std::string::npos);
        CHECK(text.find("2022-01-04") != std::string::npos);
        CHECK(text.find("2022-01-06") != std::string::npos);
    }

    SUBCASE("duplicate rows are structural") {
        const std::string data = dir + "/dup.csv";
        {
            std::ofstream out(data);
            out << "date,symbol,close\n"
                << "2022-01-03,BTC,1.0\n"
                << "2022-01-03,BTC,1.0\n";
        }
        const std::string log = dir + "/log.txt";
        CHECK(run_cli("validate --data " + data, log) == 1);
        CHECK(slurp(log).find("duplicate") != std::string::npos);
    }
}
