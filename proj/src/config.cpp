#include "sigfolio/config.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

#include "sigfolio/error.hpp"

namespace sigfolio {

namespace {

using nlohmann::json;

Date parse_date_field(const json& j, const std::string& field) {
    if (!j.contains(field) || !j[field].is_string())
        throw ConfigError("config field '" + field + "' missing or not a date string");
    try {
        return parse_date(j[field].get<std::string>());
    } catch (const Error& e) {
        throw ConfigError("config field '" + field + "': " + e.what());
    }
}

AllocatorKind parse_allocator(const std::string& s) {
    if (s == "EW") return AllocatorKind::EW;
    if (s == "MVP") return AllocatorKind::MVP;
    if (s == "MDP") return AllocatorKind::MDP;
    throw ConfigError("strategy field 'allocator' must be EW, MVP or MDP, got '" + s + "'");
}

WindowPolicy::Kind parse_policy(std::string s) {
    for (char& c : s) c = char(std::toupper(static_cast<unsigned char>(c)));
    if (s == "FOT") return WindowPolicy::Kind::FOT;
    if (s == "RW") return WindowPolicy::Kind::RW;
    throw ConfigError("strategy field 'policy' must be fot or rw, got '" + s + "'");
}

}  // namespace

RunConfig load_run_config(const std::string& path, std::optional<std::uint64_t> seed_override) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }

    RunConfig config;
    if (!j.contains("data") || !j["data"].is_string())
        throw ConfigError("config field 'data' missing or not a string");
    config.data_path = j["data"].get<std::string>();
    if (!j.contains("output_dir") || !j["output_dir"].is_string())
        throw ConfigError("config field 'output_dir' missing or not a string");
    config.output_dir = j["output_dir"].get<std::string>();

    config.start = parse_date_field(j, "start");
    config.end = parse_date_field(j, "end");
    if (!(config.start < config.end))
        throw ConfigError("config field 'start' must precede 'end' (" +
                          format_date(config.start) + " >= " + format_date(config.end) + ")");

    config.seed = j.value("seed", std::uint64_t{0});
    if (seed_override) config.seed = *seed_override;

    config.fot_origin = j.contains("fot_origin") ? parse_date_field(j, "fot_origin")
                                                 : config.start;
    config.rw_length_days = j.value("rw_length_days", 30);
    if (config.rw_length_days < 2)
        throw ConfigError("config field 'rw_length_days' must be >= 2");

    const json defaults = j.value("defaults", json::object());
    const int default_k = defaults.value("k", 4);
    const int default_level = defaults.value("level", 4);
    const double default_fee = defaults.value("fee_rate", 0.0020);
    const double default_ridge = defaults.value("ridge", 1e-8);

    if (!j.contains("strategies") || !j["strategies"].is_array() || j["strategies"].empty())
        throw ConfigError("config field 'strategies' must be a non-empty array");

    std::set<std::string> names;
    for (const auto& sj : j["strategies"]) {
        StrategyConfig s;
        if (!sj.contains("allocator") || !sj["allocator"].is_string())
            throw ConfigError("strategy field 'allocator' missing");
        s.allocator = parse_allocator(sj["allocator"].get<std::string>());
        s.filtered = sj.value("filtered", false);
        const auto kind = parse_policy(sj.value("policy", std::string("RW")));
        s.policy = kind == WindowPolicy::Kind::FOT ? WindowPolicy::fot(config.fot_origin)
                                                   : WindowPolicy::rw(config.rw_length_days);
        s.k = sj.value("k", default_k);
        s.level = sj.value("level", default_level);
        s.fee_rate = sj.value("fee_rate", default_fee);
        s.ridge = sj.value("ridge", default_ridge);
        s.seed = config.seed;
        s.name = sj.value("name", std::string());
        if (s.name.empty()) s.name = default_strategy_name(s);
        if (s.k < 1) throw ConfigError("strategy field 'k' must be >= 1");
        if (s.level < 1) throw ConfigError("strategy field 'level' must be >= 1");
        if (s.fee_rate < 0.0 || s.fee_rate > 0.01)
            throw ConfigError("strategy field 'fee_rate' must lie in [0, 0.01]");
        if (!names.insert(s.name).second)
            throw ConfigError("duplicate strategy name '" + s.name + "'");
        config.strategies.push_back(std::move(s));
    }

    if (config.fot_origin > config.start)
        throw ConfigError("config field 'fot_origin' must be on or before 'start'");
    return config;
}

}  // namespace sigfolio
