#include "sigfolio/data.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>

#include "sigfolio/error.hpp"

namespace sigfolio {

namespace {

struct RawRow {
    Date date;
    std::string symbol;
    double close;
    std::size_t line;
};

std::optional<double> parse_close(const std::string& field) {
    double v{};
    const char* first = field.data();
    const char* last = first + field.size();
    auto [p, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || p != last) return std::nullopt;
    return v;
}

bool split3(const std::string& line, std::string out[3]) {
    std::size_t a = line.find(',');
    if (a == std::string::npos) return false;
    std::size_t b = line.find(',', a + 1);
    if (b == std::string::npos) return false;
    if (line.find(',', b + 1) != std::string::npos) return false;
    out[0] = line.substr(0, a);
    out[1] = line.substr(a + 1, b - a - 1);
    out[2] = line.substr(b + 1);
    return true;
}

// Shared row-level parse; `sink` decides whether a problem throws or is
// collected as a diagnostic.
template <typename OnRow, typename OnProblem>
void parse_csv(const std::string& path, OnRow&& on_row, OnProblem&& on_problem) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open data file '" + path + "'");
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    bool any_data = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!have_header) {
            if (line != "date,symbol,close")
                throw Error("line 1: expected header 'date,symbol,close'");
            have_header = true;
            continue;
        }
        std::string fields[3];
        if (!split3(line, fields)) {
            on_problem(DataDiagnostic::Kind::malformed,
                       "malformed row at line " + std::to_string(line_no) +
                           ": expected 3 comma-separated fields");
            continue;
        }
        Date date{};
        try {
            date = parse_date(fields[0]);
        } catch (const Error&) {
            on_problem(DataDiagnostic::Kind::malformed, "malformed row at line " +
                                                            std::to_string(line_no) +
                                                            ": bad date '" + fields[0] + "'");
            continue;
        }
        auto close = parse_close(fields[2]);
        if (!close) {
            on_problem(DataDiagnostic::Kind::malformed, "malformed row at line " +
                                                            std::to_string(line_no) +
                                                            ": bad close '" + fields[2] + "'");
            continue;
        }
        if (fields[1].empty()) {
            on_problem(DataDiagnostic::Kind::malformed,
                       "malformed row at line " + std::to_string(line_no) + ": empty symbol");
            continue;
        }
        if (*close <= 0.0) {
            on_problem(DataDiagnostic::Kind::non_positive,
                       "non-positive price at line " + std::to_string(line_no));
            continue;
        }
        any_data = true;
        on_row(RawRow{date, fields[1], *close, line_no});
    }
    if (!have_header) throw Error("empty file '" + path + "'");
    if (!any_data)
        on_problem(DataDiagnostic::Kind::empty, "empty file '" + path + "': no data rows");
}

std::vector<PriceStream> assemble(std::map<std::string, std::vector<Observation>>&& by_symbol) {
    std::vector<PriceStream> out;
    out.reserve(by_symbol.size());
    for (auto& [symbol, obs] : by_symbol) {
        std::sort(obs.begin(), obs.end(),
                  [](const Observation& a, const Observation& b) { return a.date < b.date; });
        out.push_back(PriceStream{symbol, std::move(obs)});
    }
    return out;
}

}  // namespace

std::optional<std::size_t> PriceStream::index_of(Date d) const {
    auto it = std::lower_bound(observations.begin(), observations.end(), d,
                               [](const Observation& o, Date x) { return o.date < x; });
    if (it == observations.end() || it->date != d) return std::nullopt;
    return std::size_t(it - observations.begin());
}

std::optional<double> PriceStream::close_at(Date d) const {
    auto idx = index_of(d);
    if (!idx) return std::nullopt;
    return observations[*idx].close;
}

std::optional<double> PriceStream::close_on_or_before(Date d) const {
    auto it = std::upper_bound(observations.begin(), observations.end(), d,
                               [](Date x, const Observation& o) { return x < o.date; });
    if (it == observations.begin()) return std::nullopt;
    return std::prev(it)->close;
}

bool PriceStream::covers_daily(Date a, Date b) const {
    if (a > b) return false;
    auto ia = index_of(a);
    auto ib = index_of(b);
    if (!ia || !ib) return false;
    // Dates are strictly increasing, so an index span equal to the day span
    // means every day in between is present.
    return *ib - *ia == std::size_t(b - a);
}

WindowPolicy WindowPolicy::fot(Date origin) {
    WindowPolicy p;
    p.kind = Kind::FOT;
    p.origin = origin;
    return p;
}

WindowPolicy WindowPolicy::rw(int length_days) {
    if (length_days < 2) throw Error("rolling window length must be >= 2 days");
    WindowPolicy p;
    p.kind = Kind::RW;
    p.length_days = length_days;
    return p;
}

const std::vector<std::string>& UniverseCalendar::eligible_at(Date d) const {
    auto it = std::lower_bound(rebalance_dates.begin(), rebalance_dates.end(), d);
    if (it == rebalance_dates.end() || *it != d)
        throw Error(format_date(d) + " is not a rebalance date");
    return eligible[std::size_t(it - rebalance_dates.begin())];
}

bool UniverseCalendar::is_rebalance_date(Date d) const {
    return std::binary_search(rebalance_dates.begin(), rebalance_dates.end(), d);
}

std::vector<PriceStream> load_prices(const std::string& path) {
    std::map<std::string, std::vector<Observation>> by_symbol;
    std::map<std::pair<std::string, std::int32_t>, std::size_t> seen;
    parse_csv(
        path,
        [&](const RawRow& row) {
            auto key = std::make_pair(row.symbol, row.date.days);
            auto [it, inserted] = seen.emplace(key, row.line);
            if (!inserted)
                throw Error("duplicate (symbol, date) pair (" + row.symbol + ", " +
                            format_date(row.date) + ") at line " + std::to_string(row.line) +
                            " (first seen at line " + std::to_string(it->second) + ")");
            by_symbol[row.symbol].push_back(Observation{row.date, row.close});
        },
        [&](DataDiagnostic::Kind, const std::string& message) { throw Error(message); });
    return assemble(std::move(by_symbol));
}

ScanResult scan_prices(const std::string& path) {
    ScanResult result;
    std::map<std::string, std::vector<Observation>> by_symbol;
    std::map<std::pair<std::string, std::int32_t>, std::size_t> seen;
    parse_csv(
        path,
        [&](const RawRow& row) {
            auto key = std::make_pair(row.symbol, row.date.days);
            auto [it, inserted] = seen.emplace(key, row.line);
            if (!inserted) {
                result.diagnostics.push_back(
                    {DataDiagnostic::Kind::duplicate, true,
                     "duplicate (symbol, date) pair (" + row.symbol + ", " +
                         format_date(row.date) + ") at line " + std::to_string(row.line) +
                         " (first seen at line " + std::to_string(it->second) + ")"});
                return;
            }
            by_symbol[row.symbol].push_back(Observation{row.date, row.close});
        },
        [&](DataDiagnostic::Kind kind, const std::string& message) {
            result.diagnostics.push_back({kind, true, message});
        });
    result.streams = assemble(std::move(by_symbol));
    for (const auto& stream : result.streams) {
        for (std::size_t i = 0; i + 1 < stream.observations.size(); ++i) {
            const Date a = stream.observations[i].date;
            const Date b = stream.observations[i + 1].date;
            if (b - a > 1)
                result.diagnostics.push_back({DataDiagnostic::Kind::gap, false,
                                              "gap in " + stream.symbol + " between " +
                                                  format_date(a) + " and " + format_date(b)});
        }
    }
    return result;
}

bool eligible_at(const PriceStream& stream, Date t, const WindowPolicy& policy) {
    if (stream.observations.empty()) return false;
    if (policy.is_fot()) {
        const Date start = std::max(policy.origin, stream.first_date());
        if (t - start + 1 < kFotWarmupObservations) return false;
        return stream.covers_daily(start, t);
    }
    return stream.covers_daily(t - policy.length_days, t);
}

UniverseCalendar build_calendar(const std::vector<PriceStream>& streams, Date start, Date end,
                                const WindowPolicy& policy) {
    if (!(start < end)) throw Error("calendar start must precede end");
    UniverseCalendar cal;
    cal.policy = policy;
    for (Date d = next_monday_on_or_after(start); d <= end; d = d + 7)
        cal.rebalance_dates.push_back(d);
    if (cal.rebalance_dates.empty())
        throw Error("no Mondays between " + format_date(start) + " and " + format_date(end));
    if (policy.is_fot() && policy.origin > cal.rebalance_dates.front())
        throw Error("FOT origin " + format_date(policy.origin) +
                    " falls after the first rebalance date " +
                    format_date(cal.rebalance_dates.front()));
    cal.eligible.reserve(cal.rebalance_dates.size());
    for (Date t : cal.rebalance_dates) {
        std::vector<std::string> symbols;
        for (const auto& stream : streams)
            if (eligible_at(stream, t, policy)) symbols.push_back(stream.symbol);
        if (symbols.empty())
            throw Error("empty eligible set at " + format_date(t));
        cal.eligible.push_back(std::move(symbols));
    }
    return cal;
}

std::vector<Observation> window_slice(const PriceStream& stream, Date t,
                                      const WindowPolicy& policy) {
    const Date from = policy.is_fot() ? std::max(policy.origin, stream.first_date())
                                      : t - policy.length_days;
    if (!stream.covers_daily(from, t))
        throw Error(stream.symbol + " not eligible at " + format_date(t) +
                    ": missing dates inside window");
    const auto ia = stream.index_of(from);
    const auto ib = stream.index_of(t);
    return {stream.observations.begin() + std::ptrdiff_t(*ia),
            stream.observations.begin() + std::ptrdiff_t(*ib) + 1};
}

}  // namespace sigfolio
