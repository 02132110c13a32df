#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sigfolio/dates.hpp"

namespace sigfolio {

struct Observation {
    Date date;
    double close = 0.0;
};

// Daily closes for one asset. Dates strictly increasing, all closes positive.
struct PriceStream {
    std::string symbol;
    std::vector<Observation> observations;

    Date first_date() const { return observations.front().date; }
    Date last_date() const { return observations.back().date; }

    // Index of an exact date, if present.
    std::optional<std::size_t> index_of(Date d) const;

    // Close at the exact date, if present.
    std::optional<double> close_at(Date d) const;

    // Most recent close at or before d (valuation lookup; carries the last
    // close forward over gaps). Empty when d precedes all data.
    std::optional<double> close_on_or_before(Date d) const;

    // True when every day in [a, b] has an observation.
    bool covers_daily(Date a, Date b) const;
};

struct WindowPolicy {
    enum class Kind { FOT, RW };

    Kind kind = Kind::RW;
    Date origin{};             // FOT only: fixed start of the expanding window
    int length_days = 30;      // RW only

    static WindowPolicy fot(Date origin);
    static WindowPolicy rw(int length_days = 30);

    bool is_fot() const { return kind == Kind::FOT; }
};

// An asset enters the FOT universe once it has this many daily closes, the
// same information content as the default 30-day rolling window.
inline constexpr int kFotWarmupObservations = 30;

// Weekly (Monday) rebalance schedule with the per-date eligible symbol set.
struct UniverseCalendar {
    WindowPolicy policy;
    std::vector<Date> rebalance_dates;
    std::vector<std::vector<std::string>> eligible;  // sorted, parallel to dates

    const std::vector<std::string>& eligible_at(Date d) const;
    bool is_rebalance_date(Date d) const;
};

// Strict CSV ingestion (header `date,symbol,close`). Any malformed row,
// non-positive price, duplicate (symbol, date) pair or empty file throws
// Error with the offending line number. Streams come back sorted by symbol,
// observations sorted by date.
std::vector<PriceStream> load_prices(const std::string& path);

// Lenient scan used by `validate`: collects diagnostics instead of throwing
// (except for an unreadable file) and keeps all well-formed rows.
struct DataDiagnostic {
    enum class Kind { malformed, non_positive, duplicate, gap, empty };
    Kind kind;
    bool structural = true;  // gaps are informational, everything else is structural
    std::string message;
};

struct ScanResult {
    std::vector<PriceStream> streams;
    std::vector<DataDiagnostic> diagnostics;
};

ScanResult scan_prices(const std::string& path);

// True when `stream` has the data the policy requires at rebalance date t:
// RW needs full daily coverage of [t - length, t]; FOT needs gap-free daily
// coverage from max(origin, first listing) through t with at least the
// warm-up number of closes.
bool eligible_at(const PriceStream& stream, Date t, const WindowPolicy& policy);

// Every Monday in [start, end] becomes a rebalance date. Throws when the
// range contains no Monday or some rebalance date has no eligible asset.
UniverseCalendar build_calendar(const std::vector<PriceStream>& streams, Date start, Date end,
                                const WindowPolicy& policy);

// The lookback window ending at t: FOT returns all observations in
// [origin, t], RW the observations in [t - length, t]. Throws if the stream
// is not eligible (gap inside the window or missing endpoint).
std::vector<Observation> window_slice(const PriceStream& stream, Date t,
                                      const WindowPolicy& policy);

}  // namespace sigfolio
