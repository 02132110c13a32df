#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace sigfolio {

// Calendar day, stored as days since 1970-01-01. Cheap to compare and to step
// by whole days, which is all the rebalance calendar needs.
struct Date {
    std::int32_t days = 0;

    constexpr auto operator<=>(const Date&) const = default;

    constexpr Date operator+(int n) const { return Date{days + n}; }
    constexpr Date operator-(int n) const { return Date{days - n}; }
    constexpr int operator-(Date other) const { return days - other.days; }

    Date& operator++() { ++days; return *this; }
};

// Parses strict ISO-8601 "YYYY-MM-DD". Throws Error on anything else,
// including impossible calendar dates.
Date parse_date(const std::string& text);

std::string format_date(Date d);

// ISO weekday: Monday = 1 ... Sunday = 7.
int iso_weekday(Date d);

inline bool is_monday(Date d) { return iso_weekday(d) == 1; }

// First Monday on or after d.
Date next_monday_on_or_after(Date d);

// Calendar year of the date (e.g. 2023).
int year_of(Date d);

}  // namespace sigfolio
