#include "sigfolio/dates.hpp"

#include <charconv>
#include <chrono>

#include "sigfolio/error.hpp"

namespace sigfolio {

namespace {

bool parse_int(const char* first, const char* last, int& out) {
    auto [p, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && p == last;
}

}  // namespace

Date parse_date(const std::string& text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-')
        throw Error("invalid date '" + text + "': expected YYYY-MM-DD");
    int y = 0, m = 0, d = 0;
    const char* s = text.data();
    if (!parse_int(s, s + 4, y) || !parse_int(s + 5, s + 7, m) || !parse_int(s + 8, s + 10, d))
        throw Error("invalid date '" + text + "': expected YYYY-MM-DD");
    std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{unsigned(m)},
                                    std::chrono::day{unsigned(d)}};
    if (!ymd.ok())
        throw Error("invalid date '" + text + "': no such calendar day");
    auto sd = std::chrono::sys_days{ymd};
    return Date{static_cast<std::int32_t>(sd.time_since_epoch().count())};
}

std::string format_date(Date d) {
    std::chrono::sys_days sd{std::chrono::days{d.days}};
    std::chrono::year_month_day ymd{sd};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", int(ymd.year()), unsigned(ymd.month()),
                  unsigned(ymd.day()));
    return buf;
}

int iso_weekday(Date d) {
    std::chrono::weekday wd{std::chrono::sys_days{std::chrono::days{d.days}}};
    return int(wd.iso_encoding());
}

Date next_monday_on_or_after(Date d) {
    int wd = iso_weekday(d);
    return wd == 1 ? d : d + (8 - wd);
}

int year_of(Date d) {
    std::chrono::year_month_day ymd{std::chrono::sys_days{std::chrono::days{d.days}}};
    return int(ymd.year());
}

}  // namespace sigfolio
