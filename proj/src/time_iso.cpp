#include "otriage/time_iso.hpp"

#include <chrono>
#include <cstdio>

#include "otriage/errors.hpp"

namespace otriage {

namespace {

[[noreturn]] void bad(std::string_view text, const char* why) {
    throw ParseError("bad timestamp '" + std::string(text) + "': " + why);
}

bool read_digits(std::string_view s, std::size_t pos, std::size_t n, int& out) {
    if (pos + n > s.size()) return false;
    int v = 0;
    for (std::size_t i = 0; i < n; ++i) {
        char c = s[pos + i];
        if (c < '0' || c > '9') return false;
        v = v * 10 + (c - '0');
    }
    out = v;
    return true;
}

}  // namespace

TimestampMs parse_iso8601(std::string_view text) {
    using namespace std::chrono;

    int y, mo, d, h, mi, se;
    if (!read_digits(text, 0, 4, y)) bad(text, "expected YYYY");
    if (text.size() < 5 || text[4] != '-') bad(text, "expected '-' after year");
    if (!read_digits(text, 5, 2, mo)) bad(text, "expected MM");
    if (text.size() < 8 || text[7] != '-') bad(text, "expected '-' after month");
    if (!read_digits(text, 8, 2, d)) bad(text, "expected DD");
    if (text.size() < 11 || text[10] != 'T') bad(text, "expected 'T' separator");
    if (!read_digits(text, 11, 2, h)) bad(text, "expected HH");
    if (text.size() < 14 || text[13] != ':') bad(text, "expected ':' after hour");
    if (!read_digits(text, 14, 2, mi)) bad(text, "expected MM");
    if (text.size() < 17 || text[16] != ':') bad(text, "expected ':' after minute");
    if (!read_digits(text, 17, 2, se)) bad(text, "expected SS");

    std::size_t pos = 19;
    int millis = 0;
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        std::size_t start = pos;
        long frac = 0;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
            if (pos - start < 3) frac = frac * 10 + (text[pos] - '0');
            ++pos;
        }
        std::size_t ndigits = pos - start;
        if (ndigits == 0) bad(text, "empty fractional seconds");
        while (ndigits < 3) {
            frac *= 10;
            ++ndigits;
        }
        millis = static_cast<int>(frac);
    }

    if (pos >= text.size()) bad(text, "missing zone designator");
    DurationMs zone_offset_ms = 0;
    if (text[pos] == 'Z') {
        ++pos;
    } else if (text[pos] == '+' || text[pos] == '-') {
        int sign = text[pos] == '-' ? -1 : 1;
        ++pos;
        int zh, zm;
        if (!read_digits(text, pos, 2, zh)) bad(text, "expected zone hours");
        pos += 2;
        if (pos < text.size() && text[pos] == ':') ++pos;
        if (!read_digits(text, pos, 2, zm)) bad(text, "expected zone minutes");
        pos += 2;
        if (zh > 23 || zm > 59) bad(text, "zone offset out of range");
        zone_offset_ms = sign * ((zh * 60LL + zm) * 60LL * 1000LL);
    } else {
        bad(text, "missing zone designator");
    }
    if (pos != text.size()) bad(text, "trailing characters");

    year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) bad(text, "no such calendar date");
    if (h > 23 || mi > 59 || se > 60) bad(text, "time of day out of range");
    if (se == 60) se = 59;  // fold leap seconds

    sys_days days_part{ymd};
    TimestampMs ms = sys_time<milliseconds>(days_part).time_since_epoch().count();
    ms += ((h * 60LL + mi) * 60LL + se) * 1000LL + millis;
    return ms - zone_offset_ms;
}

std::string format_iso8601(TimestampMs t) {
    using namespace std::chrono;
    sys_time<milliseconds> tp{milliseconds{t}};
    sys_days days_part = floor<days>(tp);
    year_month_day ymd{days_part};
    auto tod = (tp - days_part).count();  // ms within day, always >= 0

    int h = static_cast<int>(tod / 3'600'000);
    int mi = static_cast<int>(tod / 60'000 % 60);
    int se = static_cast<int>(tod / 1'000 % 60);
    int ms = static_cast<int>(tod % 1'000);

    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d:%02d.%03dZ",
                  static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                  static_cast<unsigned>(ymd.day()), h, mi, se, ms);
    return buf;
}

}  // namespace otriage
