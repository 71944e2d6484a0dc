#ifndef BVARCAST_CALENDAR_HPP
#define BVARCAST_CALENDAR_HPP

#include <chrono>
#include <compare>
#include <cstdio>
#include <string>

#include "bvarcast/common.hpp"

namespace bvarcast {

// Calendar day stored as days since 1970-01-01 (proleptic Gregorian).
class Date {
public:
  Date() = default;
  explicit Date(int serial) : serial_(serial) {}

  static Date from_ymd(int y, unsigned m, unsigned d) {
    using namespace std::chrono;
    year_month_day ymd{year{y}, month{m}, day{d}};
    require(ymd.ok(), "invalid calendar date");
    return Date(static_cast<int>(sys_days{ymd}.time_since_epoch().count()));
  }

  // Accepts ISO-8601 "YYYY-MM-DD".
  static Date parse(const std::string& s) {
    int y = 0;
    unsigned m = 0, d = 0;
    if (std::sscanf(s.c_str(), "%d-%u-%u", &y, &m, &d) != 3)
      fail("unparseable date '" + s + "' (expected YYYY-MM-DD)");
    return from_ymd(y, m, d);
  }

  std::string str() const {
    using namespace std::chrono;
    year_month_day ymd{sys_days{days{serial_}}};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", int(ymd.year()),
                  unsigned(ymd.month()), unsigned(ymd.day()));
    return buf;
  }

  int serial() const { return serial_; }
  Date next() const { return Date(serial_ + 1); }

  auto operator<=>(const Date&) const = default;

private:
  int serial_ = 0;
};

} // namespace bvarcast

#endif
