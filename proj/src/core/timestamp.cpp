#include "zshar/core/timestamp.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>

namespace zshar {
namespace {

constexpr std::int64_t kMicrosPerDay = 86'400 * kMicrosPerSecond;

bool parse_fixed_uint(std::string_view text, std::size_t width, unsigned& out) {
  if (text.size() != width) return false;
  for (char c : text) {
    if (c < '0' || c > '9') return false;
  }
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc{} && ptr == text.data() + text.size();
}

std::optional<std::chrono::year_month_day> parse_date(std::string_view date) {
  // YYYY-MM-DD
  if (date.size() != 10 || date[4] != '-' || date[7] != '-') return std::nullopt;
  unsigned y = 0, m = 0, d = 0;
  if (!parse_fixed_uint(date.substr(0, 4), 4, y) || !parse_fixed_uint(date.substr(5, 2), 2, m) ||
      !parse_fixed_uint(date.substr(8, 2), 2, d)) {
    return std::nullopt;
  }
  std::chrono::year_month_day ymd{std::chrono::year{static_cast<int>(y)}, std::chrono::month{m},
                                  std::chrono::day{d}};
  if (!ymd.ok()) return std::nullopt;
  return ymd;
}

std::optional<std::int64_t> parse_time_of_day(std::string_view time) {
  // HH:MM:SS[.f{1,6}]
  if (time.size() < 8 || time[2] != ':' || time[5] != ':') return std::nullopt;
  unsigned h = 0, m = 0, s = 0;
  if (!parse_fixed_uint(time.substr(0, 2), 2, h) || !parse_fixed_uint(time.substr(3, 2), 2, m) ||
      !parse_fixed_uint(time.substr(6, 2), 2, s)) {
    return std::nullopt;
  }
  if (h > 23 || m > 59 || s > 59) return std::nullopt;
  std::int64_t frac = 0;
  if (time.size() > 8) {
    if (time[8] != '.') return std::nullopt;
    std::string_view digits = time.substr(9);
    if (digits.empty() || digits.size() > 6) return std::nullopt;
    unsigned value = 0;
    if (!parse_fixed_uint(digits, digits.size(), value)) return std::nullopt;
    frac = value;
    for (std::size_t i = digits.size(); i < 6; ++i) frac *= 10;
  }
  return (static_cast<std::int64_t>(h) * 3600 + m * 60 + s) * kMicrosPerSecond + frac;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

std::optional<Timestamp> Timestamp::from_fields(int year, unsigned month, unsigned day,
                                                unsigned hour, unsigned minute, unsigned second,
                                                std::uint32_t microsecond) {
  std::chrono::year_month_day ymd{std::chrono::year{year}, std::chrono::month{month},
                                  std::chrono::day{day}};
  if (!ymd.ok() || hour > 23 || minute > 59 || second > 59 || microsecond >= kMicrosPerSecond) {
    return std::nullopt;
  }
  const std::int64_t days = std::chrono::sys_days{ymd}.time_since_epoch().count();
  return Timestamp(days * kMicrosPerDay +
                   (static_cast<std::int64_t>(hour) * 3600 + minute * 60 + second) *
                       kMicrosPerSecond +
                   microsecond);
}

std::optional<Timestamp> Timestamp::parse_date_time(std::string_view date, std::string_view time) {
  auto ymd = parse_date(date);
  auto tod = parse_time_of_day(time);
  if (!ymd || !tod) return std::nullopt;
  const std::int64_t days = std::chrono::sys_days{*ymd}.time_since_epoch().count();
  return Timestamp(days * kMicrosPerDay + *tod);
}

std::optional<Timestamp> Timestamp::parse_iso(std::string_view text) {
  if (text.size() < 19 || (text[10] != 'T' && text[10] != ' ')) return std::nullopt;
  return parse_date_time(text.substr(0, 10), text.substr(11));
}

unsigned Timestamp::hour() const {
  const std::int64_t tod = micros_ - floor_div(micros_, kMicrosPerDay) * kMicrosPerDay;
  return static_cast<unsigned>(tod / (3600 * kMicrosPerSecond));
}

std::string Timestamp::to_iso() const {
  const std::int64_t days = floor_div(micros_, kMicrosPerDay);
  const std::int64_t tod = micros_ - days * kMicrosPerDay;
  const std::chrono::year_month_day ymd{std::chrono::sys_days{std::chrono::days{days}}};
  const std::int64_t secs = tod / kMicrosPerSecond;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02lld:%02lld:%02lld.%06lld",
                static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()), static_cast<long long>(secs / 3600),
                static_cast<long long>((secs / 60) % 60), static_cast<long long>(secs % 60),
                static_cast<long long>(tod % kMicrosPerSecond));
  return buf;
}

}  // namespace zshar
