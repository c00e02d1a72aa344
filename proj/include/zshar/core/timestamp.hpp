#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace zshar {

// Naive local date-time with microsecond resolution. Source logs carry no
// zone, so none is stored and no conversion ever happens.
class Timestamp {
 public:
  constexpr Timestamp() = default;

  static constexpr Timestamp from_micros(std::int64_t micros) { return Timestamp(micros); }

  // Returns nullopt for anything that is not a valid calendar instant.
  static std::optional<Timestamp> from_fields(int year, unsigned month, unsigned day, unsigned hour,
                                              unsigned minute, unsigned second,
                                              std::uint32_t microsecond = 0);

  // Accepts `YYYY-MM-DD` + (`T` | ' ') + `HH:MM:SS[.f{1,6}]`.
  static std::optional<Timestamp> parse_iso(std::string_view text);

  // Date and time-of-day given separately, as in CASAS logs.
  static std::optional<Timestamp> parse_date_time(std::string_view date, std::string_view time);

  constexpr std::int64_t micros() const { return micros_; }

  // Hour of day in [0, 24).
  unsigned hour() const;

  // `YYYY-MM-DDTHH:MM:SS.ffffff`, always six fractional digits.
  std::string to_iso() const;

  friend constexpr auto operator<=>(Timestamp, Timestamp) = default;

 private:
  explicit constexpr Timestamp(std::int64_t micros) : micros_(micros) {}
  std::int64_t micros_ = 0;
};

inline constexpr std::int64_t kMicrosPerSecond = 1'000'000;

}  // namespace zshar
