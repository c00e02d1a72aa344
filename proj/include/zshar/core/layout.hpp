#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

#include "zshar/core/types.hpp"

namespace zshar {

struct SensorInfo {
  std::string location_phrase;  // "in the kitchen near the stove"
  std::string context_phrase;   // "magnetic sensor on the medicine cabinet door"
  Modality modality = Modality::other;

  bool operator==(const SensorInfo&) const = default;
};

inline constexpr std::string_view kUnknownLocation = "in an unknown location";

class HomeLayout {
 public:
  using SensorMap = std::map<std::string, SensorInfo, std::less<>>;

  HomeLayout() = default;

  // Throws ConfigError naming the sensor on any invalid phrase.
  HomeLayout(std::string home_name, SensorMap sensors);

  static HomeLayout from_json(const nlohmann::json& j);
  static HomeLayout load(const std::filesystem::path& path);
  nlohmann::json to_json() const;

  const std::string& home_name() const { return home_name_; }
  const SensorMap& sensors() const { return sensors_; }

  // Total. Unmapped ids get {"in an unknown location", "<word> sensor", hint},
  // where <word> is "unidentified" for Modality::other.
  SensorInfo lookup(std::string_view sensor_id, Modality hint = Modality::other) const;

  // Mapped modality, if the layout knows the sensor.
  std::optional<Modality> modality_of(std::string_view sensor_id) const;

  // sha256 of the canonical JSON form.
  std::string digest() const;

 private:
  std::string home_name_;
  SensorMap sensors_;
};

inline SensorInfo lookup_sensor(const HomeLayout& layout, std::string_view sensor_id,
                                Modality hint = Modality::other) {
  return layout.lookup(sensor_id, hint);
}

// Phrases that end up verbatim inside summaries: non-empty, no `<`/`>`, no digits.
// Returns the reason when the phrase is rejected.
std::optional<std::string> check_prose_fragment(std::string_view phrase);

}  // namespace zshar
