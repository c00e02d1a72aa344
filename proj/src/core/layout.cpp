#include "zshar/core/layout.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "zshar/core/digest.hpp"
#include "zshar/core/errors.hpp"

namespace zshar {

std::optional<std::string> check_prose_fragment(std::string_view phrase) {
  if (std::all_of(phrase.begin(), phrase.end(),
                  [](unsigned char c) { return std::isspace(c) != 0; })) {
    return "empty phrase";
  }
  if (phrase.find_first_of("<>") != std::string_view::npos) return "placeholder token";
  if (std::any_of(phrase.begin(), phrase.end(),
                  [](unsigned char c) { return std::isdigit(c) != 0; })) {
    return "digits are not allowed";
  }
  return std::nullopt;
}

HomeLayout::HomeLayout(std::string home_name, SensorMap sensors)
    : home_name_(std::move(home_name)), sensors_(std::move(sensors)) {
  for (const auto& [id, info] : sensors_) {
    if (id.empty()) throw ConfigError("layout: empty sensor id");
    if (auto why = check_prose_fragment(info.location_phrase)) {
      throw ConfigError("layout: sensor " + id + " location_phrase: " + *why);
    }
    if (auto why = check_prose_fragment(info.context_phrase)) {
      throw ConfigError("layout: sensor " + id + " context_phrase: " + *why);
    }
  }
}

HomeLayout HomeLayout::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("layout: top level must be an object");
  std::string home = j.value("home_name", "");
  auto it = j.find("sensors");
  if (it == j.end() || !it->is_object()) throw ConfigError("layout: missing `sensors` object");
  SensorMap sensors;
  for (const auto& [id, rec] : it->items()) {
    if (!rec.is_object()) throw ConfigError("layout: sensor " + id + " must be an object");
    for (const char* field : {"location_phrase", "context_phrase", "modality"}) {
      if (!rec.contains(field) || !rec[field].is_string()) {
        throw ConfigError("layout: sensor " + id + " missing string field `" + field + "`");
      }
    }
    sensors.emplace(id, SensorInfo{rec["location_phrase"].get<std::string>(),
                                   rec["context_phrase"].get<std::string>(),
                                   modality_from_name(rec["modality"].get<std::string>())});
  }
  return HomeLayout(std::move(home), std::move(sensors));
}

HomeLayout HomeLayout::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open layout file: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return from_json(j);
}

nlohmann::json HomeLayout::to_json() const {
  nlohmann::json sensors = nlohmann::json::object();
  for (const auto& [id, info] : sensors_) {
    sensors[id] = {{"location_phrase", info.location_phrase},
                   {"context_phrase", info.context_phrase},
                   {"modality", std::string(modality_name(info.modality))}};
  }
  return {{"home_name", home_name_}, {"sensors", sensors}};
}

SensorInfo HomeLayout::lookup(std::string_view sensor_id, Modality hint) const {
  if (auto it = sensors_.find(sensor_id); it != sensors_.end()) return it->second;
  return SensorInfo{std::string(kUnknownLocation), std::string(modality_word(hint)) + " sensor",
                    hint};
}

std::optional<Modality> HomeLayout::modality_of(std::string_view sensor_id) const {
  if (auto it = sensors_.find(sensor_id); it != sensors_.end()) return it->second.modality;
  return std::nullopt;
}

std::string HomeLayout::digest() const { return sha256_hex(to_json().dump()); }

}  // namespace zshar
