#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <regex>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "zshar/core/types.hpp"

namespace zshar::textgen {

// Half-open hour range [start_hour, end_hour) with its prose label.
struct PeriodRange {
  std::string label;
  unsigned start_hour = 0;
  unsigned end_hour = 0;

  bool operator==(const PeriodRange&) const = default;
};

// past midnight [0,4), early morning [4,7), morning [7,12), afternoon [12,17),
// evening [17,21), night [21,24).
std::vector<PeriodRange> default_periods();

// An event matches when it satisfies every criterion that is set; the trigger
// fires when any event in the window matches.
struct RuleTrigger {
  std::set<std::string> sensor_ids;
  std::set<Modality> modalities;
  std::optional<std::string> value_pattern;  // ECMAScript regex, full match

  bool matches(const SensorEvent& e) const;
  bool fires(const ActivityWindow& w) const;

 private:
  friend struct SummaryConfig;
  std::shared_ptr<const std::regex> compiled_;
};

struct ForceSensor {
  std::string sensor_id;
};

struct AppendSentence {
  std::string text;
};

struct SpecialRule {
  std::string name;
  RuleTrigger trigger;
  std::variant<ForceSensor, AppendSentence> effect;
};

struct SummaryConfig {
  unsigned top_k_locations = 2;
  unsigned top_k_sensors = 2;
  std::vector<PeriodRange> periods = default_periods();
  std::vector<SpecialRule> special_rules;

  // Throws ConfigError on any invariant violation. from_json() and load() call
  // it; call it yourself after building a config by hand.
  void validate();

  const std::string& period_of(unsigned hour) const;

  static SummaryConfig from_json(const nlohmann::json& j);
  static SummaryConfig load(const std::filesystem::path& path);
  nlohmann::json to_json() const;
  std::string digest() const;
};

}  // namespace zshar::textgen
