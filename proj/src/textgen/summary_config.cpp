#include "zshar/textgen/summary_config.hpp"

#include <array>
#include <fstream>

#include "zshar/core/digest.hpp"
#include "zshar/core/errors.hpp"
#include "zshar/core/layout.hpp"

namespace zshar::textgen {

std::vector<PeriodRange> default_periods() {
  return {{"past midnight", 0, 4}, {"early morning", 4, 7}, {"morning", 7, 12},
          {"afternoon", 12, 17},   {"evening", 17, 21},     {"night", 21, 24}};
}

bool RuleTrigger::matches(const SensorEvent& e) const {
  if (!sensor_ids.empty() && !sensor_ids.contains(e.sensor_id)) return false;
  if (!modalities.empty() && !modalities.contains(e.modality)) return false;
  if (value_pattern) {
    if (compiled_ == nullptr || !std::regex_match(e.value, *compiled_)) return false;
  }
  return true;
}

bool RuleTrigger::fires(const ActivityWindow& w) const {
  for (const auto& e : w.events) {
    if (matches(e)) return true;
  }
  return false;
}

void SummaryConfig::validate() {
  if (top_k_locations < 1 || top_k_sensors < 1) throw ConfigError("summary config: top_k must be >= 1");
  std::array<int, 24> cover{};
  for (const auto& p : periods) {
    if (auto why = check_prose_fragment(p.label)) {
      throw ConfigError("summary config: period label `" + p.label + "`: " + *why);
    }
    if (p.start_hour >= p.end_hour || p.end_hour > 24) {
      throw ConfigError("summary config: period `" + p.label + "` has an empty or out-of-range span");
    }
    for (unsigned h = p.start_hour; h < p.end_hour; ++h) ++cover[h];
  }
  for (unsigned h = 0; h < 24; ++h) {
    if (cover[h] != 1) {
      throw ConfigError("summary config: periods must partition the day; hour " +
                        std::to_string(h) + " covered " + std::to_string(cover[h]) + " times");
    }
  }
  for (auto& rule : special_rules) {
    auto& t = rule.trigger;
    if (t.sensor_ids.empty() && t.modalities.empty() && !t.value_pattern) {
      throw ConfigError("special rule `" + rule.name + "`: trigger matches nothing");
    }
    if (t.value_pattern) {
      try {
        t.compiled_ = std::make_shared<const std::regex>(*t.value_pattern, std::regex::ECMAScript);
      } catch (const std::regex_error& e) {
        throw ConfigError("special rule `" + rule.name + "`: bad value_pattern: " + e.what());
      }
    }
    if (auto* app = std::get_if<AppendSentence>(&rule.effect)) {
      while (!app->text.empty() && (app->text.back() == '.' || app->text.back() == ' ')) {
        app->text.pop_back();
      }
      if (auto why = check_prose_fragment(app->text)) {
        throw ConfigError("special rule `" + rule.name + "`: append_sentence: " + *why);
      }
    } else if (std::get<ForceSensor>(rule.effect).sensor_id.empty()) {
      throw ConfigError("special rule `" + rule.name + "`: empty force_sensor_into_topk");
    }
  }
}

const std::string& SummaryConfig::period_of(unsigned hour) const {
  for (const auto& p : periods) {
    if (hour >= p.start_hour && hour < p.end_hour) return p.label;
  }
  throw ConfigError("no period covers hour " + std::to_string(hour));
}

SummaryConfig SummaryConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("summary config: top level must be an object");
  SummaryConfig cfg;
  try {
    cfg.top_k_locations = j.value("top_k_locations", 2u);
    cfg.top_k_sensors = j.value("top_k_sensors", 2u);
    if (j.contains("periods")) {
      cfg.periods.clear();
      for (const auto& p : j.at("periods")) {
        cfg.periods.push_back(
            {p.at("label").get<std::string>(), p.at("start").get<unsigned>(), p.at("end").get<unsigned>()});
      }
    }
    for (const auto& r : j.value("special_rules", nlohmann::json::array())) {
      SpecialRule rule;
      rule.name = r.at("name").get<std::string>();
      const auto& t = r.at("trigger");
      for (const auto& s : t.value("sensor_ids", nlohmann::json::array())) {
        rule.trigger.sensor_ids.insert(s.get<std::string>());
      }
      for (const auto& m : t.value("modalities", nlohmann::json::array())) {
        rule.trigger.modalities.insert(modality_from_name(m.get<std::string>()));
      }
      if (t.contains("value_pattern")) rule.trigger.value_pattern = t["value_pattern"].get<std::string>();
      const auto& eff = r.at("effect");
      if (eff.contains("force_sensor_into_topk")) {
        rule.effect = ForceSensor{eff["force_sensor_into_topk"].get<std::string>()};
      } else if (eff.contains("append_sentence")) {
        rule.effect = AppendSentence{eff["append_sentence"].get<std::string>()};
      } else {
        throw ConfigError("special rule `" + rule.name + "`: unknown effect");
      }
      cfg.special_rules.push_back(std::move(rule));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("summary config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

SummaryConfig SummaryConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open summary config: " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return from_json(j);
}

nlohmann::json SummaryConfig::to_json() const {
  nlohmann::json periods_json = nlohmann::json::array();
  for (const auto& p : periods) {
    periods_json.push_back({{"label", p.label}, {"start", p.start_hour}, {"end", p.end_hour}});
  }
  nlohmann::json rules = nlohmann::json::array();
  for (const auto& r : special_rules) {
    nlohmann::json trigger = nlohmann::json::object();
    if (!r.trigger.sensor_ids.empty()) trigger["sensor_ids"] = r.trigger.sensor_ids;
    if (!r.trigger.modalities.empty()) {
      auto& mods = trigger["modalities"] = nlohmann::json::array();
      for (auto m : r.trigger.modalities) mods.push_back(std::string(modality_name(m)));
    }
    if (r.trigger.value_pattern) trigger["value_pattern"] = *r.trigger.value_pattern;
    nlohmann::json effect;
    if (const auto* f = std::get_if<ForceSensor>(&r.effect)) {
      effect["force_sensor_into_topk"] = f->sensor_id;
    } else {
      effect["append_sentence"] = std::get<AppendSentence>(r.effect).text;
    }
    rules.push_back({{"name", r.name}, {"trigger", trigger}, {"effect", effect}});
  }
  return {{"top_k_locations", top_k_locations},
          {"top_k_sensors", top_k_sensors},
          {"periods", periods_json},
          {"special_rules", rules}};
}

std::string SummaryConfig::digest() const { return sha256_hex(to_json().dump()); }

}  // namespace zshar::textgen
