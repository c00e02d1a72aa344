#include "zshar/textgen/summarizer.hpp"

#include <algorithm>
#include <unordered_map>

#include "zshar/textgen/number_words.hpp"

namespace zshar::textgen {
namespace {

// Keys ranked by occurrence count, descending; ties keep first-occurrence order.
std::vector<std::string> rank_by_count(const std::vector<std::string>& keys) {
  std::vector<std::string> order;
  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& k : keys) {
    if (counts[k]++ == 0) order.push_back(k);
  }
  std::stable_sort(order.begin(), order.end(), [&](const std::string& a, const std::string& b) {
    return counts[a] > counts[b];
  });
  return order;
}

std::string join_list(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += (i + 1 == items.size()) ? " and " : ", ";
    out += items[i];
  }
  return out;
}

std::string hour_phrase(unsigned hour, const SummaryConfig& cfg) {
  return number_to_words(hour) + " hours " + (hour < 12 ? "AM" : "PM") + " " + cfg.period_of(hour);
}

Modality modality_seen(const ActivityWindow& w, const std::string& sensor_id) {
  for (const auto& e : w.events) {
    if (e.sensor_id == sensor_id) return e.modality;
  }
  return Modality::other;
}

}  // namespace

std::string time_sentence(const ActivityWindow& w, const SummaryConfig& cfg) {
  return "The activity started at " + hour_phrase(w.start().hour(), cfg) + " and ended at " +
         hour_phrase(w.end().hour(), cfg);
}

std::string duration_sentence(const ActivityWindow& w) {
  constexpr std::int64_t kMinute = 60 * kMicrosPerSecond;
  constexpr std::int64_t kHour = 60 * kMinute;
  const std::int64_t micros = w.end().micros() - w.start().micros();
  std::int64_t unit = kMicrosPerSecond;
  const char* name = "second";
  if (micros >= kHour) {
    unit = kHour;
    name = "hour";
  } else if (micros >= kMinute) {
    unit = kMinute;
    name = "minute";
  }
  // Integer half-up rounding.
  const auto magnitude = static_cast<std::uint64_t>((micros + unit / 2) / unit);
  std::string out = "The activity was performed for " + number_to_words(magnitude) + " " + name;
  if (magnitude != 1) out += 's';
  return out;
}

std::string location_sentence(const ActivityWindow& w, const HomeLayout& layout,
                              const SummaryConfig& cfg) {
  std::vector<std::string> locations;
  locations.reserve(w.events.size());
  for (const auto& e : w.events) {
    locations.push_back(layout.lookup(e.sensor_id, e.modality).location_phrase);
  }
  auto ranked = rank_by_count(locations);
  if (ranked.size() > cfg.top_k_locations) ranked.resize(cfg.top_k_locations);
  std::string out = "The activity is taking place " + ranked.front() + " mainly";
  if (ranked.size() > 1) {
    // Location phrases carry their own preposition ("in the dining room").
    out += " and parts of it " + join_list({ranked.begin() + 1, ranked.end()});
  }
  return out;
}

std::string sensor_sentence(const ActivityWindow& w, const HomeLayout& layout,
                            const SummaryConfig& cfg) {
  std::vector<std::string> chosen;
  for (const auto& rule : cfg.special_rules) {
    const auto* force = std::get_if<ForceSensor>(&rule.effect);
    if (force == nullptr || !rule.trigger.fires(w)) continue;
    if (std::find(chosen.begin(), chosen.end(), force->sensor_id) == chosen.end()) {
      chosen.push_back(force->sensor_id);
    }
  }
  std::vector<std::string> ids;
  ids.reserve(w.events.size());
  for (const auto& e : w.events) ids.push_back(e.sensor_id);
  for (auto& id : rank_by_count(ids)) {
    if (std::find(chosen.begin(), chosen.end(), id) == chosen.end()) chosen.push_back(std::move(id));
  }
  if (chosen.size() > cfg.top_k_sensors) chosen.resize(cfg.top_k_sensors);

  std::vector<std::string> phrases;
  for (const auto& id : chosen) {
    phrases.push_back(layout.lookup(id, modality_seen(w, id)).context_phrase);
  }
  if (phrases.size() == 1) {
    return "The most commonly fired sensor in this activity is " + phrases.front();
  }
  return "The " + number_to_words(phrases.size()) +
         " most commonly fired sensors in this activity are " + join_list(phrases);
}

std::string join_parts(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += ". ";
    out += parts[i];
  }
  out += '.';
  return out;
}

Summary summarize(const ActivityWindow& w, const HomeLayout& layout, const SummaryConfig& cfg) {
  Summary s;
  s.window_id = w.window_id;
  s.parts.push_back(time_sentence(w, cfg));
  s.parts.push_back(duration_sentence(w));
  s.parts.push_back(location_sentence(w, layout, cfg));
  s.parts.push_back(sensor_sentence(w, layout, cfg));
  for (const auto& rule : cfg.special_rules) {
    const auto* app = std::get_if<AppendSentence>(&rule.effect);
    if (app != nullptr && rule.trigger.fires(w)) s.parts.push_back(app->text);
  }
  s.text = join_parts(s.parts);
  return s;
}

std::string raw_event_rendering(const ActivityWindow& w) {
  std::string out;
  for (const auto& e : w.events) {
    if (!out.empty()) out += ' ';
    out += modality_word(e.modality);
    out += " sensor ";
    out += e.sensor_id;
    out += ' ';
    out += e.value;
  }
  return out;
}

nlohmann::json summary_record(const std::string& id, const std::string& text) {
  return {{"window_id", id}, {"text", text}};
}

}  // namespace zshar::textgen
