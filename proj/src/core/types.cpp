#include "zshar/core/types.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <utility>

#include "zshar/core/errors.hpp"

namespace zshar {
namespace {

struct ModalityInfo {
  Modality modality;
  std::string_view name;
  std::string_view word;
};

constexpr std::array<ModalityInfo, 9> kModalities{{
    {Modality::motion, "motion", "motion"},
    {Modality::door, "door", "door"},
    {Modality::magnetic, "magnetic", "magnetic"},
    {Modality::pressure, "pressure", "pressure"},
    {Modality::switch_, "switch", "switch"},
    {Modality::temperature, "temperature", "temperature"},
    {Modality::smart_plug, "smart-plug", "smart plug"},
    {Modality::smartphone_app, "smartphone-app", "smartphone app"},
    {Modality::other, "other", "unidentified"},
}};

const ModalityInfo& info(Modality m) {
  for (const auto& entry : kModalities) {
    if (entry.modality == m) return entry;
  }
  return kModalities.back();
}

}  // namespace

std::string_view modality_name(Modality m) { return info(m).name; }

std::string_view modality_word(Modality m) { return info(m).word; }

Modality modality_from_name(std::string_view name) {
  std::string lowered(name);
  std::transform(lowered.begin(), lowered.end(), lowered.begin(), [](unsigned char c) {
    return c == '_' || c == ' ' ? '-' : static_cast<char>(std::tolower(c));
  });
  for (const auto& entry : kModalities) {
    if (entry.name == lowered) return entry.modality;
  }
  return Modality::other;
}

std::vector<WindowViolation> validate_window(const ActivityWindow& w) {
  std::vector<WindowViolation> out;
  if (w.window_id.empty()) out.push_back({"empty window_id", "window has no identifier"});
  if (w.events.empty()) {
    out.push_back({"empty events", "window " + w.window_id + " has no events"});
    return out;
  }
  for (std::size_t i = 0; i < w.events.size(); ++i) {
    if (w.events[i].sensor_id.empty()) {
      out.push_back({"empty sensor_id", "event " + std::to_string(i) + " has no sensor_id"});
    }
    if (i > 0 && w.events[i].timestamp < w.events[i - 1].timestamp) {
      out.push_back({"unsorted", "event " + std::to_string(i) + " at " +
                                     w.events[i].timestamp.to_iso() + " precedes event " +
                                     std::to_string(i - 1)});
    }
  }
  return out;
}

std::string display_name(std::string_view label_name) {
  std::string out(label_name);
  std::replace(out.begin(), out.end(), '_', ' ');
  return out;
}

std::vector<ActivityLabel> canonical_label_order(std::vector<ActivityLabel> labels) {
  std::sort(labels.begin(), labels.end(),
            [](const ActivityLabel& a, const ActivityLabel& b) { return a.name < b.name; });
  for (std::size_t i = 1; i < labels.size(); ++i) {
    if (labels[i].name == labels[i - 1].name) {
      throw ConfigError("duplicate label: " + labels[i].name);
    }
  }
  return labels;
}

std::vector<std::string> canonical_label_order(std::vector<std::string> names) {
  std::sort(names.begin(), names.end());
  auto dup = std::adjacent_find(names.begin(), names.end());
  if (dup != names.end()) throw ConfigError("duplicate label: " + *dup);
  return names;
}

}  // namespace zshar
