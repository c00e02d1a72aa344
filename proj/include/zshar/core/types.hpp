#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "zshar/core/timestamp.hpp"

namespace zshar {

enum class Modality {
  motion,
  door,
  magnetic,
  pressure,
  switch_,
  temperature,
  smart_plug,
  smartphone_app,
  other,
};

// Canonical config/interchange spelling ("smart-plug", "switch", ...).
std::string_view modality_name(Modality m);

// Unknown spellings map to Modality::other; never fails.
Modality modality_from_name(std::string_view name);

// Prose word used inside generated sentences; `other` renders as "unidentified".
std::string_view modality_word(Modality m);

struct SensorEvent {
  Timestamp timestamp;
  std::string sensor_id;
  Modality modality = Modality::other;
  std::string value;

  bool operator==(const SensorEvent&) const = default;
};

// One datapoint. Plain aggregate so that corpora with broken windows can still
// be loaded and reported on; validate_window() is the gate.
struct ActivityWindow {
  std::string window_id;
  std::vector<SensorEvent> events;
  std::optional<std::string> ground_truth;

  Timestamp start() const { return events.front().timestamp; }
  Timestamp end() const { return events.back().timestamp; }

  bool operator==(const ActivityWindow&) const = default;
};

struct WindowViolation {
  std::string code;  // "empty events", "unsorted", "empty sensor_id", "empty window_id"
  std::string detail;

  bool operator==(const WindowViolation&) const = default;
};

// Every violation found; an empty result means the window is valid.
std::vector<WindowViolation> validate_window(const ActivityWindow& w);

inline bool is_valid(const ActivityWindow& w) { return validate_window(w).empty(); }

struct ActivityLabel {
  std::string name;
  std::string display;

  bool operator==(const ActivityLabel&) const = default;
};

// Underscores become spaces ("Bed_to_Toilet" -> "Bed to Toilet").
std::string display_name(std::string_view label_name);

// Sorted lexicographically by name. Throws ConfigError("duplicate label: X").
std::vector<ActivityLabel> canonical_label_order(std::vector<ActivityLabel> labels);

// Name-only convenience overload.
std::vector<std::string> canonical_label_order(std::vector<std::string> names);

}  // namespace zshar
