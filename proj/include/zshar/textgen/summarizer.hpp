#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "zshar/core/layout.hpp"
#include "zshar/core/types.hpp"
#include "zshar/textgen/summary_config.hpp"

namespace zshar::textgen {

// parts = [time, duration, locations, sensors, appended specials...];
// text = parts joined by ". " with a terminal period.
struct Summary {
  std::string window_id;
  std::string text;
  std::vector<std::string> parts;

  bool operator==(const Summary&) const = default;
};

// Sentences come back without the terminal period.
std::string time_sentence(const ActivityWindow& w, const SummaryConfig& cfg);
std::string duration_sentence(const ActivityWindow& w);
std::string location_sentence(const ActivityWindow& w, const HomeLayout& layout,
                              const SummaryConfig& cfg);
std::string sensor_sentence(const ActivityWindow& w, const HomeLayout& layout,
                            const SummaryConfig& cfg);

// Requires a valid window (see validate_window).
Summary summarize(const ActivityWindow& w, const HomeLayout& layout, const SummaryConfig& cfg);

std::string join_parts(const std::vector<std::string>& parts);

// `no summary` ablation input: "<modality> sensor <sensor_id> <value>" per
// event, space separated, timestamps dropped.
std::string raw_event_rendering(const ActivityWindow& w);

// Summaries file: JSON Lines {"window_id": ..., "text": ...}.
nlohmann::json summary_record(const std::string& id, const std::string& text);

}  // namespace zshar::textgen
