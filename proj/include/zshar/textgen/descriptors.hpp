#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace zshar::textgen {

// One sentence per activity: likely duration, location, then signature sensors.
struct ActivityDescriptor {
  std::string label;
  std::string text;

  bool operator==(const ActivityDescriptor&) const = default;
};

// Reason the text breaks the descriptor invariants, if any: empty, placeholder
// tokens, or more than one sentence. A single trailing period is optional.
std::optional<std::string> check_descriptor_text(std::string_view text);

// Advisory only: the text should mention a duration before a location.
std::vector<std::string> lint_descriptor_order(std::string_view text);

class DescriptorRegistry {
 public:
  DescriptorRegistry() = default;

  // Throws ConfigError naming the label on duplicates or invalid text.
  explicit DescriptorRegistry(std::vector<ActivityDescriptor> descriptors);

  // File: a JSON object {"Label": "one sentence", ...}. Duplicate keys are rejected.
  static DescriptorRegistry parse(std::string_view json_text, const std::string& source = "<string>");
  static DescriptorRegistry load(const std::filesystem::path& path);

  // Same checks minus the one-sentence rule. Only for test fixtures whose
  // anchors are whole multi-sentence summaries; files always go through load().
  static DescriptorRegistry without_sentence_check(std::vector<ActivityDescriptor> descriptors);

  const std::map<std::string, ActivityDescriptor>& entries() const { return entries_; }
  bool contains(const std::string& label) const { return entries_.contains(label); }
  const ActivityDescriptor& at(const std::string& label) const;
  std::size_t size() const { return entries_.size(); }

  // Canonical (lexicographic) label order.
  std::vector<std::string> labels() const;

  nlohmann::json to_json() const;
  std::string digest() const;

 private:
  DescriptorRegistry(std::vector<ActivityDescriptor> descriptors, bool one_sentence);

  std::map<std::string, ActivityDescriptor> entries_;
};

inline DescriptorRegistry load_descriptors(const std::filesystem::path& path) {
  return DescriptorRegistry::load(path);
}

}  // namespace zshar::textgen
