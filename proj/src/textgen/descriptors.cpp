#include "zshar/textgen/descriptors.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "zshar/core/digest.hpp"
#include "zshar/core/errors.hpp"

namespace zshar::textgen {
namespace {

constexpr std::string_view kMultiSentence = "more than one sentence";

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

std::optional<std::string> check_descriptor_text(std::string_view text) {
  text = trim(text);
  if (text.empty()) return "empty text";
  if (text.find_first_of("<>") != std::string_view::npos) return "placeholder token";
  if (text.back() == '.') text.remove_suffix(1);
  if (text.find_first_of(".!?") != std::string_view::npos) return std::string(kMultiSentence);
  return std::nullopt;
}

std::vector<std::string> lint_descriptor_order(std::string_view text) {
  const std::string t = lower(text);
  std::size_t duration = std::string::npos;
  for (const char* w : {"second", "minute", "hour"}) duration = std::min(duration, t.find(w));
  std::size_t location = std::string::npos;
  for (const char* w : {" in the ", " at the ", " near the "}) location = std::min(location, t.find(w));
  std::vector<std::string> warnings;
  if (duration == std::string::npos) {
    warnings.emplace_back("no duration mentioned");
  } else if (location != std::string::npos && location < duration) {
    warnings.emplace_back("location mentioned before duration");
  }
  return warnings;
}

DescriptorRegistry::DescriptorRegistry(std::vector<ActivityDescriptor> descriptors)
    : DescriptorRegistry(std::move(descriptors), true) {}

DescriptorRegistry DescriptorRegistry::without_sentence_check(std::vector<ActivityDescriptor> descriptors) {
  return DescriptorRegistry(std::move(descriptors), false);
}

DescriptorRegistry::DescriptorRegistry(std::vector<ActivityDescriptor> descriptors, bool one_sentence) {
  for (auto& d : descriptors) {
    if (d.label.empty()) throw ConfigError("descriptor with empty label");
    auto why = check_descriptor_text(d.text);
    if (why && (one_sentence || *why != kMultiSentence)) {
      throw ConfigError("descriptor `" + d.label + "`: " + *why);
    }
    const std::string label = d.label;
    d.text = std::string(trim(d.text));
    if (!entries_.emplace(label, std::move(d)).second) {
      throw ConfigError("descriptor `" + label + "`: duplicate label");
    }
  }
}

DescriptorRegistry DescriptorRegistry::parse(std::string_view json_text, const std::string& source) {
  std::vector<std::string> top_keys;
  nlohmann::json::parser_callback_t track = [&](int depth, nlohmann::json::parse_event_t event,
                                                nlohmann::json& parsed) {
    if (event == nlohmann::json::parse_event_t::key && depth == 1) {
      top_keys.push_back(parsed.get<std::string>());
    }
    return true;
  };
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text.begin(), json_text.end(), track);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(source + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError(source + ": descriptors must be a JSON object");
  std::set<std::string> seen;
  for (const auto& k : top_keys) {
    if (!seen.insert(k).second) throw ConfigError("descriptor `" + k + "`: duplicate label");
  }
  std::vector<ActivityDescriptor> out;
  for (const auto& [label, text] : j.items()) {
    if (!text.is_string()) throw ConfigError("descriptor `" + label + "`: text must be a string");
    out.push_back({label, text.get<std::string>()});
  }
  return DescriptorRegistry(std::move(out));
}

DescriptorRegistry DescriptorRegistry::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open descriptor file: " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path.string());
}

const ActivityDescriptor& DescriptorRegistry::at(const std::string& label) const {
  auto it = entries_.find(label);
  if (it == entries_.end()) throw ConfigError("no descriptor for label `" + label + "`");
  return it->second;
}

std::vector<std::string> DescriptorRegistry::labels() const {
  std::vector<std::string> out;
  for (const auto& [label, d] : entries_) out.push_back(label);
  return out;
}

nlohmann::json DescriptorRegistry::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [label, d] : entries_) j[label] = d.text;
  return j;
}

std::string DescriptorRegistry::digest() const { return sha256_hex(to_json().dump()); }

}  // namespace zshar::textgen
