#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "zshar/core/types.hpp"

namespace zshar {

// Corpus interchange format: JSON Lines, one window per line:
//   {"window_id": "...", "ground_truth": "Sleep" | null,
//    "events": [["2010-11-04T00:03:50.209589", "M003", "motion", "ON"], ...]}
// Windows are not validated on read; use validate_window().

nlohmann::json window_to_json(const ActivityWindow& w);

// Throws DataError on structural problems.
ActivityWindow window_from_json(const nlohmann::json& j);

void write_corpus(std::ostream& out, const std::vector<ActivityWindow>& windows);
void write_corpus(const std::filesystem::path& path, const std::vector<ActivityWindow>& windows);

// Errors carry `path:line`.
std::vector<ActivityWindow> read_corpus(std::istream& in, const std::string& source = "<stream>");
std::vector<ActivityWindow> read_corpus(const std::filesystem::path& path);

}  // namespace zshar
