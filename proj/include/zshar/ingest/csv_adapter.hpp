#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "zshar/core/layout.hpp"
#include "zshar/ingest/casas.hpp"
#include "zshar/ingest/segmenter.hpp"

namespace zshar::ingest {

enum class CsvTimeFormat { iso, epoch_seconds, epoch_millis };

// Column mapping for non-CASAS event tables. Columns are named by header.
//   {"delimiter": ",", "timestamp": "ts", "timestamp_format": "iso",
//    "sensor_id": "sensor", "value": "value", "label": "activity", "modality": "kind"}
// `label` and `modality` are optional.
struct CsvMapping {
  char delimiter = ',';
  std::string timestamp_column;
  CsvTimeFormat time_format = CsvTimeFormat::iso;
  std::string sensor_id_column;
  std::string value_column;
  std::optional<std::string> label_column;
  std::optional<std::string> modality_column;

  static CsvMapping from_json(const nlohmann::json& j);
  static CsvMapping load(const std::filesystem::path& path);
};

// RFC 4180 field splitting: quoted fields, doubled quotes inside quotes.
std::vector<std::string> split_csv_record(std::string_view line, char delimiter);

struct CsvParseResult {
  std::vector<RawLogLine> lines;
  std::vector<SkippedLine> skipped;
};

// Label runs become begin/end markers: the first row of a run of equal,
// non-empty labels carries `begin`, the last carries `end`. Missing mapped
// columns throw ConfigError; bad rows are skipped and reported.
CsvParseResult parse_generic_csv(std::istream& in, const CsvMapping& mapping,
                                 const HomeLayout* layout = nullptr);

}  // namespace zshar::ingest
