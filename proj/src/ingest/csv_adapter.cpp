#include "zshar/ingest/csv_adapter.hpp"

#include <charconv>
#include <fstream>
#include <istream>

#include "zshar/core/errors.hpp"

namespace zshar::ingest {
namespace {

std::optional<Timestamp> parse_time(std::string_view text, CsvTimeFormat fmt) {
  if (text.empty()) return std::nullopt;
  if (fmt == CsvTimeFormat::iso) return Timestamp::parse_iso(text);
  long long value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  const long long scale = fmt == CsvTimeFormat::epoch_seconds ? kMicrosPerSecond : 1000;
  return Timestamp::from_micros(value * scale);
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

CsvMapping CsvMapping::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("csv mapping: top level must be an object");
  CsvMapping m;
  auto required = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_string() || j[key].get<std::string>().empty()) {
      throw ConfigError(std::string("csv mapping: missing column name `") + key + "`");
    }
    return j[key].get<std::string>();
  };
  m.timestamp_column = required("timestamp");
  m.sensor_id_column = required("sensor_id");
  m.value_column = required("value");
  if (j.contains("label") && !j["label"].is_null()) m.label_column = j["label"].get<std::string>();
  if (j.contains("modality") && !j["modality"].is_null()) {
    m.modality_column = j["modality"].get<std::string>();
  }
  const std::string delim = j.value("delimiter", ",");
  if (delim.size() != 1) throw ConfigError("csv mapping: delimiter must be one character");
  m.delimiter = delim[0];
  const std::string fmt = j.value("timestamp_format", "iso");
  if (fmt == "iso") {
    m.time_format = CsvTimeFormat::iso;
  } else if (fmt == "epoch_seconds") {
    m.time_format = CsvTimeFormat::epoch_seconds;
  } else if (fmt == "epoch_millis") {
    m.time_format = CsvTimeFormat::epoch_millis;
  } else {
    throw ConfigError("csv mapping: unknown timestamp_format `" + fmt + "`");
  }
  return m;
}

CsvMapping CsvMapping::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open csv mapping: " + path.string());
  try {
    return from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::vector<std::string> split_csv_record(std::string_view line, char delimiter) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == delimiter) {
      fields.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

CsvParseResult parse_generic_csv(std::istream& in, const CsvMapping& mapping,
                                 const HomeLayout* layout) {
  CsvParseResult out;
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) return out;
  ++lineno;
  const auto header = split_csv_record(line, mapping.delimiter);
  auto column = [&](const std::string& name) -> std::size_t {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (trim(header[i]) == name) return i;
    }
    throw ConfigError("csv: mapped column `" + name + "` not in header");
  };
  const std::size_t ts_col = column(mapping.timestamp_column);
  const std::size_t id_col = column(mapping.sensor_id_column);
  const std::size_t val_col = column(mapping.value_column);
  const std::optional<std::size_t> label_col =
      mapping.label_column ? std::optional(column(*mapping.label_column)) : std::nullopt;
  const std::optional<std::size_t> mod_col =
      mapping.modality_column ? std::optional(column(*mapping.modality_column)) : std::nullopt;

  std::vector<std::string> labels;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto fields = split_csv_record(line, mapping.delimiter);
    if (fields.size() != header.size()) {
      out.skipped.push_back({lineno, "expected " + std::to_string(header.size()) +
                                         " fields, got " + std::to_string(fields.size())});
      continue;
    }
    const std::string ts_text = trim(fields[ts_col]);
    auto ts = parse_time(ts_text, mapping.time_format);
    if (!ts) {
      out.skipped.push_back({lineno, ts_text.empty() ? "empty timestamp"
                                                     : "bad timestamp `" + ts_text + "`"});
      continue;
    }
    std::string sensor = trim(fields[id_col]);
    if (sensor.empty()) {
      out.skipped.push_back({lineno, "empty sensor_id"});
      continue;
    }
    RawLogLine raw;
    raw.line_number = lineno;
    raw.event.timestamp = *ts;
    raw.event.value = trim(fields[val_col]);
    raw.event.modality =
        mod_col ? modality_from_name(trim(fields[*mod_col])) : infer_modality(sensor);
    if (layout != nullptr) {
      if (auto m = layout->modality_of(sensor)) raw.event.modality = *m;
    }
    raw.event.sensor_id = std::move(sensor);
    labels.push_back(label_col ? trim(fields[*label_col]) : std::string());
    out.lines.push_back(std::move(raw));
  }

  for (std::size_t i = 0; i < out.lines.size(); ++i) {
    const std::string& label = labels[i];
    if (label.empty()) continue;
    if (i == 0 || labels[i - 1] != label) {
      out.lines[i].annotations.push_back({label, Marker::begin});
    }
    if (i + 1 == out.lines.size() || labels[i + 1] != label) {
      out.lines[i].annotations.push_back({label, Marker::end});
    }
  }
  return out;
}

}  // namespace zshar::ingest
