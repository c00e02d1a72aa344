#include "zshar/ingest/casas.hpp"

#include <algorithm>
#include <cctype>

#include "zshar/core/errors.hpp"

namespace zshar::ingest {
namespace {

std::vector<std::string_view> split_whitespace(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

}  // namespace

Modality infer_modality(std::string_view sensor_id) {
  if (sensor_id.empty()) return Modality::other;
  switch (sensor_id.front()) {
    case 'M': return Modality::motion;
    case 'D': return Modality::door;
    case 'T': return Modality::temperature;
    default: return Modality::other;
  }
}

RawLogLine parse_casas_line(std::string_view line, std::size_t line_number,
                            const HomeLayout* layout) {
  const auto fields = split_whitespace(line);
  if (fields.size() != 4 && fields.size() != 6) {
    throw ParseError(line_number, "expected 4 or 6 fields, got " + std::to_string(fields.size()));
  }
  auto ts = Timestamp::parse_date_time(fields[0], fields[1]);
  if (!ts) {
    throw ParseError(line_number, "bad date/time `" + std::string(fields[0]) + " " +
                                      std::string(fields[1]) + "`");
  }
  RawLogLine out;
  out.line_number = line_number;
  out.event.timestamp = *ts;
  out.event.sensor_id = std::string(fields[2]);
  out.event.value = std::string(fields[3]);
  out.event.modality = infer_modality(fields[2]);
  if (layout != nullptr) {
    if (auto m = layout->modality_of(fields[2])) out.event.modality = *m;
  }
  if (fields.size() == 6) {
    Marker marker;
    if (iequals(fields[5], "begin")) {
      marker = Marker::begin;
    } else if (iequals(fields[5], "end")) {
      marker = Marker::end;
    } else {
      throw ParseError(line_number, "annotation marker must be begin or end, got `" +
                                        std::string(fields[5]) + "`");
    }
    out.annotations.push_back(Annotation{std::string(fields[4]), marker});
  }
  return out;
}

}  // namespace zshar::ingest
