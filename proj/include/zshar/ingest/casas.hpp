#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "zshar/core/layout.hpp"
#include "zshar/core/types.hpp"

namespace zshar::ingest {

enum class Marker { begin, end };

struct Annotation {
  std::string label;
  Marker marker = Marker::begin;

  bool operator==(const Annotation&) const = default;
};

// One parsed log row. CASAS rows carry at most one annotation; the CSV adapter
// may put a begin and an end on the same row (single-row label runs).
struct RawLogLine {
  std::size_t line_number = 0;
  SensorEvent event;
  std::vector<Annotation> annotations;

  bool operator==(const RawLogLine&) const = default;
};

// M -> motion, D -> door, T -> temperature, anything else -> other.
Modality infer_modality(std::string_view sensor_id);

// `DATE TIME SENSOR VALUE [LABEL MARKER]`, whitespace separated, 4 or 6 fields.
// The layout, when given, overrides the inferred modality. Throws ParseError.
RawLogLine parse_casas_line(std::string_view line, std::size_t line_number = 0,
                            const HomeLayout* layout = nullptr);

}  // namespace zshar::ingest
