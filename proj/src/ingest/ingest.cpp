#include "zshar/ingest/ingest.hpp"

#include <algorithm>
#include <istream>

#include "zshar/core/errors.hpp"

namespace zshar::ingest {

SegmentationResult ingest_casas(std::istream& in, const HomeLayout* layout,
                                const IngestOptions& options) {
  AnnotationSegmenter seg(options.id_prefix);
  std::vector<ActivityWindow> windows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      seg.push(parse_casas_line(line, lineno, layout));
    } catch (const ParseError& e) {
      if (options.strict) throw;
      seg.report().note_skip(e.line_number(), e.reason());
    }
    for (auto& w : seg.take_completed()) windows.push_back(std::move(w));
  }
  seg.finish();
  return {std::move(windows), seg.report()};
}

SegmentationResult ingest_csv(std::istream& in, const CsvMapping& mapping,
                              const HomeLayout* layout, const IngestOptions& options) {
  auto parsed = parse_generic_csv(in, mapping, layout);
  if (options.strict && !parsed.skipped.empty()) {
    throw ParseError(parsed.skipped.front().line_number, parsed.skipped.front().reason);
  }
  auto result = segment_by_annotations(parsed.lines, options.id_prefix);
  for (auto& s : parsed.skipped) result.report.note_skip(s.line_number, std::move(s.reason));
  return result;
}

std::vector<ActivityWindow> filter_labels(std::vector<ActivityWindow> windows,
                                          const std::set<std::string, std::less<>>& drop) {
  if (drop.empty()) return windows;
  std::erase_if(windows, [&](const ActivityWindow& w) {
    return w.ground_truth && drop.contains(*w.ground_truth);
  });
  return windows;
}

}  // namespace zshar::ingest
