#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"

#include "zshar/core/types.hpp"
#include "zshar/ingest/casas.hpp"

namespace zshar::ingest {

struct SkippedLine {
  std::size_t line_number = 0;
  std::string reason;

  bool operator==(const SkippedLine&) const = default;
};

// Every input event lands in exactly one of the three events_* buckets:
// part of at least one emitted window, only inside dropped (orphan) spans,
// or outside any annotation span.
struct SegmentationReport {
  std::size_t windows_emitted = 0;
  std::size_t orphan_begins = 0;
  std::size_t orphan_ends = 0;
  std::size_t lines_skipped = 0;
  std::vector<SkippedLine> skipped;

  std::size_t events_in = 0;
  std::size_t events_in_windows = 0;
  std::size_t events_in_orphan_spans = 0;
  std::size_t events_unannotated = 0;

  bool conserved() const {
    return events_in == events_in_windows + events_in_orphan_spans + events_unannotated &&
           skipped.size() == lines_skipped;
  }

  void note_skip(std::size_t line_number, std::string reason) {
    ++lines_skipped;
    skipped.push_back({line_number, std::move(reason)});
  }

  nlohmann::json to_json() const;
};

// Streaming begin/end segmenter. A window opens at `begin L` and closes at the
// next `end L`; the marked lines are part of it. Differently labelled spans
// nest or overlap independently. A second `begin L` while L is open is ignored
// and counted as an orphan begin; `end L` with no open L is an orphan end;
// spans still open at finish() are dropped as orphan begins.
class AnnotationSegmenter {
 public:
  explicit AnnotationSegmenter(std::string id_prefix = "w");

  void push(const RawLogLine& line);

  // Closes the stream. Further push() calls are a logic error.
  void finish();

  // Windows completed since the last call, in closing order.
  std::vector<ActivityWindow> take_completed();

  const SegmentationReport& report() const { return report_; }
  SegmentationReport& report() { return report_; }

 private:
  struct OpenSpan {
    ActivityWindow window;
    std::vector<std::uint64_t> seqs;
  };
  struct Pending {
    std::size_t refs = 0;
    bool emitted = false;
  };

  void release(std::uint64_t seq, bool emitted);

  std::string id_prefix_;
  std::uint64_t next_seq_ = 0;
  std::size_t next_window_ = 0;
  std::map<std::string, OpenSpan> open_;
  std::unordered_map<std::uint64_t, Pending> pending_;
  std::vector<ActivityWindow> completed_;
  SegmentationReport report_;
  bool finished_ = false;
};

struct SegmentationResult {
  std::vector<ActivityWindow> windows;
  SegmentationReport report;
};

SegmentationResult segment_by_annotations(std::span<const RawLogLine> lines,
                                          const std::string& id_prefix = "w");

}  // namespace zshar::ingest
