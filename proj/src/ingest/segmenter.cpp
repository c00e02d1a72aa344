#include "zshar/ingest/segmenter.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace zshar::ingest {

nlohmann::json SegmentationReport::to_json() const {
  nlohmann::json skipped_json = nlohmann::json::array();
  for (const auto& s : skipped) {
    skipped_json.push_back({{"line", s.line_number}, {"reason", s.reason}});
  }
  return {{"windows_emitted", windows_emitted},
          {"orphan_begins", orphan_begins},
          {"orphan_ends", orphan_ends},
          {"lines_skipped", lines_skipped},
          {"skipped", skipped_json},
          {"events_in", events_in},
          {"events_in_windows", events_in_windows},
          {"events_in_orphan_spans", events_in_orphan_spans},
          {"events_unannotated", events_unannotated}};
}

AnnotationSegmenter::AnnotationSegmenter(std::string id_prefix)
    : id_prefix_(std::move(id_prefix)) {}

void AnnotationSegmenter::release(std::uint64_t seq, bool emitted) {
  auto it = pending_.find(seq);
  if (it == pending_.end()) return;
  it->second.emitted = it->second.emitted || emitted;
  if (--it->second.refs == 0) {
    if (it->second.emitted) {
      ++report_.events_in_windows;
    } else {
      ++report_.events_in_orphan_spans;
    }
    pending_.erase(it);
  }
}

void AnnotationSegmenter::push(const RawLogLine& line) {
  if (finished_) throw std::logic_error("AnnotationSegmenter::push after finish");
  const std::uint64_t seq = next_seq_++;
  ++report_.events_in;

  for (const auto& a : line.annotations) {
    if (a.marker != Marker::begin) continue;
    if (open_.contains(a.label)) {
      ++report_.orphan_begins;
      continue;
    }
    OpenSpan span;
    span.window.ground_truth = a.label;
    open_.emplace(a.label, std::move(span));
  }

  if (open_.empty()) {
    ++report_.events_unannotated;
  } else {
    pending_[seq] = Pending{open_.size(), false};
    for (auto& [label, span] : open_) {
      span.window.events.push_back(line.event);
      span.seqs.push_back(seq);
    }
  }

  for (const auto& a : line.annotations) {
    if (a.marker != Marker::end) continue;
    auto it = open_.find(a.label);
    if (it == open_.end()) {
      ++report_.orphan_ends;
      continue;
    }
    OpenSpan span = std::move(it->second);
    open_.erase(it);
    // Raw logs occasionally step backwards in time; windows must be sorted.
    std::stable_sort(span.window.events.begin(), span.window.events.end(),
                     [](const SensorEvent& x, const SensorEvent& y) {
                       return x.timestamp < y.timestamp;
                     });
    char id[32];
    std::snprintf(id, sizeof(id), "%06zu", ++next_window_);
    span.window.window_id = id_prefix_ + id;
    completed_.push_back(std::move(span.window));
    ++report_.windows_emitted;
    for (auto s : span.seqs) release(s, true);
  }
}

void AnnotationSegmenter::finish() {
  if (finished_) return;
  finished_ = true;
  for (auto& [label, span] : open_) {
    ++report_.orphan_begins;
    for (auto s : span.seqs) release(s, false);
  }
  open_.clear();
}

std::vector<ActivityWindow> AnnotationSegmenter::take_completed() {
  std::vector<ActivityWindow> out;
  out.swap(completed_);
  return out;
}

SegmentationResult segment_by_annotations(std::span<const RawLogLine> lines,
                                          const std::string& id_prefix) {
  AnnotationSegmenter seg(id_prefix);
  for (const auto& line : lines) seg.push(line);
  seg.finish();
  return {seg.take_completed(), seg.report()};
}

}  // namespace zshar::ingest
