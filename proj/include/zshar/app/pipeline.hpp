#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "zshar/app/run_config.hpp"
#include "zshar/core/layout.hpp"
#include "zshar/core/types.hpp"
#include "zshar/ingest/csv_adapter.hpp"
#include "zshar/ingest/segmenter.hpp"
#include "zshar/textgen/summary_config.hpp"

namespace zshar::app {

// Segments each file in turn. With several files, window ids are prefixed
// "f<k>-" so they stay unique; reports are summed and skip reasons name the file.
ingest::SegmentationResult ingest_files(Adapter adapter, const std::vector<std::filesystem::path>& files,
                                        const ingest::CsvMapping* mapping, const HomeLayout* layout, bool strict);

// Corpus file or raw inputs, then the drop_labels filter.
std::vector<ActivityWindow> load_windows(const RunConfig& cfg);

textgen::SummaryConfig load_summary_config(const RunConfig& cfg);

struct TextRecord {
  std::string id;
  std::string text;
};

// Every text `run` will hand to the encoder for this config (descriptors,
// summaries, and the ablation or support-split variants), deduplicated,
// in first-use order. Feed this to the bridge to build a complete cache.
std::vector<TextRecord> collect_texts(const RunConfig& cfg);

struct RunOutcome {
  std::string headline;                          // printable metrics table
  std::vector<std::filesystem::path> artifacts;  // written files, manifest last
};

// Validates, executes the configured experiment, and writes artifacts under
// the output directory. Warnings (e.g. cache norm drift) go to `log`.
RunOutcome execute_run(const RunConfig& cfg, std::ostream& log);

}  // namespace zshar::app
