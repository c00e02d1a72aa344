#pragma once

#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include "zshar/core/layout.hpp"
#include "zshar/ingest/csv_adapter.hpp"
#include "zshar/ingest/segmenter.hpp"

namespace zshar::ingest {

struct IngestOptions {
  std::string id_prefix = "w";
  // Abort on the first malformed line instead of skipping it.
  bool strict = false;
};

// Single pass over a CASAS log: parse, segment, account. Malformed lines are
// skipped (strict = false) or rethrown as ParseError.
SegmentationResult ingest_casas(std::istream& in, const HomeLayout* layout,
                                const IngestOptions& options = {});

SegmentationResult ingest_csv(std::istream& in, const CsvMapping& mapping,
                              const HomeLayout* layout, const IngestOptions& options = {});

// Removes windows whose ground truth is in `drop`; order preserved.
std::vector<ActivityWindow> filter_labels(std::vector<ActivityWindow> windows,
                                          const std::set<std::string, std::less<>>& drop);

}  // namespace zshar::ingest
