#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace zshar::evaluate {

// Rows are ground truth, columns are predictions, both in `labels` order.
struct ConfusionMatrix {
  std::vector<std::string> labels;
  std::vector<std::vector<std::size_t>> counts;

  std::size_t total() const;
  std::size_t trace() const;
  std::size_t row_sum(std::size_t i) const;
  std::size_t col_sum(std::size_t j) const;

  bool operator==(const ConfusionMatrix&) const = default;
};

struct ClassMetrics {
  std::string label;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;

  bool operator==(const ClassMetrics&) const = default;
};

// Provenance stamped onto every report so artifacts can be traced to inputs.
struct RunMetadata {
  std::string dataset;
  std::string provider;
  std::string metric;
  std::string layout_digest;
  std::string summary_config_digest;
  std::string descriptors_digest;
  std::string run_config_digest;
  std::optional<std::uint64_t> seed;

  bool operator==(const RunMetadata&) const = default;
};

struct EvaluationReport {
  double accuracy = 0.0;
  double f1_weighted = 0.0;
  double f1_macro = 0.0;
  std::vector<ClassMetrics> per_class;
  ConfusionMatrix confusion;
  RunMetadata meta;

  bool operator==(const EvaluationReport&) const = default;
};

using LabelPair = std::pair<std::string, std::string>;  // (truth, predicted)

// Per-class precision/recall/F1 with 0 on zero denominators; macro F1 is the
// unweighted mean over `labels` (zero-support labels included), weighted F1
// is support-weighted. Throws DataError on empty input or unknown labels,
// ConfigError on duplicate labels.
EvaluationReport compute_metrics(std::span<const LabelPair> pairs, const std::vector<std::string>& labels);

nlohmann::json to_json(const RunMetadata& m);
nlohmann::json to_json(const EvaluationReport& r);

// RFC 4180 quoting, only when the field needs it.
std::string csv_field(const std::string& s);

// Header row "truth\\predicted,A,B", then one row per truth label.
std::string confusion_csv(const ConfusionMatrix& m);

// Monospace heatmap: counts with a shade glyph scaled by row-normalised share.
std::string render_heatmap(const ConfusionMatrix& m);

}  // namespace zshar::evaluate
