#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "zshar/classify/anchors.hpp"
#include "zshar/classify/similarity.hpp"

namespace zshar::classify {

struct Prediction {
  std::string window_id;
  std::string predicted_label;
  std::string winning_anchor_id;
  std::size_t winning_anchor = 0;
  std::vector<double> scores;  // one per anchor, in anchor order
  Metric metric = Metric::cosine;

  bool operator==(const Prediction&) const = default;
};

// Best anchor under the metric's orientation; exact ties go to the earlier anchor.
// Throws ConfigError on an empty anchor set.
Prediction classify(const embedding::Embedding& query, const AnchorSet& anchors, Metric metric,
                    std::string window_id = {});

struct RankedAnchor {
  std::string anchor_id;
  std::string label;
  double score = 0.0;
};

// Best `k` anchors, same ordering rule as classify().
std::vector<RankedAnchor> top_anchors(const Prediction& p, const AnchorSet& anchors, std::size_t k);

// {"window_id", "predicted_label", "metric", "top": [{"anchor_id", "label", "score"} x3]}
nlohmann::json prediction_record(const Prediction& p, const AnchorSet& anchors);

}  // namespace zshar::classify
