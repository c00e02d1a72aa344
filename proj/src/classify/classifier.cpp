#include "zshar/classify/classifier.hpp"

#include <algorithm>
#include <numeric>

namespace zshar::classify {

Prediction classify(const embedding::Embedding& query, const AnchorSet& anchors, Metric metric,
                    std::string window_id) {
  if (anchors.empty()) throw ConfigError("classify: empty anchor set");
  Prediction p;
  p.window_id = std::move(window_id);
  p.metric = metric;
  p.scores.reserve(anchors.size());
  for (const auto& a : anchors.anchors()) p.scores.push_back(score(metric, query.values, a.embedding.values));
  std::size_t best = 0;
  for (std::size_t i = 1; i < p.scores.size(); ++i) {
    if (better(metric, p.scores[i], p.scores[best])) best = i;
  }
  p.winning_anchor = best;
  p.winning_anchor_id = anchors.anchors()[best].anchor_id;
  p.predicted_label = anchors.anchors()[best].label;
  return p;
}

std::vector<RankedAnchor> top_anchors(const Prediction& p, const AnchorSet& anchors, std::size_t k) {
  std::vector<std::size_t> order(p.scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return better(p.metric, p.scores[a], p.scores[b]);
  });
  order.resize(std::min(k, order.size()));
  std::vector<RankedAnchor> out;
  for (auto i : order) {
    const auto& a = anchors.anchors()[i];
    out.push_back({a.anchor_id, a.label, p.scores[i]});
  }
  return out;
}

nlohmann::json prediction_record(const Prediction& p, const AnchorSet& anchors) {
  nlohmann::json top = nlohmann::json::array();
  for (const auto& r : top_anchors(p, anchors, 3)) {
    top.push_back({{"anchor_id", r.anchor_id}, {"label", r.label}, {"score", r.score}});
  }
  return {{"window_id", p.window_id},
          {"predicted_label", p.predicted_label},
          {"metric", std::string(metric_name(p.metric))},
          {"top", top}};
}

}  // namespace zshar::classify
