#include "zshar/evaluate/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <unordered_map>

#include "zshar/core/errors.hpp"

namespace zshar::evaluate {

std::size_t ConfusionMatrix::total() const {
  std::size_t t = 0;
  for (const auto& row : counts) {
    for (auto c : row) t += c;
  }
  return t;
}

std::size_t ConfusionMatrix::trace() const {
  std::size_t t = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) t += counts[i][i];
  return t;
}

std::size_t ConfusionMatrix::row_sum(std::size_t i) const {
  std::size_t t = 0;
  for (auto c : counts[i]) t += c;
  return t;
}

std::size_t ConfusionMatrix::col_sum(std::size_t j) const {
  std::size_t t = 0;
  for (const auto& row : counts) t += row[j];
  return t;
}

EvaluationReport compute_metrics(std::span<const LabelPair> pairs, const std::vector<std::string>& labels) {
  if (pairs.empty()) throw DataError("compute_metrics: no (truth, predicted) pairs");
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!index.emplace(labels[i], i).second) throw ConfigError("duplicate label: " + labels[i]);
  }
  auto lookup = [&](const std::string& l) {
    auto it = index.find(l);
    if (it == index.end()) throw DataError("compute_metrics: unknown label `" + l + "`");
    return it->second;
  };

  EvaluationReport r;
  r.confusion.labels = labels;
  r.confusion.counts.assign(labels.size(), std::vector<std::size_t>(labels.size(), 0));
  for (const auto& [truth, pred] : pairs) ++r.confusion.counts[lookup(truth)][lookup(pred)];

  const auto total = static_cast<double>(pairs.size());
  r.accuracy = static_cast<double>(r.confusion.trace()) / total;
  double macro = 0.0, weighted = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto tp = static_cast<double>(r.confusion.counts[i][i]);
    const auto predicted = static_cast<double>(r.confusion.col_sum(i));
    const std::size_t support = r.confusion.row_sum(i);
    ClassMetrics c;
    c.label = labels[i];
    c.support = support;
    c.precision = predicted > 0 ? tp / predicted : 0.0;
    c.recall = support > 0 ? tp / static_cast<double>(support) : 0.0;
    c.f1 = c.precision + c.recall > 0 ? 2 * c.precision * c.recall / (c.precision + c.recall) : 0.0;
    macro += c.f1;
    weighted += c.f1 * static_cast<double>(support);
    r.per_class.push_back(std::move(c));
  }
  r.f1_macro = labels.empty() ? 0.0 : macro / static_cast<double>(labels.size());
  r.f1_weighted = weighted / total;
  return r;
}

nlohmann::json to_json(const RunMetadata& m) {
  nlohmann::json j = {{"dataset", m.dataset},
                      {"provider", m.provider},
                      {"metric", m.metric},
                      {"layout_digest", m.layout_digest},
                      {"summary_config_digest", m.summary_config_digest},
                      {"descriptors_digest", m.descriptors_digest},
                      {"run_config_digest", m.run_config_digest}};
  j["seed"] = m.seed ? nlohmann::json(*m.seed) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json to_json(const EvaluationReport& r) {
  nlohmann::json per_class = nlohmann::json::array();
  for (const auto& c : r.per_class) {
    per_class.push_back({{"label", c.label},
                         {"precision", c.precision},
                         {"recall", c.recall},
                         {"f1", c.f1},
                         {"support", c.support}});
  }
  return {{"accuracy", r.accuracy},
          {"f1_weighted", r.f1_weighted},
          {"f1_macro", r.f1_macro},
          {"total", r.confusion.total()},
          {"per_class", per_class},
          {"confusion", {{"labels", r.confusion.labels}, {"counts", r.confusion.counts}}},
          {"meta", to_json(r.meta)}};
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string confusion_csv(const ConfusionMatrix& m) {
  std::string out = "truth\\predicted";
  for (const auto& l : m.labels) out += "," + csv_field(l);
  out += '\n';
  for (std::size_t i = 0; i < m.labels.size(); ++i) {
    out += csv_field(m.labels[i]);
    for (auto c : m.counts[i]) out += "," + std::to_string(c);
    out += '\n';
  }
  return out;
}

std::string render_heatmap(const ConfusionMatrix& m) {
  static constexpr const char* kShades[] = {" ", ".", ":", "-", "=", "+", "*", "#", "%", "@"};
  std::size_t name_w = 5;
  for (const auto& l : m.labels) name_w = std::max(name_w, l.size());
  std::size_t cell_w = 2;
  for (const auto& row : m.counts) {
    for (auto c : row) cell_w = std::max(cell_w, std::to_string(c).size() + 1);
  }
  std::string out(name_w, ' ');
  for (std::size_t j = 0; j < m.labels.size(); ++j) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), " %*zu", static_cast<int>(cell_w), j);
    out += buf;
  }
  out += '\n';
  for (std::size_t i = 0; i < m.labels.size(); ++i) {
    std::string name = m.labels[i];
    name.resize(name_w, ' ');
    out += name;
    const std::size_t row_total = m.row_sum(i);
    for (auto c : m.counts[i]) {
      const std::size_t shade = row_total == 0 ? 0 : std::min<std::size_t>(9, (c * 9 + row_total - 1) / row_total);
      char buf[32];
      std::snprintf(buf, sizeof(buf), " %s%*zu", kShades[shade], static_cast<int>(cell_w - 1), c);
      out += buf;
    }
    out += "  [" + std::to_string(i) + "]\n";
  }
  return out;
}

}  // namespace zshar::evaluate
