#include "zshar/classify/similarity.hpp"

#include <algorithm>
#include <cmath>

namespace zshar::classify {
namespace {

void check_dims(std::span<const float> a, std::span<const float> b) {
  if (a.size() != b.size()) throw embedding::DimensionMismatchError(a.size(), b.size(), "similarity");
}

}  // namespace

std::string_view metric_name(Metric m) { return m == Metric::cosine ? "cosine" : "l2"; }

Metric metric_from_name(std::string_view name) {
  if (name == "cosine") return Metric::cosine;
  if (name == "l2") return Metric::l2;
  throw ConfigError("unknown metric `" + std::string(name) + "` (expected cosine or l2)");
}

double cosine(std::span<const float> a, std::span<const float> b) {
  check_dims(a, b);
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += static_cast<double>(a[i]) * b[i];
    na += static_cast<double>(a[i]) * a[i];
    nb += static_cast<double>(b[i]) * b[i];
  }
  if (na == 0.0 || nb == 0.0) throw DataError("cosine of a zero-norm vector");
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

double cosine(const embedding::Embedding& a, const embedding::Embedding& b) {
  return cosine(a.values, b.values);
}

double l2_distance(std::span<const float> a, std::span<const float> b) {
  check_dims(a, b);
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = static_cast<double>(a[i]) - b[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

double l2_distance(const embedding::Embedding& a, const embedding::Embedding& b) {
  return l2_distance(a.values, b.values);
}

double score(Metric m, std::span<const float> query, std::span<const float> anchor) {
  return m == Metric::cosine ? cosine(query, anchor) : l2_distance(query, anchor);
}

}  // namespace zshar::classify
