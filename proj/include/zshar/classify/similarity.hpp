#pragma once

#include <span>
#include <string>
#include <string_view>

#include "zshar/embedding/embedding.hpp"

namespace zshar::classify {

enum class Metric { cosine, l2 };

std::string_view metric_name(Metric m);
Metric metric_from_name(std::string_view name);  // throws ConfigError

// dot(a,b) / (|a||b|), clamped to [-1, 1]. Throws on dim mismatch or zero norm.
double cosine(std::span<const float> a, std::span<const float> b);
double cosine(const embedding::Embedding& a, const embedding::Embedding& b);

double l2_distance(std::span<const float> a, std::span<const float> b);
double l2_distance(const embedding::Embedding& a, const embedding::Embedding& b);

// Larger is better for cosine, smaller for l2.
inline bool better(Metric m, double candidate, double incumbent) {
  return m == Metric::cosine ? candidate > incumbent : candidate < incumbent;
}

double score(Metric m, std::span<const float> query, std::span<const float> anchor);

}  // namespace zshar::classify
