#include "zshar/embedding/embedding.hpp"

#include <cmath>

namespace zshar::embedding {

double l2_norm(std::span<const float> v) {
  double sum = 0.0;
  for (float x : v) sum += static_cast<double>(x) * x;
  return std::sqrt(sum);
}

void normalize(std::vector<float>& v) {
  const double n = l2_norm(v);
  if (!std::isfinite(n)) throw DataError("cannot normalize a non-finite vector");
  if (n == 0.0) throw DataError("cannot normalize a zero vector");
  for (float& x : v) x = static_cast<float>(x / n);
}

}  // namespace zshar::embedding
