#include "zshar/embedding/test_embedder.hpp"

#include <random>

namespace zshar::embedding {

Embedding test_embed(std::string_view text, std::size_t dim) {
  if (dim == 0) throw ConfigError("test embedder: dim must be positive");
  Embedding e;
  e.source_text_hash = Digest::of(text);
  std::uint64_t seed = 0;
  for (int i = 0; i < 8; ++i) seed = (seed << 8) | e.source_text_hash.bytes[i];
  std::mt19937_64 rng(seed);
  std::vector<float> v(dim);
  // Redraw on the (astronomically unlikely) all-zero vector.
  do {
    for (auto& x : v) {
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0, 1)
      x = static_cast<float>(2.0 * u - 1.0);
    }
  } while (l2_norm(v) == 0.0);
  normalize(v);
  e.values = std::move(v);
  return e;
}

TestEmbedder::TestEmbedder(std::size_t dim, std::string model_name)
    : dim_(dim), model_name_(std::move(model_name)) {
  if (dim_ == 0) throw ConfigError("test embedder: dim must be positive");
}

std::vector<Embedding> TestEmbedder::embed_batch(const std::vector<std::string>& texts) const {
  check_texts(texts);
  std::vector<Embedding> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(test_embed(t, dim_));
  return out;
}

}  // namespace zshar::embedding
