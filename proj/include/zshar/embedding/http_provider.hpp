#pragma once

#include <memory>
#include <string>

#include "zshar/embedding/provider.hpp"

namespace zshar::embedding {

// Client for a batch embedding service.
//   POST <endpoint>  {"model": "<name>", "texts": ["...", ...]}
//   200 response     {"dim": D, "vectors": [[...], ...]}
// Texts are split into batches of spec.batch_size, at most spec.max_in_flight
// requests run concurrently. 5xx, 429 and transport failures are retried with
// doubling delay up to spec.max_attempts; other statuses fail at once.
class HttpProvider final : public EmbeddingProvider {
 public:
  explicit HttpProvider(ProviderSpec spec);
  ~HttpProvider() override;

  std::vector<Embedding> embed_batch(const std::vector<std::string>& texts) const override;
  std::size_t dim() const override { return spec_.dim; }
  const std::string& model_name() const override { return spec_.model_name; }
  std::string backend() const override { return "http"; }

 private:
  std::vector<std::vector<float>> request(const std::vector<std::string>& batch) const;

  struct Gate;
  ProviderSpec spec_;
  std::string host_;  // scheme://host[:port]
  std::string path_;
  std::unique_ptr<Gate> gate_;
};

}  // namespace zshar::embedding
