#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "zshar/embedding/embedding.hpp"

namespace zshar::embedding {

inline constexpr std::string_view kDefaultModel = "all-distilroberta-v1";
inline constexpr std::string_view kParaphraseModel = "paraphrase-distilroberta-base-v2";

// The sentence encoder. Implementations are safe to share across threads.
// embed_batch returns one unit-norm embedding per text, in order.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;

  virtual std::vector<Embedding> embed_batch(const std::vector<std::string>& texts) const = 0;
  virtual std::size_t dim() const = 0;
  virtual const std::string& model_name() const = 0;
  virtual std::string backend() const = 0;

  std::string describe() const { return backend() + ":" + model_name(); }
};

// Throws DataError on an empty text (the precondition shared by all backends).
void check_texts(const std::vector<std::string>& texts);

enum class Backend { cache, http, test };

struct ProviderSpec {
  Backend backend = Backend::test;
  std::string model_name = std::string(kDefaultModel);
  std::size_t dim = 768;
  std::filesystem::path cache_path;  // cache
  std::string endpoint;              // http, e.g. "http://127.0.0.1:8080/embed"
  std::size_t batch_size = 64;       // http
  std::size_t max_in_flight = 2;     // http
  int max_attempts = 3;              // http
  int retry_delay_ms = 200;          // http, doubled per attempt
  int timeout_s = 60;                // http

  // Relative cache paths resolve against `base_dir`.
  static ProviderSpec from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
  nlohmann::json to_json() const;
};

std::string_view backend_name(Backend b);

std::unique_ptr<EmbeddingProvider> make_provider(const ProviderSpec& spec);

}  // namespace zshar::embedding
