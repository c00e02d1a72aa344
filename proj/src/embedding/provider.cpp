#include "zshar/embedding/provider.hpp"

#include "zshar/embedding/cache.hpp"
#include "zshar/embedding/http_provider.hpp"
#include "zshar/embedding/test_embedder.hpp"

namespace zshar::embedding {

void check_texts(const std::vector<std::string>& texts) {
  for (std::size_t i = 0; i < texts.size(); ++i) {
    if (texts[i].empty()) throw DataError("cannot embed empty text at index " + std::to_string(i));
  }
}

std::string_view backend_name(Backend b) {
  switch (b) {
    case Backend::cache: return "cache";
    case Backend::http: return "http";
    case Backend::test: return "test";
  }
  return "unknown";
}

ProviderSpec ProviderSpec::from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw ConfigError("provider: must be an object");
  ProviderSpec s;
  try {
    const std::string backend = j.at("backend").get<std::string>();
    if (backend == "cache") {
      s.backend = Backend::cache;
    } else if (backend == "http") {
      s.backend = Backend::http;
    } else if (backend == "test") {
      s.backend = Backend::test;
    } else {
      throw ConfigError("provider: unknown backend `" + backend + "`");
    }
    s.model_name = j.value("model_name", std::string(kDefaultModel));
    s.dim = j.value("dim", std::size_t{768});
    if (j.contains("cache_path")) {
      std::filesystem::path p = j["cache_path"].get<std::string>();
      s.cache_path = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
    }
    s.endpoint = j.value("endpoint", std::string());
    s.batch_size = j.value("batch_size", s.batch_size);
    s.max_in_flight = j.value("max_in_flight", s.max_in_flight);
    s.max_attempts = j.value("max_attempts", s.max_attempts);
    s.retry_delay_ms = j.value("retry_delay_ms", s.retry_delay_ms);
    s.timeout_s = j.value("timeout_s", s.timeout_s);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("provider: ") + e.what());
  }
  if (s.dim == 0) throw ConfigError("provider: dim must be positive");
  if (s.backend == Backend::cache && s.cache_path.empty()) {
    throw ConfigError("provider: cache backend needs `cache_path`");
  }
  return s;
}

nlohmann::json ProviderSpec::to_json() const {
  nlohmann::json j = {{"backend", std::string(backend_name(backend))},
                      {"model_name", model_name},
                      {"dim", dim}};
  if (backend == Backend::cache) j["cache_path"] = cache_path.generic_string();
  if (backend == Backend::http) {
    j["endpoint"] = endpoint;
    j["batch_size"] = batch_size;
    j["max_in_flight"] = max_in_flight;
    j["max_attempts"] = max_attempts;
    j["retry_delay_ms"] = retry_delay_ms;
    j["timeout_s"] = timeout_s;
  }
  return j;
}

std::unique_ptr<EmbeddingProvider> make_provider(const ProviderSpec& spec) {
  switch (spec.backend) {
    case Backend::test: return std::make_unique<TestEmbedder>(spec.dim, spec.model_name);
    case Backend::cache: {
      auto p = std::make_unique<CacheProvider>(CacheProvider::open(spec.cache_path, spec.dim));
      if (p->model_name() != spec.model_name) {
        throw ProviderError(spec.cache_path.string() + ": cache holds model `" + p->model_name() +
                            "`, config asks for `" + spec.model_name + "`");
      }
      return p;
    }
    case Backend::http: return std::make_unique<HttpProvider>(spec);
  }
  throw ConfigError("provider: unknown backend");
}

}  // namespace zshar::embedding
