#include "zshar/embedding/http_provider.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <future>
#include <semaphore>
#include <thread>

#include "httplib.h"
#include "json.hpp"

namespace zshar::embedding {

struct HttpProvider::Gate {
  explicit Gate(std::ptrdiff_t n) : slots(n) {}
  std::counting_semaphore<1024> slots;
};

HttpProvider::HttpProvider(ProviderSpec spec) : spec_(std::move(spec)) {
  const std::string& url = spec_.endpoint;
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos || url.compare(0, scheme_end, "http") != 0) {
    throw ConfigError("http provider: endpoint must be an http:// URL, got `" + url + "`");
  }
  const auto path_start = url.find('/', scheme_end + 3);
  host_ = url.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/" : url.substr(path_start);
  if (spec_.dim == 0) throw ConfigError("http provider: dim must be positive");
  if (spec_.batch_size == 0) throw ConfigError("http provider: batch_size must be positive");
  if (spec_.max_in_flight == 0 || spec_.max_in_flight > 1024) {
    throw ConfigError("http provider: max_in_flight must be in [1, 1024]");
  }
  if (spec_.max_attempts < 1) throw ConfigError("http provider: max_attempts must be >= 1");
  gate_ = std::make_unique<Gate>(static_cast<std::ptrdiff_t>(spec_.max_in_flight));
}

HttpProvider::~HttpProvider() = default;

std::vector<std::vector<float>> HttpProvider::request(const std::vector<std::string>& batch) const {
  const nlohmann::json body = {{"model", spec_.model_name}, {"texts", batch}};
  const std::string payload = body.dump();
  std::string last_error;
  int attempt = 0;
  while (attempt < spec_.max_attempts) {
    if (attempt > 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(spec_.retry_delay_ms << (attempt - 1)));
    }
    ++attempt;
    httplib::Client client(host_);
    client.set_connection_timeout(spec_.timeout_s, 0);
    client.set_read_timeout(spec_.timeout_s, 0);
    client.set_write_timeout(spec_.timeout_s, 0);
    gate_->slots.acquire();
    auto res = client.Post(path_, payload, "application/json");
    gate_->slots.release();
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 429 || res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw HttpError("HTTP " + std::to_string(res->status) + ": " + res->body, attempt, false);
    }
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::exception& e) {
      throw HttpError(std::string("malformed response: ") + e.what(), attempt, false);
    }
    if (!j.contains("dim") || !j.contains("vectors") || !j["vectors"].is_array()) {
      throw HttpError("response lacks `dim`/`vectors`", attempt, false);
    }
    const auto dim = j["dim"].get<std::size_t>();
    if (dim != spec_.dim) throw DimensionMismatchError(spec_.dim, dim, "embedding service");
    if (j["vectors"].size() != batch.size()) {
      throw HttpError("expected " + std::to_string(batch.size()) + " vectors, got " +
                          std::to_string(j["vectors"].size()),
                      attempt, false);
    }
    std::vector<std::vector<float>> out;
    out.reserve(batch.size());
    for (const auto& v : j["vectors"]) {
      auto values = v.get<std::vector<float>>();
      if (values.size() != spec_.dim) {
        throw DimensionMismatchError(spec_.dim, values.size(), "embedding service vector");
      }
      out.push_back(std::move(values));
    }
    return out;
  }
  throw HttpError(last_error, attempt, true);
}

std::vector<Embedding> HttpProvider::embed_batch(const std::vector<std::string>& texts) const {
  check_texts(texts);
  const std::size_t n_batches = (texts.size() + spec_.batch_size - 1) / spec_.batch_size;
  std::vector<std::vector<std::vector<float>>> results(n_batches);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (std::size_t b = next++; b < n_batches && !failed; b = next++) {
      const std::size_t start = b * spec_.batch_size;
      const std::size_t stop = std::min(texts.size(), start + spec_.batch_size);
      try {
        results[b] = request({texts.begin() + static_cast<std::ptrdiff_t>(start),
                              texts.begin() + static_cast<std::ptrdiff_t>(stop)});
      } catch (...) {
        failed = true;
        throw;
      }
    }
  };
  std::vector<std::future<void>> workers;
  for (std::size_t w = 0; w < std::min(spec_.max_in_flight, n_batches); ++w) {
    workers.push_back(std::async(std::launch::async, worker));
  }
  for (auto& w : workers) w.get();

  std::vector<Embedding> out;
  out.reserve(texts.size());
  std::size_t i = 0;
  for (auto& batch : results) {
    for (auto& values : batch) {
      normalize(values);
      out.push_back(Embedding{std::move(values), Digest::of(texts[i++])});
    }
  }
  return out;
}

}  // namespace zshar::embedding
