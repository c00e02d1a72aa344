#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "zshar/core/digest.hpp"
#include "zshar/core/errors.hpp"

namespace zshar::embedding {

struct Embedding {
  std::vector<float> values;
  Digest source_text_hash;

  std::size_t dim() const { return values.size(); }

  bool operator==(const Embedding&) const = default;
};

// Euclidean norm accumulated in double.
double l2_norm(std::span<const float> v);

// Scales to unit norm. Throws DataError on zero or non-finite input.
void normalize(std::vector<float>& v);

class DimensionMismatchError : public ProviderError {
 public:
  DimensionMismatchError(std::size_t expected, std::size_t got, const std::string& where)
      : ProviderError(where + ": expected dim " + std::to_string(expected) + ", got " +
                      std::to_string(got)),
        expected_(expected),
        got_(got) {}
  std::size_t expected() const { return expected_; }
  std::size_t got() const { return got_; }

 private:
  std::size_t expected_;
  std::size_t got_;
};

class CacheMissError : public ProviderError {
 public:
  explicit CacheMissError(std::vector<Digest> missing)
      : ProviderError(make_message(missing)), missing_(std::move(missing)) {}
  const std::vector<Digest>& missing() const { return missing_; }

 private:
  static std::string make_message(const std::vector<Digest>& missing) {
    std::string msg = "embedding cache miss for " + std::to_string(missing.size()) + " text(s)";
    if (!missing.empty()) msg += ", first " + missing.front().hex();
    return msg;
  }
  std::vector<Digest> missing_;
};

class CorruptCacheError : public ProviderError {
 public:
  CorruptCacheError(const std::string& path, std::uint64_t offset, const std::string& reason)
      : ProviderError(path + ": corrupt cache at byte " + std::to_string(offset) + ": " + reason),
        offset_(offset) {}
  std::uint64_t offset() const { return offset_; }

 private:
  std::uint64_t offset_;
};

class HttpError : public ProviderError {
 public:
  HttpError(const std::string& reason, int attempts, bool retryable)
      : ProviderError("embedding service: " + reason + " (after " + std::to_string(attempts) +
                      " attempt" + (attempts == 1 ? "" : "s") + ")"),
        attempts_(attempts),
        retryable_(retryable) {}
  int attempts() const { return attempts_; }
  bool retryable() const { return retryable_; }

 private:
  int attempts_;
  bool retryable_;
};

}  // namespace zshar::embedding
