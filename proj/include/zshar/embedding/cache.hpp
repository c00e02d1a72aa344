#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "zshar/embedding/provider.hpp"

namespace zshar::embedding {

// Cache file layout, all integers little-endian:
//
//   offset  size        field
//   0       4           magic "ZEMB"
//   4       4           format version (u32) = 1
//   8       4           model name length N (u32)
//   12      N           model name, UTF-8
//   12+N    4           dim D (u32), D > 0
//   16+N    ...         records until EOF, each:
//                         32 bytes  SHA-256 of the exact text (UTF-8)
//                         4*D bytes IEEE-754 binary32 values
inline constexpr char kCacheMagic[4] = {'Z', 'E', 'M', 'B'};
inline constexpr std::uint32_t kCacheVersion = 1;

struct CacheRecord {
  Digest digest;
  std::vector<float> values;

  bool operator==(const CacheRecord&) const = default;
};

struct CacheFile {
  std::string model_name;
  std::uint32_t dim = 0;
  std::vector<CacheRecord> records;

  bool operator==(const CacheFile&) const = default;
};

std::vector<std::uint8_t> encode_cache(const CacheFile& file);

// Throws CorruptCacheError carrying the byte offset of the first problem.
CacheFile decode_cache(std::span<const std::uint8_t> bytes, const std::string& source = "<memory>");

// Entries keyed by the digest of their text; duplicate texts collapse to the
// first occurrence. Every embedding must have `dim` values.
void cache_write(const std::filesystem::path& path, const std::string& model_name, std::uint32_t dim,
                 std::span<const std::pair<std::string, Embedding>> entries);

CacheFile cache_read_file(const std::filesystem::path& path);

// Read-only provider over a loaded cache; misses are errors.
class CacheProvider final : public EmbeddingProvider {
 public:
  explicit CacheProvider(CacheFile file);

  // Checks the header dim against `expected_dim` (0 skips the check).
  static CacheProvider open(const std::filesystem::path& path, std::size_t expected_dim = 0);

  std::vector<Embedding> embed_batch(const std::vector<std::string>& texts) const override;
  std::size_t dim() const override { return dim_; }
  const std::string& model_name() const override { return model_name_; }
  std::string backend() const override { return "cache"; }

  bool contains(const std::string& text) const;
  std::size_t size() const { return vectors_.size(); }

  // Largest |norm - 1| over all records.
  double max_norm_deviation() const { return max_norm_deviation_; }

 private:
  std::string model_name_;
  std::size_t dim_;
  std::unordered_map<Digest, std::vector<float>, DigestHash> vectors_;
  double max_norm_deviation_ = 0.0;
};

inline CacheProvider cache_read(const std::filesystem::path& path) {
  return CacheProvider::open(path);
}

}  // namespace zshar::embedding
