#include "zshar/embedding/cache.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <unordered_set>

namespace zshar::embedding {
namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> b, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | b[at + i];
  return v;
}

}  // namespace

std::vector<std::uint8_t> encode_cache(const CacheFile& file) {
  if (file.dim == 0) throw DataError("cache: dim must be positive");
  std::vector<std::uint8_t> out(std::begin(kCacheMagic), std::end(kCacheMagic));
  put_u32(out, kCacheVersion);
  put_u32(out, static_cast<std::uint32_t>(file.model_name.size()));
  out.insert(out.end(), file.model_name.begin(), file.model_name.end());
  put_u32(out, file.dim);
  out.reserve(out.size() + file.records.size() * (32 + 4 * std::size_t{file.dim}));
  for (const auto& r : file.records) {
    if (r.values.size() != file.dim) {
      throw DimensionMismatchError(file.dim, r.values.size(), "cache record " + r.digest.hex());
    }
    out.insert(out.end(), r.digest.bytes.begin(), r.digest.bytes.end());
    for (float x : r.values) put_u32(out, std::bit_cast<std::uint32_t>(x));
  }
  return out;
}

CacheFile decode_cache(std::span<const std::uint8_t> b, const std::string& source) {
  auto need = [&](std::size_t at, std::size_t n, const char* what) {
    if (b.size() < at + n) {
      throw CorruptCacheError(source, at, std::string("truncated ") + what);
    }
  };
  need(0, 16, "header");
  if (std::memcmp(b.data(), kCacheMagic, 4) != 0) throw CorruptCacheError(source, 0, "bad magic");
  if (get_u32(b, 4) != kCacheVersion) {
    throw CorruptCacheError(source, 4, "unsupported version " + std::to_string(get_u32(b, 4)));
  }
  CacheFile file;
  const std::uint32_t name_len = get_u32(b, 8);
  need(12, std::size_t{name_len} + 4, "model name");
  file.model_name.assign(reinterpret_cast<const char*>(b.data() + 12), name_len);
  std::size_t at = 12 + name_len;
  file.dim = get_u32(b, at);
  if (file.dim == 0) throw CorruptCacheError(source, at, "dim is zero");
  at += 4;
  const std::size_t record_size = 32 + 4 * std::size_t{file.dim};
  std::unordered_set<Digest, DigestHash> seen;
  while (at < b.size()) {
    if (b.size() - at < record_size) {
      throw CorruptCacheError(source, at,
                              "truncated record: " + std::to_string(b.size() - at) +
                                  " bytes left, record needs " + std::to_string(record_size));
    }
    CacheRecord r;
    std::memcpy(r.digest.bytes.data(), b.data() + at, 32);
    if (!seen.insert(r.digest).second) {
      throw CorruptCacheError(source, at, "duplicate record " + r.digest.hex());
    }
    r.values.resize(file.dim);
    for (std::size_t i = 0; i < file.dim; ++i) {
      const std::size_t off = at + 32 + 4 * i;
      r.values[i] = std::bit_cast<float>(get_u32(b, off));
      if (!std::isfinite(r.values[i])) throw CorruptCacheError(source, off, "non-finite value");
    }
    file.records.push_back(std::move(r));
    at += record_size;
  }
  return file;
}

void cache_write(const std::filesystem::path& path, const std::string& model_name, std::uint32_t dim,
                 std::span<const std::pair<std::string, Embedding>> entries) {
  CacheFile file;
  file.model_name = model_name;
  file.dim = dim;
  std::unordered_set<Digest, DigestHash> seen;
  for (const auto& [text, emb] : entries) {
    if (emb.dim() != dim) throw DimensionMismatchError(dim, emb.dim(), "cache_write");
    const Digest d = Digest::of(text);
    if (seen.insert(d).second) file.records.push_back({d, emb.values});
  }
  const auto bytes = encode_cache(file);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ProviderError("cannot write cache file: " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw ProviderError("write failed: " + path.string());
}

CacheFile cache_read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ProviderError("cannot open cache file: " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_cache(bytes, path.string());
}

CacheProvider::CacheProvider(CacheFile file)
    : model_name_(std::move(file.model_name)), dim_(file.dim) {
  for (auto& r : file.records) {
    max_norm_deviation_ = std::max(max_norm_deviation_, std::abs(l2_norm(r.values) - 1.0));
    vectors_.emplace(r.digest, std::move(r.values));
  }
}

CacheProvider CacheProvider::open(const std::filesystem::path& path, std::size_t expected_dim) {
  CacheProvider p(cache_read_file(path));
  if (expected_dim != 0 && p.dim() != expected_dim) {
    throw DimensionMismatchError(expected_dim, p.dim(), path.string());
  }
  return p;
}

bool CacheProvider::contains(const std::string& text) const {
  return vectors_.contains(Digest::of(text));
}

std::vector<Embedding> CacheProvider::embed_batch(const std::vector<std::string>& texts) const {
  check_texts(texts);
  std::vector<Embedding> out;
  out.reserve(texts.size());
  std::vector<Digest> missing;
  std::unordered_set<Digest, DigestHash> missing_seen;
  for (const auto& t : texts) {
    const Digest d = Digest::of(t);
    auto it = vectors_.find(d);
    if (it == vectors_.end()) {
      if (missing_seen.insert(d).second) missing.push_back(d);
      continue;
    }
    Embedding e{it->second, d};
    normalize(e.values);
    out.push_back(std::move(e));
  }
  if (!missing.empty()) throw CacheMissError(std::move(missing));
  return out;
}

}  // namespace zshar::embedding
