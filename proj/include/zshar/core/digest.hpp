#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace zshar {

// SHA-256 of a byte string. Used as the embedding-cache key and for config digests.
struct Digest {
  std::array<std::uint8_t, 32> bytes{};

  static Digest of(std::string_view data);

  std::string hex() const;

  auto operator<=>(const Digest&) const = default;
};

struct DigestHash {
  std::size_t operator()(const Digest& d) const noexcept {
    std::size_t h = 0;
    for (int i = 0; i < 8; ++i) h = (h << 8) | d.bytes[i];
    return h;
  }
};

inline std::string sha256_hex(std::string_view data) { return Digest::of(data).hex(); }

}  // namespace zshar
