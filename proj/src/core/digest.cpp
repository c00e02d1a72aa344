#include "zshar/core/digest.hpp"

#include <openssl/evp.h>

#include <stdexcept>

namespace zshar {

Digest Digest::of(std::string_view data) {
  Digest d;
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), d.bytes.data(), &len, EVP_sha256(), nullptr) != 1 ||
      len != d.bytes.size()) {
    throw std::runtime_error("sha256 failed");
  }
  return d;
}

std::string Digest::hex() const {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(64);
  for (auto b : bytes) {
    out.push_back(kHex[b >> 4]);
    out.push_back(kHex[b & 0xF]);
  }
  return out;
}

}  // namespace zshar
