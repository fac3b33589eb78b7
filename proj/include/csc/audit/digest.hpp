// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <openssl/evp.h>

#include "csc/core/error.hpp"

namespace csc {

/// 256-bit SHA-256 digest.
struct Digest {
  std::array<std::uint8_t, 32> bytes{};

  static Digest zero() { return Digest{}; }

  std::string hex() const {
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(64);
    for (auto b : bytes) {
      out += kHex[b >> 4];
      out += kHex[b & 0xF];
    }
    return out;
  }

  /// Lower-case hex only, so a digest has exactly one textual form.
  static std::optional<Digest> from_hex(std::string_view s) {
    if (s.size() != 64) return std::nullopt;
    Digest d;
    auto nibble = [](char c) -> int {
      if (c >= '0' && c <= '9') return c - '0';
      if (c >= 'a' && c <= 'f') return c - 'a' + 10;
      return -1;
    };
    for (std::size_t i = 0; i < 32; ++i) {
      const int hi = nibble(s[2 * i]);
      const int lo = nibble(s[2 * i + 1]);
      if (hi < 0 || lo < 0) return std::nullopt;
      d.bytes[i] = static_cast<std::uint8_t>(hi << 4 | lo);
    }
    return d;
  }

  friend bool operator==(const Digest&, const Digest&) = default;
};

inline Digest sha256(std::string_view data) {
  Digest d;
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), d.bytes.data(), &len, EVP_sha256(), nullptr) != 1 || len != 32)
    throw std::runtime_error("SHA-256 computation failed");
  return d;
}

}  // namespace csc
