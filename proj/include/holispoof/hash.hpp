#pragma once

#include <cstdint>
#include <string_view>

namespace holispoof {

// FNV-1a, 64-bit. Used for config fingerprints and per-dataset seed
// derivation; not for anything adversarial.
constexpr std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (const char c : bytes) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 0x100000001b3ull;
  }
  return hash;
}

}  // namespace holispoof
