#pragma once
// Version string and the config hash used in reproducibility headers and
// cache keys.

#include <cstdint>
#include <string>

namespace isingzero {

inline const char *version() { return "0.1.0"; }

// FNV-1a over the canonical config text; stable across platforms
inline std::string config_hash(const std::string &canonical) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : canonical) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  static const char *hex = "0123456789abcdef";
  for (int i = 15; i >= 0; --i) {
    buf[i] = hex[h & 0xf];
    h >>= 4;
  }
  buf[16] = '\0';
  return std::string(buf);
}

} // namespace isingzero
