#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

namespace archk {

// FNV-1a, 64-bit. Not cryptographic; used to fingerprint inputs so outputs
// carry a cheap provenance mark.
class Fnv1a {
 public:
  Fnv1a& update(std::string_view bytes) noexcept {
    for (const char c : bytes) {
      state_ ^= static_cast<unsigned char>(c);
      state_ *= 1099511628211ull;
    }
    return *this;
  }

  std::uint64_t value() const noexcept { return state_; }

  std::string hex() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(state_));
    return std::string(buf, 16);
  }

 private:
  std::uint64_t state_ = 1469598103934665603ull;
};

inline std::string fnv1a_hex(std::string_view bytes) { return Fnv1a().update(bytes).hex(); }

// 17 significant digits: enough for doubles to round-trip through text.
inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace archk
