#pragma once

#include <cstdint>
#include <cstddef>
#include <string>
#include <vector>

#include "selector/errors.hpp"

namespace selector {

/// Bit vector over {0,1}; index 0 is the leftmost (most significant) position
/// in every textual and tie-breaking context.
using Bits = std::vector<std::uint8_t>;

inline std::size_t hamming_weight(const Bits& x) {
  std::size_t w = 0;
  for (auto b : x) w += b;
  return w;
}

/// Total order used for tie-breaking: interpret the bit vector as a binary
/// number with index 0 as the most significant bit. Same-length lexicographic
/// comparison implements exactly that.
inline bool bits_less(const Bits& a, const Bits& b) {
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return a.size() < b.size();
}

inline std::string bits_to_string(const Bits& x) {
  std::string s(x.size(), '0');
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i]) s[i] = '1';
  return s;
}

inline Bits bits_from_string(const std::string& s) {
  Bits x(s.size(), 0);
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '1') x[i] = 1;
    else if (s[i] != '0') fail(ErrorClass::Parse, "bit string may contain only 0/1: '" + s + "'");
  }
  return x;
}

}  // namespace selector
