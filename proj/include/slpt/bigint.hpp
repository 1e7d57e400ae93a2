#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <optional>
#include <string>

namespace slpt {

// Grammars of size n denote strings of length 2^Theta(n), so lengths and
// positions are unbounded integers end to end. cpp_int fast-paths word-sized
// values internally.
using BigInt = boost::multiprecision::cpp_int;

inline std::string to_string(const BigInt& v) { return v.str(); }

inline std::optional<BigInt> parse_bigint(const std::string& s) {
  if (s.empty()) return std::nullopt;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return std::nullopt;
  for (; i < s.size(); ++i)
    if (s[i] < '0' || s[i] > '9') return std::nullopt;
  return BigInt(s);
}

// Value if it fits in uint64, nullopt otherwise.
inline std::optional<std::uint64_t> to_u64(const BigInt& v) {
  if (v < 0 || v > BigInt(UINT64_MAX)) return std::nullopt;
  return static_cast<std::uint64_t>(v);
}

}  // namespace slpt
