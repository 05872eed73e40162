#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace t2b {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Int abs(Int const& x) { return x < 0 ? Int(-x) : x; }

inline Int gcd(Int a, Int b) {
  a = abs(a);
  b = abs(b);
  while (b != 0) {
    Int r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// Floor division; b != 0.
inline Int floor_div(Int const& a, Int const& b) {
  Int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) {
    --q;
  }
  return q;
}

inline std::string to_string(Int const& x) { return x.str(); }

inline Int parse_int(std::string const& s) {
  if (s.empty()) {
    throw std::invalid_argument("empty integer literal");
  }
  size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) {
    throw std::invalid_argument("bad integer literal: " + s);
  }
  for (size_t j = i; j < s.size(); ++j) {
    if (s[j] < '0' || s[j] > '9') {
      throw std::invalid_argument("bad integer literal: " + s);
    }
  }
  return Int(s[0] == '+' ? s.substr(1) : s);
}

inline bool fits_int64(Int const& x) {
  return x >= Int(INT64_MIN) && x <= Int(INT64_MAX);
}

// Extended Euclid: returns g = gcd(a,b) >= 0 and x, y with a*x + b*y = g.
inline Int ext_gcd(Int const& a, Int const& b, Int& x, Int& y) {
  Int old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    Int q = old_r / r;
    Int tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
    tmp = old_t - q * t;
    old_t = t;
    t = tmp;
  }
  if (old_r < 0) {
    old_r = -old_r;
    old_s = -old_s;
    old_t = -old_t;
  }
  x = old_s;
  y = old_t;
  return old_r;
}

}  // namespace t2b
