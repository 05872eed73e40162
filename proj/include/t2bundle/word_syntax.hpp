#pragma once

// Text syntax for words in free products of cyclic groups: letters g<j>^<e>
// (j is 1-based), with the aliases a = g1^1, b = g2^1, b2 = g2^2 and e for
// the identity. Letters may be separated by spaces, '*' or '.'.

#include <cctype>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace t2b {

struct RawLetter {
  int factor;  // 1-based
  long exp;
};

inline std::vector<RawLetter> tokenize_word(std::string const& text) {
  std::vector<RawLetter> out;
  size_t i = 0;
  auto read_number = [&](long& v) {
    bool neg = false;
    if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
      neg = text[i] == '-';
      ++i;
    }
    size_t start = i;
    v = 0;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      v = v * 10 + (text[i] - '0');
      if (v > 1000000) {
        throw std::invalid_argument("exponent too large in word: " + text);
      }
      ++i;
    }
    if (start == i) {
      throw std::invalid_argument("expected a number in word: " + text);
    }
    if (neg) {
      v = -v;
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c)) || c == '*' || c == '.') {
      ++i;
    } else if (c == 'e') {
      ++i;
    } else if (c == 'a') {
      ++i;
      out.push_back({1, 1});
    } else if (c == 'b') {
      ++i;
      if (i < text.size() && text[i] == '2') {
        ++i;
        out.push_back({2, 2});
      } else {
        out.push_back({2, 1});
      }
    } else if (c == 'g') {
      ++i;
      long j = 0, e = 1;
      read_number(j);
      if (i < text.size() && text[i] == '^') {
        ++i;
        read_number(e);
      }
      if (j < 1) {
        throw std::invalid_argument("factor index must be >= 1 in word: " + text);
      }
      out.push_back({static_cast<int>(j), e});
    } else {
      throw std::invalid_argument(std::string("unexpected character '") + c
                                  + "' in word: " + text);
    }
  }
  return out;
}

}  // namespace t2b
