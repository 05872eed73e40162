#pragma once

// Shared helpers for the unit tests.

#include "oracle/oracle.hpp"
#include "t2bundle/bundle.hpp"

#include <random>
#include <vector>

namespace testing_support {

using namespace t2b;

inline Sl2Matrix random_product(std::mt19937& rng, int max_len) {
  static Sl2Matrix const gens[4] = {mat_s(), mat_s().inverse(), mat_t(), mat_t().inverse()};
  std::uniform_int_distribution<int> len(0, max_len), pick(0, 3);
  Sl2Matrix x;
  for (int i = len(rng); i > 0; --i) x = x * gens[pick(rng)];
  return x;
}

inline PslWord random_psl(std::mt19937& rng, int max_len) {
  static PslLetter const letters[3] = {PslLetter::a, PslLetter::b, PslLetter::b2};
  std::uniform_int_distribution<int> len(0, max_len), pick(0, 2);
  std::vector<PslLetter> raw;
  for (int i = len(rng); i > 0; --i) raw.push_back(letters[pick(rng)]);
  return psl_reduce(raw);
}

// Every matrix of determinant 1 with entries in [-bound, bound].
inline std::vector<Sl2Matrix> small_matrices(int bound) {
  std::vector<Sl2Matrix> out;
  for (int a = -bound; a <= bound; ++a)
    for (int b = -bound; b <= bound; ++b)
      for (int c = -bound; c <= bound; ++c)
        for (int d = -bound; d <= bound; ++d)
          if (a * d - b * c == 1) out.emplace_back(a, b, c, d);
  return out;
}

inline oracle::Mat to_oracle(Sl2Matrix const& x) {
  return {static_cast<long long>(x.a()), static_cast<long long>(x.b()), static_cast<long long>(x.c()),
          static_cast<long long>(x.d())};
}

inline TorusBundle bundle(std::vector<std::pair<Sl2Matrix, Sl2Matrix>> pairs, Int m = 0, Int n = 0) {
  TorusBundle b;
  b.rep.pairs = std::move(pairs);
  b.m = std::move(m);
  b.n = std::move(n);
  return b;
}

inline PslRep psl_rep(std::vector<std::pair<std::string, std::string>> const& pairs) {
  PslRep r;
  for (auto const& [a, b] : pairs) r.pairs.emplace_back(parse_psl_word(a), parse_psl_word(b));
  return r;
}

}  // namespace testing_support
