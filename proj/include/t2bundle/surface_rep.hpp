#pragma once

// Representations of the genus-g surface group into SL(2,Z) and PSL(2,Z),
// given by the images of alpha_1, beta_1, ..., alpha_g, beta_g.

#include "t2bundle/freeprod.hpp"
#include "t2bundle/sl2z.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace t2b {

struct SlRep {
  std::vector<std::pair<Sl2Matrix, Sl2Matrix>> pairs;

  size_t genus() const { return pairs.size(); }
  bool operator==(SlRep const& o) const { return pairs == o.pairs; }

  // alpha_1, beta_1, alpha_2, ...
  std::vector<Sl2Matrix> images() const {
    std::vector<Sl2Matrix> v;
    for (auto const& [a, b] : pairs) {
      v.push_back(a);
      v.push_back(b);
    }
    return v;
  }
};

struct PslRep {
  std::vector<std::pair<PslWord, PslWord>> pairs;

  size_t genus() const { return pairs.size(); }
  bool operator==(PslRep const& o) const { return pairs == o.pairs; }

  std::vector<PslWord> images() const {
    std::vector<PslWord> v;
    for (auto const& [a, b] : pairs) {
      v.push_back(a);
      v.push_back(b);
    }
    return v;
  }
};

inline bool validate(SlRep const& r) {
  Sl2Matrix acc;
  for (auto const& [a, b] : r.pairs) acc = acc * a * b * a.inverse() * b.inverse();
  return acc.is_identity();
}

inline bool validate(PslRep const& r) {
  PslWord acc;
  for (auto const& [a, b] : r.pairs) {
    acc = psl_mul(acc, psl_mul(a, b, psl_mul(psl_inverse(a), psl_inverse(b))));
  }
  return acc.empty();
}

inline PslRep project_rep(SlRep const& r) {
  if (!validate(r)) throw std::invalid_argument("representation violates the surface relator");
  PslRep p;
  for (auto const& [a, b] : r.pairs) p.pairs.emplace_back(project(a), project(b));
  return p;
}

// ---------------------------------------------------------------------------
// PSL(2,Z) words as words in Z2 * Z3.

inline FpWord to_fp(PslWord const& u) {
  FpWord w;
  for (PslLetter x : u.letters) {
    switch (x) {
      case PslLetter::a: w.push_back({0, 1}); break;
      case PslLetter::b: w.push_back({1, 1}); break;
      case PslLetter::b2: w.push_back({1, 2}); break;
    }
  }
  return w;
}

inline PslWord from_fp(FpWord const& w) {
  std::vector<PslLetter> raw;
  for (FpLetter const& x : w) {
    if (x.factor == 0) {
      raw.push_back(PslLetter::a);
    } else {
      raw.push_back(x.exp == 1 ? PslLetter::b : PslLetter::b2);
    }
  }
  return psl_reduce(raw);
}

inline CoreGraph fold_psl(std::vector<PslWord> const& gens) {
  std::vector<FpWord> w;
  for (PslWord const& g : gens) w.push_back(to_fp(g));
  return CoreGraph::build(FreeProductSignature::modular(), w);
}

// The image subgroup; two representations lie in one mapping-class orbit
// exactly when these subgroups are equal.
inline CoreGraph orbit_invariant(PslRep const& r) { return fold_psl(r.images()); }

// Product of generator images along a generator word.
inline Sl2Matrix evaluate(std::vector<Sl2Matrix> const& gens, GenWord const& w) {
  Sl2Matrix acc;
  for (int x : w) {
    size_t i = static_cast<size_t>(x < 0 ? -x : x) - 1;
    if (i >= gens.size()) throw std::invalid_argument("generator index out of range");
    acc = acc * (x < 0 ? gens[i].inverse() : gens[i]);
  }
  return acc;
}

// ---------------------------------------------------------------------------

struct NormalFormCertificate {
  size_t k = 0, l = 0, m = 0;
  std::vector<PslWord> beta_images;
};

inline std::optional<NormalFormCertificate> is_normal_form(PslRep const& r) {
  if (!validate(r)) return std::nullopt;
  NormalFormCertificate c;
  size_t g = r.genus();
  for (auto const& [a, b] : r.pairs) {
    if (!a.empty()) return std::nullopt;
    c.beta_images.push_back(b);
  }
  size_t i = 0;
  while (i < g && psl_order(c.beta_images[i]) == infinite_order) ++i;
  c.k = i;
  while (i < g && psl_order(c.beta_images[i]) == 3) ++i;
  c.l = i;
  while (i < g && psl_order(c.beta_images[i]) == 2) ++i;
  c.m = i;
  while (i < g && c.beta_images[i].empty()) ++i;
  if (i != g) return std::nullopt;
  // A generating set of the right orders whose subgroup has matching Kurosh
  // invariants is a free-product basis (free products of cyclic groups are
  // Hopfian).
  std::vector<PslWord> gens(c.beta_images.begin(), c.beta_images.begin() + static_cast<long>(c.m));
  KuroshInvariants inv = kurosh_invariants(fold_psl(gens));
  KuroshInvariants want;
  want.free_rank = static_cast<long>(c.k);
  if (c.l > c.k) want.factor_counts[3] = static_cast<long>(c.l - c.k);
  if (c.m > c.l) want.factor_counts[2] = static_cast<long>(c.m - c.l);
  if (!(inv == want)) return std::nullopt;
  return c;
}

// ---------------------------------------------------------------------------
// Subgroups of SL(2,Z) given by generators, through their projection and a
// sign system. Reading a word along the core graph of the projection, give
// each step (state, factor) a sign bit; the canonical step lifts are s and t.
// The image avoids -E exactly when bits exist such that (i) every complete
// traversal of a factor cycle lifts to E and (ii) every generator path lifts
// to the generator itself. Both are linear over GF(2).

namespace detail {

class Gf2System {
 public:
  explicit Gf2System(size_t vars) : vars_(vars) {}

  void add(std::vector<uint8_t> coeffs, uint8_t rhs) {
    coeffs.resize(vars_ + 1);
    coeffs[vars_] = rhs & 1;
    rows_.push_back(std::move(coeffs));
  }

  bool solvable() const {
    std::vector<std::vector<uint8_t>> m = rows_;
    size_t r = 0;
    for (size_t c = 0; c < vars_ && r < m.size(); ++c) {
      size_t p = r;
      while (p < m.size() && !m[p][c]) ++p;
      if (p == m.size()) continue;
      std::swap(m[p], m[r]);
      for (size_t i = 0; i < m.size(); ++i) {
        if (i == r || !m[i][c]) continue;
        for (size_t j = c; j <= vars_; ++j) m[i][j] ^= m[r][j];
      }
      ++r;
    }
    for (size_t i = r; i < m.size(); ++i)
      if (m[i][vars_]) return false;
    return true;
  }

 private:
  size_t vars_;
  std::vector<std::vector<uint8_t>> rows_;
};

}  // namespace detail

struct SlMembership {
  GenWord word;     // evaluates to the element, or to its negative when negated
  bool negated = false;
};

class SignedImage {
 public:
  explicit SignedImage(std::vector<Sl2Matrix> gens) : gens_(std::move(gens)) {
    std::vector<PslWord> proj;
    for (Sl2Matrix const& m : gens_) proj.push_back(project(m));
    graph_ = fold_psl(proj);
    minus_ = !sign_system(proj).solvable();
  }

  std::vector<Sl2Matrix> const& generators() const { return gens_; }
  CoreGraph const& projection() const { return graph_; }
  bool contains_minus_identity() const { return minus_; }

  std::optional<SlMembership> member(Sl2Matrix const& x) const {
    std::optional<GenWord> w = t2b::member(graph_, to_fp(project(x)));
    if (!w) return std::nullopt;
    Sl2Matrix v = evaluate(gens_, *w);
    if (v == x) return SlMembership{*w, false};
    if (minus_) return SlMembership{*w, true};
    return std::nullopt;
  }

  bool contains(Sl2Matrix const& x) const { return member(x).has_value(); }

 private:
  detail::Gf2System sign_system(std::vector<PslWord> const& proj) const {
    size_t n = graph_.num_states();
    std::vector<std::vector<size_t>> var(n, std::vector<size_t>(2, no_state));
    size_t count = 0;
    for (size_t x = 0; x < n; ++x)
      for (size_t f = 0; f < 2; ++f)
        if (graph_.successor(x, f) != no_state) var[x][f] = count++;
    detail::Gf2System sys(count);

    // Gauge: steps of a spanning tree carry bit 0.
    std::vector<bool> seen(n, false);
    std::vector<size_t> queue{0};
    seen[0] = true;
    for (size_t qi = 0; qi < queue.size(); ++qi) {
      size_t x = queue[qi];
      for (size_t f = 0; f < 2; ++f) {
        size_t y = graph_.successor(x, f);
        if (y == no_state || seen[y]) continue;
        seen[y] = true;
        queue.push_back(y);
        std::vector<uint8_t> row(count, 0);
        row[var[x][f]] = 1;
        sys.add(std::move(row), 0);
      }
    }

    // s^2 = t^3 = -E: a factor cycle of length d is traversed k/d times by
    // the relator g^k, which must lift to E.
    for (size_t f = 0; f < 2; ++f) {
      int k = graph_.signature().orders[f];
      for (auto const& orbit : graph_.orbits(f)) {
        uint8_t laps = static_cast<uint8_t>((k / static_cast<int>(orbit.size())) & 1);
        std::vector<uint8_t> row(count, 0);
        for (size_t x : orbit) row[var[x][f]] = laps;
        sys.add(std::move(row), 1);
      }
    }

    for (size_t i = 0; i < gens_.size(); ++i) {
      std::vector<uint8_t> row(count, 0);
      size_t cur = 0;
      for (FpLetter const& l : to_fp(proj[i])) {
        size_t f = static_cast<size_t>(l.factor);
        for (int e = 0; e < l.exp; ++e) {
          row[var[cur][f]] ^= 1;
          cur = graph_.successor(cur, f);
        }
      }
      uint8_t rhs = lift(proj[i]) == gens_[i] ? 0 : 1;
      sys.add(std::move(row), rhs);
    }
    return sys;
  }

  std::vector<Sl2Matrix> gens_;
  CoreGraph graph_;
  bool minus_ = false;
};

inline bool contains_minus_identity(SlRep const& r) {
  if (!validate(r)) throw std::invalid_argument("representation violates the surface relator");
  if (is_normal_form(project_rep(r))) {
    for (auto const& [a, b] : r.pairs) {
      int o = order(b);
      if (a.is_minus_identity() || o == 2 || o == 4 || o == 6) return true;
    }
    return false;
  }
  return SignedImage(r.images()).contains_minus_identity();
}

// Generator word for -E in the image of a representation with normal-form
// projection, or nullopt when -E is not in the image.
inline std::optional<GenWord> minus_identity_witness(SlRep const& r) {
  for (size_t i = 0; i < r.genus(); ++i) {
    auto const& [a, b] = r.pairs[i];
    int alpha = static_cast<int>(2 * i + 1), beta = alpha + 1;
    if (a.is_minus_identity()) return GenWord{alpha};
    int o = order(b);
    if (o == 2 || o == 4 || o == 6) return GenWord(static_cast<size_t>(o / 2), beta);
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

namespace detail {

// The genus-one move (A, B) -> (A^p B^q, A^r B^s) for commuting A, B and
// ps - rq = 1, which does not change the bundle.
inline std::pair<Sl2Matrix, Sl2Matrix> pair_move(Sl2Matrix const& a, Sl2Matrix const& b,
                                                 long p, long q, long r, long s) {
  return {power(a, p) * power(b, q), power(a, r) * power(b, s)};
}

}  // namespace detail

inline SlRep canonicalize_lift(SlRep const& r) {
  std::optional<NormalFormCertificate> nf = is_normal_form(project_rep(r));
  if (!nf) throw std::invalid_argument("canonicalize_lift: projection is not in normal form");
  SlRep out = r;
  for (size_t i = 0; i < out.genus(); ++i) {
    auto& [a, b] = out.pairs[i];
    if (i < nf->k) continue;
    if (i < nf->l) {
      if (order(b) == 6) {
        // B^3 = -E
        out.pairs[i] = a.is_identity() ? detail::pair_move(a, b, 1, 3, 1, 4)
                                        : detail::pair_move(a, b, 1, 0, 1, 1);
      }
    } else if (i < nf->m) {
      // B^2 = -E
      if (a.is_identity()) out.pairs[i] = detail::pair_move(a, b, 1, 2, 0, 1);
    } else if (b.is_minus_identity()) {
      out.pairs[i] = a.is_identity() ? detail::pair_move(a, b, 0, 1, -1, 0)
                                      : detail::pair_move(a, b, 1, 0, 1, 1);
    }
  }
  return out;
}

struct LiftOrbitTag {
  bool minus_in_image = false;
  std::vector<int> signs;             // epsilon_1..epsilon_k when minus_in_image
  std::vector<Sl2Matrix> matrices;    // B_1..B_k otherwise

  bool operator==(LiftOrbitTag const& o) const {
    return minus_in_image == o.minus_in_image && signs == o.signs && matrices == o.matrices;
  }
  bool operator!=(LiftOrbitTag const& o) const { return !(*this == o); }
  bool operator<(LiftOrbitTag const& o) const {
    if (minus_in_image != o.minus_in_image) return minus_in_image < o.minus_in_image;
    if (signs != o.signs) return signs < o.signs;
    return matrices < o.matrices;
  }

  std::string str() const {
    std::string s = minus_in_image ? "MinusInImage(" : "MinusFree(";
    for (size_t i = 0; i < signs.size(); ++i) s += (i ? "," : "") + std::string(signs[i] > 0 ? "+1" : "-1");
    for (size_t i = 0; i < matrices.size(); ++i) s += (i ? "," : "") + matrices[i].str();
    return s + ")";
  }
};

inline LiftOrbitTag lift_orbit_tag(SlRep const& canonical) {
  std::optional<NormalFormCertificate> nf = is_normal_form(project_rep(canonical));
  if (!nf) throw std::invalid_argument("lift_orbit_tag: projection is not in normal form");
  if (!(canonical == canonicalize_lift(canonical))) {
    throw std::invalid_argument("lift_orbit_tag: representation is not canonicalized");
  }
  LiftOrbitTag tag;
  tag.minus_in_image = contains_minus_identity(canonical);
  for (size_t i = 0; i < nf->k; ++i) {
    auto const& [a, b] = canonical.pairs[i];
    if (tag.minus_in_image) {
      tag.signs.push_back(a.is_identity() ? 1 : -1);
    } else {
      tag.matrices.push_back(b);
    }
  }
  return tag;
}

// All 2^(2g) lifts, sign bits taken from the binary expansion of the index.
inline std::vector<SlRep> enumerate_lifts(PslRep const& r) {
  if (!validate(r)) throw std::invalid_argument("representation violates the surface relator");
  size_t g = r.genus();
  if (2 * g >= 63) throw std::invalid_argument("genus too large to enumerate lifts");
  std::vector<Sl2Matrix> base;
  for (PslWord const& w : r.images()) base.push_back(lift(w));
  std::vector<SlRep> out;
  for (uint64_t mask = 0; mask < (uint64_t{1} << (2 * g)); ++mask) {
    SlRep s;
    for (size_t i = 0; i < g; ++i) {
      Sl2Matrix a = (mask >> (2 * i)) & 1 ? -base[2 * i] : base[2 * i];
      Sl2Matrix b = (mask >> (2 * i + 1)) & 1 ? -base[2 * i + 1] : base[2 * i + 1];
      s.pairs.emplace_back(a, b);
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace t2b
