#pragma once

// Finitely generated subgroups of Z_k1 * ... * Z_kn through folded core
// graphs. A state is a right coset Hx; factor j acts on states by a partial
// permutation whose defined part is a union of complete cycles of length
// dividing k_j. A cycle of length d < k_j is a vertex with stabilizer
// Z_{k_j/d}. Each edge x -> x.g_j carries a word eta in the subgroup
// generators with rep(x) g_j = eta rep(x.g_j), so reading a word along the
// graph also spells it in the generators.

#include "t2bundle/integer.hpp"
#include "t2bundle/word_syntax.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace t2b {

struct FreeProductSignature {
  std::vector<int> orders;

  size_t size() const { return orders.size(); }
  bool operator==(FreeProductSignature const& o) const { return orders == o.orders; }
  bool operator!=(FreeProductSignature const& o) const { return orders != o.orders; }

  static FreeProductSignature modular() { return {{2, 3}}; }

  void validate() const {
    if (orders.empty()) throw std::invalid_argument("signature has no factors");
    for (int k : orders)
      if (k < 2) throw std::invalid_argument("signature orders must be >= 2");
  }
};

inline FreeProductSignature parse_signature(std::string const& text) {
  FreeProductSignature sig;
  size_t i = 0;
  while (i < text.size()) {
    size_t j = text.find(',', i);
    if (j == std::string::npos) j = text.size();
    std::string tok = text.substr(i, j - i);
    Int v = parse_int(tok);
    if (v < 2 || v > 1000000) throw std::invalid_argument("bad signature order: " + tok);
    sig.orders.push_back(static_cast<int>(v));
    i = j + 1;
  }
  sig.validate();
  return sig;
}

struct FpLetter {
  int factor;  // 0-based
  int exp;     // 1 <= exp < order of the factor

  bool operator==(FpLetter const& o) const { return factor == o.factor && exp == o.exp; }
  bool operator<(FpLetter const& o) const {
    return factor != o.factor ? factor < o.factor : exp < o.exp;
  }
};

using FpWord = std::vector<FpLetter>;

// Normal form: exponents reduced mod k_j, no zero letters, no two adjacent
// letters from one factor.
inline FpWord fp_reduce(FreeProductSignature const& sig, FpWord const& raw) {
  FpWord st;
  st.reserve(raw.size());
  for (FpLetter x : raw) {
    if (x.factor < 0 || static_cast<size_t>(x.factor) >= sig.size()) {
      throw std::invalid_argument("letter factor out of range");
    }
    int k = sig.orders[static_cast<size_t>(x.factor)];
    int e = ((x.exp % k) + k) % k;
    if (e == 0) continue;
    if (!st.empty() && st.back().factor == x.factor) {
      e = (st.back().exp + e) % k;
      st.pop_back();
      if (e != 0) st.push_back({x.factor, e});
    } else {
      st.push_back({x.factor, e});
    }
  }
  return st;
}

inline FpWord fp_mul(FreeProductSignature const& sig, FpWord const& u, FpWord const& v) {
  FpWord raw = u;
  raw.insert(raw.end(), v.begin(), v.end());
  return fp_reduce(sig, raw);
}

inline FpWord fp_inverse(FreeProductSignature const& sig, FpWord const& u) {
  FpWord r;
  r.reserve(u.size());
  for (auto it = u.rbegin(); it != u.rend(); ++it) {
    int k = sig.orders[static_cast<size_t>(it->factor)];
    r.push_back({it->factor, (k - it->exp) % k});
  }
  return fp_reduce(sig, r);
}

inline FpWord fp_conjugate(FreeProductSignature const& sig, FpWord const& g, FpWord const& w) {
  return fp_mul(sig, fp_mul(sig, g, w), fp_inverse(sig, g));
}

inline FpWord parse_fp_word(FreeProductSignature const& sig, std::string const& text) {
  FpWord raw;
  for (RawLetter const& l : tokenize_word(text)) {
    if (static_cast<size_t>(l.factor) > sig.size()) {
      throw std::invalid_argument("factor index out of range in word: " + text);
    }
    int k = sig.orders[static_cast<size_t>(l.factor - 1)];
    raw.push_back({l.factor - 1, static_cast<int>(((l.exp % k) + k) % k)});
  }
  return fp_reduce(sig, raw);
}

inline std::string to_string(FreeProductSignature const& sig, FpWord const& w) {
  if (w.empty()) return "e";
  bool modular = sig == FreeProductSignature::modular();
  std::string out;
  for (FpLetter const& x : w) {
    if (modular) {
      out += x.factor == 0 ? "a" : (x.exp == 1 ? "b" : "b2");
    } else {
      if (!out.empty()) out += ' ';
      out += "g" + std::to_string(x.factor + 1) + "^" + std::to_string(x.exp);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Words in the subgroup generators h_1..h_r: entry +i is h_i, -i is h_i^-1.

using GenWord = std::vector<int>;

inline GenWord gen_reduce(GenWord const& raw) {
  GenWord st;
  st.reserve(raw.size());
  for (int x : raw) {
    if (!st.empty() && st.back() == -x) {
      st.pop_back();
    } else {
      st.push_back(x);
    }
  }
  return st;
}

inline GenWord gen_mul(GenWord const& u, GenWord const& v) {
  GenWord raw = u;
  raw.insert(raw.end(), v.begin(), v.end());
  return gen_reduce(raw);
}

inline GenWord gen_inverse(GenWord const& u) {
  GenWord r(u.rbegin(), u.rend());
  for (int& x : r) x = -x;
  return r;
}

inline std::string to_string(GenWord const& w) {
  if (w.empty()) return "e";
  std::string out;
  for (int x : w) {
    if (!out.empty()) out += ' ';
    out += "h" + std::to_string(x < 0 ? -x : x);
    if (x < 0) out += "^-1";
  }
  return out;
}

// Evaluates a generator word in the ambient group.
inline FpWord evaluate(FreeProductSignature const& sig, std::vector<FpWord> const& gens,
                       GenWord const& w) {
  FpWord raw;
  for (int x : w) {
    size_t i = static_cast<size_t>(x < 0 ? -x : x) - 1;
    if (i >= gens.size()) throw std::invalid_argument("generator index out of range");
    FpWord const& h = x < 0 ? fp_inverse(sig, gens[i]) : gens[i];
    raw.insert(raw.end(), h.begin(), h.end());
  }
  return fp_reduce(sig, raw);
}

// ---------------------------------------------------------------------------

constexpr size_t no_state = static_cast<size_t>(-1);

namespace detail {

using SuccTable = std::vector<std::vector<size_t>>;

inline size_t degree(SuccTable const& succ, size_t x) {
  size_t d = 0;
  for (size_t s : succ[x]) d += s != no_state;
  return d;
}

// Removes hanging free orbits (vertices with trivial stabilizer that meet the
// rest of the graph in at most one state). Returns the surviving states.
inline std::vector<bool> trim(FreeProductSignature const& sig, SuccTable& succ, size_t base,
                              bool protect_base) {
  size_t n = succ.size();
  std::vector<bool> alive(n, true);
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t f = 0; f < sig.size(); ++f) {
      std::vector<bool> seen(n, false);
      for (size_t x = 0; x < n; ++x) {
        if (!alive[x] || seen[x] || succ[x][f] == no_state) continue;
        std::vector<size_t> orbit;
        for (size_t y = x; !seen[y]; y = succ[y][f]) {
          seen[y] = true;
          orbit.push_back(y);
        }
        if (orbit.size() != static_cast<size_t>(sig.orders[f])) continue;
        // An orbit through the basepoint may only go when it hangs off it.
        if (protect_base && std::find(orbit.begin(), orbit.end(), base) != orbit.end()
            && degree(succ, base) < 2) {
          continue;
        }
        size_t attached = 0;
        for (size_t y : orbit) attached += degree(succ, y) >= 2;
        if (attached > 1) continue;
        for (size_t y : orbit) succ[y][f] = no_state;
        changed = true;
      }
    }
    for (size_t x = 0; x < n; ++x) {
      if (alive[x] && degree(succ, x) == 0 && !(protect_base && x == base)) {
        alive[x] = false;
        changed = true;
      }
    }
  }
  return alive;
}

// Based graph without edge labels; used for isomorphism tests.
struct Skeleton {
  SuccTable succ;
  size_t base = 0;
};

// Relabels the alive states in breadth-first order from base.
inline std::vector<size_t> bfs_order(SuccTable const& succ, size_t base, std::vector<bool> const& alive) {
  std::vector<size_t> index(succ.size(), no_state);
  std::deque<size_t> queue{base};
  index[base] = 0;
  size_t next = 1;
  while (!queue.empty()) {
    size_t x = queue.front();
    queue.pop_front();
    for (size_t y : succ[x]) {
      if (y != no_state && alive[y] && index[y] == no_state) {
        index[y] = next++;
        queue.push_back(y);
      }
    }
  }
  return index;
}

inline Skeleton rebase(FreeProductSignature const& sig, SuccTable succ, size_t q) {
  std::vector<bool> alive = trim(sig, succ, q, true);
  std::vector<size_t> index = bfs_order(succ, q, alive);
  size_t m = 0;
  for (size_t i : index) m += i != no_state;
  Skeleton sk;
  sk.succ.assign(m, std::vector<size_t>(sig.size(), no_state));
  for (size_t x = 0; x < succ.size(); ++x) {
    if (index[x] == no_state) continue;
    for (size_t f = 0; f < sig.size(); ++f)
      if (succ[x][f] != no_state) sk.succ[index[x]][f] = index[succ[x][f]];
  }
  return sk;
}

inline bool based_isomorphic(Skeleton const& a, Skeleton const& b) {
  if (a.succ.size() != b.succ.size()) return false;
  size_t n = a.succ.size();
  std::vector<size_t> map(n, no_state), inv(n, no_state);
  std::deque<size_t> queue{a.base};
  map[a.base] = b.base;
  inv[b.base] = a.base;
  while (!queue.empty()) {
    size_t x = queue.front();
    queue.pop_front();
    size_t y = map[x];
    for (size_t f = 0; f < a.succ[x].size(); ++f) {
      size_t sx = a.succ[x][f], sy = b.succ[y][f];
      if ((sx == no_state) != (sy == no_state)) return false;
      if (sx == no_state) continue;
      if (map[sx] == no_state && inv[sy] == no_state) {
        map[sx] = sy;
        inv[sy] = sx;
        queue.push_back(sx);
      } else if (map[sx] != sy) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace detail

class CoreGraph {
 public:
  static CoreGraph build(FreeProductSignature const& sig, std::vector<FpWord> const& generators) {
    sig.validate();
    CoreGraph g;
    g.sig_ = sig;
    for (FpWord const& w : generators) g.gens_.push_back(fp_reduce(sig, w));
    g.fold();
    return g;
  }

  FreeProductSignature const& signature() const { return sig_; }
  std::vector<FpWord> const& generators() const { return gens_; }
  size_t num_states() const { return succ_.size(); }
  size_t basepoint() const { return 0; }

  size_t successor(size_t x, size_t factor) const { return succ_[x][factor]; }
  GenWord const& label(size_t x, size_t factor) const { return label_[x][factor]; }

  detail::Skeleton skeleton() const { return detail::Skeleton{succ_, 0}; }

  // Word along a breadth-first spanning tree from the basepoint to each state.
  std::vector<FpWord> state_words() const {
    std::vector<FpWord> w(num_states());
    std::vector<bool> seen(num_states(), false);
    std::deque<size_t> queue{0};
    seen[0] = true;
    while (!queue.empty()) {
      size_t x = queue.front();
      queue.pop_front();
      for (size_t f = 0; f < sig_.size(); ++f) {
        size_t y = succ_[x][f];
        if (y == no_state || seen[y]) continue;
        seen[y] = true;
        w[y] = fp_mul(sig_, w[x], FpWord{{static_cast<int>(f), 1}});
        queue.push_back(y);
      }
    }
    return w;
  }

  // Cycles of the given factor.
  std::vector<std::vector<size_t>> orbits(size_t factor) const {
    std::vector<std::vector<size_t>> out;
    std::vector<bool> seen(num_states(), false);
    for (size_t x = 0; x < num_states(); ++x) {
      if (seen[x] || succ_[x][factor] == no_state) continue;
      std::vector<size_t> orbit;
      for (size_t y = x; !seen[y]; y = succ_[y][factor]) {
        seen[y] = true;
        orbit.push_back(y);
      }
      out.push_back(std::move(orbit));
    }
    return out;
  }

 private:
  struct Edge {
    size_t from;
    size_t factor;
    size_t to;
    GenWord eta;  // rep(from) g_factor == eta rep(to)
  };

  // Union-find over states with rep(x) == theta[x] rep(parent[x]).
  struct Classes {
    std::vector<size_t> parent;
    std::vector<GenWord> theta;
    std::vector<size_t> size;

    size_t add() {
      parent.push_back(parent.size());
      theta.emplace_back();
      size.push_back(1);
      return parent.size() - 1;
    }

    std::pair<size_t, GenWord> find(size_t x) {
      std::vector<size_t> path;
      while (parent[x] != x) {
        path.push_back(x);
        x = parent[x];
      }
      size_t root = x;
      GenWord acc;
      for (auto it = path.rbegin(); it != path.rend(); ++it) {
        acc = gen_mul(theta[*it], acc);
        theta[*it] = acc;
        parent[*it] = root;
      }
      return {root, path.empty() ? GenWord{} : theta[path.front()]};
    }

    // Records rep(x) == w rep(y); returns whether two classes merged.
    bool unite(size_t x, size_t y, GenWord const& w) {
      auto [rx, tx] = find(x);
      auto [ry, ty] = find(y);
      if (rx == ry) return false;
      // rep(rx) = tx^-1 w ty rep(ry)
      GenWord link = gen_mul(gen_mul(gen_inverse(tx), w), ty);
      if (size[rx] > size[ry]) {
        parent[ry] = rx;
        theta[ry] = gen_inverse(link);
        size[rx] += size[ry];
      } else {
        parent[rx] = ry;
        theta[rx] = link;
        size[ry] += size[rx];
      }
      return true;
    }
  };

  void fold() {
    Classes cls;
    std::vector<Edge> edges;
    std::map<std::pair<size_t, size_t>, size_t> out;
    size_t base = cls.add();
    for (size_t r = 0; r < gens_.size(); ++r) {
      size_t cur = base;
      for (FpLetter const& l : gens_[r]) {
        size_t f = static_cast<size_t>(l.factor);
        for (int rep = 0; rep < l.exp; ++rep) {
          auto it = out.find({cur, f});
          if (it == out.end()) {
            size_t prev = cur;
            for (int i = 1; i < sig_.orders[f]; ++i) {
              size_t y = cls.add();
              out[{prev, f}] = edges.size();
              edges.push_back({prev, f, y, {}});
              prev = y;
            }
            out[{prev, f}] = edges.size();
            edges.push_back({prev, f, cur, {}});
            it = out.find({cur, f});
          }
          cur = edges[it->second].to;
        }
      }
      // Tracing leaves all labels empty, so rep(cur) == h_r.
      cls.unite(cur, base, GenWord{static_cast<int>(r + 1)});
    }

    auto normalize = [&]() {
      for (Edge& e : edges) {
        auto [rf, tf] = cls.find(e.from);
        auto [rt, tt] = cls.find(e.to);
        e.eta = gen_mul(gen_mul(gen_inverse(tf), e.eta), tt);
        e.from = rf;
        e.to = rt;
      }
    };

    bool changed = true;
    while (changed) {
      changed = false;
      normalize();
      std::map<std::pair<size_t, size_t>, size_t> seen;
      std::vector<Edge> kept;
      for (Edge& e : edges) {
        auto it = seen.find({e.from, e.factor});
        if (it == seen.end()) {
          seen[{e.from, e.factor}] = kept.size();
          kept.push_back(std::move(e));
        } else {
          Edge const& k = kept[it->second];
          changed |= cls.unite(k.to, e.to, gen_mul(gen_inverse(k.eta), e.eta));
        }
      }
      edges = std::move(kept);
      if (changed) continue;
      seen.clear();
      kept.clear();
      for (Edge& e : edges) {
        auto it = seen.find({e.to, e.factor});
        if (it == seen.end()) {
          seen[{e.to, e.factor}] = kept.size();
          kept.push_back(std::move(e));
        } else {
          Edge const& k = kept[it->second];
          changed |= cls.unite(k.from, e.from, gen_mul(k.eta, gen_inverse(e.eta)));
        }
      }
      edges = std::move(kept);
    }
    normalize();

    // Gauge so that the basepoint class has representative e.
    auto [r0, t0] = cls.find(base);
    for (Edge& e : edges) {
      if (e.from == r0) e.eta = gen_mul(t0, e.eta);
      if (e.to == r0) e.eta = gen_mul(e.eta, gen_inverse(t0));
    }

    size_t n = cls.parent.size();
    detail::SuccTable succ(n, std::vector<size_t>(sig_.size(), no_state));
    std::vector<std::vector<GenWord>> label(n, std::vector<GenWord>(sig_.size()));
    for (Edge& e : edges) {
      succ[e.from][e.factor] = e.to;
      label[e.from][e.factor] = std::move(e.eta);
    }
    std::vector<bool> alive(n, false);
    for (size_t x = 0; x < n; ++x) alive[x] = cls.parent[x] == x;
    detail::SuccTable work = succ;
    std::vector<bool> kept = detail::trim(sig_, work, r0, true);
    for (size_t x = 0; x < n; ++x) alive[x] = alive[x] && kept[x];
    std::vector<size_t> index = detail::bfs_order(work, r0, alive);
    size_t m = 0;
    for (size_t i : index) m += i != no_state;
    succ_.assign(m, std::vector<size_t>(sig_.size(), no_state));
    label_.assign(m, std::vector<GenWord>(sig_.size()));
    for (size_t x = 0; x < n; ++x) {
      if (index[x] == no_state) continue;
      for (size_t f = 0; f < sig_.size(); ++f) {
        if (work[x][f] == no_state) continue;
        succ_[index[x]][f] = index[work[x][f]];
        label_[index[x]][f] = label[x][f];
      }
    }
  }

  FreeProductSignature sig_;
  std::vector<FpWord> gens_;
  detail::SuccTable succ_;
  std::vector<std::vector<GenWord>> label_;
};

struct KuroshInvariants {
  long free_rank = 0;
  std::map<int, long> factor_counts;  // order of a finite cyclic free factor -> count

  bool operator==(KuroshInvariants const& o) const {
    return free_rank == o.free_rank && factor_counts == o.factor_counts;
  }
  long count(int order) const {
    auto it = factor_counts.find(order);
    return it == factor_counts.end() ? 0 : it->second;
  }
};

inline KuroshInvariants kurosh_invariants(CoreGraph const& g) {
  KuroshInvariants inv;
  long vertices = static_cast<long>(g.num_states()), edges = 0;
  for (size_t f = 0; f < g.signature().size(); ++f) {
    int k = g.signature().orders[f];
    for (auto const& orbit : g.orbits(f)) {
      ++vertices;
      edges += static_cast<long>(orbit.size());
      int d = static_cast<int>(orbit.size());
      if (d < k) ++inv.factor_counts[k / d];
    }
  }
  inv.free_rank = edges - vertices + 1;
  return inv;
}

// Witness in the generators for w, or nullopt when w is not in the subgroup.
inline std::optional<GenWord> member(CoreGraph const& g, FpWord const& w) {
  FreeProductSignature const& sig = g.signature();
  FpWord r = fp_reduce(sig, w);
  size_t cur = g.basepoint();
  GenWord acc;
  for (FpLetter const& l : r) {
    size_t f = static_cast<size_t>(l.factor);
    for (int i = 0; i < l.exp; ++i) {
      size_t nx = g.successor(cur, f);
      if (nx == no_state) return std::nullopt;
      acc = gen_mul(acc, g.label(cur, f));
      cur = nx;
    }
  }
  if (cur != g.basepoint()) return std::nullopt;
  if (evaluate(sig, g.generators(), acc) != r) {
    throw std::logic_error("member: witness failed verification");
  }
  return acc;
}

inline void require_same_signature(CoreGraph const& a, CoreGraph const& b) {
  if (a.signature() != b.signature()) {
    throw std::invalid_argument("subgroups live in free products with different signatures");
  }
}

inline bool equal(CoreGraph const& a, CoreGraph const& b) {
  require_same_signature(a, b);
  for (FpWord const& w : b.generators())
    if (!member(a, w)) return false;
  for (FpWord const& w : a.generators())
    if (!member(b, w)) return false;
  return true;
}

inline bool based_isomorphic(CoreGraph const& a, CoreGraph const& b) {
  require_same_signature(a, b);
  return detail::based_isomorphic(a.skeleton(), b.skeleton());
}

inline std::optional<size_t> finite_index(CoreGraph const& g) {
  for (size_t x = 0; x < g.num_states(); ++x)
    for (size_t f = 0; f < g.signature().size(); ++f)
      if (g.successor(x, f) == no_state) return std::nullopt;
  return g.num_states();
}

// 1 - free_rank - sum over finite factors of (1 - 1/order).
inline Rational euler_characteristic_check(CoreGraph const& g) {
  KuroshInvariants inv = kurosh_invariants(g);
  Rational chi = 1 - inv.free_rank;
  for (auto const& [order, count] : inv.factor_counts) chi -= count * (1 - Rational(1, order));
  return chi;
}

inline Rational euler_characteristic(FreeProductSignature const& sig) {
  Rational chi = 1;
  for (int k : sig.orders) chi -= 1 - Rational(1, k);
  return chi;
}

namespace detail {

// States of the unbased core: those surviving trimming without protecting the
// basepoint.
inline std::vector<size_t> core_states(CoreGraph const& g) {
  SuccTable succ = g.skeleton().succ;
  std::vector<bool> alive = trim(g.signature(), succ, 0, false);
  std::vector<size_t> out;
  for (size_t x = 0; x < alive.size(); ++x)
    if (alive[x]) out.push_back(x);
  return out;
}

}  // namespace detail

// All g with g H2 g^-1 = H1, one for each coset of H1 in that set.
inline std::vector<FpWord> conjugators(CoreGraph const& h1, CoreGraph const& h2) {
  require_same_signature(h1, h2);
  FreeProductSignature const& sig = h1.signature();
  std::vector<size_t> core1 = detail::core_states(h1), core2 = detail::core_states(h2);
  if (core1.empty() || core2.empty()) {
    if (core1.empty() && core2.empty()) return {FpWord{}};
    return {};
  }
  std::vector<FpWord> words1 = h1.state_words(), words2 = h2.state_words();
  // H1 = u1 H1_p u1^-1 with p a core state.
  size_t p = core1.front();
  if (std::find(core1.begin(), core1.end(), h1.basepoint()) != core1.end()) p = h1.basepoint();
  FpWord const& u1 = words1[p];
  detail::Skeleton target = detail::rebase(sig, h1.skeleton().succ, p);
  std::vector<FpWord> out;
  for (size_t q : core2) {
    detail::Skeleton cand = detail::rebase(sig, h2.skeleton().succ, q);
    if (!detail::based_isomorphic(target, cand)) continue;
    // H2_q = v^-1 H2 v, so H1 = u1 v^-1 H2 v u1^-1.
    FpWord g = fp_mul(sig, u1, fp_inverse(sig, words2[q]));
    std::vector<FpWord> conj;
    for (FpWord const& w : h2.generators()) conj.push_back(fp_conjugate(sig, g, w));
    if (!equal(h1, CoreGraph::build(sig, conj))) {
      throw std::logic_error("conjugators: relocation failed verification");
    }
    out.push_back(std::move(g));
  }
  return out;
}

// Some g with g H2 g^-1 = H1, or nullopt.
inline std::optional<FpWord> conjugate_subgroups(CoreGraph const& h1, CoreGraph const& h2) {
  std::vector<FpWord> all = conjugators(h1, h2);
  if (all.empty()) return std::nullopt;
  return all.front();
}

}  // namespace t2b
