#pragma once

// Arithmetic in SL(2,Z) and PSL(2,Z) = Z2 * Z3.
//
// Generators: s = [[0,1],[-1,0]], t = [[0,1],[-1,1]], with s^4 = E and
// s^2 = t^3 = -E. The projection p sends s to a (order 2) and t to b (order 3).

#include "t2bundle/integer.hpp"
#include "t2bundle/word_syntax.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace t2b {

// Returned by order() for elements of infinite order.
constexpr int infinite_order = 0;

class Sl2Matrix {
 public:
  Sl2Matrix() : a_(1), b_(0), c_(0), d_(1) {}

  Sl2Matrix(Int a, Int b, Int c, Int d)
      : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {
    if (a_ * d_ - b_ * c_ != 1) {
      throw std::invalid_argument("matrix " + str() + " does not have determinant 1");
    }
  }

  Int const& a() const { return a_; }
  Int const& b() const { return b_; }
  Int const& c() const { return c_; }
  Int const& d() const { return d_; }

  Int trace() const { return a_ + d_; }

  Sl2Matrix inverse() const { return unchecked(d_, -b_, -c_, a_); }

  Sl2Matrix operator-() const { return unchecked(-a_, -b_, -c_, -d_); }

  Sl2Matrix operator*(Sl2Matrix const& y) const {
    return unchecked(a_ * y.a_ + b_ * y.c_, a_ * y.b_ + b_ * y.d_,
                     c_ * y.a_ + d_ * y.c_, c_ * y.b_ + d_ * y.d_);
  }

  bool operator==(Sl2Matrix const& y) const {
    return a_ == y.a_ && b_ == y.b_ && c_ == y.c_ && d_ == y.d_;
  }
  bool operator!=(Sl2Matrix const& y) const { return !(*this == y); }

  bool operator<(Sl2Matrix const& y) const {
    if (a_ != y.a_) return a_ < y.a_;
    if (b_ != y.b_) return b_ < y.b_;
    if (c_ != y.c_) return c_ < y.c_;
    return d_ < y.d_;
  }

  bool is_identity() const { return a_ == 1 && b_ == 0 && c_ == 0 && d_ == 1; }
  bool is_minus_identity() const { return a_ == -1 && b_ == 0 && c_ == 0 && d_ == -1; }
  bool is_central() const { return is_identity() || is_minus_identity(); }

  // Matrix times column vector (x, y).
  std::pair<Int, Int> apply(Int const& x, Int const& y) const {
    return {a_ * x + b_ * y, c_ * x + d_ * y};
  }

  std::string str() const {
    return "[[" + a_.str() + "," + b_.str() + "],[" + c_.str() + "," + d_.str() + "]]";
  }

 private:
  static Sl2Matrix unchecked(Int a, Int b, Int c, Int d) {
    Sl2Matrix m;
    m.a_ = std::move(a);
    m.b_ = std::move(b);
    m.c_ = std::move(c);
    m.d_ = std::move(d);
    return m;
  }

  Int a_, b_, c_, d_;
};

inline Sl2Matrix mul(Sl2Matrix const& x, Sl2Matrix const& y) { return x * y; }

inline Sl2Matrix identity_matrix() { return Sl2Matrix(); }
inline Sl2Matrix minus_identity() { return Sl2Matrix(-1, 0, 0, -1); }
inline Sl2Matrix mat_s() { return Sl2Matrix(0, 1, -1, 0); }
inline Sl2Matrix mat_t() { return Sl2Matrix(0, 1, -1, 1); }
// The shear [[1,1],[0,1]].
inline Sl2Matrix mat_shear() { return Sl2Matrix(1, 1, 0, 1); }

inline Sl2Matrix power(Sl2Matrix const& x, long e) {
  Sl2Matrix base = e < 0 ? x.inverse() : x;
  unsigned long n = e < 0 ? static_cast<unsigned long>(-(e + 1)) + 1 : static_cast<unsigned long>(e);
  Sl2Matrix r;
  while (n > 0) {
    if (n & 1) {
      r = r * base;
    }
    base = base * base;
    n >>= 1;
  }
  return r;
}

inline Sl2Matrix conjugate_by(Sl2Matrix const& q, Sl2Matrix const& x) {
  return q * x * q.inverse();
}

// Multiplicative order from the trace; infinite_order when infinite.
inline int order(Sl2Matrix const& x) {
  Int tr = x.trace();
  if (tr == 0) return 4;
  if (tr == 1) return 6;
  if (tr == -1) return 3;
  if (tr == 2) return x.is_identity() ? 1 : infinite_order;
  if (tr == -2) return x.is_minus_identity() ? 2 : infinite_order;
  return infinite_order;
}

// ---------------------------------------------------------------------------
// Words in s, t.

enum class SlLetter { s, s_inv, t, t_inv };
using SlWord = std::vector<SlLetter>;

inline Sl2Matrix letter_matrix(SlLetter l) {
  switch (l) {
    case SlLetter::s: return mat_s();
    case SlLetter::s_inv: return mat_s().inverse();
    case SlLetter::t: return mat_t();
    case SlLetter::t_inv: return mat_t().inverse();
  }
  return Sl2Matrix();
}

inline Sl2Matrix word_to_matrix(SlWord const& w) {
  Sl2Matrix r;
  for (SlLetter l : w) {
    r = r * letter_matrix(l);
  }
  return r;
}

inline std::string to_string(SlWord const& w) {
  if (w.empty()) return "e";
  std::string out;
  for (SlLetter l : w) {
    if (!out.empty()) out += ' ';
    switch (l) {
      case SlLetter::s: out += "s"; break;
      case SlLetter::s_inv: out += "s^-1"; break;
      case SlLetter::t: out += "t"; break;
      case SlLetter::t_inv: out += "t^-1"; break;
    }
  }
  return out;
}

namespace detail {

// Appends the word of C^k, using C = t^-1 s and C^-1 = s^-1 t.
inline void append_shear_power(SlWord& w, Int k) {
  while (k > 0) {
    w.push_back(SlLetter::t_inv);
    w.push_back(SlLetter::s);
    --k;
  }
  while (k < 0) {
    w.push_back(SlLetter::s_inv);
    w.push_back(SlLetter::t);
    ++k;
  }
}

}  // namespace detail

// Euclidean reduction of the first column: left multiplication by s and by
// powers of the shear until the lower-left entry vanishes.
inline SlWord matrix_to_word(Sl2Matrix const& x) {
  Int a = x.a(), b = x.b(), c = x.c(), d = x.d();
  // Inverses of the applied left factors, in application order.
  struct Step {
    bool is_s;
    Int q;  // shear exponent of the inverse factor
  };
  std::vector<Step> steps;
  while (c != 0) {
    if (abs(a) < abs(c)) {
      // s * [[a,b],[c,d]] = [[c,d],[-a,-b]]
      Int na = c, nb = d, nc = -a, nd = -b;
      a = std::move(na);
      b = std::move(nb);
      c = std::move(nc);
      d = std::move(nd);
      steps.push_back({true, 0});
    } else {
      Int q = a / c;
      a -= q * c;
      b -= q * d;
      steps.push_back({false, q});
    }
  }
  SlWord w;
  for (auto const& st : steps) {
    if (st.is_s) {
      w.push_back(SlLetter::s_inv);
    } else {
      detail::append_shear_power(w, st.q);
    }
  }
  if (a == 1) {
    detail::append_shear_power(w, b);
  } else {
    w.push_back(SlLetter::s);
    w.push_back(SlLetter::s);
    detail::append_shear_power(w, -b);
  }
  return w;
}

// ---------------------------------------------------------------------------
// PSL(2,Z) words in normal form over a (order 2), b, b2 (order 3).

enum class PslLetter { a, b, b2 };

inline bool same_factor(PslLetter x, PslLetter y) {
  return (x == PslLetter::a) == (y == PslLetter::a);
}

inline PslLetter letter_inverse(PslLetter x) {
  switch (x) {
    case PslLetter::a: return PslLetter::a;
    case PslLetter::b: return PslLetter::b2;
    case PslLetter::b2: return PslLetter::b;
  }
  return x;
}

struct PslWord {
  std::vector<PslLetter> letters;

  bool empty() const { return letters.empty(); }
  size_t size() const { return letters.size(); }
  bool operator==(PslWord const& o) const { return letters == o.letters; }
  bool operator!=(PslWord const& o) const { return letters != o.letters; }
  bool operator<(PslWord const& o) const { return letters < o.letters; }
};

// Reduction by a^2 = e and b^3 = e; the result alternates factors.
inline PslWord psl_reduce(std::vector<PslLetter> const& raw) {
  std::vector<PslLetter> st;
  st.reserve(raw.size());
  for (PslLetter x : raw) {
    if (st.empty() || !same_factor(st.back(), x)) {
      st.push_back(x);
      continue;
    }
    PslLetter y = st.back();
    st.pop_back();
    if (x == PslLetter::a) {
      continue;
    }
    int e = (y == PslLetter::b ? 1 : 2) + (x == PslLetter::b ? 1 : 2);
    e %= 3;
    if (e != 0) {
      st.push_back(e == 1 ? PslLetter::b : PslLetter::b2);
    }
  }
  return PslWord{std::move(st)};
}

inline PslWord psl_mul(PslWord const& u, PslWord const& v) {
  std::vector<PslLetter> raw = u.letters;
  raw.insert(raw.end(), v.letters.begin(), v.letters.end());
  return psl_reduce(raw);
}

inline PslWord psl_mul(PslWord const& u, PslWord const& v, PslWord const& w) {
  return psl_mul(psl_mul(u, v), w);
}

inline PslWord psl_inverse(PslWord const& u) {
  PslWord r;
  r.letters.reserve(u.size());
  for (auto it = u.letters.rbegin(); it != u.letters.rend(); ++it) {
    r.letters.push_back(letter_inverse(*it));
  }
  return r;
}

inline PslWord psl_power(PslWord const& u, long e) {
  PslWord base = e < 0 ? psl_inverse(u) : u;
  long n = e < 0 ? -e : e;
  PslWord r;
  for (long i = 0; i < n; ++i) {
    r = psl_mul(r, base);
  }
  return r;
}

inline std::string to_string(PslWord const& u) {
  if (u.empty()) return "e";
  std::string out;
  for (PslLetter x : u.letters) {
    switch (x) {
      case PslLetter::a: out += "a"; break;
      case PslLetter::b: out += "b"; break;
      case PslLetter::b2: out += "b2"; break;
    }
  }
  return out;
}

inline PslWord parse_psl_word(std::string const& text) {
  std::vector<PslLetter> raw;
  for (RawLetter const& l : tokenize_word(text)) {
    if (l.factor == 1) {
      if (((l.exp % 2) + 2) % 2 == 1) raw.push_back(PslLetter::a);
    } else if (l.factor == 2) {
      long e = ((l.exp % 3) + 3) % 3;
      if (e == 1) raw.push_back(PslLetter::b);
      if (e == 2) raw.push_back(PslLetter::b2);
    } else {
      throw std::invalid_argument("PSL(2,Z) words use factors g1 and g2 only: " + text);
    }
  }
  return psl_reduce(raw);
}

inline PslWord project(Sl2Matrix const& x) {
  std::vector<PslLetter> raw;
  for (SlLetter l : matrix_to_word(x)) {
    switch (l) {
      case SlLetter::s:
      case SlLetter::s_inv: raw.push_back(PslLetter::a); break;
      case SlLetter::t: raw.push_back(PslLetter::b); break;
      case SlLetter::t_inv: raw.push_back(PslLetter::b2); break;
    }
  }
  return psl_reduce(raw);
}

// The lift a -> s, b -> t, b2 -> t^2.
inline Sl2Matrix lift(PslWord const& u) {
  Sl2Matrix r;
  Sl2Matrix const s = mat_s(), t = mat_t(), t2 = mat_t() * mat_t();
  for (PslLetter x : u.letters) {
    switch (x) {
      case PslLetter::a: r = r * s; break;
      case PslLetter::b: r = r * t; break;
      case PslLetter::b2: r = r * t2; break;
    }
  }
  return r;
}

struct CyclicReduction {
  PslWord core;       // cyclically reduced
  PslWord conjugator;  // conjugator * u * conjugator^-1 == core
};

inline CyclicReduction cyclic_reduce(PslWord const& u) {
  CyclicReduction r{u, PslWord{}};
  while (r.core.size() >= 2 && same_factor(r.core.letters.front(), r.core.letters.back())) {
    PslWord x{{letter_inverse(r.core.letters.front())}};
    r.core = psl_mul(x, r.core, psl_inverse(x));
    r.conjugator = psl_mul(x, r.conjugator);
  }
  return r;
}

// Order in PSL(2,Z): 1, 2, 3 or infinite_order.
inline int psl_order(PslWord const& u) {
  PslWord core = cyclic_reduce(u).core;
  if (core.empty()) return 1;
  if (core.size() == 1) return core.letters[0] == PslLetter::a ? 2 : 3;
  return infinite_order;
}

// Returns g with g u g^-1 = v, if any.
inline std::optional<PslWord> psl_conjugate(PslWord const& u, PslWord const& v) {
  CyclicReduction cu = cyclic_reduce(u), cv = cyclic_reduce(v);
  size_t n = cu.core.size();
  if (n != cv.core.size()) {
    return std::nullopt;
  }
  std::optional<PslWord> h;
  if (n <= 1) {
    if (cu.core == cv.core) h = PslWord{};
  } else {
    // cv = (x1..xk)^-1 cu (x1..xk) when cv is the rotation of cu by k letters.
    for (size_t k = 0; k < n && !h; ++k) {
      bool match = true;
      for (size_t i = 0; i < n && match; ++i) {
        match = cv.core.letters[i] == cu.core.letters[(i + k) % n];
      }
      if (match) {
        PslWord prefix{std::vector<PslLetter>(cu.core.letters.begin(),
                                              cu.core.letters.begin() + static_cast<long>(k))};
        h = psl_inverse(prefix);
      }
    }
  }
  if (!h) {
    return std::nullopt;
  }
  PslWord g = psl_mul(psl_inverse(cv.conjugator), *h, cu.conjugator);
  if (psl_mul(g, u, psl_inverse(g)) != v) {
    throw std::logic_error("psl_conjugate: conjugator failed verification");
  }
  return g;
}

struct RootDecomposition {
  PslWord root;  // generator of the centralizer of u
  long exponent;  // u == root^exponent, exponent >= 1
};

inline RootDecomposition psl_root(PslWord const& u) {
  if (u.empty()) {
    throw std::invalid_argument("the identity has no centralizer root");
  }
  CyclicReduction cr = cyclic_reduce(u);
  PslWord const& c = cr.core;
  PslWord r;
  long e = 1;
  if (c.size() == 1) {
    if (c.letters[0] == PslLetter::a) {
      r = PslWord{{PslLetter::a}};
    } else {
      r = PslWord{{PslLetter::b}};
      e = c.letters[0] == PslLetter::b ? 1 : 2;
    }
  } else {
    size_t n = c.size();
    for (size_t p = 1; p <= n; ++p) {
      if (n % p != 0) continue;
      bool periodic = true;
      for (size_t i = p; i < n && periodic; ++i) {
        periodic = c.letters[i] == c.letters[i - p];
      }
      if (periodic) {
        r = PslWord{std::vector<PslLetter>(c.letters.begin(), c.letters.begin() + static_cast<long>(p))};
        e = static_cast<long>(n / p);
        break;
      }
    }
  }
  PslWord gi = psl_inverse(cr.conjugator);
  return {psl_mul(gi, r, cr.conjugator), e};
}

inline PslWord centralizer_root(PslWord const& u) { return psl_root(u).root; }

// Exponent j with z^j == w, where z is a centralizer root (as returned by
// psl_root); for finite-order z the result lies in [0, order(z)).
inline std::optional<long> psl_log(PslWord const& z, PslWord const& w) {
  if (w.empty()) return 0;
  int oz = psl_order(z);
  if (oz != infinite_order) {
    PslWord p = z;
    for (long j = 1; j < oz; ++j, p = psl_mul(p, z)) {
      if (p == w) return j;
    }
    return std::nullopt;
  }
  CyclicReduction cr = cyclic_reduce(z);
  PslWord wc = psl_mul(cr.conjugator, w, psl_inverse(cr.conjugator));
  size_t rl = cr.core.size();
  if (wc.size() % rl != 0) return std::nullopt;
  long j = static_cast<long>(wc.size() / rl);
  if (psl_power(cr.core, j) == wc) return j;
  if (psl_power(cr.core, -j) == wc) return -j;
  return std::nullopt;
}

// Returns Q with Q x Q^-1 = y, if any.
inline std::optional<Sl2Matrix> sl_conjugate(Sl2Matrix const& x, Sl2Matrix const& y) {
  if (x.trace() != y.trace()) return std::nullopt;
  if (x == y) return Sl2Matrix();
  if (x.is_central() || y.is_central()) return std::nullopt;
  PslWord u = project(x), v = project(y);
  std::optional<PslWord> g = psl_conjugate(u, v);
  if (!g) return std::nullopt;
  Sl2Matrix q = lift(*g);
  if (conjugate_by(q, x) == y) return q;
  // q x q^-1 == -y. Every other conjugator is q times a lift of a power of the
  // centralizer root z of p(x); z conjugates x to +-x, and the sign is
  // multiplicative in the exponent.
  Sl2Matrix q1 = q * lift(centralizer_root(u));
  if (conjugate_by(q1, x) == y) return q1;
  return std::nullopt;
}

}  // namespace t2b
