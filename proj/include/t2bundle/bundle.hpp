#pragma once

// Orientable T^2-bundles M(A_1, B_1, ..., A_g, B_g; m, n) over the genus-g
// surface: Euler-class modules, isomorphism decisions with certificates,
// fiber sums, Betti numbers and symplectic predicates.

#include "t2bundle/intlattice.hpp"
#include "t2bundle/surface_rep.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace t2b {

struct TorusBundle {
  SlRep rep;
  Int m = 0, n = 0;

  size_t genus() const { return rep.genus(); }
  IntVector euler() const { return {m, n}; }
  bool operator==(TorusBundle const& o) const { return rep == o.rep && m == o.m && n == o.n; }
};

inline void require_valid(TorusBundle const& b) {
  if (!validate(b.rep)) throw std::invalid_argument("monodromy violates the surface relator");
}

inline IntVector act(Sl2Matrix const& q, IntVector const& v) {
  auto [x, y] = q.apply(v[0], v[1]);
  return {x, y};
}

inline IntVector sub(IntVector const& u, IntVector const& v) { return {u[0] - v[0], u[1] - v[1]}; }

// Columns of X - E.
inline std::vector<IntVector> difference_columns(Sl2Matrix const& x) {
  return {{x.a() - 1, x.c()}, {x.b(), x.d() - 1}};
}

// Columns of all A_i - E and B_i - E (the matrix X).
inline std::vector<IntVector> monodromy_columns(SlRep const& r) {
  std::vector<IntVector> cols;
  for (Sl2Matrix const& x : r.images())
    for (IntVector& c : difference_columns(x)) cols.push_back(std::move(c));
  return cols;
}

inline QuotientModule euler_module(SlRep const& r) { return quotient(monodromy_columns(r), 2); }

// The class of (m, n) in Z^2 / <columns> is torsion.
inline bool euler_torsion(TorusBundle const& b) {
  std::vector<IntVector> cols = monodromy_columns(b.rep);
  if (cols.empty()) return b.m == 0 && b.n == 0;
  IntMatrix x = IntMatrix::from_columns(2, cols);
  SmithForm f = smith_normal_form(x);
  IntVector y = f.U * b.euler();
  for (size_t i = 0; i < 2; ++i)
    if (f.D(i, i) == 0 && y[i] != 0) return false;
  return true;
}

inline size_t betti1_flat(SlRep const& r) {
  std::vector<IntVector> cols = monodromy_columns(r);
  size_t rk = cols.empty() ? 0 : rank(IntMatrix::from_columns(2, cols));
  return 2 * r.genus() + 2 - rk;
}

inline bool compatible_symplectic(TorusBundle const& b) { return euler_torsion(b); }

// Isomorphic to M(E, E, ..., E, E; m, 0) with m != 0, or to
// M(E, C^k, E, E, ..., E, E; m, n) with n != 0. Decided through fixed
// vectors: the second family is the case where every image is unipotent with
// a common fixed primitive vector v and (m, n) is not a multiple of v.
inline bool in_excluded_family(TorusBundle const& b) {
  std::vector<Sl2Matrix> imgs = b.rep.images();
  bool trivial = std::all_of(imgs.begin(), imgs.end(), [](Sl2Matrix const& x) { return x.is_identity(); });
  if (trivial) return b.m != 0 || b.n != 0;
  std::optional<IntVector> fixed;
  for (Sl2Matrix const& x : imgs) {
    if (x.is_identity()) continue;
    if (x.trace() != 2) return false;
    IntVector v = x.b() != 0 || x.a() != 1 ? IntVector{x.b(), 1 - x.a()} : IntVector{1 - x.d(), x.c()};
    Int g = gcd(v[0], v[1]);
    v = {v[0] / g, v[1] / g};
    if (!fixed) fixed = v;
    IntVector w = act(x, *fixed);
    if (w != *fixed) return false;
  }
  IntVector const& v = *fixed;
  return v[0] * b.n - v[1] * b.m != 0;
}

inline bool total_space_symplectic(TorusBundle const& b) {
  if (b.genus() == 1) return true;
  return !in_excluded_family(b);
}

// ---------------------------------------------------------------------------

inline TorusBundle fiber_sum(TorusBundle const& b1, TorusBundle const& b2) {
  TorusBundle s;
  s.rep.pairs = b1.rep.pairs;
  s.rep.pairs.insert(s.rep.pairs.end(), b2.rep.pairs.begin(), b2.rep.pairs.end());
  s.m = b1.m + b2.m;
  s.n = b1.n + b2.n;
  return s;
}

inline std::vector<TorusBundle> decompose(TorusBundle const& b) {
  require_valid(b);
  if (b.genus() == 0) throw std::invalid_argument("decompose: genus-0 bundle has no pieces");
  std::vector<TorusBundle> out;
  for (size_t i = 0; i < b.genus(); ++i) {
    auto const& [a, bb] = b.rep.pairs[i];
    if (!a.is_central()) throw std::invalid_argument("decompose: requires A_i = +-E for all i");
    TorusBundle piece;
    piece.rep.pairs.emplace_back(a, bb);
    if (i == 0) {
      piece.m = b.m;
      piece.n = b.n;
    }
    out.push_back(std::move(piece));
  }
  return out;
}

// ---------------------------------------------------------------------------

enum class Answer { yes, no, indeterminate };

inline std::string to_string(Answer a) {
  switch (a) {
    case Answer::yes: return "yes";
    case Answer::no: return "no";
    case Answer::indeterminate: return "indeterminate";
  }
  return "";
}

struct IsoCertificate {
  size_t genus = 0;
  Sl2Matrix q;  // fiber identification applied to the second bundle

  // genus 1: b_i is carried to normal_i by the move P_i = [[p,r],[q,s]]
  Sl2Matrix p1, p2;
  TorusBundle normal1, normal2;
  int sf_case = 0;

  // Euler witnesses: genus 1 uses x[0] and (case 4) x0; genus >= 2 uses
  // x[0..g-1] for the B_i - E columns and x0 for 2e_1, 2e_2.
  std::vector<IntVector> x;
  std::optional<IntVector> x0;

  // genus >= 2: images of the second monodromy conjugated by Q, as words in
  // the first monodromy's generators, and conversely.
  std::vector<GenWord> forward, backward;
  std::string tag;
};

struct IsoVerdict {
  Answer answer = Answer::no;
  int failed_condition = 0;  // 1 monodromy groups, 2 lift orbits, 3 Euler class
  std::string invariant;     // separating invariant for a No
  std::string reason;        // for Indeterminate
  std::optional<IsoCertificate> certificate;

  static IsoVerdict yes(IsoCertificate c) {
    IsoVerdict v;
    v.answer = Answer::yes;
    v.certificate = std::move(c);
    return v;
  }
  static IsoVerdict no(int condition, std::string invariant) {
    IsoVerdict v;
    v.answer = Answer::no;
    v.failed_condition = condition;
    v.invariant = std::move(invariant);
    return v;
  }
  static IsoVerdict indeterminate(std::string reason) {
    IsoVerdict v;
    v.answer = Answer::indeterminate;
    v.reason = std::move(reason);
    return v;
  }
};

namespace detail {

// Q in SL(2,Z) with Q v = u, when gcd(u) == gcd(v).
inline std::optional<Sl2Matrix> carry_vector(IntVector const& v, IntVector const& u) {
  Int dv = gcd(v[0], v[1]), du = gcd(u[0], u[1]);
  if (dv != du) return std::nullopt;
  if (du == 0) return Sl2Matrix();
  // G w = (w / d)-column completed to SL(2,Z), so that G (d, 0) = w.
  auto basis = [](IntVector const& w, Int const& d) {
    Int w1 = w[0] / d, w2 = w[1] / d, x, y;
    ext_gcd(w1, w2, x, y);
    return Sl2Matrix(w1, -y, w2, x);
  };
  Sl2Matrix q = basis(u, du) * basis(v, dv).inverse();
  if (act(q, v) != u) throw std::logic_error("carry_vector: failed verification");
  return q;
}

// Representatives of SL(2, Z/2): words of length <= 2 in s and t.
inline std::vector<Sl2Matrix> mod2_representatives() {
  Sl2Matrix s = mat_s(), t = mat_t();
  return {Sl2Matrix(), t, t * t, s, s * t, s * t * t};
}

inline bool all_zero(std::vector<IntVector> const& cols) {
  for (IntVector const& c : cols)
    if (c[0] != 0 || c[1] != 0) return false;
  return true;
}

struct EulerMatch {
  Sl2Matrix q;
  IntVector coeffs;
};

// Some Q from the list with u - Q v in the lattice spanned by cols.
inline std::optional<EulerMatch> euler_match(std::vector<Sl2Matrix> const& qs, IntVector const& u,
                                             IntVector const& v, std::vector<IntVector> const& cols) {
  for (Sl2Matrix const& q : qs) {
    std::optional<IntVector> c = member_with_witness(sub(u, act(q, v)), cols);
    if (c) return EulerMatch{q, *c};
  }
  return std::nullopt;
}

// When every Q in SL(2,Z) is admissible: the lattice is 0 or contains 2Z^2.
inline std::optional<EulerMatch> euler_match_any(IntVector const& u, IntVector const& v,
                                                 std::vector<IntVector> const& cols) {
  if (all_zero(cols)) {
    std::optional<Sl2Matrix> q = carry_vector(v, u);
    if (!q) return std::nullopt;
    return EulerMatch{*q, IntVector(cols.size(), Int(0))};
  }
  if (!member_with_witness({2, 0}, cols) || !member_with_witness({0, 2}, cols)) {
    throw std::logic_error("euler_match_any: lattice neither 0 nor containing 2Z^2");
  }
  return euler_match(mod2_representatives(), u, v, cols);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// genus 0

inline IsoVerdict iso_genus0(TorusBundle const& b1, TorusBundle const& b2) {
  if (b1.genus() != 0 || b2.genus() != 0) throw std::invalid_argument("iso_genus0: genus must be 0");
  Int d1 = gcd(b1.m, b1.n), d2 = gcd(b2.m, b2.n);
  if (d1 != d2) return IsoVerdict::no(3, "gcd(m,n): " + d1.str() + " vs " + d2.str());
  IsoCertificate c;
  c.genus = 0;
  c.q = *detail::carry_vector(b2.euler(), b1.euler());
  return IsoVerdict::yes(c);
}

// ---------------------------------------------------------------------------
// genus 1

struct NormalizedGenus1 {
  TorusBundle bundle;  // A = +-E
  Sl2Matrix p;         // [[p, r], [q, s]] with (A', B') = (A^p B^q, A^r B^s)
};

inline NormalizedGenus1 normalize_genus1(TorusBundle const& b) {
  if (b.genus() != 1) throw std::invalid_argument("normalize_genus1: genus must be 1");
  require_valid(b);
  Sl2Matrix const& a = b.rep.pairs[0].first;
  Sl2Matrix const& bb = b.rep.pairs[0].second;
  NormalizedGenus1 out{b, Sl2Matrix()};
  long p, q, r, s;
  if (a.is_central()) {
    return out;
  } else if (bb.is_central()) {
    p = 0, r = -1, q = 1, s = 0;
  } else {
    // A and B commute, so p(A), p(B) are powers of one primitive element z.
    PslWord z = centralizer_root(project(a));
    std::optional<long> ea = psl_log(z, project(a)), eb = psl_log(z, project(bb));
    if (!ea || !eb) throw std::logic_error("normalize_genus1: commuting pair not in one cyclic group");
    Int g = gcd(Int(*ea), Int(*eb));
    Int pp = Int(*eb) / g, qq = -Int(*ea) / g, x, y;
    // p s - r q = 1  <=>  pp * s + (a/g) * r = 1
    ext_gcd(pp, -qq, x, y);
    p = static_cast<long>(pp);
    q = static_cast<long>(qq);
    s = static_cast<long>(x);
    r = static_cast<long>(y);
  }
  out.p = Sl2Matrix(p, r, q, s);
  out.bundle.rep.pairs[0] = detail::pair_move(a, bb, p, q, r, s);
  if (!out.bundle.rep.pairs[0].first.is_central()) {
    throw std::logic_error("normalize_genus1: move did not produce A = +-E");
  }
  return out;
}

namespace detail {

struct Genus1Search {
  std::optional<Sl2Matrix> q;
  std::optional<EulerMatch> euler;
  bool conjugate = false;  // some Q satisfied the conjugacy part
};

// Q with Q x Q^-1 in targets and u - Q v in <cols>.
inline Genus1Search genus1_search(Sl2Matrix const& x, std::vector<Sl2Matrix> const& targets,
                                  IntVector const& u, IntVector const& v,
                                  std::vector<IntVector> const& cols) {
  Genus1Search out;
  if (x.is_central()) {
    if (std::find(targets.begin(), targets.end(), x) == targets.end()) return out;
    out.conjugate = true;
    out.euler = euler_match_any(u, v, cols);
    if (out.euler) out.q = out.euler->q;
    return out;
  }
  for (Sl2Matrix const& t : targets) {
    std::optional<Sl2Matrix> q0 = sl_conjugate(x, t);
    if (!q0) continue;
    out.conjugate = true;
    // Every conjugator is +-Z^j Q0 with Z a lift of the centralizer root of p(t);
    // Z^N = +-t^(+-1) acts trivially on the quotient.
    RootDecomposition rd = psl_root(project(t));
    int oz = psl_order(rd.root);
    long n = oz == infinite_order ? rd.exponent : oz;
    Sl2Matrix z = lift(rd.root), zj;
    std::vector<Sl2Matrix> qs;
    for (long j = 0; j < n; ++j, zj = zj * z) {
      for (Sl2Matrix q : {zj * *q0, -(zj * *q0)})
        if (conjugate_by(q, x) == t) qs.push_back(q);
    }
    out.euler = euler_match(qs, u, v, cols);
    if (out.euler) {
      out.q = out.euler->q;
      return out;
    }
  }
  return out;
}

inline std::vector<Sl2Matrix> sign_inverse_targets(Sl2Matrix const& b, bool with_sign) {
  std::vector<Sl2Matrix> t{b, b.inverse()};
  if (with_sign) {
    t.push_back(-b);
    t.push_back(-b.inverse());
  }
  std::vector<Sl2Matrix> out;
  for (Sl2Matrix const& x : t)
    if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
  return out;
}

inline bool order_246(Sl2Matrix const& b) {
  int o = order(b);
  return o == 2 || o == 4 || o == 6;
}

}  // namespace detail

inline IsoVerdict iso_genus1(TorusBundle const& b1, TorusBundle const& b2) {
  if (b1.genus() != 1 || b2.genus() != 1) throw std::invalid_argument("iso_genus1: genus must be 1");
  NormalizedGenus1 n1 = normalize_genus1(b1), n2 = normalize_genus1(b2);
  Sl2Matrix const& bm = n1.bundle.rep.pairs[0].second;
  Sl2Matrix const& cm = n2.bundle.rep.pairs[0].second;
  bool eps = n1.bundle.rep.pairs[0].first.is_identity();
  bool del = n2.bundle.rep.pairs[0].first.is_identity();
  IntVector e1 = n1.bundle.euler(), e2 = n2.bundle.euler();

  int sf_case;
  Sl2Matrix x, ref;
  IntVector u, v;
  bool with_sign;
  if (eps && del) {
    sf_case = 1, x = cm, ref = bm, u = e1, v = e2, with_sign = false;
  } else if (eps && !del) {
    if (!detail::order_246(bm)) {
      return IsoVerdict::no(1, "-E lies in only one monodromy group (ord B = "
                                   + std::to_string(order(bm)) + ")");
    }
    sf_case = 2, x = cm, ref = bm, u = e1, v = e2, with_sign = true;
  } else if (!eps && del) {
    if (!detail::order_246(cm)) {
      return IsoVerdict::no(1, "-E lies in only one monodromy group (ord C = "
                                   + std::to_string(order(cm)) + ")");
    }
    sf_case = 3, x = bm, ref = cm, u = e2, v = e1, with_sign = true;
  } else {
    sf_case = 4, x = cm, ref = bm, u = e1, v = e2, with_sign = true;
  }
  std::vector<IntVector> cols = difference_columns(ref);
  if (sf_case == 4) {
    cols.push_back({2, 0});
    cols.push_back({0, 2});
  }
  detail::Genus1Search found =
      detail::genus1_search(x, detail::sign_inverse_targets(ref, with_sign), u, v, cols);
  if (!found.conjugate) return IsoVerdict::no(1, "monodromies not conjugate up to the allowed signs and inverses");
  if (!found.q) return IsoVerdict::no(3, "Euler classes differ for every admissible Q");

  IsoCertificate c;
  c.genus = 1;
  c.q = *found.q;
  c.p1 = n1.p;
  c.p2 = n2.p;
  c.normal1 = n1.bundle;
  c.normal2 = n2.bundle;
  c.sf_case = sf_case;
  IntVector const& k = found.euler->coeffs;
  c.x.push_back({k[0], k[1]});
  if (sf_case == 4) c.x0 = IntVector{k[2], k[3]};
  return IsoVerdict::yes(c);
}

// ---------------------------------------------------------------------------
// genus >= 2

// Some g with g y_i g^-1 = x_i for all i.
inline std::optional<PslWord> simultaneous_conjugator(std::vector<PslWord> const& ys,
                                                      std::vector<PslWord> const& xs) {
  if (ys.size() != xs.size()) throw std::invalid_argument("simultaneous_conjugator: size mismatch");
  auto works = [&](PslWord const& g) {
    PslWord gi = psl_inverse(g);
    for (size_t i = 0; i < ys.size(); ++i)
      if (psl_mul(g, ys[i], gi) != xs[i]) return false;
    return true;
  };
  size_t i0 = 0;
  while (i0 < xs.size() && xs[i0].empty() && ys[i0].empty()) ++i0;
  if (i0 == xs.size()) return PslWord{};
  std::optional<PslWord> g1 = psl_conjugate(ys[i0], xs[i0]);
  if (!g1) return std::nullopt;
  // The solutions for index i0 are z^j g1 with z the centralizer root of x_i0.
  PslWord z = centralizer_root(xs[i0]);
  int oz = psl_order(z);
  if (oz != infinite_order) {
    PslWord g = *g1;
    for (int j = 0; j < oz; ++j, g = psl_mul(z, g))
      if (works(g)) return g;
    return std::nullopt;
  }
  PslWord g1i = psl_inverse(*g1);
  size_t k = 0;
  PslWord yk;
  for (; k < ys.size(); ++k) {
    yk = psl_mul(*g1, ys[k], g1i);
    if (psl_mul(z, yk) != psl_mul(yk, z)) break;
  }
  if (k == ys.size()) {
    // z^j commutes with every conjugated y, so j = 0 is the only candidate.
    if (works(*g1)) return *g1;
    return std::nullopt;
  }
  // z^j yk z^-j = x_k has at most one solution j, and |z^j yk z^-j| grows
  // linearly in |j| once |j| exceeds the lengths involved.
  CyclicReduction cr = cyclic_reduce(z);
  PslWord ci = psl_inverse(cr.conjugator);
  size_t lw = psl_mul(cr.conjugator, yk, ci).size();
  size_t lv = psl_mul(cr.conjugator, xs[k], ci).size();
  long bound = static_cast<long>(lv + 3 * lw + 4);
  PslWord zi = psl_inverse(z), up = *g1, down = *g1;
  for (long j = 0; j <= bound; ++j) {
    if (works(up)) return up;
    if (j > 0 && works(down)) return down;
    up = psl_mul(z, up);
    down = psl_mul(zi, down);
  }
  return std::nullopt;
}

namespace detail {

inline std::vector<Sl2Matrix> conjugated_images(Sl2Matrix const& q, SlRep const& r) {
  std::vector<Sl2Matrix> out;
  for (Sl2Matrix const& x : r.images()) out.push_back(conjugate_by(q, x));
  return out;
}

inline SlRep conjugate_rep(Sl2Matrix const& q, SlRep const& r) {
  SlRep out;
  for (auto const& [a, b] : r.pairs) out.pairs.emplace_back(conjugate_by(q, a), conjugate_by(q, b));
  return out;
}

// Words over gens_of evaluating exactly to each element of targets, if the
// generated subgroups satisfy targets within it.
inline std::optional<std::vector<GenWord>> membership_words(SignedImage const& image,
                                                            std::optional<GenWord> const& minus,
                                                            std::vector<Sl2Matrix> const& targets) {
  std::vector<GenWord> out;
  for (Sl2Matrix const& t : targets) {
    std::optional<SlMembership> mem = image.member(t);
    if (!mem) return std::nullopt;
    GenWord w = mem->word;
    if (mem->negated) {
      if (!minus) throw std::logic_error("membership_words: negated witness without -E");
      w = gen_mul(w, *minus);
    }
    if (evaluate(image.generators(), w) != t) throw std::logic_error("membership_words: bad witness");
    out.push_back(std::move(w));
  }
  return out;
}

struct ConditionOne {
  std::vector<GenWord> forward, backward;
};

inline std::optional<ConditionOne> condition_one(SlRep const& r1, SlRep const& r2, Sl2Matrix const& q) {
  SlRep c2 = conjugate_rep(q, r2);
  SignedImage s1(r1.images()), s2(c2.images());
  if (s1.contains_minus_identity() != s2.contains_minus_identity()) return std::nullopt;
  auto fw = membership_words(s1, minus_identity_witness(r1), c2.images());
  if (!fw) return std::nullopt;
  auto bw = membership_words(s2, minus_identity_witness(c2), r1.images());
  if (!bw) return std::nullopt;
  return ConditionOne{*fw, *bw};
}

inline std::vector<IntVector> condition_three_columns(SlRep const& r) {
  std::vector<IntVector> cols;
  bool minus = false;
  for (auto const& [a, b] : r.pairs) {
    for (IntVector& c : difference_columns(b)) cols.push_back(std::move(c));
    minus = minus || a.is_minus_identity();
  }
  if (minus) {
    cols.push_back({2, 0});
    cols.push_back({0, 2});
  }
  return cols;
}

}  // namespace detail

inline IsoVerdict iso_main(TorusBundle const& b1, TorusBundle const& b2) {
  if (b1.genus() != b2.genus()) throw std::invalid_argument("iso_main: genus mismatch");
  if (b1.genus() < 2) throw std::invalid_argument("iso_main: genus must be at least 2");
  require_valid(b1);
  require_valid(b2);
  PslRep p1 = project_rep(b1.rep), p2 = project_rep(b2.rep);
  if (!is_normal_form(p1) || !is_normal_form(p2)) {
    throw std::invalid_argument("iso_main: monodromy projections must be in normal form");
  }
  CoreGraph h1 = orbit_invariant(p1), h2 = orbit_invariant(p2);
  std::vector<FpWord> cands = conjugators(h1, h2);
  if (cands.empty()) return IsoVerdict::no(1, "projected monodromy groups are not conjugate in PSL(2,Z)");

  std::vector<PslWord> passing;
  for (FpWord const& g : cands) {
    PslWord gw = from_fp(g);
    if (detail::condition_one(b1.rep, b2.rep, lift(gw))) passing.push_back(gw);
  }
  if (passing.empty()) return IsoVerdict::no(1, "monodromy groups are not conjugate in SL(2,Z)");

  std::vector<PslWord> xs = p1.images(), ys = p2.images();
  std::optional<PslWord> g0 = simultaneous_conjugator(ys, xs);
  if (!g0) {
    return IsoVerdict::indeterminate(
        "projections have conjugate images but no simultaneous conjugator aligns them; "
        "lift orbits of differently generated normal forms are not compared");
  }

  // Literal conjugators are C g0 with C the centralizer of the image; the
  // outcome only depends on the class modulo the image.
  KuroshInvariants inv = kurosh_invariants(h1);
  long pieces = inv.free_rank;
  for (auto const& [o, c] : inv.factor_counts) pieces += c;
  std::optional<PslWord> root;
  long sweep = 1;
  if (pieces == 1) {
    auto nz = std::find_if(xs.begin(), xs.end(), [](PslWord const& w) { return !w.empty(); });
    root = centralizer_root(*nz);
    if (psl_order(*root) == infinite_order) {
      Int g = 0;
      for (PslWord const& w : xs)
        if (!w.empty()) g = gcd(g, Int(*psl_log(*root, w)));
      sweep = static_cast<long>(g);
    }
  }
  auto literal = [&](PslWord const& g) {
    PslWord d = psl_mul(g, psl_inverse(*g0));
    if (pieces == 0) return true;
    if (root) return psl_log(*root, d).has_value();
    return member(h1, to_fp(d)).has_value();
  };
  bool others = std::any_of(passing.begin(), passing.end(), [&](PslWord const& g) { return !literal(g); });
  std::string open = "a conjugator outside the literal alignment class passes the image test; "
                     "its effect on the lift orbit is not determined";

  Sl2Matrix q0 = lift(*g0);
  std::optional<detail::ConditionOne> c1 = detail::condition_one(b1.rep, b2.rep, q0);
  if (!c1) return IsoVerdict::indeterminate(open);

  SlRep aligned = detail::conjugate_rep(q0, b2.rep);
  LiftOrbitTag t1 = lift_orbit_tag(canonicalize_lift(b1.rep));
  LiftOrbitTag t2 = lift_orbit_tag(canonicalize_lift(aligned));
  if (t1 != t2) {
    if (others) return IsoVerdict::indeterminate(open);
    return IsoVerdict::no(2, "lift orbit tags " + t1.str() + " vs " + t2.str());
  }

  std::vector<IntVector> cols = detail::condition_three_columns(b1.rep);
  std::optional<detail::EulerMatch> em;
  if (pieces == 0) {
    em = detail::euler_match_any(b1.euler(), b2.euler(), cols);
  } else {
    std::vector<Sl2Matrix> qs;
    Sl2Matrix z = root ? lift(*root) : Sl2Matrix(), zj;
    long n = root && psl_order(*root) != infinite_order ? psl_order(*root) : sweep;
    for (long j = 0; j < n; ++j, zj = zj * z) {
      qs.push_back(zj * q0);
      qs.push_back(-(zj * q0));
    }
    em = detail::euler_match(qs, b1.euler(), b2.euler(), cols);
  }
  if (!em) {
    if (others) return IsoVerdict::indeterminate(open);
    return IsoVerdict::no(3, "Euler classes differ for every admissible Q");
  }

  IsoCertificate c;
  c.genus = b1.genus();
  c.q = em->q;
  // Q differs from q0 by a central sign or an element commuting with the
  // aligned images, so the membership words carry over.
  std::optional<detail::ConditionOne> cq = detail::condition_one(b1.rep, b2.rep, c.q);
  if (!cq) throw std::logic_error("iso_main: image test lost along the sweep");
  c.forward = cq->forward;
  c.backward = cq->backward;
  c.tag = t1.str();
  for (size_t i = 0; i < c.genus; ++i) c.x.push_back({em->coeffs[2 * i], em->coeffs[2 * i + 1]});
  if (em->coeffs.size() > 2 * c.genus) c.x0 = IntVector{em->coeffs[2 * c.genus], em->coeffs[2 * c.genus + 1]};
  return IsoVerdict::yes(c);
}

inline IsoVerdict iso(TorusBundle const& b1, TorusBundle const& b2) {
  require_valid(b1);
  require_valid(b2);
  if (b1.genus() != b2.genus()) {
    return IsoVerdict::no(0, "base genus " + std::to_string(b1.genus()) + " vs "
                                 + std::to_string(b2.genus()));
  }
  if (b1.genus() == 0) return iso_genus0(b1, b2);
  if (b1.genus() == 1) return iso_genus1(b1, b2);
  return iso_main(b1, b2);
}

// ---------------------------------------------------------------------------
// Certificate checking by direct substitution.

namespace detail {

inline bool is_move(TorusBundle const& from, TorusBundle const& to, Sl2Matrix const& p) {
  if (from.m != to.m || from.n != to.n || from.genus() != 1 || to.genus() != 1) return false;
  auto const& [a, b] = from.rep.pairs[0];
  if (!fits_int64(p.a()) || !fits_int64(p.b()) || !fits_int64(p.c()) || !fits_int64(p.d())) return false;
  auto moved = pair_move(a, b, static_cast<long>(p.a()), static_cast<long>(p.c()),
                         static_cast<long>(p.b()), static_cast<long>(p.d()));
  return moved == to.rep.pairs[0];
}

inline IntVector combine(std::vector<IntVector> const& cols, std::vector<IntVector> const& coeffs) {
  IntVector s{0, 0};
  for (size_t i = 0; i < cols.size(); ++i) {
    s[0] += cols[i][0] * coeffs[i / 2][i % 2];
    s[1] += cols[i][1] * coeffs[i / 2][i % 2];
  }
  return s;
}

}  // namespace detail

inline bool verify_certificate(TorusBundle const& b1, TorusBundle const& b2, IsoCertificate const& c) {
  if (b1.genus() != c.genus || b2.genus() != c.genus) return false;
  if (c.q.a() * c.q.d() - c.q.b() * c.q.c() != 1) return false;
  if (c.genus == 0) return act(c.q, b2.euler()) == b1.euler();

  if (c.genus == 1) {
    if (!detail::is_move(b1, c.normal1, c.p1) || !detail::is_move(b2, c.normal2, c.p2)) return false;
    auto const& [a1, bm] = c.normal1.rep.pairs[0];
    auto const& [a2, cm] = c.normal2.rep.pairs[0];
    if (!a1.is_central() || !a2.is_central() || c.x.size() != 1) return false;
    bool eps = a1.is_identity(), del = a2.is_identity();
    int expected = eps ? (del ? 1 : 2) : (del ? 3 : 4);
    if (c.sf_case != expected) return false;
    Sl2Matrix x = c.sf_case == 3 ? bm : cm, ref = c.sf_case == 3 ? cm : bm;
    if ((c.sf_case == 2 && !detail::order_246(bm)) || (c.sf_case == 3 && !detail::order_246(cm))) return false;
    Sl2Matrix img = c.q * x * c.q.inverse();
    bool ok = img == ref || img == ref.inverse();
    if (c.sf_case != 1) ok = ok || img == -ref || img == -ref.inverse();
    if (!ok) return false;
    IntVector u = c.sf_case == 3 ? c.normal2.euler() : c.normal1.euler();
    IntVector v = c.sf_case == 3 ? c.normal1.euler() : c.normal2.euler();
    IntVector rhs = detail::combine(difference_columns(ref), c.x);
    if (c.sf_case == 4) {
      if (!c.x0) return false;
      rhs = {rhs[0] + 2 * (*c.x0)[0], rhs[1] + 2 * (*c.x0)[1]};
    }
    return sub(u, act(c.q, v)) == rhs;
  }

  // genus >= 2
  std::vector<Sl2Matrix> g1 = b1.rep.images();
  std::vector<Sl2Matrix> g2 = detail::conjugated_images(c.q, b2.rep);
  if (c.forward.size() != g2.size() || c.backward.size() != g1.size()) return false;
  for (size_t i = 0; i < g2.size(); ++i)
    if (evaluate(g1, c.forward[i]) != g2[i]) return false;
  for (size_t i = 0; i < g1.size(); ++i)
    if (evaluate(g2, c.backward[i]) != g1[i]) return false;
  SlRep aligned = detail::conjugate_rep(c.q, b2.rep);
  if (project_rep(aligned) != project_rep(b1.rep)) return false;
  if (lift_orbit_tag(canonicalize_lift(b1.rep)) != lift_orbit_tag(canonicalize_lift(aligned))) return false;
  if (c.x.size() != c.genus) return false;
  std::vector<IntVector> bcols;
  bool minus = false;
  for (auto const& [a, b] : b1.rep.pairs) {
    for (IntVector& col : difference_columns(b)) bcols.push_back(std::move(col));
    minus = minus || a.is_minus_identity();
  }
  IntVector rhs = detail::combine(bcols, c.x);
  if (c.x0) {
    if (!minus) return false;
    rhs = {rhs[0] + 2 * (*c.x0)[0], rhs[1] + 2 * (*c.x0)[1]};
  }
  return sub(b1.euler(), act(c.q, b2.euler())) == rhs;
}

}  // namespace t2b
