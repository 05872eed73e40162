#include "catch_amalgamated.hpp"
#include "support.hpp"

using namespace t2b;
using namespace testing_support;

namespace {

Sl2Matrix const E;
Sl2Matrix const mE = minus_identity();
Sl2Matrix const S = mat_s(), T = mat_t(), C = mat_shear();

SlRep rep(std::vector<std::pair<Sl2Matrix, Sl2Matrix>> p) { return SlRep{std::move(p)}; }

// -E among products of at most len generators and inverses, by enumeration.
bool minus_reachable(std::vector<Sl2Matrix> const& gens, int len) {
  std::vector<oracle::Mat> steps;
  for (Sl2Matrix const& g : gens) {
    steps.push_back(to_oracle(g));
    steps.push_back(to_oracle(g.inverse()));
  }
  std::set<oracle::Mat> seen{{1, 0, 0, 1}};
  std::vector<oracle::Mat> frontier{{1, 0, 0, 1}};
  for (int i = 0; i < len; ++i) {
    std::vector<oracle::Mat> next;
    for (auto const& x : frontier)
      for (auto const& s : steps) {
        oracle::Mat y = oracle::mat_mul(x, s);
        if (oracle::max_abs(y) > 1000) continue;
        if (y == oracle::Mat{-1, 0, 0, -1}) return true;
        if (seen.insert(y).second) next.push_back(y);
      }
    frontier = std::move(next);
  }
  return false;
}

std::set<LiftOrbitTag> census(PslRep const& r) {
  std::set<LiftOrbitTag> tags;
  for (SlRep const& l : enumerate_lifts(r)) tags.insert(lift_orbit_tag(canonicalize_lift(l)));
  return tags;
}

}  // namespace

TEST_CASE("surface relator") {
  CHECK_FALSE(validate(rep({{S, T}})));
  CHECK(validate(rep({{mE, T}})));
  CHECK(validate(rep({{E, S}, {E, T}})));
  CHECK(validate(SlRep{}));
  CHECK(validate(psl_rep({{"e", "ab"}, {"e", "babab2"}})));
  CHECK_FALSE(validate(psl_rep({{"a", "b"}})));
}

TEST_CASE("project_rep") {
  CHECK(project_rep(rep({{mE, T}})) == psl_rep({{"e", "b"}}));
  CHECK(project_rep(rep({{S, S}})) == psl_rep({{"a", "a"}}));
  PslRep p = project_rep(rep({{E, C}, {E, S}}));
  CHECK(p.pairs[0].second == project(C));
  CHECK(p.pairs[1].second == parse_psl_word("a"));
  CHECK_THROWS_AS(project_rep(rep({{S, T}})), std::invalid_argument);
}

TEST_CASE("normal form detection") {
  auto nf = is_normal_form(psl_rep({{"e", "ab"}, {"e", "babab2"}}));
  REQUIRE(nf);
  CHECK(nf->k == 1);
  CHECK(nf->l == 2);
  CHECK(nf->m == 2);
  CHECK_FALSE(is_normal_form(psl_rep({{"a", "e"}})));
  auto triv = is_normal_form(psl_rep({{"e", "e"}}));
  REQUIRE(triv);
  CHECK((triv->k == 0 && triv->l == 0 && triv->m == 0));
  // ab and b generate the whole group, which is not free on them.
  CHECK_FALSE(is_normal_form(psl_rep({{"e", "ab"}, {"e", "b"}})));
  // ab and abab generate a subgroup of rank one: not a basis.
  CHECK_FALSE(is_normal_form(psl_rep({{"e", "ab"}, {"e", "abab"}})));
  // orders out of sequence
  CHECK_FALSE(is_normal_form(psl_rep({{"e", "a"}, {"e", "b"}})));
  CHECK(is_normal_form(psl_rep({{"e", "b"}, {"e", "a"}})));
}

TEST_CASE("orbit invariant") {
  CHECK(kurosh_invariants(orbit_invariant(psl_rep({{"e", "e"}}))).free_rank == 0);
  CHECK(equal(orbit_invariant(psl_rep({{"e", "b"}})), orbit_invariant(psl_rep({{"b2", "b"}}))));
  KuroshInvariants k = kurosh_invariants(orbit_invariant(psl_rep({{"e", "b"}, {"e", "a"}})));
  CHECK(k.free_rank == 0);
  CHECK(k.count(3) == 1);
  CHECK(k.count(2) == 1);
}

TEST_CASE("conjugate representations have conjugate image subgroups") {
  std::mt19937 rng(41);
  for (int i = 0; i < 100; ++i) {
    PslWord h = random_psl(rng, 6);
    PslRep r = psl_rep({{"e", "ab"}, {"e", "babab2"}});
    PslRep c;
    for (auto const& [a, b] : r.pairs)
      c.pairs.emplace_back(psl_mul(h, a, psl_inverse(h)), psl_mul(h, b, psl_inverse(h)));
    CHECK(conjugate_subgroups(orbit_invariant(c), orbit_invariant(r)));
  }
}

TEST_CASE("minus identity in the image") {
  CHECK_FALSE(contains_minus_identity(rep({{E, C}})));
  CHECK(contains_minus_identity(rep({{E, S}})));
  CHECK(contains_minus_identity(rep({{mE, C}})));
  CHECK_FALSE(contains_minus_identity(rep({{E, -T}})));
  CHECK(contains_minus_identity(rep({{E, T}})));
  CHECK(contains_minus_identity(rep({{E, C}, {E, -T}})));
  CHECK_FALSE(contains_minus_identity(rep({{E, C * C}, {E, Sl2Matrix(1, 0, 2, 1)}})));
  CHECK(contains_minus_identity(rep({{E, C}, {E, -C}})));
  CHECK_FALSE(contains_minus_identity(rep({{C, C}})));
}

TEST_CASE("minus identity test against enumeration") {
  std::mt19937 rng(42);
  for (int i = 0; i < 300; ++i) {
    std::vector<Sl2Matrix> gens{random_product(rng, 6), random_product(rng, 6)};
    SignedImage img(gens);
    bool lib = img.contains_minus_identity();
    if (minus_reachable(gens, 8)) CHECK(lib);
    auto mem = img.member(mE);
    CHECK(mem.has_value() == lib);
    if (mem) {
      Sl2Matrix v = evaluate(gens, mem->word);
      CHECK((mem->negated ? -v : v) == mE);
    }
    for (int k = 0; k < 5; ++k) {
      std::vector<GenWord> dummy;
      GenWord w;
      std::uniform_int_distribution<int> g(1, 2), sgn(0, 1);
      for (int j = 0; j < 5; ++j) w.push_back(sgn(rng) ? g(rng) : -g(rng));
      Sl2Matrix x = evaluate(gens, w);
      auto m = img.member(x);
      REQUIRE(m);
      Sl2Matrix y = evaluate(gens, m->word);
      CHECK((m->negated ? -y : y) == x);
      if (!lib) CHECK_FALSE(img.contains(-x));
    }
  }
}

TEST_CASE("minus identity witness for normal forms") {
  for (SlRep const& r : {rep({{E, S}}), rep({{mE, C}, {E, E}}), rep({{E, T}}), rep({{E, T}, {E, S}})}) {
    auto w = minus_identity_witness(r);
    REQUIRE(w);
    CHECK(evaluate(r.images(), *w) == mE);
  }
  CHECK_FALSE(minus_identity_witness(rep({{E, C}, {E, E}})));
}

TEST_CASE("canonicalize_lift") {
  CHECK(canonicalize_lift(rep({{E, -T}})) == rep({{E, -T}}));
  CHECK(canonicalize_lift(rep({{E, T}})) == rep({{mE, -T}}));
  CHECK(canonicalize_lift(rep({{E, S}})) == rep({{mE, S}}));
  CHECK(canonicalize_lift(rep({{E, mE}})) == rep({{mE, E}}));
  CHECK_THROWS_AS(canonicalize_lift(rep({{S, S}})), std::invalid_argument);
}

TEST_CASE("canonicalization keeps projection and minus identity") {
  std::vector<PslRep> corpus{psl_rep({{"e", "ab"}, {"e", "babab2"}}), psl_rep({{"e", "b"}, {"e", "a"}}),
                             psl_rep({{"e", "ab"}, {"e", "bab2"}}), psl_rep({{"e", "a"}, {"e", "e"}}),
                             psl_rep({{"e", "ab2"}, {"e", "e"}})};
  for (PslRep const& p : corpus)
    for (SlRep const& l : enumerate_lifts(p)) {
      SlRep c = canonicalize_lift(l);
      CHECK(validate(c));
      CHECK(project_rep(c) == p);
      CHECK(contains_minus_identity(c) == contains_minus_identity(l));
      CHECK(canonicalize_lift(c) == c);
      // the SL image itself is unchanged
      SignedImage before(l.images()), after(c.images());
      for (Sl2Matrix const& x : c.images()) {
        auto m = before.member(x);
        CHECK((m && (!m->negated || contains_minus_identity(l))));
      }
      for (Sl2Matrix const& x : l.images()) {
        auto m = after.member(x);
        CHECK((m && (!m->negated || contains_minus_identity(c))));
      }
    }
}

TEST_CASE("lift orbit tags") {
  CHECK(lift_orbit_tag(rep({{E, C}, {mE, E}})).str() == "MinusInImage(+1)");
  LiftOrbitTag free = lift_orbit_tag(rep({{E, C}, {E, E}}));
  CHECK_FALSE(free.minus_in_image);
  CHECK(free.matrices == std::vector<Sl2Matrix>{C});
  CHECK(lift_orbit_tag(rep({{E, -C}, {E, E}})) != free);
  CHECK(lift_orbit_tag(rep({{mE, C}, {E, E}})) != lift_orbit_tag(rep({{E, C}, {mE, E}})));
  CHECK_THROWS_AS(lift_orbit_tag(rep({{E, T}})), std::invalid_argument);
}

TEST_CASE("enumerate_lifts") {
  CHECK(enumerate_lifts(psl_rep({{"e", "e"}})).size() == 4);
  CHECK(enumerate_lifts(psl_rep({{"e", "ab"}, {"e", "babab2"}})).size() == 16);
  CHECK(enumerate_lifts(PslRep{}).size() == 1);
  for (SlRep const& l : enumerate_lifts(psl_rep({{"e", "ab"}, {"e", "babab2"}}))) CHECK(validate(l));
}

TEST_CASE("orbit census at genus two") {
  struct Case {
    PslRep rep;
    size_t expected;
  };
  // (k,l,m) = (0,0,0) (1,1,1) (0,1,1) (0,0,1) (1,1,2) (0,1,2)
  std::vector<Case> cases{{psl_rep({{"e", "e"}, {"e", "e"}}), 2},
                          {psl_rep({{"e", "ab"}, {"e", "e"}}), 4},
                          {psl_rep({{"e", "b"}, {"e", "e"}}), 2},
                          {psl_rep({{"e", "a"}, {"e", "e"}}), 1},
                          {psl_rep({{"e", "ab"}, {"e", "bab2"}}), 2},
                          {psl_rep({{"e", "b"}, {"e", "a"}}), 1}};
  for (auto const& c : cases) {
    auto nf = is_normal_form(c.rep);
    REQUIRE(nf);
    INFO(nf->k << nf->l << nf->m);
    CHECK(census(c.rep).size() == c.expected);
  }
}
