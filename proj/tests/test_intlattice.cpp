#include "catch_amalgamated.hpp"
#include "support.hpp"

using namespace t2b;

namespace {

IntMatrix random_matrix(std::mt19937& rng, size_t r, size_t c, int bound) {
  std::uniform_int_distribution<int> e(-bound, bound);
  IntMatrix m(r, c);
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < c; ++j) m(i, j) = e(rng);
  return m;
}

bool is_diagonal_chain(IntMatrix const& d) {
  size_t k = std::min(d.rows(), d.cols());
  for (size_t i = 0; i < d.rows(); ++i)
    for (size_t j = 0; j < d.cols(); ++j)
      if (i != j && d(i, j) != 0) return false;
  for (size_t i = 0; i < k; ++i) {
    if (d(i, i) < 0) return false;
    if (i + 1 < k && d(i + 1, i + 1) != 0 && (d(i, i) == 0 || d(i + 1, i + 1) % d(i, i) != 0)) return false;
    if (i + 1 < k && d(i, i) == 0 && d(i + 1, i + 1) != 0) return false;
  }
  return true;
}

std::vector<IntVector> columns(Sl2Matrix const& x) {
  return {{x.a() - 1, x.c()}, {x.b(), x.d() - 1}};
}

}  // namespace

TEST_CASE("Smith form examples") {
  CHECK(smith_normal_form(IntMatrix::identity(2)).D == IntMatrix::identity(2));
  CHECK(invariant_factors(IntMatrix(2, 2, {-1, 1, -1, 0})) == std::vector<Int>{1, 1});
  CHECK(invariant_factors(IntMatrix(2, 2, {-1, 1, -1, -1})) == std::vector<Int>{1, 2});
  CHECK(invariant_factors(IntMatrix(2, 3, {2, 4, 6, 4, 8, 14})) == std::vector<Int>{2, 2});
}

TEST_CASE("Smith form on random matrices") {
  std::mt19937 rng(21);
  std::uniform_int_distribution<size_t> dim(1, 4), wide(1, 8);
  for (int i = 0; i < 300; ++i) {
    IntMatrix m = random_matrix(rng, dim(rng), wide(rng), 9);
    SmithForm f = smith_normal_form(m);
    CHECK(f.U * m * f.V == f.D);
    CHECK(abs(determinant(f.U)) == 1);
    CHECK(abs(determinant(f.V)) == 1);
    CHECK(is_diagonal_chain(f.D));
  }
}

TEST_CASE("column Hermite form") {
  std::mt19937 rng(22);
  for (int i = 0; i < 200; ++i) {
    IntMatrix m = random_matrix(rng, 2, 5, 9);
    HermiteForm h = column_hermite(m);
    CHECK(m * h.W == h.H);
    CHECK(abs(determinant(h.W)) == 1);
  }
}

TEST_CASE("member_with_witness examples") {
  auto zero = member_with_witness({0, 0}, {{3, 1}, {2, 2}});
  REQUIRE(zero);
  CHECK(*zero == IntVector{0, 0});
  Sl2Matrix t = mat_t();
  auto c = member_with_witness({5, 7}, columns(t));
  REQUIRE(c);
  CHECK((*c)[0] * -1 + (*c)[1] * 1 == 5);
  CHECK((*c)[0] * -1 + (*c)[1] * 0 == 7);
  CHECK_FALSE(member_with_witness({1, 0}, {{2, 0}, {0, 2}}));
  CHECK_FALSE(member_with_witness({1, 0}, {}));
  CHECK(member_with_witness({0, 0}, {}));
}

TEST_CASE("member_with_witness agrees with coefficient enumeration") {
  std::mt19937 rng(23);
  std::uniform_int_distribution<int> e(-4, 4), t(-8, 8), n(1, 3);
  for (int i = 0; i < 600; ++i) {
    std::vector<IntVector> gens;
    std::vector<std::array<long long, 2>> ogens;
    for (int k = n(rng); k > 0; --k) {
      int x = e(rng), y = e(rng);
      gens.push_back({x, y});
      ogens.push_back({x, y});
    }
    int tx = t(rng), ty = t(rng);
    auto lib = member_with_witness({tx, ty}, gens);
    auto brute = oracle::brute_lattice_member({tx, ty}, ogens, 6);
    if (brute) CHECK(lib);
    if (lib) {
      IntVector s{0, 0};
      for (size_t k = 0; k < gens.size(); ++k) {
        s[0] += (*lib)[k] * gens[k][0];
        s[1] += (*lib)[k] * gens[k][1];
      }
      CHECK(s == IntVector{tx, ty});
    } else {
      CHECK_FALSE(brute);
    }
  }
}

TEST_CASE("quotient modules") {
  CHECK(quotient({}) == QuotientModule{2, {}});
  CHECK(quotient(columns(mat_s())) == QuotientModule{0, {2}});
  CHECK(quotient(columns(mat_t())).trivial());
  CHECK(quotient(columns(mat_shear())) == QuotientModule{1, {}});
  CHECK(quotient({{2, 0}, {0, 6}}) == QuotientModule{0, {2, 6}});
}

TEST_CASE("quotient is invariant under generator moves") {
  std::mt19937 rng(24);
  std::uniform_int_distribution<int> e(-6, 6);
  for (int i = 0; i < 200; ++i) {
    std::vector<IntVector> g;
    for (int k = 0; k < 3; ++k) g.push_back({e(rng), e(rng)});
    QuotientModule q = quotient(g);
    auto p = g;
    std::swap(p[0], p[2]);
    CHECK(quotient(p) == q);
    p = g;
    p[1] = {-p[1][0], -p[1][1]};
    CHECK(quotient(p) == q);
    p = g;
    p[0] = {p[0][0] + p[1][0], p[0][1] + p[1][1]};
    CHECK(quotient(p) == q);
  }
}

TEST_CASE("unimodular_reduce") {
  CHECK(unimodular_reduce({1, 0, 0}) == IntMatrix::identity(3));
  for (IntVector v : {IntVector{2, 3}, IntVector{6, 10, 15}, IntVector{-4, 6}, IntVector{0, 5}}) {
    IntMatrix g = unimodular_reduce(v);
    IntMatrix row(1, v.size(), v);
    IntMatrix r = row * g;
    Int d = 0;
    for (Int const& x : v) d = gcd(d, x);
    CHECK(r(0, 0) == d);
    for (size_t j = 1; j < v.size(); ++j) CHECK(r(0, j) == 0);
    CHECK(abs(determinant(g)) == 1);
  }
  CHECK_THROWS_AS(unimodular_reduce({0, 0}), std::invalid_argument);
}

TEST_CASE("rank and determinant") {
  CHECK(rank(IntMatrix(2, 4)) == 0);
  CHECK(rank(IntMatrix(2, 4, {0, 0, 0, 0, 0, 0, 1, 0})) == 1);
  CHECK(rank(IntMatrix(2, 2, {-1, 1, -1, 0})) == 2);
  CHECK(determinant(IntMatrix(3, 3, {2, 0, 1, 1, 3, 2, 1, 1, 2})) == 6);
  CHECK(determinant(IntMatrix(2, 2, {0, 1, 1, 0})) == -1);
}
