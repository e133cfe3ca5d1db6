#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <random>

#include "qhh/complex.hpp"
#include "qhh/sparse.hpp"

using namespace qhh;

namespace {

template <class F>
SparseMatrix<typename F::value_type> from_rows(const F& f, const std::vector<std::vector<int>>& rows) {
  const std::size_t r = rows.size(), c = rows.empty() ? 0 : rows[0].size();
  SparseMatrix<typename F::value_type> m(r, c);
  for (std::size_t j = 0; j < c; ++j) {
    SparseVec<typename F::value_type> col;
    for (std::size_t i = 0; i < r; ++i)
      if (rows[i][j]) col.emplace_back(int(i), f.from_int(rows[i][j]));
    m.set_column(j, canonicalize(std::move(col)));
  }
  return m;
}

// Plain dense Gaussian elimination, as an independent rank oracle.
std::size_t dense_rank(std::vector<std::vector<Rational>> a) {
  std::size_t rank = 0;
  const std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t p = rank;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[rank]);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank || a[r][c] == 0) continue;
      const Rational f = a[r][c] / a[rank][c];
      for (std::size_t k = c; k < cols; ++k) a[r][k] -= f * a[rank][k];
    }
    ++rank;
  }
  return rank;
}

}  // namespace

TEST_CASE("rank: small examples") {
  RationalField Q;
  CHECK(rank(Q, SparseMatrix<Rational>(3, 4)) == 0);
  CHECK(rank(Q, from_rows(Q, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}})) == 3);
  PrimeField F2(2);
  CHECK(rank(F2, from_rows(F2, {{1, 1}, {1, 1}})) == 1);
  CHECK(rank(Q, from_rows(Q, {{1, 2}, {2, 4}})) == 1);
  CHECK(rank(F2, from_rows(F2, {{2, 0}, {0, 1}})) == 1);
}

TEST_CASE("rank: randomized against dense elimination, rank + nullity = columns") {
  RationalField Q;
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> size(1, 12), val(-2, 2), sparsity(0, 3);
  for (int trial = 0; trial < 80; ++trial) {
    const int r = size(rng), c = size(rng);
    std::vector<std::vector<int>> rows(static_cast<std::size_t>(r), std::vector<int>(static_cast<std::size_t>(c)));
    std::vector<std::vector<Rational>> dense(static_cast<std::size_t>(r), std::vector<Rational>(static_cast<std::size_t>(c)));
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) dense[std::size_t(i)][std::size_t(j)] = rows[std::size_t(i)][std::size_t(j)] = sparsity(rng) == 0 ? val(rng) : 0;
    const auto m = from_rows(Q, rows);
    const std::size_t rk = rank(Q, m);
    CHECK(rk == dense_rank(dense));
    CHECK(rk + kernel_dim(Q, m) == std::size_t(c));
    CHECK(rank(Q, m.transpose()) == rk);
  }
}

TEST_CASE("rank over Q(q) detects q-dependent drops") {
  RationalFunctionField K;
  const auto q = K.q();
  SparseMatrix<RatFunc> m(2, 2);
  m.set_column(0, {{0, K.one()}, {1, q}});
  m.set_column(1, {{0, q}, {1, q * q}});
  CHECK(rank(K, m) == 1);
  m.set_column(1, {{0, q}, {1, K.one()}});
  CHECK(rank(K, m) == 2);
}

TEST_CASE("LeadEchelon gives reproducible quotient bases") {
  RationalField Q;
  LeadEchelon<RationalField> a(Q, 4), b(Q, 4);
  const SparseVec<Rational> v1{{0, 1}, {2, 1}}, v2{{1, 1}, {2, -1}}, v3{{0, 1}, {1, 1}};
  a.insert(v1);
  a.insert(v2);
  CHECK_FALSE(a.insert(v3));  // v3 = v1 + v2
  b.insert(v3);
  b.insert(v2);
  CHECK(a.free_indices() == b.free_indices());
  CHECK(a.free_indices() == std::vector<int>{0, 3});
  CHECK(a.reduce({{2, 1}}) == b.reduce({{2, 1}}));
  CHECK(a.reduce({{2, 1}}) == SparseVec<Rational>{{0, -1}});
}

TEST_CASE("inverse") {
  RationalField Q;
  const auto m = from_rows(Q, {{2, 1}, {1, 1}});
  const auto inv = inverse(Q, m);
  REQUIRE(inv);
  CHECK(*inv * m == from_rows(Q, {{1, 0}, {0, 1}}));
  CHECK_FALSE(inverse(Q, from_rows(Q, {{1, 1}, {1, 1}})));
}

TEST_CASE("homology of tiny complexes") {
  RationalField Q;
  {
    GradedChainComplex<RationalField> c(Q, 0);
    c.push_group({0}, SparseMatrix<Rational>(0, 1));
    c.push_group({0}, SparseMatrix<Rational>(1, 1));
    const auto t = homology_dims(c);
    CHECK(t.at(0, 0) == 1);
    CHECK(t.at(1, 0) == 1);
  }
  {
    GradedChainComplex<RationalField> c(Q, 0);
    c.push_group({0}, SparseMatrix<Rational>(0, 1));
    c.push_group({0}, from_rows(Q, {{1}}));
    CHECK(homology_dims(c).dims.empty());
  }
  {
    // d∘d != 0 is a hard error naming the degree
    GradedChainComplex<RationalField> c(Q, 0);
    c.push_group({0}, SparseMatrix<Rational>(0, 1));
    c.push_group({0}, from_rows(Q, {{1}}));
    c.push_group({0}, from_rows(Q, {{1}}));
    CHECK_THROWS_WITH_AS(homology_dims(c), doctest::Contains("d_1 ∘ d_2"), InternalError);
  }
  {
    GradedChainComplex<RationalField> c(Q, 0);
    c.push_group({0}, SparseMatrix<Rational>(0, 1));
    c.push_group({1}, from_rows(Q, {{1}}));
    CHECK_THROWS_AS(homology_dims(c), InternalError);
  }
}

TEST_CASE("restrict_to_grading, Euler characteristic, permutation invariance") {
  RationalField Q;
  std::mt19937 rng(5);
  // random degree-preserving complexes C_0 <- C_1 <- C_2 with d_1 chosen to annihilate the image of d_2
  for (int trial = 0; trial < 20; ++trial) {
    // gradings: each group has basis in degrees {0, 1}
    std::uniform_int_distribution<int> val(-2, 2);
    const std::vector<int> g0{0, 0, 1}, g1{0, 0, 0, 1, 1}, g2{0, 1};
    // d_2: C_2 -> C_1 random degree-preserving
    SparseMatrix<Rational> d2(5, 2), d1(3, 5);
    d2.set_column(0, canonicalize<Rational>({{0, val(rng)}, {1, val(rng)}, {2, val(rng)}}));
    d2.set_column(1, canonicalize<Rational>({{3, val(rng)}, {4, val(rng)}}));
    // d_1 kills the image of d_2: build rows orthogonal to d2 columns in each grading
    // grading 0 part: row vectors r with r·(a,b,c) = 0 where (a,b,c) = d2 col 0
    Rational a = d2.entry(0, 0), b = d2.entry(1, 0), c = d2.entry(2, 0);
    std::vector<std::vector<Rational>> r0;
    if (a != 0 || b != 0 || c != 0) {
      // two rows orthogonal to (a, b, c)
      r0 = a != 0 ? std::vector<std::vector<Rational>>{{b, -a, 0}, {c, 0, -a}} : std::vector<std::vector<Rational>>{{1, 0, 0}, {0, c, -b}};
    } else {
      r0 = {{1, 0, 0}, {0, 1, 1}};
    }
    Rational e = d2.entry(3, 1), f = d2.entry(4, 1);
    std::vector<Rational> r1 = (e != 0 || f != 0) ? std::vector<Rational>{f, -e} : std::vector<Rational>{1, 1};
    for (std::size_t j = 0; j < 3; ++j)
      d1.set_column(j, canonicalize<Rational>({{0, r0[0][j]}, {1, r0[1][j]}}));
    for (std::size_t j = 0; j < 2; ++j) d1.set_column(3 + j, canonicalize<Rational>({{2, r1[j]}}));
    GradedChainComplex<RationalField> cx(Q, 0);
    cx.push_group(g0, SparseMatrix<Rational>(0, 3));
    cx.push_group(g1, d1);
    cx.push_group(g2, d2);
    const auto t = homology_dims(cx);
    for (int j : {0, 1}) {
      long long chi_h = 0;
      for (int n = 0; n <= 2; ++n) chi_h += (n % 2 ? -1 : 1) * (long long)t.at(n, j);
      CHECK(chi_h == euler_characteristic(cx, j, 2));
      const auto sub = restrict_to_grading(cx, j);
      const auto ts = homology_dims(sub);
      for (int n = 0; n <= 2; ++n) CHECK(ts.at(n, j) == t.at(n, j));
    }
    CHECK(restrict_to_grading(cx, 5).empty());
    CHECK(restrict_to_grading(cx, 0).dim(1) == 3);

    // permute C_1
    const std::vector<int> perm{4, 2, 0, 3, 1};  // new index of old basis element
    SparseMatrix<Rational> pd1(3, 5), pd2(5, 2);
    std::vector<int> pg1(5);
    for (std::size_t k = 0; k < 5; ++k) {
      pg1[std::size_t(perm[k])] = g1[k];
      pd1.set_column(std::size_t(perm[k]), d1.column(k));
    }
    for (std::size_t j = 0; j < 2; ++j) {
      SparseVec<Rational> col;
      for (const auto& [i, v] : d2.column(j)) col.emplace_back(perm[std::size_t(i)], v);
      pd2.set_column(j, canonicalize(std::move(col)));
    }
    GradedChainComplex<RationalField> px(Q, 0);
    px.push_group(g0, SparseMatrix<Rational>(0, 3));
    px.push_group(pg1, pd1);
    px.push_group(g2, pd2);
    CHECK(homology_dims(px) == t);
  }
}

TEST_CASE("identical tables regardless of thread count") {
  RationalField Q;
  GradedChainComplex<RationalField> c(Q, 0);
  std::vector<int> g(40);
  std::iota(g.begin(), g.end(), 0);
  c.push_group(g, SparseMatrix<Rational>(0, 40));
  SparseMatrix<Rational> d(40, 40);
  for (std::size_t j = 0; j < 40; j += 2) d.set_column(j, {{int(j), Q.one()}});
  c.push_group(g, d);
  setenv("QHH_THREADS", "1", 1);
  const auto one = homology_dims(c);
  setenv("QHH_THREADS", "4", 1);
  const auto four = homology_dims(c);
  unsetenv("QHH_THREADS");
  CHECK(one == four);
  CHECK(one.total(0) == 20);
  CHECK(one.total(1) == 20);
}

TEST_CASE("table comparisons respect the truncation edge") {
  PoincareTable a, b;
  a.complete_through = 1;
  b.complete_through = 2;
  a.add(0, 0, 1);
  b.add(0, 0, 1);
  b.add(2, 0, 5);
  CHECK(agree_through_edge(a, b));
  a.add(2, 0, 4);
  CHECK(agree_through_edge(a, b));
  CHECK(pointwise_le(a, b));
  b.add(1, 3, 1);
  CHECK_FALSE(agree_through_edge(a, b));
  CHECK(pointwise_le(a, b));
  CHECK_FALSE(pointwise_le(b, a));
}
