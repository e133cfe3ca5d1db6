#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qhh/algebra.hpp"
#include "qhh/arc.hpp"

using namespace qhh;

namespace {

using K = RationalFunctionField;

template <class F>
std::map<int, std::size_t> graded_dims(const GradedBimodule<F>& m) {
  std::map<int, std::size_t> out;
  for (int d : m.basis().degrees) ++out[d];
  return out;
}

// x ↦ Σ_e e ⊗ x (left identification) as a matrix into a tensor product.
template <class F>
SparseMatrix<typename F::value_type> unit_left(const TensorProduct<F>& p, const GradedBimodule<F>& m) {
  SparseMatrix<typename F::value_type> phi(p.module()->dim(), m.dim());
  for (std::size_t x = 0; x < m.dim(); ++x) {
    SparseVec<typename F::value_type> v;
    for (int e : m.left()->idempotents())
      for (const auto& t : p.elementary(std::size_t(e), x)) v.push_back(t);
    phi.set_column(x, canonicalize(std::move(v)));
  }
  return phi;
}

}  // namespace

TEST_CASE("dual numbers pass check_algebra, a corrupted copy does not") {
  RationalField Q;
  const auto A = dual_numbers(Q);
  CHECK(check_algebra(*A).ok());
  std::vector<SparseVec<Rational>> m{{{0, 1}}, {{1, 1}}, {{1, 1}}, {{0, 1}}};  // X·X = 1
  const auto bad = GradedAlgebra<RationalField>::unchecked(Q, A->basis(), {0}, m);
  const auto report = check_algebra(bad);
  REQUIRE_FALSE(report.ok());
  CHECK(report.summary().find("grading") != std::string::npos);
  CHECK(report.summary().find("-4") != std::string::npos);
  CHECK_THROWS_AS(GradedAlgebra<RationalField>(Q, A->basis(), {0}, m), PreconditionError);
}

TEST_CASE("check_algebra flags associativity, unit and idempotent failures") {
  RationalField Q;
  // two elements declared orthogonal idempotents although they are not
  Basis b;
  b.push("1", 0);
  b.push("e", 0);
  std::vector<SparseVec<Rational>> m(4);
  m[0] = {{0, 1}};
  m[1] = {{1, 1}};
  m[2] = {{1, 1}};
  m[3] = {{1, 1}};
  const auto bad = GradedAlgebra<RationalField>::unchecked(Q, b, {0, 1}, m);
  const auto r = check_algebra(bad);
  CHECK_FALSE(r.ok());
  CHECK(r.summary().find("idempotents") != std::string::npos);
}

TEST_CASE("bimodule checks catch a broken action") {
  RationalField Q;
  const auto A = dual_numbers(Q);
  const auto M = regular_bimodule(A);
  CHECK(check_bimodule(*M).ok());
  auto la = M->left_table();
  la[1 * 2 + 1] = {{0, Q.one()}};  // X·X = 1
  const auto bad = GradedBimodule<RationalField>::unchecked(A, A, M->basis(), la, M->right_table());
  CHECK_FALSE(check_bimodule(bad).ok());
}

TEST_CASE("twist_left") {
  K k;
  const auto q = k.q();
  const auto A = dual_numbers(k);
  const auto M = regular_bimodule(A);
  // q = 1 is the identity
  CHECK(twist_left(M, k.one())->left_table() == M->left_table());
  // X · 1 = q^2 X for deg X = -2
  const auto T = twist_left(M, q);
  CHECK(T->act_left(1, 0) == SparseVec<RatFunc>{{1, q * q}});
  CHECK(T->act_left(0, 1) == SparseVec<RatFunc>{{1, k.one()}});
  CHECK(T->right_table() == M->right_table());
  CHECK(twist_left(T, k.one() / q)->left_table() == M->left_table());

  // a generator of degree 2 picks up q^{-2}
  const auto B = dual_numbers(k, 2);
  const auto TB = twist_left(regular_bimodule(B), q);
  CHECK(TB->act_left(1, 0) == SparseVec<RatFunc>{{1, k.one() / (q * q)}});
}

TEST_CASE("tensor_over_A: unit, twist, turnbacks, associativity") {
  K k;
  const auto q = k.q();
  ArcContext<K> ctx(k);
  const auto H1 = ctx.algebra(1);
  const auto id = ctx.flat(planar::FlatTangle::identity(2));
  const auto tb = ctx.flat(planar::FlatTangle::turnback(2, 1));
  CHECK(tb->dim() == 4);

  // A ⊗_A M ≅ M
  for (const auto& M : {id, tb}) {
    const TensorProduct<K> p(regular_bimodule(H1), M);
    CHECK(graded_dims(*p.module()) == graded_dims(*M));
    const auto phi = unit_left(p, *M);
    CHECK(check_bimodule_map(*M, *p.module(), phi).ok());
    CHECK(inverse(k, phi).has_value());
  }

  // f_q A ⊗_A M ≅ f_q M via x ↦ 1 ⊗ x, action constants included
  for (const auto& M : {id, tb}) {
    const TensorProduct<K> p(twisted_regular(H1, q), M);
    const auto fM = twist_left(M, q);
    const auto phi = unit_left(p, *M);
    CHECK(check_bimodule_map(*fM, *p.module(), phi).ok());
    CHECK(inverse(k, phi).has_value());
  }

  // turnback ⊗ turnback = turnback with a free circle: dimensions double, gradings split ±1
  const auto tt = tensor_over_A(tb, tb);
  CHECK(tt->dim() == 2 * tb->dim());
  std::map<int, std::size_t> expect;
  for (const auto& [d, c] : graded_dims(*tb)) {
    expect[d + 1] += c;
    expect[d - 1] += c;
  }
  CHECK(graded_dims(*tt) == expect);
  CHECK(graded_dims(*tt) == graded_dims(*ctx.flat(planar::FlatTangle::turnback(2, 1).with_circles(1))));

  // associativity of dimensions
  const auto l = tensor_over_A(tensor_over_A(tb, id), tb);
  const auto r = tensor_over_A(tb, tensor_over_A(id, tb));
  CHECK(graded_dims(*l) == graded_dims(*r));

  // mismatched algebras are rejected
  CHECK_THROWS_AS(tensor_over_A(ctx.flat(planar::FlatTangle::identity(4)), tb), PreconditionError);
}

TEST_CASE("tensor_over_A over H^2 with cups and caps") {
  RationalField Q;
  ArcContext<RationalField> ctx(Q);
  const auto cup = ctx.flat(planar::FlatTangle::cup(4, 2));   // (H^1, H^2)
  const auto cap = ctx.flat(planar::FlatTangle::cap(2, 2));   // (H^2, H^1)
  const auto tb = ctx.flat(compose(planar::FlatTangle::cup(4, 2), planar::FlatTangle::cap(2, 2)));
  const auto prod = tensor_over_A(cap, cup);
  CHECK(graded_dims(*prod) == graded_dims(*tb));
  // the other order is cap(2,2) followed by cup(4,2), the identity with a closed circle
  const auto circle = tensor_over_A(cup, cap);
  CHECK(graded_dims(*circle) == graded_dims(*ctx.flat(planar::FlatTangle::identity(2).with_circles(1))));
}

TEST_CASE("central_swap") {
  K k;
  const auto q = k.q();
  ArcContext<K> ctx(k);
  const auto H1 = ctx.algebra(1);
  for (const auto& M : {regular_bimodule(H1), ctx.flat(planar::FlatTangle::turnback(2, 1)), regular_bimodule(ctx.algebra(2))}) {
    const auto s = central_swap(M, q);
    SparseMatrix<RatFunc> diag(M->dim(), M->dim());
    for (std::size_t x = 0; x < M->dim(); ++x) diag.set_column(x, {{int(x), q_power(k, q, -M->degree(x))}});
    CHECK(s.on_underlying == diag);
    const auto one = central_swap(M, k.one());
    SparseMatrix<RatFunc> id(M->dim(), M->dim());
    for (std::size_t x = 0; x < M->dim(); ++x) id.set_column(x, {{int(x), k.one()}});
    CHECK(one.on_underlying == id);
  }
  // a grading 3 line: scalar q^{-3}
  const auto shifted = shift(regular_bimodule(H1), 3);
  const auto s3 = central_swap(shifted, q);
  CHECK(s3.on_underlying.entry(0, 0) == q_power(k, q, -3));
  CHECK_THROWS_AS(central_swap(shifted, k.zero()), PreconditionError);
}

TEST_CASE("central_swap on a complex commutes with the differential") {
  PrimeField F5(5);
  const auto q = F5.from_int(2);
  ArcContext<PrimeField> ctx(F5);
  const auto C = ctx.tangle(parse_tangle_word("x+:1 x-:1", 2));
  for (int p = C.lo() + 1; p <= C.hi(); ++p) {
    const auto hi = central_swap(C.term(p), q), lo = central_swap(C.term(p - 1), q);
    CHECK(lo.on_underlying * C.d(p) == C.d(p) * hi.on_underlying);
  }
}

TEST_CASE("tensor_complexes") {
  RationalField Q;
  ArcContext<RationalField> ctx(Q);
  const auto tb = ctx.flat(planar::FlatTangle::turnback(2, 1));
  const auto id = ctx.flat(planar::FlatTangle::identity(2));
  // one-term complexes
  const auto c = tensor_complexes(BimoduleComplex<RationalField>::single(tb), BimoduleComplex<RationalField>::single(id));
  CHECK(c.lo() == 0);
  CHECK(c.hi() == 0);
  CHECK(graded_dims(*c.term(0)) == graded_dims(*tensor_over_A(tb, id)));
  // complex ⊗ one-term: degreewise, differentials keep their rank
  const auto x = ctx.crossing(2, 1, true);
  const auto y = tensor_complexes(x, BimoduleComplex<RationalField>::single(id));
  CHECK(y.lo() == x.lo());
  CHECK(y.hi() == x.hi());
  CHECK(rank(Q, y.d(0)) == rank(Q, x.d(0)));
  // R2: homology of the total complex matches the identity bimodule in every grading
  const auto r2 = tensor_complexes(ctx.crossing(2, 1, false), x);
  CHECK(r2.hi() - r2.lo() == 2);
  const auto h = homology_dims(r2.as_chain_complex());
  PoincareTable expect;
  for (int d : id->basis().degrees) expect.add(0, d, 1);
  CHECK(h.dims == expect.dims);
}
