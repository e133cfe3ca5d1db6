#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qhh/arc.hpp"

using namespace qhh;

namespace {

using K = RationalFunctionField;

std::map<int, std::size_t> graded_dims(const Basis& b) {
  std::map<int, std::size_t> out;
  for (int d : b.degrees) ++out[d];
  return out;
}

PoincareTable with_free_circle(const PoincareTable& t) {
  PoincareTable out;
  for (const auto& [k, d] : t.dims) {
    out.add(k.first, k.second + 1, d);
    out.add(k.first, k.second - 1, d);
  }
  return out;
}

std::string parse_error(const std::string& text, std::optional<int> strands = std::nullopt) {
  try {
    parse_tangle_word(text, strands);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("arc algebras") {
  RationalField Q;
  ArcContext<RationalField> ctx(Q);
  const std::size_t catalan[] = {1, 1, 2, 5, 14};
  for (int n = 1; n <= 4; ++n) CHECK(planar::matchings(n).size() == catalan[n]);
  for (int n = 1; n <= 3; ++n) CHECK(check_algebra(*ctx.algebra(n)).ok());
  CHECK(ctx.algebra(1)->dim() == 2);
  CHECK(ctx.algebra(2)->dim() == 12);
  CHECK(ctx.algebra(2)->sectors() == 2);
  // H^1 is the dual numbers with deg X = -2
  CHECK(*ctx.algebra(1) == *dual_numbers(Q));
  CHECK_THROWS_AS(ctx.algebra(-1), PreconditionError);
  CHECK(arc_algebra(2, Q)->dim() == 12);
}

TEST_CASE("flat bimodules") {
  RationalField Q;
  ArcContext<RationalField> ctx(Q);
  const auto tb = ctx.flat(planar::FlatTangle::turnback(2, 1));
  CHECK(tb->dim() == 4);
  CHECK(graded_dims(tb->basis()) == std::map<int, std::size_t>{{-3, 1}, {-1, 2}, {1, 1}});
  // identity on 2n points is the regular bimodule
  for (int n = 1; n <= 2; ++n) {
    const auto id = ctx.flat(planar::FlatTangle::identity(2 * n));
    const auto reg = regular_bimodule(ctx.algebra(n));
    CHECK(id->left_table() == reg->left_table());
    CHECK(id->right_table() == reg->right_table());
    CHECK(id->basis().degrees == reg->basis().degrees);
  }
  // a closed circle doubles dimensions and splits gradings by ±1
  const auto id4 = ctx.flat(planar::FlatTangle::identity(4));
  const auto circ = ctx.flat(planar::FlatTangle::identity(4).with_circles(1));
  std::map<int, std::size_t> expect;
  for (const auto& [d, c] : graded_dims(id4->basis())) {
    expect[d + 1] += c;
    expect[d - 1] += c;
  }
  CHECK(graded_dims(circ->basis()) == expect);
}

TEST_CASE("crossings and words") {
  RationalField Q;
  ArcContext<RationalField> ctx(Q);
  const auto word = [&](const std::string& s) { return ctx.tangle(parse_tangle_word(s)); };

  // empty word: the regular bimodule in degree 0
  const auto e = word("strands:2");
  CHECK(e.lo() == 0);
  CHECK(e.hi() == 0);
  CHECK(e.term(0)->left_table() == regular_bimodule(ctx.algebra(1))->left_table());

  // cup then cap is the turnback: same constants as the flat bimodule of the composite
  const auto t = word("strands:2 cup:1 cap:1");
  REQUIRE(t.lo() == 0);
  REQUIRE(t.hi() == 0);
  const auto tb = ctx.flat(planar::FlatTangle::turnback(2, 1));
  CHECK(graded_dims(t.term(0)->basis()) == graded_dims(tb->basis()));
  CHECK(check_bimodule(*t.term(0)).ok());

  // crossing complexes: two terms, saddle in both directions
  const auto xp = ctx.crossing(2, 1, true), xn = ctx.crossing(2, 1, false);
  CHECK(xp.lo() == -1);
  CHECK(xp.hi() == 0);
  CHECK(xn.lo() == 0);
  CHECK(xn.hi() == 1);
  CHECK(rank(Q, xp.d(0)) > 0);
  CHECK(rank(Q, xn.d(1)) > 0);
  CHECK_THROWS_AS(ctx.crossing(2, 2, true), PreconditionError);

  // R2 word: homology of the total complex equals the identity's, grading by grading
  const auto r2 = word("strands:2 x+:1 x-:1");
  CHECK(r2.lo() == -1);
  CHECK(r2.hi() == 1);
  PoincareTable expect;
  for (int d : ctx.algebra(1)->basis().degrees) expect.add(0, d, 1);
  CHECK(homology_dims(r2.as_chain_complex()).dims == expect.dims);
  // on four strands, at both positions and in both orders
  PoincareTable expect4;
  for (int d : ctx.algebra(2)->basis().degrees) expect4.add(0, d, 1);
  for (const char* w : {"strands:4 x+:1 x-:1", "strands:4 x-:2 x+:2", "strands:4 x+:3 x-:3"})
    CHECK(homology_dims(word(w).as_chain_complex()).dims == expect4.dims);
}

TEST_CASE("annular invariant of the empty word") {
  RationalField Q;
  ArcContext<RationalField> ctx(Q);
  const auto t = ctx.annular_qkh(parse_tangle_word("strands:2"), Q.one(), 3);
  CHECK(t.total(0) == 2);
  CHECK(t.total(1) == 1);
  CHECK(t.total(2) == 1);
  CHECK(t.complete_through == 2);
  // equals HH(H^1; H^1)
  CHECK(t == homology_dims(build_ch(ctx.algebra(1), regular_bimodule(ctx.algebra(1)), 3)));

  PrimeField F2(2);
  ArcContext<PrimeField> c2(F2);
  const auto t2 = c2.annular_qkh(parse_tangle_word("strands:2"), F2.one(), 3);
  CHECK(t2.total(0) == 2);
  CHECK(t2.total(1) == 2);
  CHECK(t2.total(2) == 2);
}

TEST_CASE("a contractible closure circle") {
  RationalField Q;
  ArcContext<RationalField> ctx(Q);
  // cup:1 cap:1 closes one contractible circle; its free Frobenius factor sits in HH_0
  const auto t = ctx.annular_qkh(parse_tangle_word("strands:2 cup:1 cap:1"), Q.one(), 3);
  CHECK(t.dims == std::map<std::pair<int, int>, std::size_t>{{{0, -1}, 1}, {{0, 1}, 1}});

  // a disjoint contractible circle next to a word doubles everything, split by ±1
  K k;
  ArcContext<K> kc(k);
  for (const char* w : {"strands:2", "strands:2 x+:1", "strands:2 x-:1 x-:1"}) {
    const auto base = parse_tangle_word(w);
    auto bigger = base;
    const int s = base.exit_strands();
    bigger.gens.push_back({Generator::Kind::cap, s + 1});
    bigger.gens.push_back({Generator::Kind::cup, s + 1});
    for (const auto& q : {k.one(), k.q()}) {
      const auto a = kc.annular_qkh(base, q, 3), b = kc.annular_qkh(bigger, q, 3);
      CHECK(b.dims == with_free_circle(a).dims);
    }
  }
}

TEST_CASE("R2 insertion leaves the annular invariant unchanged") {
  K k;
  ArcContext<K> ctx(k);
  for (const char* w : {"strands:2 x+:1", "strands:2 cup:1 cap:1 x-:1"}) {
    const auto word = parse_tangle_word(w);
    for (const auto& q : {k.one(), k.q()}) {
      const auto base = ctx.annular_qkh(word, q, 3);
      for (std::size_t pos = 0; pos <= word.gens.size(); ++pos)
        for (int i : word.r2_positions(pos)) CHECK(ctx.annular_qkh(word.with_r2(pos, i), q, 3) == base);
    }
  }
}

TEST_CASE("cyclic rotation leaves the annular invariant unchanged") {
  RationalField Q;
  ArcContext<RationalField> ctx(Q);
  const auto word = parse_tangle_word("strands:2 cap:2 x+:1 x+:3 cup:2");
  for (const auto& q : {Q.one(), Q.from_int(3)}) {
    const auto base = ctx.annular_qkh(word, q, 3);
    for (std::size_t k = 1; k < word.gens.size(); ++k) {
      const auto r = word.rotated(k);
      CHECK(r.closed());
      CHECK(agree_through_edge(ctx.annular_qkh(r, q, 3), base));
    }
  }
}

TEST_CASE("R1 changes the table only by an overall shift") {
  RationalField Q;
  ArcContext<RationalField> ctx(Q);
  const auto base = ctx.annular_qkh(parse_tangle_word("strands:2"), Q.one(), 3);
  // a kink: cap, crossing with the new strand, cup
  const auto kinked = ctx.annular_qkh(parse_tangle_word("strands:2 cap:3 x+:2 cup:3"), Q.one(), 3);
  REQUIRE_FALSE(kinked.dims.empty());
  const auto [dn, dj] = [&] {
    const auto a = base.dims.begin()->first, b = kinked.dims.begin()->first;
    return std::make_pair(b.first - a.first, b.second - a.second);
  }();
  PoincareTable shifted;
  for (const auto& [key, d] : base.dims) shifted.add(key.first + dn, key.second + dj, d);
  // compare on the range both complexes report reliably
  CHECK(shifted.through(2 + std::min(dn, 0)).dims == kinked.through(2 + std::min(dn, 0)).dims);
}

TEST_CASE("generic q never exceeds q = 1") {
  K k;
  ArcContext<K> ctx(k);
  for (const char* w : {"strands:2", "strands:2 x+:1", "strands:2 cup:1 cap:1", "strands:4 x+:2", "strands:2 cap:2 x+:1 x+:3 cup:2"}) {
    const auto word = parse_tangle_word(w);
    CHECK(pointwise_le(ctx.annular_qkh(word, k.q(), 3), ctx.annular_qkh(word, k.one(), 3)));
  }
}

TEST_CASE("annular_qkh preconditions") {
  RationalField Q;
  ArcContext<RationalField> ctx(Q);
  CHECK_THROWS_AS(ctx.annular_qkh(parse_tangle_word("strands:2 cap:1"), Q.one(), 3), PreconditionError);
  CHECK_THROWS_AS(ctx.annular_qkh(parse_tangle_word("strands:2"), Q.zero(), 3), PreconditionError);
}

TEST_CASE("tangle word parsing") {
  const auto w = parse_tangle_word("strands:4  x+:1 cup:2\tcap:1 x-:3");
  CHECK(w.strands == 4);
  CHECK(w.gens.size() == 4);
  CHECK(w.exit_strands() == 4);
  CHECK(w.closed());
  CHECK(w.format() == "strands:4 x+:1 cup:2 cap:1 x-:3");
  CHECK(w.gens[1].token == 3);
  CHECK(w.gens[1].column == 17);
  CHECK(parse_tangle_word("x+:1", 2).strands == 2);
  CHECK(parse_tangle_word("", 2).gens.empty());
  CHECK(parse_tangle_word("strands:0 cap:1 cup:1").closed());

  CHECK(parse_error("strands:2 x+:2") == "token 2 ('x+:2') at column 11: position out of range on 2 strands (allowed 1..1)");
  CHECK(parse_error("strands:2 y+:1") == "token 2 ('y+:1') at column 11: unknown generator 'y+' (expected cup, cap, x+, x-)");
  CHECK(parse_error("strands:3") == "token 1 ('strands:3') at column 1: strand count must be even and nonnegative");
  CHECK(parse_error("x+:1 strands:2") == "token 2 ('strands:2') at column 6: the strands header must be the first token");
  CHECK(parse_error("strands:2 cup") == "token 2 ('cup') at column 11: expected <name>:<integer>");
  CHECK(parse_error("strands:2 cup:a") == "token 2 ('cup:a') at column 11: expected an integer after ':'");
  CHECK(parse_error("strands:2 cup:0") == "token 2 ('cup:0') at column 11: positions are 1-based");
  CHECK(parse_error("x+:1") == "missing strand count (give a strands:<2n> header or --strands)");
  CHECK(parse_error("strands:2", 4) == "strand count 4 disagrees with the header strands:2");
  CHECK(parse_error("strands:2 cup:1 x+:1") == "token 3 ('x+:1') at column 17: position out of range on 0 strands (allowed 1..0)");
  // deterministic: same input, same message
  CHECK(parse_error("strands:2 cap:4") == parse_error("strands:2 cap:4"));
}

TEST_CASE("rotation and R2 helpers") {
  const auto w = parse_tangle_word("strands:2 cap:1 x+:2 cup:1");
  const auto r = w.rotated(1);
  CHECK(r.strands == 4);
  CHECK(r.format() == "strands:4 x+:2 cup:1 cap:1");
  CHECK(w.r2_positions(0) == std::vector<int>{1});
  CHECK(w.r2_positions(1) == std::vector<int>{1, 2, 3});
  CHECK(w.with_r2(1, 3).format() == "strands:2 cap:1 x+:3 x-:3 x+:2 cup:1");
}
