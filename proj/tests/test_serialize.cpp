#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qhh/arc.hpp"
#include "qhh/serialize.hpp"

using namespace qhh;

namespace {

std::string error_of(auto&& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("scalars") {
  RationalField Q;
  CHECK(encode_scalar(Q, Rational(-3, 4)) == Json("-3/4"));
  CHECK(decode_scalar(Q, Json("6/8")) == Rational(3, 4));
  CHECK(decode_scalar(Q, Json(5)) == Rational(5));
  CHECK_THROWS_AS(decode_scalar(Q, Json("x")), ParseError);
  CHECK_THROWS_AS(decode_scalar(Q, Json::array()), ParseError);

  PrimeField F5(5);
  CHECK(encode_scalar(F5, F5.from_int(7)) == Json(2));
  CHECK(decode_scalar(F5, Json(-1)) == F5.from_int(4));
  CHECK(decode_scalar(F5, Json("1/2")) == F5.from_int(3));
  CHECK_THROWS_AS(decode_scalar(F5, Json("1/5")), PreconditionError);

  RationalFunctionField K;
  const auto q = K.q();
  const auto x = (K.one() - q * q) / (q + K.from_int(2));
  const auto j = encode_scalar(K, x);
  CHECK(j == Json::parse(R"({"num": ["1", "0", "-1"], "den": ["2", "1"]})"));
  CHECK(decode_scalar(K, j) == x);
  CHECK(decode_scalar(K, Json("1/3")) == K.from_fraction(1, 3));
  CHECK(decode_scalar(K, Json::parse(R"({"num": [0, 2], "den": [0, 4]})")) == K.from_fraction(1, 2));
  CHECK_THROWS_AS(decode_scalar(K, Json::parse(R"({"num": [1], "den": []})")), ParseError);
}

TEST_CASE("algebra and bimodule round trips") {
  RationalFunctionField K;
  ArcContext<RationalFunctionField> ctx(K);
  const auto H2 = ctx.algebra(2);
  const auto j = to_json(*H2);
  CHECK(j["schema"] == "qhh.algebra/v1");
  CHECK(j["field"] == "Qq");
  CHECK(j["basis"].size() == 12);
  const auto back = algebra_from_json(K, j);
  CHECK(*back == *H2);
  CHECK(back->basis() == H2->basis());
  // the text form is stable
  CHECK(to_json(*back).dump() == j.dump());

  const auto tb = twist_left(ctx.flat(planar::FlatTangle::turnback(4, 1)), K.q());
  const auto jb = to_json(*tb);
  CHECK(jb["schema"] == "qhh.bimodule/v1");
  const auto mb = bimodule_from_json(H2, H2, jb);
  CHECK(mb->left_table() == tb->left_table());
  CHECK(mb->right_table() == tb->right_table());
  CHECK(mb->basis() == tb->basis());

  const auto c = ctx.tangle(parse_tangle_word("strands:4 x+:2"));
  const auto cb = complex_from_json(H2, to_json(c));
  CHECK(cb.lo() == c.lo());
  CHECK(cb.hi() == c.hi());
  CHECK(cb.d(0) == c.d(0));
}

TEST_CASE("custom input documents") {
  RationalField Q;
  const auto A = dual_numbers(Q);
  Json doc{{"schema", input_schema}, {"algebra", to_json(*A)}};
  const auto in = custom_input_from_json(Q, doc);
  CHECK(in.coefficients.term(0)->left_table() == regular_bimodule(A)->left_table());
  doc["bimodule"] = to_json(*shift(regular_bimodule(A), 2));
  CHECK(custom_input_from_json(Q, doc).coefficients.term(0)->degree(0) == 2);

  // the same rational document read in F_2
  PrimeField F2(2);
  const auto a2 = algebra_from_json(F2, doc["algebra"]);
  CHECK(check_algebra(*a2).ok());

  // structural failures are preconditions, format failures are parse errors
  Json bad = doc;
  bad["algebra"]["products"][0]["terms"][0][1] = "2";  // 1·1 = 2
  CHECK_THROWS_AS(custom_input_from_json(Q, bad), PreconditionError);
  bad = doc;
  bad["algebra"]["schema"] = "qhh.algebra/v0";
  CHECK(error_of([&] { custom_input_from_json(Q, bad); }) == "malformed document at algebra: expected schema \"qhh.algebra/v1\"");
  bad = doc;
  bad["algebra"]["products"][1]["right"] = 7;
  CHECK(error_of([&] { custom_input_from_json(Q, bad); }) == "malformed document at algebra.products[1].right: index 7 out of range 0..1");
  bad = doc;
  bad["bimodule"]["left_action"][0]["terms"][0][1] = "one";
  CHECK(error_of([&] { custom_input_from_json(Q, bad); }).find("bimodule.left_action[0].terms[0]") != std::string::npos);
  bad = doc;
  bad["complex"] = Json::object();
  CHECK_THROWS_AS(custom_input_from_json(Q, bad), ParseError);

  // a complex whose differential squares to a nonzero map
  const auto R = regular_bimodule(A);
  Json id = Json::array({Json::array({0, 0, "1"}), Json::array({1, 1, "1"})});
  Json cx{{"schema", input_schema},
          {"algebra", to_json(*A)},
          {"complex", {{"lo", 0}, {"terms", Json::array({to_json(*R), to_json(*R), to_json(*R)})}, {"differentials", Json::array({id, id})}}}};
  CHECK_THROWS_AS(custom_input_from_json(Q, cx), InternalError);
  cx["complex"]["differentials"] = Json::array({id});
  CHECK_THROWS_AS(custom_input_from_json(Q, cx), ParseError);
}

TEST_CASE("tables") {
  PoincareTable t;
  t.add(0, 0, 2);
  t.add(1, -2, 1);
  t.add(-1, 3, 4);
  t.truncation = 3;
  t.complete_through = 2;
  const auto j = table_to_json(t);
  CHECK(j.dump() ==
        R"({"truncation":3,"complete_through":2,"entries":[{"n":-1,"j":3,"dim":4},{"n":0,"j":0,"dim":2},{"n":1,"j":-2,"dim":1}]})");
  CHECK(table_from_json(j) == t);
  CHECK(error_of([] { parse_json("{\"a\": [1, 2"); }).rfind("malformed JSON at byte ", 0) == 0);
}
