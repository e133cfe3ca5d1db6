#include "qhh/serialize.hpp"

namespace qhh {

namespace {

Rational rational_of(const Json& j) {
  if (j.is_number_integer()) return Rational(mpz_class(std::to_string(j.get<long long>())));
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw ParseError("expected a rational scalar (integer or \"a/b\" string)");
}

Polynomial polynomial_of(const Json& j) {
  if (!j.is_array()) throw ParseError("polynomial coefficients must be an array, low degree first");
  Polynomial p;
  for (std::size_t k = 0; k < j.size(); ++k) p = p + Polynomial::monomial(rational_of(j[k]), k);
  return p;
}

Json coefficients(const Polynomial& p) {
  Json out = Json::array();
  for (const auto& c : p.coeffs()) out.push_back(format_rational(c));
  return out;
}

}  // namespace

Json encode_scalar(const RationalField&, const Rational& x) { return format_rational(x); }
Json encode_scalar(const PrimeField&, const ModP& x) { return x.value(); }
Json encode_scalar(const RationalFunctionField&, const RatFunc& x) { return Json{{"num", coefficients(x.num())}, {"den", coefficients(x.den())}}; }

Rational decode_scalar(const RationalField&, const Json& j) { return rational_of(j); }

ModP decode_scalar(const PrimeField& f, const Json& j) {
  const Rational r = rational_of(j);
  return f.from_fraction(r.get_num(), r.get_den());
}

RatFunc decode_scalar(const RationalFunctionField&, const Json& j) {
  if (!j.is_object()) return RatFunc(rational_of(j));
  if (!j.contains("num")) throw ParseError("rational function needs \"num\"");
  const Polynomial num = polynomial_of(j.at("num"));
  const Polynomial den = j.contains("den") ? polynomial_of(j.at("den")) : Polynomial(Rational(1));
  if (den.is_zero()) throw ParseError("rational function with zero denominator");
  return RatFunc(num, den);
}

Json table_to_json(const PoincareTable& t) {
  Json out;
  out["truncation"] = t.truncation ? Json(*t.truncation) : Json(nullptr);
  out["complete_through"] = t.complete_through ? Json(*t.complete_through) : Json(nullptr);
  Json entries = Json::array();
  for (const auto& [k, d] : t.dims) entries.push_back({{"n", k.first}, {"j", k.second}, {"dim", d}});
  out["entries"] = std::move(entries);
  return out;
}

PoincareTable table_from_json(const Json& j) {
  PoincareTable t;
  const auto& e = detail::member(j, "entries", "table");
  if (!e.is_array()) detail::schema_error("table.entries", "expected an array");
  if (j.contains("truncation") && !j["truncation"].is_null()) t.truncation = j["truncation"].get<int>();
  if (j.contains("complete_through") && !j["complete_through"].is_null()) t.complete_through = j["complete_through"].get<int>();
  for (std::size_t k = 0; k < e.size(); ++k) {
    const std::string w = "table.entries[" + std::to_string(k) + "]";
    const auto& n = detail::member(e[k], "n", w);
    const auto& jj = detail::member(e[k], "j", w);
    const auto& d = detail::member(e[k], "dim", w);
    if (!n.is_number_integer() || !jj.is_number_integer() || !d.is_number_unsigned()) detail::schema_error(w, "expected integers");
    t.add(n.get<int>(), jj.get<int>(), d.get<std::size_t>());
  }
  return t;
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError("malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

}  // namespace qhh
