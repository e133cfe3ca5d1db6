#pragma once

// JSON documents for algebras, bimodules, coefficient complexes and Poincaré tables.
//
//   {"schema": "qhh.algebra/v1", "field": "Q",
//    "basis": [{"label": "1", "degree": 0}, ...],
//    "idempotents": [0, ...],
//    "products": [{"left": i, "right": j, "terms": [[k, c], ...]}, ...]}
//
//   {"schema": "qhh.bimodule/v1", "field": "Q", "basis": [...],
//    "left_action":  [{"algebra": a, "element": x, "terms": [[y, c], ...]}, ...],
//    "right_action": [{"element": x, "algebra": b, "terms": [[y, c], ...]}, ...]}
//
// Omitted products and actions are zero. Scalars c are written per field: a string "a/b"
// over Q, an integer in [0, p) over F_p, and {"num": [...], "den": [...]} over Q(q) with
// coefficient strings from low to high degree. A rational given as a string or integer is
// accepted in every field.
//
// The input of the custom mode is {"schema": "qhh.input/v1", "algebra": {...}} followed by
// either "bimodule": {...}, or "complex": {"lo": p, "terms": [bimodule, ...],
// "differentials": [[[row, col, c], ...], ...]} where differentials[k] maps terms[k+1] to
// terms[k]. With neither, the coefficients are the regular bimodule.

#include <string>

#include <json.hpp>

#include "qhh/algebra.hpp"
#include "qhh/complex.hpp"
#include "qhh/errors.hpp"

namespace qhh {

using Json = nlohmann::ordered_json;

inline constexpr const char* algebra_schema = "qhh.algebra/v1";
inline constexpr const char* bimodule_schema = "qhh.bimodule/v1";
inline constexpr const char* input_schema = "qhh.input/v1";

Json encode_scalar(const RationalField& f, const Rational& x);
Json encode_scalar(const PrimeField& f, const ModP& x);
Json encode_scalar(const RationalFunctionField& f, const RatFunc& x);
Rational decode_scalar(const RationalField& f, const Json& j);
ModP decode_scalar(const PrimeField& f, const Json& j);
RatFunc decode_scalar(const RationalFunctionField& f, const Json& j);

/// {"truncation": N, "complete_through": N-1, "entries": [{"n", "j", "dim"}, ...]}, entries sorted by (n, j).
Json table_to_json(const PoincareTable& t);
PoincareTable table_from_json(const Json& j);

/// Parses a document; throws ParseError with the parser's byte offset on malformed input.
Json parse_json(const std::string& text);

namespace detail {

[[noreturn]] inline void schema_error(const std::string& where, const std::string& what) {
  throw ParseError("malformed document at " + where + ": " + what);
}

inline const Json& member(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) schema_error(where, std::string("missing \"") + key + "\"");
  return j.at(key);
}

inline long index_in(const Json& j, std::size_t bound, const std::string& where) {
  if (!j.is_number_integer()) schema_error(where, "expected an integer index");
  const long v = j.get<long>();
  if (v < 0 || std::size_t(v) >= bound) schema_error(where, "index " + std::to_string(v) + " out of range 0.." + std::to_string(long(bound) - 1));
  return v;
}

inline void check_schema(const Json& j, const char* tag, const std::string& where) {
  const auto& s = member(j, "schema", where);
  if (!s.is_string() || s.get<std::string>() != tag) schema_error(where, std::string("expected schema \"") + tag + "\"");
}

inline Json basis_to_json(const Basis& b) {
  Json out = Json::array();
  for (std::size_t i = 0; i < b.size(); ++i) out.push_back({{"label", b.label(i)}, {"degree", b.degrees[i]}});
  return out;
}

inline Basis basis_from_json(const Json& j, const std::string& where) {
  if (!j.is_array()) schema_error(where, "basis must be an array");
  Basis b;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string w = where + "[" + std::to_string(i) + "]";
    const auto& d = member(j[i], "degree", w);
    if (!d.is_number_integer()) schema_error(w, "degree must be an integer");
    std::string label = "e" + std::to_string(i);
    if (j[i].contains("label")) {
      if (!j[i]["label"].is_string()) schema_error(w, "label must be a string");
      label = j[i]["label"].get<std::string>();
    }
    b.push(std::move(label), d.get<int>());
  }
  return b;
}

template <class F>
typename F::value_type decode_at(const F& f, const Json& j, const std::string& where) {
  try {
    return decode_scalar(f, j);
  } catch (const ParseError& e) {
    schema_error(where, e.what());
  }
}

template <class F>
Json terms_to_json(const F& f, const SparseVec<typename F::value_type>& v) {
  Json out = Json::array();
  for (const auto& [i, c] : v) out.push_back(Json::array({i, encode_scalar(f, c)}));
  return out;
}

template <class F>
SparseVec<typename F::value_type> terms_from_json(const F& f, const Json& j, std::size_t bound, const std::string& where) {
  if (!j.is_array()) schema_error(where, "terms must be an array of [index, scalar] pairs");
  SparseVec<typename F::value_type> v;
  for (std::size_t t = 0; t < j.size(); ++t) {
    const std::string w = where + "[" + std::to_string(t) + "]";
    if (!j[t].is_array() || j[t].size() != 2) schema_error(w, "expected [index, scalar]");
    v.emplace_back(int(index_in(j[t][0], bound, w)), decode_at(f, j[t][1], w));
  }
  return canonicalize(std::move(v));
}

}  // namespace detail

template <class F>
Json to_json(const GradedAlgebra<F>& a) {
  Json out;
  out["schema"] = algebra_schema;
  out["field"] = a.field().name();
  out["basis"] = detail::basis_to_json(a.basis());
  out["idempotents"] = a.idempotents();
  Json products = Json::array();
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j)
      if (!a.mult(i, j).empty()) products.push_back({{"left", i}, {"right", j}, {"terms", detail::terms_to_json(a.field(), a.mult(i, j))}});
  out["products"] = std::move(products);
  return out;
}

/// Reads and validates an algebra; structural failures throw PreconditionError.
template <class F>
AlgebraPtr<F> algebra_from_json(const F& field, const Json& j, const std::string& where = "algebra") {
  detail::check_schema(j, algebra_schema, where);
  Basis basis = detail::basis_from_json(detail::member(j, "basis", where), where + ".basis");
  const std::size_t n = basis.size();
  if (n == 0) detail::schema_error(where, "an algebra needs a nonempty basis");
  std::vector<int> idem;
  const auto& ji = detail::member(j, "idempotents", where);
  if (!ji.is_array()) detail::schema_error(where + ".idempotents", "expected an array");
  for (std::size_t k = 0; k < ji.size(); ++k) idem.push_back(int(detail::index_in(ji[k], n, where + ".idempotents[" + std::to_string(k) + "]")));
  std::vector<SparseVec<typename F::value_type>> mult(n * n);
  const auto& jp = detail::member(j, "products", where);
  if (!jp.is_array()) detail::schema_error(where + ".products", "expected an array");
  for (std::size_t k = 0; k < jp.size(); ++k) {
    const std::string w = where + ".products[" + std::to_string(k) + "]";
    const auto l = std::size_t(detail::index_in(detail::member(jp[k], "left", w), n, w + ".left"));
    const auto r = std::size_t(detail::index_in(detail::member(jp[k], "right", w), n, w + ".right"));
    mult[l * n + r] = detail::terms_from_json(field, detail::member(jp[k], "terms", w), n, w + ".terms");
  }
  return std::make_shared<const GradedAlgebra<F>>(field, std::move(basis), std::move(idem), std::move(mult));
}

template <class F>
Json to_json(const GradedBimodule<F>& m) {
  Json out;
  out["schema"] = bimodule_schema;
  out["field"] = m.field().name();
  out["basis"] = detail::basis_to_json(m.basis());
  Json la = Json::array(), ra = Json::array();
  for (std::size_t a = 0; a < m.left()->dim(); ++a)
    for (std::size_t x = 0; x < m.dim(); ++x)
      if (!m.act_left(a, x).empty()) la.push_back({{"algebra", a}, {"element", x}, {"terms", detail::terms_to_json(m.field(), m.act_left(a, x))}});
  for (std::size_t x = 0; x < m.dim(); ++x)
    for (std::size_t b = 0; b < m.right()->dim(); ++b)
      if (!m.act_right(x, b).empty()) ra.push_back({{"element", x}, {"algebra", b}, {"terms", detail::terms_to_json(m.field(), m.act_right(x, b))}});
  out["left_action"] = std::move(la);
  out["right_action"] = std::move(ra);
  return out;
}

template <class F>
BimodulePtr<F> bimodule_from_json(const AlgebraPtr<F>& left, const AlgebraPtr<F>& right, const Json& j, const std::string& where = "bimodule") {
  detail::check_schema(j, bimodule_schema, where);
  Basis basis = detail::basis_from_json(detail::member(j, "basis", where), where + ".basis");
  const std::size_t n = basis.size(), dl = left->dim(), dr = right->dim();
  std::vector<SparseVec<typename F::value_type>> la(dl * n), ra(n * dr);
  const auto& jl = detail::member(j, "left_action", where);
  const auto& jr = detail::member(j, "right_action", where);
  if (!jl.is_array() || !jr.is_array()) detail::schema_error(where, "actions must be arrays");
  for (std::size_t k = 0; k < jl.size(); ++k) {
    const std::string w = where + ".left_action[" + std::to_string(k) + "]";
    const auto a = std::size_t(detail::index_in(detail::member(jl[k], "algebra", w), dl, w + ".algebra"));
    const auto x = std::size_t(detail::index_in(detail::member(jl[k], "element", w), n, w + ".element"));
    la[a * n + x] = detail::terms_from_json(left->field(), detail::member(jl[k], "terms", w), n, w + ".terms");
  }
  for (std::size_t k = 0; k < jr.size(); ++k) {
    const std::string w = where + ".right_action[" + std::to_string(k) + "]";
    const auto x = std::size_t(detail::index_in(detail::member(jr[k], "element", w), n, w + ".element"));
    const auto b = std::size_t(detail::index_in(detail::member(jr[k], "algebra", w), dr, w + ".algebra"));
    ra[x * dr + b] = detail::terms_from_json(left->field(), detail::member(jr[k], "terms", w), n, w + ".terms");
  }
  return std::make_shared<const GradedBimodule<F>>(left, right, std::move(basis), std::move(la), std::move(ra));
}

template <class F>
Json to_json(const BimoduleComplex<F>& c) {
  Json terms = Json::array(), diffs = Json::array();
  for (int p = c.lo(); p <= c.hi(); ++p) terms.push_back(to_json(*c.term(p)));
  for (int p = c.lo() + 1; p <= c.hi(); ++p) {
    Json entries = Json::array();
    for (const auto& [col, v] : c.d(p).nonzero_columns())
      for (const auto& [row, x] : v) entries.push_back(Json::array({row, col, encode_scalar(c.field(), x)}));
    diffs.push_back(std::move(entries));
  }
  return Json{{"lo", c.lo()}, {"terms", std::move(terms)}, {"differentials", std::move(diffs)}};
}

template <class F>
BimoduleComplex<F> complex_from_json(const AlgebraPtr<F>& a, const Json& j, const std::string& where = "complex") {
  const auto& jlo = detail::member(j, "lo", where);
  if (!jlo.is_number_integer()) detail::schema_error(where + ".lo", "expected an integer");
  const auto& jt = detail::member(j, "terms", where);
  if (!jt.is_array() || jt.empty()) detail::schema_error(where + ".terms", "expected a nonempty array");
  std::vector<BimodulePtr<F>> terms;
  for (std::size_t k = 0; k < jt.size(); ++k) terms.push_back(bimodule_from_json(a, a, jt[k], where + ".terms[" + std::to_string(k) + "]"));
  std::vector<SparseMatrix<typename F::value_type>> diffs;
  const Json none = Json::array();
  const auto& jd = j.contains("differentials") ? j.at("differentials") : none;
  if (!jd.is_array() || jd.size() + 1 != terms.size())
    detail::schema_error(where + ".differentials", "expected one differential between each pair of adjacent terms");
  for (std::size_t k = 0; k < jd.size(); ++k) {
    const std::string w = where + ".differentials[" + std::to_string(k) + "]";
    const std::size_t rows = terms[k]->dim(), cols = terms[k + 1]->dim();
    std::vector<SparseVec<typename F::value_type>> columns(cols);
    if (!jd[k].is_array()) detail::schema_error(w, "expected an array of [row, col, scalar]");
    for (std::size_t e = 0; e < jd[k].size(); ++e) {
      const std::string we = w + "[" + std::to_string(e) + "]";
      const auto& t = jd[k][e];
      if (!t.is_array() || t.size() != 3) detail::schema_error(we, "expected [row, col, scalar]");
      const int r = int(detail::index_in(t[0], rows, we));
      const auto c = std::size_t(detail::index_in(t[1], cols, we));
      columns[c].emplace_back(r, detail::decode_at(a->field(), t[2], we));
    }
    SparseMatrix<typename F::value_type> d(rows, cols);
    for (std::size_t c = 0; c < cols; ++c) d.set_column(c, canonicalize(std::move(columns[c])));
    diffs.push_back(std::move(d));
  }
  return BimoduleComplex<F>(jlo.get<int>(), std::move(terms), std::move(diffs));
}

/// An algebra with its coefficient complex, read from a custom-mode input document.
template <class F>
struct CustomInput {
  AlgebraPtr<F> algebra;
  BimoduleComplex<F> coefficients;
};

template <class F>
CustomInput<F> custom_input_from_json(const F& field, const Json& j) {
  detail::check_schema(j, input_schema, "input");
  auto a = algebra_from_json(field, detail::member(j, "algebra", "input"), "algebra");
  if (j.contains("bimodule") && j.contains("complex")) detail::schema_error("input", "give either \"bimodule\" or \"complex\", not both");
  if (j.contains("bimodule")) return {a, BimoduleComplex<F>::single(bimodule_from_json(a, a, j.at("bimodule")))};
  if (j.contains("complex")) return {a, complex_from_json(a, j.at("complex"))};
  return {a, BimoduleComplex<F>::single(regular_bimodule(a))};
}

}  // namespace qhh
