#pragma once

// Self-checks of the three structural claims the engine relies on, over a fixed family of
// algebras and coefficients:
//   twist-isomorphism  the directly deformed complex equals the complex of f_q M
//   central-swap       M ⊗_A f_qA -> f_qA ⊗_A M is a bimodule isomorphism, diag q^{-|x|} on M
//   trace-property     qHH(A; M ⊗_A N) = qHH(A; N ⊗_A M) through the truncation edge

#include <string>
#include <vector>

#include "qhh/arc.hpp"
#include "qhh/hochschild.hpp"

namespace qhh {

struct CaseResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct ClaimResult {
  std::string claim;
  std::vector<CaseResult> cases;
  bool pass() const {
    for (const auto& c : cases)
      if (!c.pass) return false;
    return !cases.empty();
  }
  std::size_t passed() const {
    std::size_t n = 0;
    for (const auto& c : cases) n += c.pass;
    return n;
  }
};

template <class F>
struct NamedSpec {
  std::string name;
  HochschildSpec<F> spec;
};

/// Dual numbers, H^1 and H^2 with regular, flat and crossing coefficients. H^2 specs use
/// at most degree min(N, 4) to keep the family desk-sized.
template <class F>
std::vector<NamedSpec<F>> claim_family(ArcContext<F>& ctx, const typename F::value_type& q, int N) {
  using C = BimoduleComplex<F>;
  const auto D = dual_numbers(ctx.field());
  const auto H1 = ctx.algebra(1), H2 = ctx.algebra(2);
  const int n2 = std::min(N, 4);
  return {
      {"dual numbers, regular", {D, C::single(regular_bimodule(D)), q, N}},
      {"H1, regular", {H1, C::single(regular_bimodule(H1)), q, N}},
      {"H1, turnback", {H1, C::single(ctx.flat(planar::FlatTangle::turnback(2, 1))), q, N}},
      {"H1, R2 complex x+:1 x-:1", {H1, ctx.tangle(parse_tangle_word("x+:1 x-:1", 2)), q, N}},
      {"H2, regular", {H2, C::single(regular_bimodule(H2)), q, n2}},
      {"H2, turnback at 2", {H2, C::single(ctx.flat(planar::FlatTangle::turnback(4, 2))), q, n2}},
      {"H2, R2 complex x-:1 x+:1", {H2, ctx.tangle(parse_tangle_word("x-:1 x+:1", 4)), q, std::min(N, 3)}},
  };
}

template <class F>
ClaimResult check_twist_isomorphism(const std::vector<NamedSpec<F>>& family) {
  ClaimResult r{"twist-isomorphism", {}};
  for (const auto& s : family) r.cases.push_back({s.name, verify_twist_iso(s.spec), ""});
  return r;
}

/// central_swap on every term of the coefficients; each must be diag q^{-|x|} and commute with d.
template <class F>
ClaimResult check_central_swap(const std::vector<NamedSpec<F>>& family) {
  using T = typename F::value_type;
  ClaimResult r{"central-swap", {}};
  for (const auto& s : family) {
    const auto& C = s.spec.coefficients;
    const F& field = C.field();
    QPowers<F> qp(field, s.spec.q);
    CaseResult c{s.name, true, ""};
    std::vector<SparseMatrix<T>> swaps;
    for (int p = C.lo(); p <= C.hi() && c.pass; ++p) {
      const auto& M = C.term(p);
      try {
        auto sw = central_swap(M, s.spec.q);
        SparseMatrix<T> diag(M->dim(), M->dim());
        for (std::size_t x = 0; x < M->dim(); ++x) diag.set_column(x, {{int(x), qp(-M->degree(x))}});
        if (!(sw.on_underlying == diag)) {
          c.pass = false;
          c.detail = "not diag(q^{-|x|}) in degree " + std::to_string(p);
        }
        swaps.push_back(std::move(sw.on_underlying));
      } catch (const InternalError& e) {
        c.pass = false;
        c.detail = e.what();
      }
    }
    for (int p = C.lo() + 1; p <= C.hi() && c.pass; ++p) {
      const auto& d = C.d(p);
      if (!(swaps[std::size_t(p - 1 - C.lo())] * d == d * swaps[std::size_t(p - C.lo())])) {
        c.pass = false;
        c.detail = "does not commute with d_" + std::to_string(p);
      }
    }
    r.cases.push_back(std::move(c));
  }
  return r;
}

/// Ordered pairs from {identity, turnback} over H^1 and from three flat bimodules over H^2.
template <class F>
ClaimResult check_trace_property(ArcContext<F>& ctx, const typename F::value_type& q, int N) {
  ClaimResult r{"trace-property", {}};
  using planar::FlatTangle;
  const auto H1 = ctx.algebra(1), H2 = ctx.algebra(2);
  const std::vector<std::pair<std::string, BimodulePtr<F>>> over1{{"id", ctx.flat(FlatTangle::identity(2))},
                                                                  {"turnback", ctx.flat(FlatTangle::turnback(2, 1))}};
  const std::vector<std::pair<std::string, BimodulePtr<F>>> over2{{"id", ctx.flat(FlatTangle::identity(4))},
                                                                  {"turnback1", ctx.flat(FlatTangle::turnback(4, 1))},
                                                                  {"turnback2", ctx.flat(FlatTangle::turnback(4, 2))}};
  for (const auto& [na, a] : over1)
    for (const auto& [nb, b] : over1) r.cases.push_back({"H1: " + na + ", " + nb, trace_check(H1, a, b, q, N), ""});
  for (const auto& [na, a] : over2)
    for (const auto& [nb, b] : over2) r.cases.push_back({"H2: " + na + ", " + nb, trace_check(H2, a, b, q, std::min(N, 3)), ""});
  return r;
}

template <class F>
std::vector<ClaimResult> verify_claims(const F& field, const typename F::value_type& q, int N) {
  ArcContext<F> ctx(field);
  const auto family = claim_family(ctx, q, N);
  return {check_twist_isomorphism(family), check_central_swap(family), check_trace_property(ctx, q, N)};
}

}  // namespace qhh
