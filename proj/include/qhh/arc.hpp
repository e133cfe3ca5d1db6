#pragma once

// Khovanov arc algebras H^n and the bimodules of flat tangles, crossings and tangle words.
//
// Conventions (all enforced by degree-0 checks on every action and differential):
//  * The Frobenius algebra V = k[X]/(X^2) has deg 1 = +1, deg X = -1; a saddle has degree -1.
//  * The basis of F(t), for a flat tangle t from 2m bottom to 2n top points, is the set of
//    labellings of the circles of [cups(a), t, caps(b)] for matchings a of 2m and b of 2n,
//    with internal degree (sum of label degrees) - n. H^n = F(id_{2n}), so H^1 has the
//    gradings {0, -2} of the dual numbers with deg X = -2.
//  * H^n acts on F(t) on the left (top) and H^m on the right (bottom), both by contracting
//    the middle [caps(b) cups(b)] with saddles.
//  * Crossings, with d lowering homological degree:
//      x+ :  F(id) in degree 0  ->  F(turnback){+1} in degree -1
//      x- :  F(turnback){-1} in degree 1  ->  F(id) in degree 0
//    where {s} raises every internal degree by s and the differential is the saddle.
//  * A word g_1 ... g_k (bottom to top) has complex C(g_k) ⊗ ... ⊗ C(g_1), folded stepwise.

#include <bit>
#include <map>
#include <memory>
#include <string>
#include <tuple>

#include "qhh/algebra.hpp"
#include "qhh/hochschild.hpp"
#include "qhh/planar.hpp"
#include "qhh/tangle_word.hpp"

namespace qhh {

namespace detail {

/// Sector layout of F(t): sectors (top matching b, bottom matching a), indexed b * |B^m| + a.
struct FlatLayout {
  planar::FlatTangle tangle;
  std::vector<planar::Matching> top, bottom;
  std::vector<int> circles;
  std::vector<std::size_t> offset;
  std::size_t dim = 0;

  explicit FlatLayout(planar::FlatTangle t) : tangle(std::move(t)) {
    if (!tangle.is_valid()) throw PreconditionError("invalid flat tangle " + tangle.format());
    top = planar::matchings(tangle.top / 2);
    bottom = planar::matchings(tangle.bottom / 2);
    for (std::size_t b = 0; b < top.size(); ++b)
      for (std::size_t a = 0; a < bottom.size(); ++a) {
        const int c = planar::circle_count(bottom[a], tangle, top[b]);
        if (c > 62) throw PreconditionError("too many circles in a flat tangle closure");
        circles.push_back(c);
        offset.push_back(dim);
        dim += std::size_t(1) << c;
      }
  }
  std::size_t sector(std::size_t b, std::size_t a) const { return b * bottom.size() + a; }
  std::size_t index(std::size_t b, std::size_t a, std::uint64_t state) const { return offset[sector(b, a)] + state; }
  planar::Stack stack(std::size_t b, std::size_t a) const {
    return planar::Stack{{planar::FlatTangle::cups(bottom[a]), tangle, planar::FlatTangle::caps(top[b])}};
  }
  int degree(std::size_t b, std::size_t a, std::uint64_t state) const {
    const int c = circles[sector(b, a)];
    return c - 2 * std::popcount(state) - tangle.top / 2;
  }
  std::string label(std::size_t b, std::size_t a, std::uint64_t state) const {
    std::string s = top[b].format() + "|" + bottom[a].format() + ":";
    const int c = circles[sector(b, a)];
    for (int k = 0; k < c; ++k) s += (state >> k & 1u) ? 'X' : '1';
    return s;
  }
  Basis basis() const {
    Basis out;
    for (std::size_t b = 0; b < top.size(); ++b)
      for (std::size_t a = 0; a < bottom.size(); ++a)
        for (std::uint64_t s = 0; s < (std::uint64_t(1) << circles[sector(b, a)]); ++s) out.push(label(b, a, s), degree(b, a, s));
    return out;
  }
};

inline bool same_layers(const planar::Stack& x, const planar::Stack& y) { return x.layers == y.layers; }

template <class F>
SparseVec<typename F::value_type> to_vector(const F& field, const planar::StateComb& comb, std::size_t base) {
  SparseVec<typename F::value_type> v;
  for (const auto& [bits, c] : comb) v.emplace_back(int(base + bits), field.from_int(c));
  return canonicalize(std::move(v));
}

}  // namespace detail

/// Arc algebras, flat bimodules and crossing complexes over one field, built once and shared.
template <class F>
class ArcContext {
 public:
  using T = typename F::value_type;

  explicit ArcContext(F field) : field_(std::move(field)) {}
  const F& field() const { return field_; }

  /// H^n (n >= 0; H^0 is the ground field).
  AlgebraPtr<F> algebra(int n) {
    if (n < 0) throw PreconditionError("arc algebra index must be nonnegative");
    auto it = algebras_.find(n);
    if (it != algebras_.end()) return it->second;
    const detail::FlatLayout L(planar::FlatTangle::identity(2 * n));
    const std::size_t M = L.top.size(), dim = L.dim;
    std::vector<SparseVec<T>> mult(dim * dim);
    // x in sector (c, b) on top of y in sector (b, a)
    for (std::size_t c = 0; c < M; ++c)
      for (std::size_t b = 0; b < M; ++b)
        for (std::size_t a = 0; a < M; ++a) {
          const auto plan = planar::contraction_plan(L.stack(b, a), L.stack(c, b));
          if (!detail::same_layers(plan.result, L.stack(c, a))) throw InternalError("arc algebra product landed outside the canonical stack");
          const std::uint64_t nx = std::uint64_t(1) << L.circles[L.sector(c, b)], ny = std::uint64_t(1) << L.circles[L.sector(b, a)];
          for (std::uint64_t sx = 0; sx < nx; ++sx)
            for (std::uint64_t sy = 0; sy < ny; ++sy)
              mult[L.index(c, b, sx) * dim + L.index(b, a, sy)] = detail::to_vector(field_, planar::contract(plan, sy, sx), L.offset[L.sector(c, a)]);
        }
    std::vector<int> idempotents;
    for (std::size_t a = 0; a < M; ++a) idempotents.push_back(int(L.index(a, a, 0)));
    auto alg = std::make_shared<const GradedAlgebra<F>>(field_, L.basis(), std::move(idempotents), std::move(mult));
    algebras_.emplace(n, alg);
    return alg;
  }

  /// F(t) as an (H^{top/2}, H^{bottom/2})-bimodule.
  BimodulePtr<F> flat(const planar::FlatTangle& t) {
    const auto key = std::make_tuple(t.bottom, t.top, t.partner, t.circles);
    auto it = flats_.find(key);
    if (it != flats_.end()) return it->second;
    const detail::FlatLayout L(t);
    const int n = t.top / 2, m = t.bottom / 2;
    const auto left = algebra(n), right = algebra(m);
    const detail::FlatLayout HL(planar::FlatTangle::identity(2 * n)), HR(planar::FlatTangle::identity(2 * m));
    const std::size_t dim = L.dim;
    std::vector<SparseVec<T>> la(left->dim() * dim), ra(dim * right->dim());
    // left: algebra element in sector (c, b) above module element in sector (b, a)
    for (std::size_t c = 0; c < L.top.size(); ++c)
      for (std::size_t b = 0; b < L.top.size(); ++b)
        for (std::size_t a = 0; a < L.bottom.size(); ++a) {
          const auto plan = planar::contraction_plan(L.stack(b, a), HL.stack(c, b));
          if (!detail::same_layers(plan.result, L.stack(c, a))) throw InternalError("left action landed outside the canonical stack");
          for (std::uint64_t sx = 0; sx < (std::uint64_t(1) << HL.circles[HL.sector(c, b)]); ++sx)
            for (std::uint64_t sy = 0; sy < (std::uint64_t(1) << L.circles[L.sector(b, a)]); ++sy)
              la[HL.index(c, b, sx) * dim + L.index(b, a, sy)] = detail::to_vector(field_, planar::contract(plan, sy, sx), L.offset[L.sector(c, a)]);
        }
    // right: module element in sector (b, a) above algebra element in sector (a, d)
    for (std::size_t b = 0; b < L.top.size(); ++b)
      for (std::size_t a = 0; a < L.bottom.size(); ++a)
        for (std::size_t d = 0; d < L.bottom.size(); ++d) {
          const auto plan = planar::contraction_plan(HR.stack(a, d), L.stack(b, a));
          if (!detail::same_layers(plan.result, L.stack(b, d))) throw InternalError("right action landed outside the canonical stack");
          for (std::uint64_t sx = 0; sx < (std::uint64_t(1) << L.circles[L.sector(b, a)]); ++sx)
            for (std::uint64_t sz = 0; sz < (std::uint64_t(1) << HR.circles[HR.sector(a, d)]); ++sz)
              ra[L.index(b, a, sx) * right->dim() + HR.index(a, d, sz)] =
                  detail::to_vector(field_, planar::contract(plan, sz, sx), L.offset[L.sector(b, d)]);
        }
    auto mod = std::make_shared<const GradedBimodule<F>>(left, right, L.basis(), std::move(la), std::move(ra));
    flats_.emplace(key, mod);
    return mod;
  }

  /// Saddle map F(source) -> F(target) at a pair of endpoints of the middle layer, sector by sector.
  SparseMatrix<T> saddle_map(const planar::FlatTangle& source, const planar::FlatTangle& target, int e1, int e2) {
    const detail::FlatLayout S(source), Tg(target);
    SparseMatrix<T> out(Tg.dim, S.dim);
    for (std::size_t b = 0; b < S.top.size(); ++b)
      for (std::size_t a = 0; a < S.bottom.size(); ++a) {
        planar::Stack st = S.stack(b, a);
        const auto step = planar::saddle(st, 1, e1, e2);
        if (!detail::same_layers(st, Tg.stack(b, a))) throw InternalError("saddle did not produce the target tangle");
        for (std::uint64_t s = 0; s < (std::uint64_t(1) << S.circles[S.sector(b, a)]); ++s)
          out.set_column(S.index(b, a, s), detail::to_vector(field_, planar::apply_step(step, planar::StateComb{std::make_pair(s, 1LL)}), Tg.offset[Tg.sector(b, a)]));
      }
    return out;
  }

  /// Two-term complex of the crossing of strands i, i+1 on k strands.
  BimoduleComplex<F> crossing(int k, int i, bool positive) {
    if (k < 2 || i < 1 || i > k - 1) throw PreconditionError("crossing position " + std::to_string(i) + " out of range on " + std::to_string(k) + " strands");
    const auto id = planar::FlatTangle::identity(k);
    const auto tb = planar::FlatTangle::turnback(k, i);
    if (positive) {
      auto d = saddle_map(id, tb, i - 1, i);
      return BimoduleComplex<F>(-1, {shift(flat(tb), 1), flat(id)}, {std::move(d)});
    }
    auto d = saddle_map(tb, id, i - 1, k + i - 1);
    return BimoduleComplex<F>(0, {flat(id), shift(flat(tb), -1)}, {std::move(d)});
  }

  /// Complex of a single generator acting on k strands.
  BimoduleComplex<F> generator(const Generator& g, int k) {
    switch (g.kind) {
      case Generator::Kind::cup:
        return BimoduleComplex<F>::single(flat(planar::FlatTangle::cup(k, g.pos)));
      case Generator::Kind::cap:
        return BimoduleComplex<F>::single(flat(planar::FlatTangle::cap(k, g.pos)));
      case Generator::Kind::xpos:
        return crossing(k, g.pos, true);
      case Generator::Kind::xneg:
      default:
        return crossing(k, g.pos, false);
    }
  }

  /// C(w) as a complex of (H^{exit/2}, H^{entry/2})-bimodules.
  BimoduleComplex<F> tangle(const TangleWord& w) {
    validate(w);
    if (w.gens.empty()) return BimoduleComplex<F>::single(flat(planar::FlatTangle::identity(w.strands)));
    int k = w.strands;
    std::optional<BimoduleComplex<F>> acc;
    for (const auto& g : w.gens) {
      auto c = generator(g, k);
      acc = acc ? tensor_complexes(c, *acc) : std::move(c);
      k = w.strands_after(std::size_t(&g - w.gens.data()) + 1);
    }
    return std::move(*acc);
  }

  /// qHH of H^n with coefficients C(w) for a closed word on 2n strands.
  PoincareTable annular_qkh(const TangleWord& w, const T& q, int max_degree) {
    if (!w.closed())
      throw PreconditionError("open tangle word: " + std::to_string(w.strands) + " strands at entry, " + std::to_string(w.exit_strands()) + " at exit");
    if (is_zero(q)) throw PreconditionError("q must be invertible");
    const auto c = tangle(w);
    return qhh(HochschildSpec<F>{algebra(w.strands / 2), c, q, max_degree});
  }

 private:
  F field_;
  std::map<int, AlgebraPtr<F>> algebras_;
  std::map<std::tuple<int, int, std::vector<int>, int>, BimodulePtr<F>> flats_;
};

template <class F>
AlgebraPtr<F> arc_algebra(int n, const F& field) {
  return ArcContext<F>(field).algebra(n);
}

}  // namespace qhh
