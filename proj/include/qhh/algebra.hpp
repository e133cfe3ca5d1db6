#pragma once

// Graded algebras with a complete set of orthogonal idempotents, graded bimodules,
// bimodule maps and bounded complexes of bimodules.
//
// Every basis element is required to be sector-homogeneous: e x e' = x for exactly
// one pair of idempotents (e, e'). Structure constants are stored per pair of basis
// elements as sparse vectors; products of basis elements in mismatched sectors are zero.

#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qhh/complex.hpp"
#include "qhh/errors.hpp"
#include "qhh/field.hpp"
#include "qhh/sparse.hpp"

namespace qhh {

struct ValidationReport {
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }
  void fail(std::string what) { failures.push_back(std::move(what)); }
  std::string summary(std::size_t max_lines = 8) const {
    std::ostringstream os;
    for (std::size_t i = 0; i < failures.size() && i < max_lines; ++i) os << (i ? "; " : "") << failures[i];
    if (failures.size() > max_lines) os << "; ... (" << failures.size() << " failures)";
    return os.str();
  }
};

namespace detail {

template <class T>
bool vec_equal(const SparseVec<T>& a, const SparseVec<T>& b) {
  return a == b;
}

/// Σ_i c_i * table(i, j) for a sparse combination on the left of a fixed basis element.
template <class T, class Lookup>
SparseVec<T> expand(const SparseVec<T>& v, Lookup&& lookup) {
  SparseVec<T> acc;
  for (const auto& [i, c] : v) {
    const SparseVec<T>& img = lookup(i);
    for (const auto& [k, x] : img) acc.emplace_back(k, c * x);
  }
  return canonicalize(std::move(acc));
}

}  // namespace detail

template <class F>
class GradedAlgebra {
 public:
  using T = typename F::value_type;

  /// Validates eagerly; throws PreconditionError listing the violated axioms.
  GradedAlgebra(F field, Basis basis, std::vector<int> idempotents, std::vector<SparseVec<T>> mult)
      : GradedAlgebra(std::move(field), std::move(basis), std::move(idempotents), std::move(mult), Unchecked{}) {
    const auto report = check();
    if (!report.ok()) throw PreconditionError("invalid graded algebra: " + report.summary());
  }

  /// No validation; for exercising check_algebra on broken data.
  static GradedAlgebra unchecked(F field, Basis basis, std::vector<int> idempotents, std::vector<SparseVec<T>> mult) {
    return GradedAlgebra(std::move(field), std::move(basis), std::move(idempotents), std::move(mult), Unchecked{});
  }

  const F& field() const { return field_; }
  const Basis& basis() const { return basis_; }
  std::size_t dim() const { return basis_.size(); }
  int degree(std::size_t i) const { return basis_.degrees[i]; }
  const std::vector<int>& idempotents() const { return idempotents_; }
  std::size_t sectors() const { return idempotents_.size(); }
  /// Index (into idempotents()) of e with e·x = x, or -1 if x is not sector-homogeneous.
  int left_sector(std::size_t i) const { return lsec_[i]; }
  int right_sector(std::size_t i) const { return rsec_[i]; }
  bool is_idempotent(std::size_t i) const { return idem_slot_[i] >= 0; }
  /// Basis elements whose left sector is s.
  const std::vector<int>& with_left_sector(int s) const { return by_left_[std::size_t(s)]; }
  const std::vector<int>& with_right_sector(int s) const { return by_right_[std::size_t(s)]; }

  const SparseVec<T>& mult(std::size_t i, std::size_t j) const { return mult_[i * dim() + j]; }
  SparseVec<T> multiply(const SparseVec<T>& a, const SparseVec<T>& b) const {
    SparseVec<T> acc;
    for (const auto& [i, x] : a)
      for (const auto& [j, y] : b)
        for (const auto& [k, z] : mult(std::size_t(i), std::size_t(j))) acc.emplace_back(k, x * y * z);
    return canonicalize(std::move(acc));
  }
  SparseVec<T> unit() const {
    SparseVec<T> u;
    for (int e : idempotents_) u.emplace_back(e, field_.one());
    return canonicalize(std::move(u));
  }

  /// Every violated axiom: degree, associativity, unit, idempotents, sector homogeneity.
  ValidationReport check() const {
    ValidationReport r;
    const std::size_t n = dim();
    if (mult_.size() != n * n) {
      r.fail("multiplication table has the wrong size");
      return r;
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (const auto& [k, c] : mult(i, j)) {
          if (k < 0 || std::size_t(k) >= n) {
            r.fail("product index out of range");
            return r;
          }
          if (degree(std::size_t(k)) != degree(i) + degree(j))
            r.fail("grading: " + basis_.label(i) + "·" + basis_.label(j) + " has a term " + basis_.label(std::size_t(k)) + " in degree " +
                   std::to_string(degree(std::size_t(k))) + " != " + std::to_string(degree(i) + degree(j)));
        }
    for (std::size_t a = 0; a < idempotents_.size(); ++a)
      for (std::size_t b = 0; b < idempotents_.size(); ++b) {
        const auto ea = std::size_t(idempotents_[a]), eb = std::size_t(idempotents_[b]);
        SparseVec<T> expect;
        if (a == b) expect.emplace_back(int(ea), field_.one());
        if (!detail::vec_equal(mult(ea, eb), expect))
          r.fail("idempotents: " + basis_.label(ea) + "·" + basis_.label(eb) + (a == b ? " != itself" : " != 0"));
      }
    for (std::size_t i = 0; i < n; ++i)
      if (lsec_[i] < 0 || rsec_[i] < 0) r.fail("sector: " + basis_.label(i) + " is not of the form e x e'");
    const SparseVec<T> one = unit();
    for (std::size_t i = 0; i < n; ++i) {
      const SparseVec<T> x{{int(i), field_.one()}};
      if (multiply(one, x) != x || multiply(x, one) != x) r.fail("unit: 1 does not fix " + basis_.label(i));
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const auto& ij = mult(i, j);
        for (std::size_t k = 0; k < n; ++k) {
          const auto& jk = mult(j, k);
          if (ij.empty() && jk.empty()) continue;
          const SparseVec<T> left = detail::expand(ij, [&](int m) -> const SparseVec<T>& { return mult(std::size_t(m), k); });
          const SparseVec<T> right = detail::expand(jk, [&](int m) -> const SparseVec<T>& { return mult(i, std::size_t(m)); });
          if (left != right)
            r.fail("associativity: (" + basis_.label(i) + "·" + basis_.label(j) + ")·" + basis_.label(k) + " != " + basis_.label(i) + "·(" +
                   basis_.label(j) + "·" + basis_.label(k) + ")");
        }
      }
    return r;
  }

  bool operator==(const GradedAlgebra& o) const { return basis_.degrees == o.basis_.degrees && idempotents_ == o.idempotents_ && mult_ == o.mult_; }

 private:
  struct Unchecked {};
  GradedAlgebra(F field, Basis basis, std::vector<int> idempotents, std::vector<SparseVec<T>> table, Unchecked)
      : field_(std::move(field)), basis_(std::move(basis)), idempotents_(std::move(idempotents)), mult_(std::move(table)) {
    const std::size_t n = basis_.size();
    mult_.resize(n * n);
    idem_slot_.assign(n, -1);
    for (std::size_t s = 0; s < idempotents_.size(); ++s) {
      if (idempotents_[s] < 0 || std::size_t(idempotents_[s]) >= n) throw PreconditionError("idempotent index out of range");
      idem_slot_[std::size_t(idempotents_[s])] = int(s);
    }
    lsec_.assign(n, -1);
    rsec_.assign(n, -1);
    by_left_.assign(idempotents_.size(), {});
    by_right_.assign(idempotents_.size(), {});
    for (std::size_t i = 0; i < n; ++i) {
      const SparseVec<T> x{{int(i), field_.one()}};
      for (std::size_t s = 0; s < idempotents_.size(); ++s) {
        const auto e = std::size_t(idempotents_[s]);
        if (mult(e, i) == x) lsec_[i] = lsec_[i] == -1 ? int(s) : -2;
        if (mult(i, e) == x) rsec_[i] = rsec_[i] == -1 ? int(s) : -2;
      }
      if (lsec_[i] < 0) lsec_[i] = -1;
      if (rsec_[i] < 0) rsec_[i] = -1;
      if (lsec_[i] >= 0) by_left_[std::size_t(lsec_[i])].push_back(int(i));
      if (rsec_[i] >= 0) by_right_[std::size_t(rsec_[i])].push_back(int(i));
    }
  }

  F field_;
  Basis basis_;
  std::vector<int> idempotents_;
  std::vector<SparseVec<T>> mult_;
  std::vector<int> idem_slot_, lsec_, rsec_;
  std::vector<std::vector<int>> by_left_, by_right_;
};

template <class F>
using AlgebraPtr = std::shared_ptr<const GradedAlgebra<F>>;

template <class F>
ValidationReport check_algebra(const GradedAlgebra<F>& a) {
  return a.check();
}

template <class F>
bool same_algebra(const AlgebraPtr<F>& a, const AlgebraPtr<F>& b) {
  return a == b || (a && b && *a == *b);
}

/// k[X]/(X^2) with deg 1 = 0 and deg X = x_degree.
template <class F>
AlgebraPtr<F> dual_numbers(const F& field, int x_degree = -2) {
  using T = typename F::value_type;
  Basis b;
  b.push("1", 0);
  b.push("X", x_degree);
  std::vector<SparseVec<T>> m(4);
  m[0] = {{0, field.one()}};
  m[1] = {{1, field.one()}};
  m[2] = {{1, field.one()}};
  return std::make_shared<const GradedAlgebra<F>>(field, b, std::vector<int>{0}, m);
}

/// The ground field as a graded algebra concentrated in degree 0.
template <class F>
AlgebraPtr<F> ground_algebra(const F& field) {
  Basis b;
  b.push("1", 0);
  return std::make_shared<const GradedAlgebra<F>>(field, b, std::vector<int>{0}, std::vector<SparseVec<typename F::value_type>>{{{0, field.one()}}});
}

// ---------------------------------------------------------------------------
// Bimodules

template <class F>
class GradedBimodule {
 public:
  using T = typename F::value_type;

  /// left_action[a * dim + x] = a·x, right_action[x * dim(right) + b] = x·b. Validates eagerly.
  GradedBimodule(AlgebraPtr<F> left, AlgebraPtr<F> right, Basis basis, std::vector<SparseVec<T>> left_action, std::vector<SparseVec<T>> right_action)
      : GradedBimodule(std::move(left), std::move(right), std::move(basis), std::move(left_action), std::move(right_action), Unchecked{}) {
    const auto report = check();
    if (!report.ok()) throw PreconditionError("invalid graded bimodule: " + report.summary());
  }

  static GradedBimodule unchecked(AlgebraPtr<F> left, AlgebraPtr<F> right, Basis basis, std::vector<SparseVec<T>> la, std::vector<SparseVec<T>> ra) {
    return GradedBimodule(std::move(left), std::move(right), std::move(basis), std::move(la), std::move(ra), Unchecked{});
  }

  const F& field() const { return left_->field(); }
  const AlgebraPtr<F>& left() const { return left_; }
  const AlgebraPtr<F>& right() const { return right_; }
  const Basis& basis() const { return basis_; }
  std::size_t dim() const { return basis_.size(); }
  int degree(std::size_t x) const { return basis_.degrees[x]; }
  int left_sector(std::size_t x) const { return lsec_[x]; }
  int right_sector(std::size_t x) const { return rsec_[x]; }

  const SparseVec<T>& act_left(std::size_t a, std::size_t x) const { return la_[a * dim() + x]; }
  const SparseVec<T>& act_right(std::size_t x, std::size_t b) const { return ra_[x * right_->dim() + b]; }
  const std::vector<SparseVec<T>>& left_table() const { return la_; }
  const std::vector<SparseVec<T>>& right_table() const { return ra_; }

  SparseVec<T> act_left(std::size_t a, const SparseVec<T>& v) const {
    return detail::expand(v, [&](int x) -> const SparseVec<T>& { return act_left(a, std::size_t(x)); });
  }
  SparseVec<T> act_right(const SparseVec<T>& v, std::size_t b) const {
    return detail::expand(v, [&](int x) -> const SparseVec<T>& { return act_right(std::size_t(x), b); });
  }

  ValidationReport check() const {
    ValidationReport r;
    const auto& L = *left_;
    const auto& R = *right_;
    const std::size_t n = dim();
    if (la_.size() != L.dim() * n || ra_.size() != n * R.dim()) {
      r.fail("action tables have the wrong size");
      return r;
    }
    for (std::size_t x = 0; x < n; ++x)
      if (lsec_[x] < 0 || rsec_[x] < 0) r.fail("sector: " + basis_.label(x) + " is not of the form e x e'");
    if (!r.ok()) return r;
    // degree 0, sector consistency, unit
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t a = 0; a < L.dim(); ++a) {
        const auto& ax = act_left(a, x);
        if (!ax.empty() && L.right_sector(a) != lsec_[x]) r.fail("sector: " + L.basis().label(a) + "·" + basis_.label(x) + " should vanish");
        for (const auto& [y, c] : ax) {
          if (y < 0 || std::size_t(y) >= n) {
            r.fail("left action index out of range");
            return r;
          }
          if (degree(std::size_t(y)) != L.degree(a) + degree(x)) r.fail("grading: left action " + L.basis().label(a) + "·" + basis_.label(x));
        }
      }
      for (std::size_t b = 0; b < R.dim(); ++b) {
        const auto& xb = act_right(x, b);
        if (!xb.empty() && R.left_sector(b) != rsec_[x]) r.fail("sector: " + basis_.label(x) + "·" + R.basis().label(b) + " should vanish");
        for (const auto& [y, c] : xb) {
          if (y < 0 || std::size_t(y) >= n) {
            r.fail("right action index out of range");
            return r;
          }
          if (degree(std::size_t(y)) != degree(x) + R.degree(b)) r.fail("grading: right action " + basis_.label(x) + "·" + R.basis().label(b));
        }
      }
    }
    if (!r.ok()) return r;
    for (std::size_t x = 0; x < n; ++x) {
      const SparseVec<T> xv{{int(x), field().one()}};
      SparseVec<T> l1, r1;
      for (int e : L.idempotents()) {
        const auto& t = act_left(std::size_t(e), x);
        l1.insert(l1.end(), t.begin(), t.end());
      }
      for (int e : R.idempotents()) {
        const auto& t = act_right(x, std::size_t(e));
        r1.insert(r1.end(), t.begin(), t.end());
      }
      if (canonicalize(l1) != xv || canonicalize(r1) != xv) r.fail("unit: 1 does not fix " + basis_.label(x));
    }
    // associativity of each action and compatibility, over sector-matched triples
    for (std::size_t x = 0; x < n; ++x) {
      for (int b : L.with_right_sector(lsec_[x])) {
        const auto& bx = act_left(std::size_t(b), x);
        for (int a : L.with_right_sector(L.left_sector(std::size_t(b)))) {
          const SparseVec<T> lhs = act_left(std::size_t(a), bx);
          const SparseVec<T> rhs = detail::expand(L.mult(std::size_t(a), std::size_t(b)), [&](int c) -> const SparseVec<T>& { return act_left(std::size_t(c), x); });
          if (lhs != rhs) r.fail("left associativity at " + L.basis().label(std::size_t(a)) + "," + L.basis().label(std::size_t(b)) + "," + basis_.label(x));
        }
      }
      for (int b : R.with_left_sector(rsec_[x])) {
        const auto& xb = act_right(x, std::size_t(b));
        for (int c : R.with_left_sector(R.right_sector(std::size_t(b)))) {
          const SparseVec<T> lhs = act_right(xb, std::size_t(c));
          const SparseVec<T> rhs = detail::expand(R.mult(std::size_t(b), std::size_t(c)), [&](int d) -> const SparseVec<T>& { return act_right(x, std::size_t(d)); });
          if (lhs != rhs) r.fail("right associativity at " + basis_.label(x) + "," + R.basis().label(std::size_t(b)) + "," + R.basis().label(std::size_t(c)));
        }
      }
      for (int a : L.with_right_sector(lsec_[x])) {
        const auto& ax = act_left(std::size_t(a), x);
        for (int b : R.with_left_sector(rsec_[x])) {
          const SparseVec<T> lhs = act_right(ax, std::size_t(b));
          const SparseVec<T> rhs = act_left(std::size_t(a), act_right(x, std::size_t(b)));
          if (lhs != rhs) r.fail("compatibility (a·x)·b != a·(x·b) at " + basis_.label(x));
        }
      }
    }
    return r;
  }

 private:
  struct Unchecked {};
  GradedBimodule(AlgebraPtr<F> left, AlgebraPtr<F> right, Basis basis, std::vector<SparseVec<T>> la, std::vector<SparseVec<T>> ra, Unchecked)
      : left_(std::move(left)), right_(std::move(right)), basis_(std::move(basis)), la_(std::move(la)), ra_(std::move(ra)) {
    const std::size_t n = basis_.size();
    la_.resize(left_->dim() * n);
    ra_.resize(n * right_->dim());
    lsec_.assign(n, -1);
    rsec_.assign(n, -1);
    for (std::size_t x = 0; x < n; ++x) {
      const SparseVec<T> xv{{int(x), field().one()}};
      for (std::size_t s = 0; s < left_->sectors(); ++s)
        if (act_left(std::size_t(left_->idempotents()[s]), x) == xv) lsec_[x] = lsec_[x] == -1 ? int(s) : -2;
      for (std::size_t s = 0; s < right_->sectors(); ++s)
        if (act_right(x, std::size_t(right_->idempotents()[s])) == xv) rsec_[x] = rsec_[x] == -1 ? int(s) : -2;
      if (lsec_[x] < 0) lsec_[x] = -1;
      if (rsec_[x] < 0) rsec_[x] = -1;
    }
  }

  AlgebraPtr<F> left_, right_;
  Basis basis_;
  std::vector<SparseVec<T>> la_, ra_;
  std::vector<int> lsec_, rsec_;
};

template <class F>
using BimodulePtr = std::shared_ptr<const GradedBimodule<F>>;

template <class F>
ValidationReport check_bimodule(const GradedBimodule<F>& m) {
  return m.check();
}

/// A over itself.
template <class F>
BimodulePtr<F> regular_bimodule(const AlgebraPtr<F>& a) {
  using T = typename F::value_type;
  const std::size_t n = a->dim();
  std::vector<SparseVec<T>> la(n * n), ra(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) la[i * n + j] = ra[i * n + j] = a->mult(i, j);
  return std::make_shared<const GradedBimodule<F>>(a, a, a->basis(), std::move(la), std::move(ra));
}

/// Internal grading shift: every basis degree raised by s.
template <class F>
BimodulePtr<F> shift(const BimodulePtr<F>& m, int s) {
  if (s == 0) return m;
  Basis b = m->basis();
  for (auto& d : b.degrees) d += s;
  return std::make_shared<const GradedBimodule<F>>(GradedBimodule<F>::unchecked(m->left(), m->right(), std::move(b), m->left_table(), m->right_table()));
}

/// Block direct sum; summand k occupies a contiguous range of the basis.
template <class F>
BimodulePtr<F> direct_sum(const std::vector<BimodulePtr<F>>& parts) {
  using T = typename F::value_type;
  if (parts.empty()) throw PreconditionError("direct_sum of nothing");
  const auto& L = parts.front()->left();
  const auto& R = parts.front()->right();
  std::size_t n = 0;
  std::vector<std::size_t> off;
  for (const auto& p : parts) {
    if (!same_algebra(p->left(), L) || !same_algebra(p->right(), R)) throw PreconditionError("direct_sum: algebras differ");
    off.push_back(n);
    n += p->dim();
  }
  if (parts.size() == 1) return parts.front();
  Basis b;
  std::vector<SparseVec<T>> la(L->dim() * n), ra(n * R->dim());
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const auto& p = *parts[k];
    for (std::size_t x = 0; x < p.dim(); ++x) {
      b.push("s" + std::to_string(k) + ":" + p.basis().label(x), p.degree(x));
      auto moved = [&](const SparseVec<T>& v) {
        SparseVec<T> w = v;
        for (auto& e : w) e.first += int(off[k]);
        return w;
      };
      for (std::size_t a = 0; a < L->dim(); ++a) la[a * n + off[k] + x] = moved(p.act_left(a, x));
      for (std::size_t c = 0; c < R->dim(); ++c) ra[(off[k] + x) * R->dim() + c] = moved(p.act_right(x, c));
    }
  }
  return std::make_shared<const GradedBimodule<F>>(GradedBimodule<F>::unchecked(L, R, std::move(b), std::move(la), std::move(ra)));
}

/// f_q M: same space and right action, left action a·x := q^{-|a|} a x.
template <class F>
BimodulePtr<F> twist_left(const BimodulePtr<F>& m, const typename F::value_type& q) {
  using T = typename F::value_type;
  QPowers<F> qp(m->field(), q);
  const auto& L = *m->left();
  std::vector<SparseVec<T>> la = m->left_table();
  for (std::size_t a = 0; a < L.dim(); ++a) {
    const T& s = qp(-L.degree(a));
    for (std::size_t x = 0; x < m->dim(); ++x)
      for (auto& e : la[a * m->dim() + x]) e.second = s * e.second;
  }
  return std::make_shared<const GradedBimodule<F>>(m->left(), m->right(), m->basis(), std::move(la), m->right_table());
}

/// f_q A as an (A, A)-bimodule.
template <class F>
BimodulePtr<F> twisted_regular(const AlgebraPtr<F>& a, const typename F::value_type& q) {
  return twist_left(regular_bimodule(a), q);
}

// ---------------------------------------------------------------------------
// Bimodule maps

/// Linear map between bimodules with matrix rows indexed by the target basis.
template <class F>
struct BimoduleMap {
  BimodulePtr<F> source;
  BimodulePtr<F> target;
  SparseMatrix<typename F::value_type> matrix;
  int degree = 0;
};

/// Reports every basis element where the map fails to commute with an action or to be homogeneous of `degree`.
template <class F>
ValidationReport check_bimodule_map(const GradedBimodule<F>& src, const GradedBimodule<F>& tgt, const SparseMatrix<typename F::value_type>& f, int degree = 0) {
  using T = typename F::value_type;
  ValidationReport r;
  if (f.rows() != tgt.dim() || f.cols() != src.dim()) {
    r.fail("map has the wrong shape");
    return r;
  }
  if (!same_algebra(src.left(), tgt.left()) || !same_algebra(src.right(), tgt.right())) {
    r.fail("map between bimodules over different algebras");
    return r;
  }
  const auto& L = *src.left();
  const auto& R = *src.right();
  for (std::size_t x = 0; x < src.dim(); ++x) {
    const auto& fx = f.column(x);
    for (const auto& [y, c] : fx)
      if (tgt.degree(std::size_t(y)) != src.degree(x) + degree) r.fail("map is not homogeneous at " + src.basis().label(x));
    for (int a : L.with_right_sector(src.left_sector(x))) {
      const SparseVec<T> lhs = f.apply(src.act_left(std::size_t(a), x));
      SparseVec<T> rhs = tgt.act_left(std::size_t(a), fx);
      if (lhs != rhs) r.fail("map does not commute with the left action at " + L.basis().label(std::size_t(a)) + "·" + src.basis().label(x));
    }
    for (int b : R.with_left_sector(src.right_sector(x))) {
      const SparseVec<T> lhs = f.apply(src.act_right(x, std::size_t(b)));
      const SparseVec<T> rhs = tgt.act_right(fx, std::size_t(b));
      if (lhs != rhs) r.fail("map does not commute with the right action at " + src.basis().label(x) + "·" + R.basis().label(std::size_t(b)));
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Tensor product over the middle algebra

/// M ⊗_A N realized as the quotient of the sector-matched tensors x ⊗ y
/// (right sector of x = left sector of y) by xa ⊗ y - x ⊗ ay, with the quotient
/// basis given by the non-leading pairs of the relation space.
template <class F>
class TensorProduct {
 public:
  using T = typename F::value_type;

  TensorProduct(BimodulePtr<F> m, BimodulePtr<F> n) : m_(std::move(m)), n_(std::move(n)) {
    if (!same_algebra(m_->right(), n_->left())) throw PreconditionError("tensor_over_A: right algebra of the first factor differs from the left algebra of the second");
    const auto& M = *m_;
    const auto& N = *n_;
    const auto& A = *M.right();
    const F& field = M.field();

    // pair indexing, lexicographic in (x, y)
    std::vector<std::vector<int>> ys_of_sector(A.sectors());
    pos_.assign(N.dim(), -1);
    for (std::size_t y = 0; y < N.dim(); ++y) {
      auto& list = ys_of_sector[std::size_t(N.left_sector(y))];
      pos_[y] = int(list.size());
      list.push_back(int(y));
    }
    offset_.assign(M.dim(), 0);
    std::size_t pairs = 0;
    for (std::size_t x = 0; x < M.dim(); ++x) {
      offset_[x] = int(pairs);
      pairs += ys_of_sector[std::size_t(M.right_sector(x))].size();
    }
    pair_x_.resize(pairs);
    pair_y_.resize(pairs);
    for (std::size_t x = 0; x < M.dim(); ++x)
      for (int y : ys_of_sector[std::size_t(M.right_sector(x))]) {
        const auto k = std::size_t(pair_index(x, std::size_t(y)));
        pair_x_[k] = int(x);
        pair_y_[k] = y;
      }

    LeadEchelon<F> relations(field, pairs);
    for (std::size_t x = 0; x < M.dim(); ++x) {
      for (int a : A.with_left_sector(M.right_sector(x))) {
        if (A.is_idempotent(std::size_t(a))) continue;
        const auto& xa = M.act_right(x, std::size_t(a));
        for (int y : ys_of_sector[std::size_t(A.right_sector(std::size_t(a)))]) {
          SparseVec<T> rel;
          for (const auto& [x2, c] : xa) rel.emplace_back(pair_index(std::size_t(x2), std::size_t(y)), c);
          for (const auto& [y2, c] : N.act_left(std::size_t(a), std::size_t(y))) rel.emplace_back(pair_index(x, std::size_t(y2)), -c);
          rel = canonicalize(std::move(rel));
          if (!rel.empty()) relations.insert(rel);
        }
      }
    }
    const auto free = relations.free_indices();
    std::vector<int> qidx(pairs, -1);
    for (std::size_t k = 0; k < free.size(); ++k) qidx[std::size_t(free[k])] = int(k);
    nf_.resize(pairs);
    for (std::size_t p = 0; p < pairs; ++p) {
      if (qidx[p] >= 0) {
        nf_[p] = {{qidx[p], field.one()}};
        continue;
      }
      SparseVec<T> red = relations.reduce({{int(p), field.one()}});
      for (auto& e : red) e.first = qidx[std::size_t(e.first)];
      nf_[p] = std::move(red);
    }

    Basis basis;
    for (int p : free) basis.push(M.basis().label(std::size_t(pair_x_[std::size_t(p)])) + "|" + N.basis().label(std::size_t(pair_y_[std::size_t(p)])),
                                  M.degree(std::size_t(pair_x_[std::size_t(p)])) + N.degree(std::size_t(pair_y_[std::size_t(p)])));
    const auto& L = *M.left();
    const auto& R = *N.right();
    const std::size_t d = free.size();
    std::vector<SparseVec<T>> la(L.dim() * d), ra(d * R.dim());
    for (std::size_t k = 0; k < d; ++k) {
      const auto x = std::size_t(pair_x_[std::size_t(free[k])]);
      const auto y = std::size_t(pair_y_[std::size_t(free[k])]);
      for (int c : L.with_right_sector(M.left_sector(x))) {
        SparseVec<T> acc;
        for (const auto& [x2, v] : M.act_left(std::size_t(c), x)) append(acc, elementary(std::size_t(x2), y), v);
        la[std::size_t(c) * d + k] = canonicalize(std::move(acc));
      }
      for (int c : R.with_left_sector(N.right_sector(y))) {
        SparseVec<T> acc;
        for (const auto& [y2, v] : N.act_right(y, std::size_t(c))) append(acc, elementary(x, std::size_t(y2)), v);
        ra[k * R.dim() + std::size_t(c)] = canonicalize(std::move(acc));
      }
    }
    result_ = std::make_shared<const GradedBimodule<F>>(M.left(), N.right(), std::move(basis), std::move(la), std::move(ra));
    free_ = free;
  }

  const BimodulePtr<F>& module() const { return result_; }
  const BimodulePtr<F>& first() const { return m_; }
  const BimodulePtr<F>& second() const { return n_; }

  /// Coordinates of x ⊗ y in module()'s basis (zero if the sectors do not match).
  const SparseVec<T>& elementary(std::size_t x, std::size_t y) const {
    static const SparseVec<T> zero;
    const int p = pair_index(x, y);
    return p < 0 ? zero : nf_[std::size_t(p)];
  }
  /// The pair (x, y) represented by quotient basis element k.
  std::pair<std::size_t, std::size_t> representative(std::size_t k) const {
    const auto p = std::size_t(free_[k]);
    return {std::size_t(pair_x_[p]), std::size_t(pair_y_[p])};
  }

 private:
  int pair_index(std::size_t x, std::size_t y) const {
    if (m_->right_sector(x) != n_->left_sector(y)) return -1;
    return offset_[x] + pos_[y];
  }
  static void append(SparseVec<T>& acc, const SparseVec<T>& v, const T& c) {
    for (const auto& [i, x] : v) acc.emplace_back(i, c * x);
  }

  BimodulePtr<F> m_, n_, result_;
  std::vector<int> pos_, offset_, pair_x_, pair_y_, free_;
  std::vector<SparseVec<T>> nf_;
};

template <class F>
BimodulePtr<F> tensor_over_A(const BimodulePtr<F>& m, const BimodulePtr<F>& n) {
  return TensorProduct<F>(m, n).module();
}

/// f ⊗ g : M ⊗ N -> M' ⊗ N'. A null matrix pointer stands for the identity.
template <class F>
SparseMatrix<typename F::value_type> tensor_maps(const TensorProduct<F>& src, const TensorProduct<F>& tgt, const SparseMatrix<typename F::value_type>* f,
                                                const SparseMatrix<typename F::value_type>* g) {
  using T = typename F::value_type;
  const F& field = src.module()->field();
  SparseMatrix<T> out(tgt.module()->dim(), src.module()->dim());
  for (std::size_t k = 0; k < src.module()->dim(); ++k) {
    const auto [x, y] = src.representative(k);
    const SparseVec<T> fx = f ? f->column(x) : SparseVec<T>{{int(x), field.one()}};
    const SparseVec<T> gy = g ? g->column(y) : SparseVec<T>{{int(y), field.one()}};
    SparseVec<T> acc;
    for (const auto& [x2, a] : fx)
      for (const auto& [y2, b] : gy)
        for (const auto& [i, c] : tgt.elementary(std::size_t(x2), std::size_t(y2))) acc.emplace_back(i, a * b * c);
    out.set_column(k, canonicalize(std::move(acc)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// The weak-centrality isomorphism M ⊗_A f_qA -> f_qA ⊗_A M

template <class F>
struct CentralSwap {
  BimoduleMap<F> map;  // M ⊗_A f_qA -> f_qA ⊗_A M
  /// The same map written on the basis of M through x ↦ x ⊗ 1 and x ↦ 1 ⊗ x.
  SparseMatrix<typename F::value_type> on_underlying;
};

/// Builds x ⊗ a ↦ q^{-|x|} (1 ⊗ xa) on M ⊗_A f_qA (equivalently m ⊗ 1 ↦ q^{-|m|} 1 ⊗ m)
/// and verifies it is an isomorphism of bimodules; a failure throws InternalError.
template <class F>
CentralSwap<F> central_swap(const BimodulePtr<F>& m, const typename F::value_type& q) {
  using T = typename F::value_type;
  if (is_zero(q)) throw PreconditionError("q must be invertible");
  const F& field = m->field();
  QPowers<F> qp(field, q);
  const auto right_twisted = twisted_regular(m->right(), q);
  const auto left_twisted = twisted_regular(m->left(), q);
  const TensorProduct<F> p1(m, right_twisted);
  const TensorProduct<F> p2(left_twisted, m);
  const auto& A = *m->left();
  const auto& M = *m;

  SparseMatrix<T> s(p2.module()->dim(), p1.module()->dim());
  for (std::size_t k = 0; k < p1.module()->dim(); ++k) {
    const auto [x, a] = p1.representative(k);
    SparseVec<T> acc;
    for (const auto& [x2, c] : M.act_right(x, a))
      for (int e : A.idempotents())
        for (const auto& [i, v] : p2.elementary(std::size_t(e), std::size_t(x2))) acc.emplace_back(i, qp(-M.degree(x)) * c * v);
    s.set_column(k, canonicalize(std::move(acc)));
  }

  const auto report = check_bimodule_map(*p1.module(), *p2.module(), s, 0);
  if (!report.ok()) throw InternalError("central_swap is not a bimodule map: " + report.summary());
  if (s.rows() != s.cols() || rank(field, s) != s.cols()) throw InternalError("central_swap is not invertible");

  // identifications with the underlying space of M
  SparseMatrix<T> phi1(p1.module()->dim(), M.dim()), phi2(p2.module()->dim(), M.dim());
  const auto& B = *m->right();
  for (std::size_t x = 0; x < M.dim(); ++x) {
    SparseVec<T> v1, v2;
    for (int e : B.idempotents()) {
      const auto& t = p1.elementary(x, std::size_t(e));
      v1.insert(v1.end(), t.begin(), t.end());
    }
    for (int e : A.idempotents()) {
      const auto& t = p2.elementary(std::size_t(e), x);
      v2.insert(v2.end(), t.begin(), t.end());
    }
    phi1.set_column(x, canonicalize(std::move(v1)));
    phi2.set_column(x, canonicalize(std::move(v2)));
  }
  const auto phi2_inv = inverse(field, phi2);
  if (!phi2_inv || !inverse(field, phi1)) throw InternalError("central_swap: canonical identification with M is not invertible");

  CentralSwap<F> out;
  out.map = BimoduleMap<F>{p1.module(), p2.module(), s, 0};
  out.on_underlying = (*phi2_inv) * (s * phi1);
  return out;
}

// ---------------------------------------------------------------------------
// Complexes of bimodules

/// Bounded complex C_lo .. C_hi of (L, R)-bimodules with degree-0 bimodule-map differentials d_p : C_p -> C_{p-1}.
template <class F>
class BimoduleComplex {
 public:
  using T = typename F::value_type;

  BimoduleComplex(int lo, std::vector<BimodulePtr<F>> terms, std::vector<SparseMatrix<T>> diffs)
      : lo_(lo), terms_(std::move(terms)), diffs_(std::move(diffs)) {
    if (terms_.empty()) throw PreconditionError("BimoduleComplex needs at least one term");
    if (diffs_.size() + 1 != terms_.size()) throw PreconditionError("BimoduleComplex: one differential per adjacent pair of terms");
    validate();
  }

  /// M concentrated in degree 0.
  static BimoduleComplex single(BimodulePtr<F> m, int degree = 0) { return BimoduleComplex(degree, {std::move(m)}, {}); }

  int lo() const { return lo_; }
  int hi() const { return lo_ + int(terms_.size()) - 1; }
  const BimodulePtr<F>& term(int p) const { return terms_.at(std::size_t(p - lo_)); }
  /// d_p : C_p -> C_{p-1}, for lo < p <= hi.
  const SparseMatrix<T>& d(int p) const { return diffs_.at(std::size_t(p - lo_ - 1)); }
  const AlgebraPtr<F>& left() const { return terms_.front()->left(); }
  const AlgebraPtr<F>& right() const { return terms_.front()->right(); }
  const F& field() const { return terms_.front()->field(); }

  /// Underlying complex of graded vector spaces.
  GradedChainComplex<F> as_chain_complex() const {
    GradedChainComplex<F> c(field(), lo_);
    for (int p = lo_; p <= hi(); ++p) {
      SparseMatrix<T> dp = p == lo_ ? SparseMatrix<T>(0, term(p)->dim()) : d(p);
      c.push_group(term(p)->basis().degrees, std::move(dp));
    }
    return c;
  }

 private:
  void validate() const {
    for (const auto& t : terms_)
      if (!same_algebra(t->left(), left()) || !same_algebra(t->right(), right())) throw PreconditionError("BimoduleComplex: terms over different algebras");
    for (int p = lo_ + 1; p <= hi(); ++p) {
      const auto report = check_bimodule_map(*term(p), *term(p - 1), d(p), 0);
      if (!report.ok()) throw InternalError("BimoduleComplex: d_" + std::to_string(p) + " is not a bimodule map: " + report.summary());
      if (p > lo_ + 1 && !(d(p - 1) * d(p)).is_zero()) throw InternalError("BimoduleComplex: d∘d != 0 at degree " + std::to_string(p));
    }
    note_dd_check();
  }

  int lo_;
  std::vector<BimodulePtr<F>> terms_;
  std::vector<SparseMatrix<T>> diffs_;
};

/// Resulting bimodule complex with each term f_q-twisted on the left (differentials unchanged).
template <class F>
BimoduleComplex<F> twist_left(const BimoduleComplex<F>& c, const typename F::value_type& q) {
  std::vector<BimodulePtr<F>> terms;
  std::vector<SparseMatrix<typename F::value_type>> diffs;
  for (int p = c.lo(); p <= c.hi(); ++p) {
    terms.push_back(twist_left(c.term(p), q));
    if (p > c.lo()) diffs.push_back(c.d(p));
  }
  return BimoduleComplex<F>(c.lo(), std::move(terms), std::move(diffs));
}

template <class F>
BimoduleComplex<F> shift(const BimoduleComplex<F>& c, int internal) {
  std::vector<BimodulePtr<F>> terms;
  std::vector<SparseMatrix<typename F::value_type>> diffs;
  for (int p = c.lo(); p <= c.hi(); ++p) {
    terms.push_back(shift(c.term(p), internal));
    if (p > c.lo()) diffs.push_back(c.d(p));
  }
  return BimoduleComplex<F>(c.lo(), std::move(terms), std::move(diffs));
}

/// Total complex of C1 ⊗_A C2: degree t is ⊕_{p+q=t} C1_p ⊗_A C2_q (p ascending) and
/// d(x ⊗ y) = d1 x ⊗ y + (-1)^p x ⊗ d2 y.
template <class F>
BimoduleComplex<F> tensor_complexes(const BimoduleComplex<F>& c1, const BimoduleComplex<F>& c2) {
  using T = typename F::value_type;
  if (!same_algebra(c1.right(), c2.left())) throw PreconditionError("tensor_complexes: middle algebras differ");
  const int lo = c1.lo() + c2.lo(), hi = c1.hi() + c2.hi();
  std::map<std::pair<int, int>, TensorProduct<F>> parts;
  for (int p = c1.lo(); p <= c1.hi(); ++p)
    for (int q = c2.lo(); q <= c2.hi(); ++q) parts.emplace(std::make_pair(p, q), TensorProduct<F>(c1.term(p), c2.term(q)));

  std::vector<BimodulePtr<F>> terms;
  std::vector<std::map<int, std::size_t>> offsets;  // per total degree: p -> offset
  for (int t = lo; t <= hi; ++t) {
    std::vector<BimodulePtr<F>> summands;
    std::map<int, std::size_t> off;
    std::size_t n = 0;
    for (int p = c1.lo(); p <= c1.hi(); ++p) {
      const int q = t - p;
      if (q < c2.lo() || q > c2.hi()) continue;
      const auto& part = parts.at({p, q});
      off[p] = n;
      n += part.module()->dim();
      summands.push_back(part.module());
    }
    terms.push_back(direct_sum(summands));
    offsets.push_back(std::move(off));
  }

  const F& field = c1.field();
  std::vector<SparseMatrix<T>> diffs;
  for (int t = lo + 1; t <= hi; ++t) {
    const auto& src_off = offsets[std::size_t(t - lo)];
    const auto& dst_off = offsets[std::size_t(t - 1 - lo)];
    std::vector<SparseVec<T>> cols(terms[std::size_t(t - lo)]->dim());
    for (const auto& [p, so] : src_off) {
      const int q = t - p;
      const auto& src = parts.at({p, q});
      auto add_block = [&](const SparseMatrix<T>& block, std::size_t target_offset, const T& sign) {
        for (const auto& [j, col] : block.nonzero_columns())
          for (const auto& [i, v] : col) cols[so + std::size_t(j)].emplace_back(int(target_offset) + i, sign * v);
      };
      if (p - 1 >= c1.lo()) {
        const auto& tgt = parts.at({p - 1, q});
        add_block(tensor_maps(src, tgt, &c1.d(p), static_cast<const SparseMatrix<T>*>(nullptr)), dst_off.at(p - 1), field.one());
      }
      if (q - 1 >= c2.lo()) {
        const auto& tgt = parts.at({p, q - 1});
        const T sign = (p % 2 == 0) ? field.one() : -field.one();
        add_block(tensor_maps(src, tgt, static_cast<const SparseMatrix<T>*>(nullptr), &c2.d(q)), dst_off.at(p), sign);
      }
    }
    SparseMatrix<T> d(terms[std::size_t(t - 1 - lo)]->dim(), terms[std::size_t(t - lo)]->dim());
    for (std::size_t j = 0; j < cols.size(); ++j) d.set_column(j, canonicalize(std::move(cols[j])));
    diffs.push_back(std::move(d));
  }
  return BimoduleComplex<F>(lo, std::move(terms), std::move(diffs));
}

}  // namespace qhh
