#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qhh/errors.hpp"
#include "qhh/field.hpp"

namespace qhh {

/// Ordered graded basis. Labels may be left empty for large anonymous bases (chain groups).
struct Basis {
  std::vector<std::string> labels;
  std::vector<int> degrees;

  std::size_t size() const { return degrees.size(); }
  void push(std::string label, int degree) {
    labels.push_back(std::move(label));
    degrees.push_back(degree);
  }
  std::string label(std::size_t i) const { return i < labels.size() ? labels[i] : "e" + std::to_string(i); }
  bool operator==(const Basis&) const = default;
};

/// Sorted (index, value) pairs with no stored zeros.
template <class T>
using SparseVec = std::vector<std::pair<int, T>>;

/// Sorts, merges duplicates and drops zeros.
template <class T>
SparseVec<T> canonicalize(SparseVec<T> v) {
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  SparseVec<T> out;
  out.reserve(v.size());
  for (auto& [i, x] : v) {
    if (!out.empty() && out.back().first == i) {
      out.back().second += x;
      if (is_zero(out.back().second)) out.pop_back();
    } else if (!is_zero(x)) {
      out.emplace_back(i, std::move(x));
    }
  }
  return out;
}

/// y + a*x.
template <class T>
SparseVec<T> axpy(const SparseVec<T>& y, const T& a, const SparseVec<T>& x) {
  SparseVec<T> out;
  out.reserve(y.size() + x.size());
  std::size_t i = 0, j = 0;
  while (i < y.size() || j < x.size()) {
    if (j == x.size() || (i < y.size() && y[i].first < x[j].first)) {
      out.push_back(y[i++]);
    } else if (i == y.size() || x[j].first < y[i].first) {
      T v = a * x[j].second;
      if (!is_zero(v)) out.emplace_back(x[j].first, std::move(v));
      ++j;
    } else {
      T v = y[i].second + a * x[j].second;
      if (!is_zero(v)) out.emplace_back(y[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  return out;
}

template <class T>
SparseVec<T> scaled(const SparseVec<T>& x, const T& a) {
  SparseVec<T> out;
  if (is_zero(a)) return out;
  out.reserve(x.size());
  for (const auto& [i, v] : x) out.emplace_back(i, a * v);
  return out;
}

/// Column-major sparse matrix: column j lists the nonzero entries (row, value) of the image of basis vector j.
template <class T>
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const {
    std::size_t n = 0;
    for (const auto& [j, c] : columns_) n += c.size();
    return n;
  }
  bool is_zero() const { return columns_.empty(); }

  const SparseVec<T>& column(std::size_t j) const {
    static const SparseVec<T> empty;
    auto it = columns_.find(int(j));
    return it == columns_.end() ? empty : it->second;
  }
  /// Replaces column j; the vector must be canonical (see canonicalize).
  void set_column(std::size_t j, SparseVec<T> c) {
    if (c.empty()) {
      columns_.erase(int(j));
    } else {
      for (const auto& e : c)
        if (e.first < 0 || std::size_t(e.first) >= rows_) throw InternalError("SparseMatrix: row index out of range");
      columns_[int(j)] = std::move(c);
    }
  }
  T entry(std::size_t i, std::size_t j) const {
    for (const auto& [r, v] : column(j))
      if (std::size_t(r) == i) return v;
    return T{};
  }
  /// Nonzero columns in increasing order.
  const std::map<int, SparseVec<T>>& nonzero_columns() const { return columns_; }

  SparseMatrix transpose() const {
    std::vector<SparseVec<T>> rows(rows_);
    for (const auto& [j, c] : columns_)
      for (const auto& [i, v] : c) rows[std::size_t(i)].emplace_back(j, v);
    SparseMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      if (!rows[i].empty()) t.columns_[int(i)] = std::move(rows[i]);
    return t;
  }

  SparseVec<T> apply(const SparseVec<T>& x) const {
    SparseVec<T> acc;
    for (const auto& [j, v] : x) {
      const auto& c = column(std::size_t(j));
      acc.insert(acc.end(), c.begin(), c.end());
      for (std::size_t k = acc.size() - c.size(); k < acc.size(); ++k) acc[k].second = acc[k].second * v;
    }
    return canonicalize(std::move(acc));
  }

  friend SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b) {
    if (a.cols_ != b.rows_) throw InternalError("SparseMatrix: dimension mismatch in product");
    SparseMatrix r(a.rows_, b.cols_);
    for (const auto& [j, c] : b.columns_) r.set_column(std::size_t(j), a.apply(c));
    return r;
  }

  bool operator==(const SparseMatrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && columns_ == o.columns_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::map<int, SparseVec<T>> columns_;
};

// ---------------------------------------------------------------------------
// Rank by sparse elimination with a Markowitz-style pivot rule.

/// Rank of the span of the given sparse vectors. Each step takes a shortest
/// remaining vector and, within it, the entry whose index is shared by the fewest
/// other vectors (ties broken by field pivot cost, then index), which bounds fill-in
/// by (len - 1) * (count - 1).
template <class F>
std::size_t rank_of_vectors(const F& field, std::vector<SparseVec<typename F::value_type>> vecs, std::size_t index_space) {
  using T = typename F::value_type;
  const std::size_t n = vecs.size();
  std::vector<std::vector<int>> holders(index_space);
  std::vector<int> count(index_space, 0);
  std::set<std::pair<std::size_t, int>> by_length;
  std::vector<bool> alive(n, true);
  for (std::size_t k = 0; k < n; ++k) {
    for (const auto& e : vecs[k]) {
      holders[std::size_t(e.first)].push_back(int(k));
      ++count[std::size_t(e.first)];
    }
    if (vecs[k].empty())
      alive[k] = false;
    else
      by_length.emplace(vecs[k].size(), int(k));
  }

  auto contains = [&](const SparseVec<T>& v, int idx) -> const T* {
    auto it = std::lower_bound(v.begin(), v.end(), idx, [](const auto& e, int x) { return e.first < x; });
    return (it != v.end() && it->first == idx) ? &it->second : nullptr;
  };

  std::size_t rank = 0;
  while (!by_length.empty()) {
    const int pv = by_length.begin()->second;
    by_length.erase(by_length.begin());
    const SparseVec<T> pivot_vec = std::move(vecs[std::size_t(pv)]);
    alive[std::size_t(pv)] = false;
    for (const auto& e : pivot_vec) --count[std::size_t(e.first)];

    // pivot entry
    std::size_t best = 0;
    auto key = [&](std::size_t pos) {
      const auto& e = pivot_vec[pos];
      return std::make_tuple(count[std::size_t(e.first)], field.pivot_cost(e.second), e.first);
    };
    auto best_key = key(0);
    for (std::size_t pos = 1; pos < pivot_vec.size(); ++pos) {
      auto k = key(pos);
      if (k < best_key) {
        best_key = k;
        best = pos;
      }
    }
    const int col = pivot_vec[best].first;
    const T inv = field.one() / pivot_vec[best].second;
    ++rank;

    auto& hs = holders[std::size_t(col)];
    std::vector<int> targets;
    targets.swap(hs);
    for (int w : targets) {
      if (!alive[std::size_t(w)]) continue;
      auto& wv = vecs[std::size_t(w)];
      const T* a = contains(wv, col);
      if (!a) continue;
      by_length.erase({wv.size(), w});
      const T factor = -(*a) * inv;
      SparseVec<T> updated = axpy(wv, factor, pivot_vec);
      // bookkeeping: indices that vanished or appeared
      std::size_t i = 0, j = 0;
      while (i < wv.size() || j < updated.size()) {
        if (j == updated.size() || (i < wv.size() && wv[i].first < updated[j].first)) {
          --count[std::size_t(wv[i].first)];
          ++i;
        } else if (i == wv.size() || updated[j].first < wv[i].first) {
          ++count[std::size_t(updated[j].first)];
          holders[std::size_t(updated[j].first)].push_back(w);
          ++j;
        } else {
          ++i;
          ++j;
        }
      }
      wv = std::move(updated);
      if (wv.empty())
        alive[std::size_t(w)] = false;
      else
        by_length.emplace(wv.size(), w);
    }
  }
  return rank;
}

template <class F>
std::size_t rank(const F& field, const SparseMatrix<typename F::value_type>& m) {
  std::vector<SparseVec<typename F::value_type>> cols;
  cols.reserve(m.nonzero_columns().size());
  for (const auto& [j, c] : m.nonzero_columns()) cols.push_back(c);
  return rank_of_vectors(field, std::move(cols), m.rows());
}

template <class F>
std::size_t kernel_dim(const F& field, const SparseMatrix<typename F::value_type>& m) {
  return m.cols() - rank(field, m);
}

// ---------------------------------------------------------------------------
// Leading-term echelon form, used for quotients (cokernels).

/// Maintains a basis of a subspace W of k^n in echelon form with respect to the
/// largest index: every stored row has a distinct leading (largest) index with
/// coefficient 1. The set of leading indices depends on W only, not on insertion
/// order, so quotient bases k^n / W built from the non-leading indices are reproducible.
template <class F>
class LeadEchelon {
 public:
  using T = typename F::value_type;

  LeadEchelon(F field, std::size_t n) : field_(std::move(field)), n_(n), row_of_(n, -1) {}

  std::size_t dim() const { return n_; }
  std::size_t rank() const { return rows_.size(); }
  bool is_pivot(std::size_t i) const { return row_of_[i] >= 0; }

  /// Adds v to the spanning set; returns true if it enlarged the subspace.
  bool insert(const SparseVec<T>& v) {
    std::map<int, T> w(v.begin(), v.end());
    while (!w.empty()) {
      auto top = std::prev(w.end());
      const int r = row_of_[std::size_t(top->first)];
      if (r < 0) break;
      const T a = top->second;
      subtract(w, a, rows_[std::size_t(r)]);
    }
    if (w.empty()) return false;
    const auto top = std::prev(w.end());
    const int lead = top->first;
    const T inv = field_.one() / top->second;
    SparseVec<T> row;
    row.reserve(w.size());
    for (auto& [i, x] : w) row.emplace_back(i, x * inv);
    row_of_[std::size_t(lead)] = int(rows_.size());
    rows_.push_back(std::move(row));
    return true;
  }

  /// Normal form of v modulo the subspace: the unique representative supported on non-leading indices.
  SparseVec<T> reduce(const SparseVec<T>& v) const {
    std::map<int, T> w(v.begin(), v.end());
    auto it = w.end();
    while (it != w.begin()) {
      --it;
      const int r = row_of_[std::size_t(it->first)];
      if (r < 0) continue;
      const int idx = it->first;
      const T a = it->second;
      subtract(w, a, rows_[std::size_t(r)]);
      // everything touched lies at or below idx; resume strictly below it
      it = w.lower_bound(idx);
    }
    return SparseVec<T>(w.begin(), w.end());
  }

  /// Non-leading indices in increasing order (a basis of the quotient).
  std::vector<int> free_indices() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < n_; ++i)
      if (row_of_[i] < 0) out.push_back(int(i));
    return out;
  }

 private:
  static void subtract(std::map<int, T>& w, const T& a, const SparseVec<T>& row) {
    for (const auto& [i, x] : row) {
      auto [pos, inserted] = w.try_emplace(i);
      pos->second = inserted ? T(-(a * x)) : T(pos->second - a * x);
      if (is_zero(pos->second)) w.erase(pos);
    }
  }

  F field_;
  std::size_t n_;
  std::vector<int> row_of_;
  std::vector<SparseVec<T>> rows_;
};

/// Inverse of a square matrix by dense Gauss-Jordan; nullopt if singular.
template <class F>
std::optional<SparseMatrix<typename F::value_type>> inverse(const F& field, const SparseMatrix<typename F::value_type>& m) {
  using T = typename F::value_type;
  const std::size_t n = m.rows();
  if (m.cols() != n) throw PreconditionError("inverse of a non-square matrix");
  std::vector<std::vector<T>> a(n, std::vector<T>(2 * n, field.zero()));
  for (const auto& [j, c] : m.nonzero_columns())
    for (const auto& [i, v] : c) a[std::size_t(i)][std::size_t(j)] = v;
  for (std::size_t i = 0; i < n; ++i) a[i][n + i] = field.one();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && is_zero(a[piv][col])) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(a[piv], a[col]);
    const T inv = field.one() / a[col][col];
    for (auto& x : a[col]) x = x * inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || is_zero(a[r][col])) continue;
      const T f = a[r][col];
      for (std::size_t k = 0; k < 2 * n; ++k)
        if (!is_zero(a[col][k])) a[r][k] = a[r][k] - f * a[col][k];
    }
  }
  SparseMatrix<T> out(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    SparseVec<T> c;
    for (std::size_t i = 0; i < n; ++i)
      if (!is_zero(a[i][n + j])) c.emplace_back(int(i), a[i][n + j]);
    out.set_column(j, std::move(c));
  }
  return out;
}

}  // namespace qhh
