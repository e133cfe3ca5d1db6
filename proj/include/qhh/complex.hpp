#pragma once

#include <algorithm>
#include <atomic>
#include <climits>
#include <cstdlib>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "qhh/errors.hpp"
#include "qhh/field.hpp"
#include "qhh/sparse.hpp"

namespace qhh {

/// Bigraded dimension table: (homological degree n, internal degree j) -> dim > 0.
struct PoincareTable {
  std::map<std::pair<int, int>, std::size_t> dims;
  /// Degree the underlying complex was built to, if it was truncated.
  std::optional<int> truncation;
  /// Highest homological degree whose entries are reliable.
  std::optional<int> complete_through;

  void add(int n, int j, std::size_t d) {
    if (d) dims[{n, j}] += d;
  }
  std::size_t at(int n, int j) const {
    auto it = dims.find({n, j});
    return it == dims.end() ? 0 : it->second;
  }
  /// Total dimension in homological degree n.
  std::size_t total(int n) const {
    std::size_t s = 0;
    for (const auto& [k, d] : dims)
      if (k.first == n) s += d;
    return s;
  }
  /// Entries with n <= edge.
  PoincareTable through(int edge) const {
    PoincareTable t;
    for (const auto& [k, d] : dims)
      if (k.first <= edge) t.dims.emplace(k, d);
    return t;
  }
  bool operator==(const PoincareTable&) const = default;

  std::string format_text() const;
};

/// True if a and b agree at every bidegree with n <= min of their complete_through edges.
bool agree_through_edge(const PoincareTable& a, const PoincareTable& b);
/// a <= b at every bidegree with n <= the common edge.
bool pointwise_le(const PoincareTable& a, const PoincareTable& b);

/// Number of complexes that passed the d∘d = 0 assertion in this process.
std::size_t dd_checks_passed();
void note_dd_check();

/// Worker count for blockwise rank computations (QHH_THREADS, default 1).
unsigned worker_count();

/// Runs tasks[i]() for all i on worker_count() threads.
void run_parallel(const std::vector<std::function<void()>>& tasks);

/// Bounded chain complex C_lo, ..., C_hi with d_n : C_n -> C_{n-1}; every basis
/// element carries an internal grading and every d_n is homogeneous of degree 0.
template <class F>
class GradedChainComplex {
 public:
  using T = typename F::value_type;

  GradedChainComplex(F field, int lo) : field_(std::move(field)), lo_(lo) {}

  const F& field() const { return field_; }
  int lo() const { return lo_; }
  int hi() const { return lo_ + int(groups_.size()) - 1; }
  bool empty() const { return groups_.empty(); }

  /// Appends the next chain group C_{hi+1} with its differential to C_hi.
  void push_group(std::vector<int> gradings, SparseMatrix<T> d) {
    const std::size_t prev = groups_.empty() ? 0 : groups_.back().size();
    if (d.rows() != prev || d.cols() != gradings.size()) throw InternalError("GradedChainComplex: differential has the wrong shape");
    groups_.push_back(std::move(gradings));
    diffs_.push_back(std::move(d));
  }

  std::size_t dim(int n) const { return in_range(n) ? groups_[std::size_t(n - lo_)].size() : 0; }
  const std::vector<int>& gradings(int n) const {
    static const std::vector<int> none;
    return in_range(n) ? groups_[std::size_t(n - lo_)] : none;
  }
  /// d_n : C_n -> C_{n-1} (a zero matrix outside the range).
  SparseMatrix<T> d(int n) const {
    if (in_range(n)) return diffs_[std::size_t(n - lo_)];
    return SparseMatrix<T>(dim(n - 1), dim(n));
  }
  const SparseMatrix<T>& d_ref(int n) const { return diffs_.at(std::size_t(n - lo_)); }

  /// Highest degree whose homology this complex computes correctly (truncated complexes).
  int complete_through() const { return complete_through_; }
  std::optional<int> truncation() const { return truncation_; }
  void set_truncation(int n, int complete_through) {
    truncation_ = n;
    complete_through_ = complete_through;
  }

  bool operator==(const GradedChainComplex& o) const { return lo_ == o.lo_ && groups_ == o.groups_ && diffs_ == o.diffs_; }

 private:
  bool in_range(int n) const { return n >= lo_ && n <= hi(); }

  F field_;
  int lo_;
  std::vector<std::vector<int>> groups_;
  std::vector<SparseMatrix<T>> diffs_;
  std::optional<int> truncation_;
  int complete_through_ = INT_MAX;
};

/// Throws InternalError naming the first degree n with d_{n-1} ∘ d_n != 0, or a
/// differential entry joining different internal degrees.
template <class F>
void check_chain_complex(const GradedChainComplex<F>& c) {
  for (int n = c.lo(); n <= c.hi(); ++n) {
    const auto& dn = c.d_ref(n);
    const auto& src = c.gradings(n);
    const auto& dst = c.gradings(n - 1);
    for (const auto& [j, col] : dn.nonzero_columns())
      for (const auto& [i, v] : col)
        if (dst[std::size_t(i)] != src[std::size_t(j)])
          throw InternalError("differential d_" + std::to_string(n) + " is not homogeneous of internal degree 0");
    if (n > c.lo() && !(c.d_ref(n - 1) * dn).is_zero())
      throw InternalError("d∘d != 0: d_" + std::to_string(n - 1) + " ∘ d_" + std::to_string(n) + " is nonzero");
  }
  note_dd_check();
}

namespace detail {

/// Block of d_n between the grading-j parts of C_n and C_{n-1}, as a list of columns reindexed into the block.
template <class F>
std::pair<std::vector<SparseVec<typename F::value_type>>, std::size_t> grading_block(const GradedChainComplex<F>& c, int n, int j) {
  using T = typename F::value_type;
  std::vector<SparseVec<T>> cols;
  const auto& dst = c.gradings(n - 1);
  std::vector<int> local(dst.size(), -1);
  std::size_t rows = 0;
  for (std::size_t i = 0; i < dst.size(); ++i)
    if (dst[i] == j) local[i] = int(rows++);
  if (n < c.lo() || n > c.hi()) return {cols, rows};
  const auto& src = c.gradings(n);
  for (const auto& [k, col] : c.d_ref(n).nonzero_columns()) {
    if (src[std::size_t(k)] != j) continue;
    SparseVec<T> v;
    v.reserve(col.size());
    for (const auto& [i, x] : col) v.emplace_back(local[std::size_t(i)], x);
    cols.push_back(std::move(v));
  }
  return {std::move(cols), rows};
}

}  // namespace detail

/// Homology dimensions, computed independently in every internal degree:
/// dim H_n|_j = dim C_n|_j - rank d_n|_j - rank d_{n+1}|_j.
template <class F>
PoincareTable homology_dims(const GradedChainComplex<F>& c) {
  check_chain_complex(c);
  PoincareTable table;
  if (c.empty()) return table;
  if (c.truncation()) {
    table.truncation = c.truncation();
    table.complete_through = c.complete_through();
  }
  const int top = std::min(c.hi(), c.complete_through());

  // rank of d_n restricted to grading j, for every (n, j) that is needed
  std::map<std::pair<int, int>, std::size_t> ranks;
  for (int n = c.lo(); n <= top + 1 && n <= c.hi(); ++n) {
    std::vector<int> js(c.gradings(n).begin(), c.gradings(n).end());
    std::sort(js.begin(), js.end());
    js.erase(std::unique(js.begin(), js.end()), js.end());
    for (int j : js) ranks[{n, j}] = 0;
  }
  std::vector<std::pair<int, int>> keys;
  for (const auto& [k, r] : ranks) keys.push_back(k);
  std::vector<std::size_t> results(keys.size(), 0);
  std::vector<std::function<void()>> tasks;
  tasks.reserve(keys.size());
  for (std::size_t t = 0; t < keys.size(); ++t) {
    tasks.push_back([&, t] {
      auto [cols, rows] = detail::grading_block(c, keys[t].first, keys[t].second);
      results[t] = rank_of_vectors(c.field(), std::move(cols), rows);
    });
  }
  run_parallel(tasks);
  for (std::size_t t = 0; t < keys.size(); ++t) ranks[keys[t]] = results[t];

  auto rank_at = [&](int n, int j) -> std::size_t {
    auto it = ranks.find({n, j});
    return it == ranks.end() ? 0 : it->second;
  };
  for (int n = c.lo(); n <= top; ++n) {
    std::map<int, std::size_t> dim_j;
    for (int j : c.gradings(n)) ++dim_j[j];
    for (const auto& [j, d] : dim_j) {
      const std::size_t r = rank_at(n, j) + rank_at(n + 1, j);
      if (r > d) throw InternalError("rank exceeds dimension in homology_dims");
      table.add(n, j, d - r);
    }
  }
  return table;
}

/// Subcomplex spanned by the basis elements of internal degree j.
template <class F>
GradedChainComplex<F> restrict_to_grading(const GradedChainComplex<F>& c, int j) {
  using T = typename F::value_type;
  // restrict only the nonempty range so an absent grading yields the empty complex
  int first = c.lo(), last = c.hi();
  auto count_j = [&](int n) { return std::count(c.gradings(n).begin(), c.gradings(n).end(), j); };
  while (first <= last && count_j(first) == 0) ++first;
  while (last >= first && count_j(last) == 0) --last;
  GradedChainComplex<F> out(c.field(), first);
  if (first > last) return GradedChainComplex<F>(c.field(), c.lo());
  std::vector<int> prev_local;
  for (int n = first; n <= last; ++n) {
    const auto& g = c.gradings(n);
    std::vector<int> local(g.size(), -1);
    std::size_t k = 0;
    for (std::size_t i = 0; i < g.size(); ++i)
      if (g[i] == j) local[i] = int(k++);
    const auto prev_rows = std::count_if(prev_local.begin(), prev_local.end(), [](int x) { return x >= 0; });
    SparseMatrix<T> d(n == first ? 0 : std::size_t(prev_rows), k);
    if (n > first) {
      for (const auto& [col, entries] : c.d_ref(n).nonzero_columns()) {
        if (local[std::size_t(col)] < 0) continue;
        SparseVec<T> v;
        for (const auto& [i, x] : entries) v.emplace_back(prev_local[std::size_t(i)], x);
        d.set_column(std::size_t(local[std::size_t(col)]), std::move(v));
      }
    }
    out.push_group(std::vector<int>(k, j), std::move(d));
    prev_local = std::move(local);
  }
  if (c.truncation()) out.set_truncation(*c.truncation(), c.complete_through());
  return out;
}

/// Σ_n (-1)^n dim C_n|_j for n <= through.
template <class F>
long long euler_characteristic(const GradedChainComplex<F>& c, int j, int through) {
  long long chi = 0;
  for (int n = c.lo(); n <= std::min(c.hi(), through); ++n) {
    const long long d = std::count(c.gradings(n).begin(), c.gradings(n).end(), j);
    chi += (n % 2 == 0) ? d : -d;
  }
  return chi;
}

}  // namespace qhh
