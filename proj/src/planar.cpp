#include "qhh/planar.hpp"

#include <numeric>
#include <sstream>

#include "qhh/errors.hpp"

namespace qhh::planar {

std::string Matching::format() const {
  std::ostringstream os;
  for (int i = 0; i < points(); ++i)
    if (partner[std::size_t(i)] > i) os << "(" << i + 1 << "," << partner[std::size_t(i)] + 1 << ")";
  return os.str();
}

namespace {

// All matchings of a contiguous block of 2k points starting at `first`, as lists of arcs,
// in the documented order.
std::vector<std::vector<std::pair<int, int>>> block_matchings(int first, int k) {
  if (k == 0) return {{}};
  std::vector<std::vector<std::pair<int, int>>> out;
  for (int inner = 0; inner < k; ++inner) {
    const int partner = first + 2 * inner + 1;
    const auto ins = block_matchings(first + 1, inner);
    const auto outs = block_matchings(partner + 1, k - 1 - inner);
    for (const auto& a : ins)
      for (const auto& b : outs) {
        std::vector<std::pair<int, int>> arcs{{first, partner}};
        arcs.insert(arcs.end(), a.begin(), a.end());
        arcs.insert(arcs.end(), b.begin(), b.end());
        out.push_back(std::move(arcs));
      }
  }
  return out;
}

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  int find(int x) {
    while (parent_[std::size_t(x)] != x) {
      parent_[std::size_t(x)] = parent_[std::size_t(parent_[std::size_t(x)])];
      x = parent_[std::size_t(x)];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::size_t(std::max(a, b))] = std::min(a, b);
  }

 private:
  std::vector<int> parent_;
};

bool is_involution(const std::vector<int>& partner) {
  const int n = int(partner.size());
  for (int i = 0; i < n; ++i) {
    const int j = partner[std::size_t(i)];
    if (j < 0 || j >= n || j == i || partner[std::size_t(j)] != i) return false;
  }
  return true;
}

// Noncrossing check for a pairing of points listed in cyclic boundary order.
bool noncrossing_in_order(const std::vector<int>& partner, const std::vector<int>& order) {
  std::vector<int> pos(partner.size());
  for (std::size_t k = 0; k < order.size(); ++k) pos[std::size_t(order[k])] = int(k);
  std::vector<int> open;
  for (int e : order) {
    const int f = partner[std::size_t(e)];
    if (pos[std::size_t(f)] > pos[std::size_t(e)]) {
      open.push_back(e);
    } else {
      if (open.empty() || open.back() != f) return false;
      open.pop_back();
    }
  }
  return open.empty();
}

}  // namespace

std::vector<Matching> matchings(int n) {
  std::vector<Matching> out;
  if (n < 0) return out;
  for (const auto& arcs : block_matchings(0, n)) {
    Matching m;
    m.partner.assign(std::size_t(2 * n), -1);
    for (auto [i, j] : arcs) {
      m.partner[std::size_t(i)] = j;
      m.partner[std::size_t(j)] = i;
    }
    out.push_back(std::move(m));
  }
  return out;
}

bool is_noncrossing_perfect(const std::vector<int>& partner) {
  if (!is_involution(partner)) return false;
  std::vector<int> order(partner.size());
  std::iota(order.begin(), order.end(), 0);
  return noncrossing_in_order(partner, order);
}

// ---------------------------------------------------------------------------
// Flat tangles

FlatTangle FlatTangle::identity(int k) {
  FlatTangle t{k, k, std::vector<int>(std::size_t(2 * k)), 0};
  for (int i = 0; i < k; ++i) {
    t.partner[std::size_t(i)] = k + i;
    t.partner[std::size_t(k + i)] = i;
  }
  return t;
}

FlatTangle FlatTangle::cup(int k, int i) {
  if (k < 2 || i < 1 || i > k - 1) throw PreconditionError("cup:" + std::to_string(i) + " out of range on " + std::to_string(k) + " strands");
  FlatTangle t{k, k - 2, std::vector<int>(std::size_t(2 * k - 2)), 0};
  const int a = i - 1;
  auto link = [&](int x, int y) {
    t.partner[std::size_t(x)] = y;
    t.partner[std::size_t(y)] = x;
  };
  link(a, a + 1);
  for (int j = 0; j < k; ++j) {
    if (j == a || j == a + 1) continue;
    link(j, k + (j < a ? j : j - 2));
  }
  return t;
}

FlatTangle FlatTangle::cap(int k, int i) {
  if (k < 0 || i < 1 || i > k + 1) throw PreconditionError("cap:" + std::to_string(i) + " out of range on " + std::to_string(k) + " strands");
  FlatTangle t{k, k + 2, std::vector<int>(std::size_t(2 * k + 2)), 0};
  const int a = i - 1;
  auto link = [&](int x, int y) {
    t.partner[std::size_t(x)] = y;
    t.partner[std::size_t(y)] = x;
  };
  link(k + a, k + a + 1);
  for (int j = 0; j < k; ++j) link(j, k + (j < a ? j : j + 2));
  return t;
}

FlatTangle FlatTangle::turnback(int k, int i) {
  if (k < 2 || i < 1 || i > k - 1) throw PreconditionError("turnback at " + std::to_string(i) + " out of range on " + std::to_string(k) + " strands");
  return compose(cup(k, i), cap(k - 2, i));
}

FlatTangle FlatTangle::cups(const Matching& a) {
  FlatTangle t{0, a.points(), a.partner, 0};
  return t;
}

FlatTangle FlatTangle::caps(const Matching& b) {
  FlatTangle t{b.points(), 0, b.partner, 0};
  return t;
}

FlatTangle FlatTangle::with_circles(int extra) const {
  FlatTangle t = *this;
  t.circles += extra;
  return t;
}

bool FlatTangle::is_valid() const {
  if (bottom < 0 || top < 0 || circles < 0) return false;
  if (int(partner.size()) != bottom + top || !is_involution(partner)) return false;
  // boundary of the strip: bottom left to right, then top right to left
  std::vector<int> order;
  for (int i = 0; i < bottom; ++i) order.push_back(i);
  for (int i = top - 1; i >= 0; --i) order.push_back(bottom + i);
  return noncrossing_in_order(partner, order);
}

std::string FlatTangle::format() const {
  std::ostringstream os;
  os << bottom << "->" << top << ":";
  for (int e = 0; e < bottom + top; ++e) {
    const int f = partner[std::size_t(e)];
    if (f < e) continue;
    auto name = [&](int x) { return x < bottom ? "b" + std::to_string(x + 1) : "t" + std::to_string(x - bottom + 1); };
    os << " " << name(e) << "-" << name(f);
  }
  if (circles) os << " +" << circles << "o";
  return os.str();
}

FlatTangle compose(const FlatTangle& lower, const FlatTangle& upper) {
  if (lower.top != upper.bottom) throw PreconditionError("compose: " + lower.format() + " does not end where " + upper.format() + " starts");
  const int b = lower.bottom, m = lower.top, t = upper.top;
  // nodes: bottom 0..b-1, top b..b+t-1, middle b+t..b+t+m-1
  const int nodes = b + t + m;
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(nodes));
  auto lower_node = [&](int e) { return e < b ? e : b + t + (e - b); };
  auto upper_node = [&](int e) { return e < m ? b + t + e : b + (e - m); };
  for (int e = 0; e < b + m; ++e) {
    const int f = lower.partner[std::size_t(e)];
    if (e < f) {
      adj[std::size_t(lower_node(e))].push_back(lower_node(f));
      adj[std::size_t(lower_node(f))].push_back(lower_node(e));
    }
  }
  for (int e = 0; e < m + t; ++e) {
    const int f = upper.partner[std::size_t(e)];
    if (e < f) {
      adj[std::size_t(upper_node(e))].push_back(upper_node(f));
      adj[std::size_t(upper_node(f))].push_back(upper_node(e));
    }
  }
  FlatTangle out{b, t, std::vector<int>(std::size_t(b + t), -1), lower.circles + upper.circles};
  std::vector<bool> seen(std::size_t(nodes), false);
  for (int v = 0; v < b + t; ++v) {
    if (seen[std::size_t(v)]) continue;
    seen[std::size_t(v)] = true;
    int prev = v, cur = adj[std::size_t(v)][0];
    while (cur >= b + t) {
      seen[std::size_t(cur)] = true;
      const auto& nb = adj[std::size_t(cur)];
      const int nx = nb[0] == prev ? nb[1] : nb[0];
      prev = cur;
      cur = nx;
    }
    seen[std::size_t(cur)] = true;
    out.partner[std::size_t(v)] = cur;
    out.partner[std::size_t(cur)] = v;
  }
  // what is left of the middle level is a union of closed loops
  for (int v = b + t; v < nodes; ++v) {
    if (seen[std::size_t(v)]) continue;
    std::vector<int> todo{v};
    seen[std::size_t(v)] = true;
    while (!todo.empty()) {
      const int x = todo.back();
      todo.pop_back();
      for (int y : adj[std::size_t(x)])
        if (!seen[std::size_t(y)]) {
          seen[std::size_t(y)] = true;
          todo.push_back(y);
        }
    }
    ++out.circles;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Closed stacks

CircleStructure analyze(const Stack& s) {
  CircleStructure cs;
  const std::size_t L = s.layers.size();
  if (L == 0) return cs;
  if (s.layers.front().bottom != 0 || s.layers.back().top != 0) throw InternalError("stack is not closed");
  cs.level_offset.assign(L + 1, 0);
  for (std::size_t l = 0; l + 1 < L; ++l)
    if (s.layers[l].top != s.layers[l + 1].bottom) throw InternalError("stack layers do not match");
  int points = 0;
  for (std::size_t l = 0; l < L; ++l) {
    cs.level_offset[l] = points;
    points += (l == 0) ? s.layers[0].bottom : s.layers[l - 1].top;
  }
  cs.level_offset[L] = points;
  UnionFind uf(static_cast<std::size_t>(points));
  for (std::size_t l = 0; l < L; ++l) {
    const auto& t = s.layers[l];
    for (int e = 0; e < t.bottom + t.top; ++e) {
      const int f = t.partner[std::size_t(e)];
      if (e < f) uf.unite(endpoint_point(s, cs, int(l), e), endpoint_point(s, cs, int(l), f));
    }
  }
  cs.circle_of_point.assign(std::size_t(points), -1);
  std::vector<int> comp_of_root(std::size_t(points), -1);
  for (int p = 0; p < points; ++p) {
    const int r = uf.find(p);
    if (comp_of_root[std::size_t(r)] < 0) comp_of_root[std::size_t(r)] = cs.components++;
    cs.circle_of_point[std::size_t(p)] = comp_of_root[std::size_t(r)];
  }
  cs.free_offset.assign(L, 0);
  int k = cs.components;
  for (std::size_t l = 0; l < L; ++l) {
    cs.free_offset[l] = k;
    k += s.layers[l].circles;
  }
  cs.total = k;
  return cs;
}

int endpoint_point(const Stack& s, const CircleStructure& cs, int layer, int endpoint) {
  const auto& t = s.layers[std::size_t(layer)];
  if (endpoint < t.bottom) return cs.level_offset[std::size_t(layer)] + endpoint;
  return cs.level_offset[std::size_t(layer) + 1] + (endpoint - t.bottom);
}

StateComb apply_step(const SurgeryStep& step, const StateComb& in) {
  StateComb out;
  auto relabelled = [&](std::uint64_t bits) {
    std::uint64_t r = 0;
    for (std::size_t k = 0; k < step.map.size(); ++k)
      if (step.map[k] >= 0 && (bits >> k & 1u)) r |= std::uint64_t(1) << step.map[k];
    return r;
  };
  for (const auto& [bits, c] : in) {
    const std::uint64_t base = relabelled(bits);
    switch (step.kind) {
      case SurgeryStep::Kind::relabel:
        out[base] += c;
        break;
      case SurgeryStep::Kind::merge: {
        // m(1⊗1)=1, m(1⊗X)=m(X⊗1)=X, m(X⊗X)=0
        const bool xa = bits >> step.a & 1u, xb = bits >> step.b & 1u;
        if (xa && xb) break;
        out[base | (xa || xb ? std::uint64_t(1) << step.out_a : 0)] += c;
        break;
      }
      case SurgeryStep::Kind::split: {
        // Δ(1)=1⊗X+X⊗1, Δ(X)=X⊗X
        const std::uint64_t A = std::uint64_t(1) << step.out_a, B = std::uint64_t(1) << step.out_b;
        if (bits >> step.a & 1u) {
          out[base | A | B] += c;
        } else {
          out[base | B] += c;
          out[base | A] += c;
        }
        break;
      }
    }
  }
  for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
  return out;
}

StateComb SurgeryPlan::run(StateComb in) const {
  for (const auto& step : steps) in = apply_step(step, in);
  return in;
}

GlueResult glue(const Stack& lower, const Stack& upper) {
  GlueResult g;
  g.stack.layers = lower.layers;
  g.stack.layers.insert(g.stack.layers.end(), upper.layers.begin(), upper.layers.end());
  const auto lo = analyze(lower), up = analyze(upper), all = analyze(g.stack);
  const int lower_points = lo.level_offset.empty() ? 0 : lo.level_offset.back();
  const std::size_t lower_layers = lower.layers.size();
  g.lower_map.assign(std::size_t(lo.total), -1);
  g.upper_map.assign(std::size_t(up.total), -1);
  for (std::size_t p = 0; p < lo.circle_of_point.size(); ++p) g.lower_map[std::size_t(lo.circle_of_point[p])] = all.circle_of_point[p];
  for (std::size_t p = 0; p < up.circle_of_point.size(); ++p)
    g.upper_map[std::size_t(up.circle_of_point[p])] = all.circle_of_point[p + std::size_t(lower_points)];
  for (std::size_t l = 0; l < lower_layers; ++l)
    for (int k = 0; k < lower.layers[l].circles; ++k) g.lower_map[std::size_t(lo.free_offset[l] + k)] = all.free_offset[l] + k;
  for (std::size_t l = 0; l < upper.layers.size(); ++l)
    for (int k = 0; k < upper.layers[l].circles; ++k)
      g.upper_map[std::size_t(up.free_offset[l] + k)] = all.free_offset[l + lower_layers] + k;
  g.total = all.total;
  return g;
}

SurgeryStep merge_layers(Stack& s, int layer) {
  const std::size_t l = std::size_t(layer);
  const auto old = analyze(s);
  const FlatTangle lower = s.layers[l], upper = s.layers[l + 1];
  Stack next;
  next.layers.assign(s.layers.begin(), s.layers.begin() + std::ptrdiff_t(l));
  next.layers.push_back(compose(lower, upper));
  next.layers.insert(next.layers.end(), s.layers.begin() + std::ptrdiff_t(l) + 2, s.layers.end());
  const auto now = analyze(next);

  const int cut_begin = old.level_offset[l + 1], cut_end = old.level_offset[l + 2];
  const int removed = cut_end - cut_begin;
  SurgeryStep step;
  step.kind = SurgeryStep::Kind::relabel;
  step.map.assign(std::size_t(old.total), -1);
  step.new_count = now.total;
  for (int p = 0; p < int(old.circle_of_point.size()); ++p) {
    if (p >= cut_begin && p < cut_end) continue;
    const int np = p < cut_begin ? p : p - removed;
    step.map[std::size_t(old.circle_of_point[std::size_t(p)])] = now.circle_of_point[std::size_t(np)];
  }
  // components living only on the removed level became new free circles of the composite
  int loop = 0;
  const int loops_base = now.free_offset[l] + lower.circles + upper.circles;
  for (int c = 0; c < old.components; ++c)
    if (step.map[std::size_t(c)] < 0) step.map[std::size_t(c)] = loops_base + loop++;
  for (std::size_t m = 0; m < s.layers.size(); ++m) {
    for (int k = 0; k < s.layers[m].circles; ++k) {
      int target;
      if (m < l)
        target = now.free_offset[m] + k;
      else if (m == l)
        target = now.free_offset[l] + k;
      else if (m == l + 1)
        target = now.free_offset[l] + lower.circles + k;
      else
        target = now.free_offset[m - 1] + k;
      step.map[std::size_t(old.free_offset[m] + k)] = target;
    }
  }
  s = std::move(next);
  return step;
}

SurgeryStep saddle(Stack& s, int layer, int e1, int e2) {
  const std::size_t l = std::size_t(layer);
  const auto old = analyze(s);
  FlatTangle& t = s.layers[l];
  const int p1 = t.partner[std::size_t(e1)], p2 = t.partner[std::size_t(e2)];
  if (e1 == e2 || p1 == e2) throw InternalError("saddle between an arc and itself");
  const int pe1 = endpoint_point(s, old, layer, e1), pe2 = endpoint_point(s, old, layer, e2);
  const int pp1 = endpoint_point(s, old, layer, p1);
  t.partner[std::size_t(e1)] = e2;
  t.partner[std::size_t(e2)] = e1;
  t.partner[std::size_t(p1)] = p2;
  t.partner[std::size_t(p2)] = p1;
  const auto now = analyze(s);

  SurgeryStep step;
  step.map.assign(std::size_t(old.total), -1);
  step.new_count = now.total;
  const int A = old.circle_of_point[std::size_t(pe1)], B = old.circle_of_point[std::size_t(pe2)];
  if (A != B) {
    step.kind = SurgeryStep::Kind::merge;
    step.a = A;
    step.b = B;
    step.out_a = now.circle_of_point[std::size_t(pe1)];
  } else {
    step.kind = SurgeryStep::Kind::split;
    step.a = A;
    step.out_a = now.circle_of_point[std::size_t(pe1)];
    step.out_b = now.circle_of_point[std::size_t(pp1)];
    if (step.out_a == step.out_b) throw InternalError("non-orientable saddle");
  }
  for (std::size_t p = 0; p < old.circle_of_point.size(); ++p) {
    const int c = old.circle_of_point[p];
    if (c == A || c == B) continue;
    step.map[std::size_t(c)] = now.circle_of_point[p];
  }
  for (std::size_t m = 0; m < s.layers.size(); ++m)
    for (int k = 0; k < s.layers[m].circles; ++k) step.map[std::size_t(old.free_offset[m] + k)] = now.free_offset[m] + k;
  return step;
}

SurgeryPlan contraction_plan(const Stack& lower, const Stack& upper) {
  if (lower.layers.size() != 3 || upper.layers.size() != 3) throw InternalError("contraction_plan expects canonical three-layer stacks");
  const FlatTangle& caps_b = lower.layers[2];
  const FlatTangle& cups_b = upper.layers[0];
  if (caps_b.partner != cups_b.partner) throw InternalError("contraction_plan: middle matchings differ");
  auto g = glue(lower, upper);
  SurgeryPlan plan;
  plan.lower_map = std::move(g.lower_map);
  plan.upper_map = std::move(g.upper_map);
  Stack s = std::move(g.stack);
  // [cups a, t, caps b, cups b, u, caps c]
  plan.steps.push_back(merge_layers(s, 2));
  const int n2 = caps_b.bottom;
  for (int i = 0; i < n2; ++i) {
    const int j = caps_b.partner[std::size_t(i)];
    if (j < i) continue;
    plan.steps.push_back(saddle(s, 2, i, n2 + i));
  }
  if (!(s.layers[2] == FlatTangle::identity(n2))) throw InternalError("contraction did not reach the identity");
  plan.steps.push_back(merge_layers(s, 1));  // t ∘ id
  plan.steps.push_back(merge_layers(s, 1));  // u ∘ t
  plan.result = std::move(s);
  return plan;
}

StateComb contract(const SurgeryPlan& plan, std::uint64_t lower_state, std::uint64_t upper_state) {
  std::uint64_t bits = 0;
  for (std::size_t k = 0; k < plan.lower_map.size(); ++k)
    if (lower_state >> k & 1u) bits |= std::uint64_t(1) << plan.lower_map[k];
  for (std::size_t k = 0; k < plan.upper_map.size(); ++k)
    if (upper_state >> k & 1u) bits |= std::uint64_t(1) << plan.upper_map[k];
  StateComb in;
  in[bits] = 1;
  return plan.run(std::move(in));
}

int circle_count(const Matching& a, const FlatTangle& t, const Matching& b) {
  Stack s{{FlatTangle::cups(a), t, FlatTangle::caps(b)}};
  return analyze(s).total;
}

}  // namespace qhh::planar
