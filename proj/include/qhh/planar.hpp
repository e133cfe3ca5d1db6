#pragma once

// Planar combinatorics behind the arc algebras: crossingless matchings, flat
// tangles, closed stacks of flat tangles, and the rank-2 Frobenius TQFT
// (V = k[X]/(X^2), deg 1 = +1, deg X = -1) evaluated on saddle cobordisms.
//
// Points are 0-based throughout. A flat tangle with b bottom and t top points
// numbers its endpoints 0..b-1 (bottom, left to right) and b..b+t-1 (top, left
// to right).

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace qhh::planar {

/// Noncrossing perfect matching of 2n points on a line; partner[i] is the point joined to i.
struct Matching {
  std::vector<int> partner;

  int points() const { return int(partner.size()); }
  bool operator==(const Matching&) const = default;
  std::string format() const;
};

/// All crossingless matchings of 2n points (Catalan(n) of them, n >= 0), ordered
/// by the partner of point 0, then the inside, then the outside recursively.
std::vector<Matching> matchings(int n);

bool is_noncrossing_perfect(const std::vector<int>& partner);

struct FlatTangle {
  int bottom = 0;
  int top = 0;
  std::vector<int> partner;
  /// Closed components not touching the boundary.
  int circles = 0;

  static FlatTangle identity(int k);
  /// Local maximum joining strands i, i+1 (1-based) of k: k -> k-2.
  static FlatTangle cup(int k, int i);
  /// Local minimum creating strands i, i+1 (1-based) of k+2: k -> k+2.
  static FlatTangle cap(int k, int i);
  /// cap(k-2, i) ∘ cup(k, i): k -> k.
  static FlatTangle turnback(int k, int i);
  /// Matching a as a (0, 2n) tangle.
  static FlatTangle cups(const Matching& a);
  /// Mirror image W(b) as a (2n, 0) tangle.
  static FlatTangle caps(const Matching& b);
  /// Same tangle with `extra` more free circles.
  FlatTangle with_circles(int extra) const;

  /// Perfect pairing that is noncrossing in the strip.
  bool is_valid() const;
  bool operator==(const FlatTangle&) const = default;
  std::string format() const;
};

/// upper ∘ lower. New closed loops formed at the interface are counted in `circles`
/// (ordered after lower's and upper's own circles).
FlatTangle compose(const FlatTangle& lower, const FlatTangle& upper);

/// Closed stack of flat tangles, bottom to top: layers[0].bottom == 0, layers.back().top == 0.
struct Stack {
  std::vector<FlatTangle> layers;
};

/// Circles of a closed stack in canonical order: boundary-touching components
/// ordered by their smallest point (levels bottom to top, points left to right),
/// followed by the free circles of each layer in layer order.
struct CircleStructure {
  std::vector<int> level_offset;   // first global point id of each level
  std::vector<int> circle_of_point; // global point id -> circle
  std::vector<int> free_offset;     // first free-circle index of each layer
  int components = 0;
  int total = 0;
};

CircleStructure analyze(const Stack& s);

/// Global point id of endpoint e of layer l.
int endpoint_point(const Stack& s, const CircleStructure& cs, int layer, int endpoint);

/// Linear combination of TQFT states (bit k set = circle k labelled X). Frobenius
/// structure maps in this TQFT have nonnegative integer coefficients.
using StateComb = std::map<std::uint64_t, long long>;

/// One step of a surgery: either relabelling circles (map[old] = new) or a saddle.
struct SurgeryStep {
  enum class Kind { relabel, merge, split } kind = Kind::relabel;
  std::vector<int> map;  // old -> new for circles not involved in a saddle, -1 for involved
  int new_count = 0;
  int a = -1, b = -1;    // merge: old circles a, b; split: old circle a
  int out_a = -1, out_b = -1;  // merge: new circle out_a; split: new circles out_a, out_b
};

StateComb apply_step(const SurgeryStep& step, const StateComb& in);

/// Surgery taking states on two glued stacks to states on `result`. lower_map and
/// upper_map place the circles of the two input stacks among the circles of the glued stack.
struct SurgeryPlan {
  std::vector<int> lower_map;
  std::vector<int> upper_map;
  std::vector<SurgeryStep> steps;
  Stack result;

  StateComb run(StateComb in) const;
};

/// Glues two closed stacks (disjoint union). States of the result are lower bits
/// and upper bits re-indexed through `lower_map` and `upper_map`.
struct GlueResult {
  Stack stack;
  std::vector<int> lower_map;
  std::vector<int> upper_map;
  int total = 0;
};
GlueResult glue(const Stack& lower, const Stack& upper);

/// Replaces layers l and l+1 by their composite.
SurgeryStep merge_layers(Stack& s, int layer);

/// Saddle on layer l: arcs (e1, p1) and (e2, p2) become (e1, e2) and (p1, p2).
SurgeryStep saddle(Stack& s, int layer, int e1, int e2);

/// Product in the Khovanov sense of a state on lower = [cups(a), t, caps(b)] with a state
/// on upper = [cups(b), s, caps(c)]: the middle caps(b) cups(b) is contracted by n saddles and
/// the result is the canonical stack [cups(a), compose(t, s), caps(c)].
/// Requires the matchings b to agree (checked by the caller).
SurgeryPlan contraction_plan(const Stack& lower, const Stack& upper);

/// Applies a contraction plan to one pair of basis states.
StateComb contract(const SurgeryPlan& plan, std::uint64_t lower_state, std::uint64_t upper_state);

/// Number of circles in the closure [cups(a), t, caps(b)].
int circle_count(const Matching& a, const FlatTangle& t, const Matching& b);

}  // namespace qhh::planar
