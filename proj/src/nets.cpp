#include "nets.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "errors.hpp"

namespace wst {

double epsilon_schedule(int m, double q) {
  if (m < 1) fail(ErrorCode::usage, "epsilon schedule starts at m = 1");
  if (!(q > 1.0 && q <= 2.0)) fail(ErrorCode::usage, "q must lie in (1, 2]");
  return std::pow(m * std::log(2.0), -(1.0 - 1.0 / q));
}

namespace {

// ----------------------------------------------------------------------
// exact ball cover: branch-and-bound set cover over uint64_t masks (n <= 64)
// ----------------------------------------------------------------------

struct CoverProblem {
  int n = 0;
  std::vector<uint64_t> sets;  // sets[c] = nodes covered by center c
  uint64_t universe = 0;

  int lower_bound(uint64_t uncovered) const {
    if (!uncovered) return 0;
    // greedy family of pairwise set-disjoint elements; each needs its own set
    int lb = 0;
    uint64_t blocked = 0;  // union of candidate sets of chosen elements
    uint64_t rest = uncovered;
    while (rest) {
      int e = std::countr_zero(rest);
      rest &= rest - 1;
      uint64_t cand = 0;
      for (int c = 0; c < n; ++c)
        if (sets[c] & (uint64_t(1) << e)) cand |= sets[c] & uncovered;
      // recomputing candidate unions per element is fine at n <= 64
      bool indep = true;
      for (int c = 0; c < n; ++c)
        if ((sets[c] & (uint64_t(1) << e)) && (sets[c] & blocked)) {
          indep = false;
          break;
        }
      if (indep) {
        ++lb;
        blocked |= cand;
      }
    }
    int biggest = 1;
    for (int c = 0; c < n; ++c) biggest = std::max(biggest, std::popcount(sets[c] & uncovered));
    int count_lb = (std::popcount(uncovered) + biggest - 1) / biggest;
    return std::max(lb, count_lb);
  }

  void search(uint64_t uncovered, std::vector<int>& chosen, int& best, std::vector<int>& best_set) const {
    if (!uncovered) {
      if (static_cast<int>(chosen.size()) < best) {
        best = static_cast<int>(chosen.size());
        best_set = chosen;
      }
      return;
    }
    if (static_cast<int>(chosen.size()) + lower_bound(uncovered) >= best) return;
    // branch on the uncovered element with the fewest candidate centers
    int branch_e = -1, branch_count = n + 1;
    uint64_t rest = uncovered;
    while (rest) {
      int e = std::countr_zero(rest);
      rest &= rest - 1;
      int cnt = 0;
      for (int c = 0; c < n; ++c)
        if (sets[c] & (uint64_t(1) << e)) ++cnt;
      if (cnt < branch_count) {
        branch_count = cnt;
        branch_e = e;
      }
    }
    if (branch_count == 0) return;  // element with no candidate set: infeasible
    for (int c = 0; c < n; ++c) {
      if (!(sets[c] & (uint64_t(1) << branch_e))) continue;
      chosen.push_back(c);
      search(uncovered & ~sets[c], chosen, best, best_set);
      chosen.pop_back();
    }
  }

  // Is there a cover of size <= budget whose centers (beyond `uncovered`'s
  // implications) all have id >= min_id? Used for the lexicographic pass.
  bool feasible(uint64_t uncovered, int budget, int min_id) const {
    if (!uncovered) return true;
    if (budget <= 0) return false;
    if (lower_bound(uncovered) > budget) return false;
    int branch_e = -1, branch_count = n + 1;
    uint64_t rest = uncovered;
    while (rest) {
      int e = std::countr_zero(rest);
      rest &= rest - 1;
      int cnt = 0;
      for (int c = min_id; c < n; ++c)
        if (sets[c] & (uint64_t(1) << e)) ++cnt;
      if (cnt < branch_count) {
        branch_count = cnt;
        branch_e = e;
      }
    }
    if (branch_count == 0) return false;
    for (int c = min_id; c < n; ++c) {
      if (!(sets[c] & (uint64_t(1) << branch_e))) continue;
      if (feasible(uncovered & ~sets[c], budget - 1, min_id)) return true;
    }
    return false;
  }
};

std::vector<uint64_t> ball_sets(const DistanceContext& ctx, double eps, WeightKind kind) {
  const int n = ctx.tree().node_count();
  std::vector<uint64_t> sets(n, 0);
  for (int c = 0; c < n; ++c)
    for (int s = 0; s < n; ++s)
      if (ctx.full_distance(c, s, kind) < eps) sets[c] |= uint64_t(1) << s;
  return sets;
}

CoveringResult exact_ball_cover(const DistanceContext& ctx, double eps, WeightKind kind, int exact_cap) {
  const int n = ctx.tree().node_count();
  if (n > exact_cap || n > 64)
    fail(ErrorCode::size_limit, "exact ball cover limited to " + std::to_string(std::min(exact_cap, 64)) + " nodes");
  CoverProblem p;
  p.n = n;
  p.sets = ball_sets(ctx, eps, kind);
  p.universe = (n == 64) ? ~uint64_t(0) : ((uint64_t(1) << n) - 1);

  int best = n + 1;
  std::vector<int> chosen, best_set;
  // greedy warm start
  {
    uint64_t unc = p.universe;
    std::vector<int> greedy;
    while (unc) {
      int bc = -1, bv = 0;
      for (int c = 0; c < n; ++c) {
        int v = std::popcount(p.sets[c] & unc);
        if (v > bv) {
          bv = v;
          bc = c;
        }
      }
      if (bc < 0) fail(ErrorCode::invariant_violation, "node not coverable by any ball");
      greedy.push_back(bc);
      unc &= ~p.sets[bc];
    }
    best = static_cast<int>(greedy.size());
    best_set = greedy;
  }
  p.search(p.universe, chosen, best, best_set);

  // lexicographically smallest optimum, for reproducible center reporting
  std::vector<int> lex;
  uint64_t unc = p.universe;
  int budget = best;
  int min_id = 0;
  while (unc) {
    bool placed = false;
    for (int c = min_id; c < n; ++c) {
      if (!(p.sets[c] & unc)) continue;
      if (p.feasible(unc & ~p.sets[c], budget - 1, c + 1)) {
        lex.push_back(c);
        unc &= ~p.sets[c];
        --budget;
        min_id = c + 1;
        placed = true;
        break;
      }
    }
    if (!placed) {  // should not happen; fall back to the B&B solution
      lex = best_set;
      std::sort(lex.begin(), lex.end());
      break;
    }
  }

  CoveringResult r;
  r.value = best;
  r.exact = true;
  r.centers = lex;
  r.epsilon = eps;
  return r;
}

CoveringResult greedy_ball_cover(const DistanceContext& ctx, double eps, WeightKind kind) {
  const int n = ctx.tree().node_count();
  std::vector<char> covered(n, 0);
  int remaining = n;
  CoveringResult r;
  r.exact = false;
  r.epsilon = eps;
  // cache nothing; O(n^2) distance evaluations per round is fine at CLI scale
  while (remaining > 0) {
    int bc = -1, bv = 0;
    for (int c = 0; c < n; ++c) {
      int v = 0;
      for (int s = 0; s < n; ++s)
        if (!covered[s] && ctx.full_distance(c, s, kind) < eps) ++v;
      if (v > bv) {
        bv = v;
        bc = c;
      }
    }
    if (bc < 0) fail(ErrorCode::invariant_violation, "node not coverable by any ball");
    r.centers.push_back(bc);
    for (int s = 0; s < n; ++s)
      if (!covered[s] && ctx.full_distance(bc, s, kind) < eps) {
        covered[s] = 1;
        --remaining;
      }
  }
  r.value = static_cast<int>(r.centers.size());
  return r;
}

// ----------------------------------------------------------------------
// order nets: coverage regions along root paths are contiguous suffixes,
// so a deadline-driven bottom-up sweep is exactly optimal, both in
// cardinality and in total node order among minimum augmentations.
// ----------------------------------------------------------------------

double order_metric_distance(const DistanceContext& ctx, NetMetric metric, int t, int s) {
  return metric == NetMetric::d_I ? ctx.localized_distance(t, s) : ctx.order_distance(t, s);
}

// Shallowest ancestor tau of s (possibly s itself) with dist(tau, s) < eps.
// Exists because dist(s, s) = 0; distances grow as tau ascends.
int coverage_top(const DistanceContext& ctx, NetMetric metric, double eps, int s) {
  const auto& tr = ctx.tree();
  int low = s;
  for (int tau = tr.parent_of(s); tau != -1; tau = tr.parent_of(tau)) {
    if (order_metric_distance(ctx, metric, tau, s) < eps)
      low = tau;
    else
      break;
  }
  return low;
}

std::vector<char> covered_mask(const DistanceContext& ctx, NetMetric metric, double eps,
                               const std::vector<int>& roots) {
  const auto& tr = ctx.tree();
  const int n = tr.node_count();
  std::vector<char> in_roots(n, 0);
  for (int r : roots) {
    tr.check_node(r);
    in_roots[r] = 1;
  }
  std::vector<char> cov(n, 0);
  for (int s = 0; s < n; ++s) {
    for (int tau = s; tau != -1; tau = tr.parent_of(tau)) {
      if (in_roots[tau] && order_metric_distance(ctx, metric, tau, s) < eps) {
        cov[s] = 1;
        break;
      }
      // distances only grow while ascending; once the distance is out of
      // range no higher ancestor can cover s
      if (tau != s && order_metric_distance(ctx, metric, tau, s) >= eps) break;
    }
  }
  return cov;
}

}  // namespace

std::vector<int> uncovered_by(const DistanceContext& ctx, double eps, const std::vector<int>& roots) {
  auto cov = covered_mask(ctx, NetMetric::d_I, eps, roots);
  std::vector<int> out;
  for (int s = 0; s < static_cast<int>(cov.size()); ++s)
    if (!cov[s]) out.push_back(s);
  return out;
}

std::vector<int> order_net_augment(const DistanceContext& ctx, double eps, NetMetric metric,
                                   const std::vector<int>& existing) {
  const auto& tr = ctx.tree();
  const int n = tr.node_count();
  auto cov = covered_mask(ctx, metric, eps, existing);

  // deadline depth of the binding demand per subtree; -1 = nothing pending
  std::vector<int> pending(n, -1);
  std::vector<int> placed;
  const auto& order = tr.preorder();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    int v = *it;
    int dl = pending[v];
    if (!cov[v]) dl = std::max(dl, tr.order_of(coverage_top(ctx, metric, eps, v)));
    if (dl == tr.order_of(v)) {
      placed.push_back(v);
      dl = -1;
    }
    int p = tr.parent_of(v);
    if (p >= 0)
      pending[p] = std::max(pending[p], dl);
    else if (dl >= 0)
      fail(ErrorCode::invariant_violation, "pending demand survived past the root");
  }
  std::sort(placed.begin(), placed.end());
  return placed;
}

CoveringResult order_net_number(const DistanceContext& ctx, double eps, NetMetric metric,
                                SolveMode mode) {
  CoveringResult r;
  r.epsilon = eps;
  if (mode == SolveMode::exact) {
    r.centers = order_net_augment(ctx, eps, metric, {});
    r.value = static_cast<int>(r.centers.size());
    r.exact = true;
    return r;
  }
  // greedy max-coverage over descendant cones
  const auto& tr = ctx.tree();
  const int n = tr.node_count();
  std::vector<char> covered(n, 0);
  int remaining = n;
  auto cone_gain = [&](int c) {
    int gain = 0;
    // descendants of c within eps
    std::vector<int> stack = {c};
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      if (!covered[v] && order_metric_distance(ctx, metric, c, v) < eps) ++gain;
      for (int ch : tr.children_of(v)) stack.push_back(ch);
    }
    return gain;
  };
  while (remaining > 0) {
    int bc = -1, bv = 0;
    for (int c = 0; c < n; ++c) {
      int v = cone_gain(c);
      if (v > bv) {
        bv = v;
        bc = c;
      }
    }
    if (bc < 0) fail(ErrorCode::invariant_violation, "order net greedy stalled");
    r.centers.push_back(bc);
    std::vector<int> stack = {bc};
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      if (!covered[v] && order_metric_distance(ctx, metric, bc, v) < eps) {
        covered[v] = 1;
        --remaining;
      }
      for (int ch : tr.children_of(v)) stack.push_back(ch);
    }
  }
  std::sort(r.centers.begin(), r.centers.end());
  r.value = static_cast<int>(r.centers.size());
  r.exact = false;
  return r;
}

CoveringResult covering_number(const DistanceContext& ctx, double eps, SolveMode mode,
                               WeightKind kind, int exact_cap) {
  if (!(eps > 0.0)) fail(ErrorCode::usage, "eps must be positive");
  return mode == SolveMode::exact ? exact_ball_cover(ctx, eps, kind, exact_cap)
                                  : greedy_ball_cover(ctx, eps, kind);
}

CoveringRelationReport verify_covering_relations(const DistanceContext& ctx,
                                                 const std::vector<double>& eps_grid,
                                                 int exact_cap) {
  CoveringRelationReport rep;
  for (double eps : eps_grid) {
    CoveringRelationRow row;
    row.eps = eps;
    row.n_ball = covering_number(ctx, eps, SolveMode::exact, WeightKind::dyadic, exact_cap).value;
    row.n_ball_2eps = covering_number(ctx, 2 * eps, SolveMode::exact, WeightKind::dyadic, exact_cap).value;
    row.n_order = order_net_number(ctx, eps, NetMetric::d, SolveMode::exact).value;
    row.n_order_2eps = order_net_number(ctx, 2 * eps, NetMetric::d, SolveMode::exact).value;
    row.n_ball_orig = covering_number(ctx, eps, SolveMode::exact, WeightKind::original, exact_cap).value;
    row.n_ball_orig_2eps =
        covering_number(ctx, 2 * eps, SolveMode::exact, WeightKind::original, exact_cap).value;
    row.pass_order_dominates = row.n_ball <= row.n_order;
    row.pass_reverse = row.n_order_2eps <= row.n_ball;
    row.pass_reduction = row.n_ball_2eps <= row.n_ball_orig;
    row.literal_reduction_claim = row.n_ball <= row.n_ball_orig_2eps;
    rep.all_pass = rep.all_pass && row.pass_order_dominates && row.pass_reverse && row.pass_reduction;
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace wst
