#pragma once

#include <string>
#include <vector>

#include "metrics.hpp"

namespace wst {

/// eps_m = (m ln 2)^{-(1-1/q)}, m >= 1.
double epsilon_schedule(int m, double q);

enum class SolveMode { exact, greedy };
enum class NetMetric { d, d_I };

struct CoveringResult {
  int value = 0;
  bool exact = false;
  std::vector<int> centers;
  double epsilon = 0.0;
};

/// Minimal (exact) or greedy number of open eps-balls under full_distance
/// covering the tree. Exact mode is a branch-and-bound set cover and is
/// limited to trees with at most `exact_cap` nodes (default 64).
CoveringResult covering_number(const DistanceContext& ctx, double eps, SolveMode mode,
                               WeightKind kind = WeightKind::dyadic, int exact_cap = 64);

/// Minimal set S such that every node t has some s in S with s preceding t
/// and distance < eps. The exact solver runs in O(n * depth) for d_I; its
/// optimality rests on coverage regions being root-path suffixes.
CoveringResult order_net_number(const DistanceContext& ctx, double eps, NetMetric metric,
                                SolveMode mode);

/// Minimal augmentation A (by cardinality, then by total node order) such
/// that existing + A is an eps-order net w.r.t. the chosen metric.
/// The exact construction used by the root-chain module.
std::vector<int> order_net_augment(const DistanceContext& ctx, double eps, NetMetric metric,
                                   const std::vector<int>& existing);

/// Nodes not covered by `roots` within eps (order-net sense, metric d_I).
std::vector<int> uncovered_by(const DistanceContext& ctx, double eps, const std::vector<int>& roots);

struct CoveringRelationRow {
  double eps = 0.0;
  int n_ball = 0;        // N(T, d, eps), dyadic metric
  int n_order = 0;       // order covering number, dyadic metric
  int n_ball_2eps = 0;
  int n_order_2eps = 0;
  int n_ball_orig = 0;       // N under the original-sigma metric at eps
  int n_ball_orig_2eps = 0;  // ... and at 2 eps
  bool pass_order_dominates = false;  // N(eps) <= Ntilde(eps)
  bool pass_reverse = false;          // Ntilde(2 eps) <= N(eps)
  bool pass_reduction = false;        // N(d_hat, 2 eps) <= N(d, eps)
  bool literal_reduction_claim = false;  // N(d_hat, eps) <= N(d, 2 eps); reported only
};

struct CoveringRelationReport {
  std::vector<CoveringRelationRow> rows;
  bool all_pass = true;
};

/// Exact covering oracles on an eps grid; asserts the order-net sandwich and
/// the dyadic-reduction covering comparison.
CoveringRelationReport verify_covering_relations(const DistanceContext& ctx,
                                                 const std::vector<double>& eps_grid,
                                                 int exact_cap = 64);

}  // namespace wst
