#pragma once

#include <memory>
#include <vector>

#include "levels.hpp"

namespace wst {

/// Which sigma the branch metric is built on. Everything downstream of the
/// dyadic reduction uses `dyadic` (sigma_hat); `original` exists so the
/// reduction's covering-number comparison can evaluate both metrics.
enum class WeightKind { dyadic, original };

/// Precomputed prefix sums for the branch metric d and its localization d_I.
/// Read-only once built; all queries are O(path length) or O(1).
class DistanceContext {
public:
  explicit DistanceContext(std::shared_ptr<const LevelPartition> lp);

  const LevelPartition& levels() const { return *lp_; }
  std::shared_ptr<const LevelPartition> levels_ptr() const { return lp_; }
  const RootedTree& tree() const { return lp_->tree(); }
  double q() const { return lp_->q(); }

  /// Cumulative alpha^q along the root path, including v itself.
  double prefix(int v) const { return prefix_[v]; }
  /// Cumulative alpha^q along v's level branch [lambda(v), v], including v.
  double level_prefix(int v) const { return level_prefix_[v]; }

  /// d(t,s) = max over v in (t,s] of (sum_{(t,v]} alpha^q)^{1/q} * sigma(v),
  /// for t preceding s. Zero when t == s.
  double order_distance(int t, int s, WeightKind kind = WeightKind::dyadic) const;

  /// Extension of d to arbitrary pairs: for incomparable t, s the maximum of
  /// the two order distances from their deepest common ancestor.
  double full_distance(int t, int s, WeightKind kind = WeightKind::dyadic) const;

  /// d_I(t,s) = sigma_hat(s) (sum_{v in (t,s], v ~ s} alpha(v)^q)^{1/q} for
  /// t preceding s; +infinity otherwise. Not a metric; O(1).
  double localized_distance(int t, int s) const;

  /// max over nodes v of prefix(v)^{1/q} * sigma_hat(v); dominates
  /// full_distance(root, s) for every s.
  double kappa_hat() const { return kappa_hat_; }

  double diameter(WeightKind kind = WeightKind::dyadic) const;

private:
  std::shared_ptr<const LevelPartition> lp_;
  std::vector<double> prefix_;
  std::vector<double> level_prefix_;
  double kappa_hat_;
};

}  // namespace wst
