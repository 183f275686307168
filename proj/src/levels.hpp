#pragma once

#include <memory>
#include <vector>

#include "weights.hpp"

namespace wst {

/// Dyadic reduction of a weighted tree: each node lands in the level set
/// I_k = { t : 2^{-k-1} < sigma(t) <= 2^{-k} } and gets the rounded weight
/// sigma_hat(t) = 2^{-k}. Levels are non-decreasing along branches, so the
/// intersection of a level set with a root path is a branch.
class LevelPartition {
public:
  explicit LevelPartition(std::shared_ptr<const WeightedTree> base);

  const WeightedTree& base() const { return *base_; }
  std::shared_ptr<const WeightedTree> base_ptr() const { return base_; }
  const RootedTree& tree() const { return base_->tree(); }
  double q() const { return base_->q(); }

  int level_of(int v) const { return level_[v]; }
  double sigma_hat(int v) const { return sigma_hat_[v]; }
  bool equiv(int t, int s) const { return level_[t] == level_[s]; }

  /// Start of the level branch through s: the minimal element of
  /// I_{level(s)} on the root path of s.
  int lambda_of(int s) const { return lambda_[s]; }

  /// A WeightedTree carrying sigma_hat instead of sigma (same alpha, q).
  const WeightedTree& dyadic_tree() const { return *dyadic_; }
  std::shared_ptr<const WeightedTree> dyadic_tree_ptr() const { return dyadic_; }

private:
  std::shared_ptr<const WeightedTree> base_;
  std::shared_ptr<const WeightedTree> dyadic_;
  std::vector<int> level_;
  std::vector<double> sigma_hat_;
  std::vector<int> lambda_;
};

LevelPartition dyadic_reduction(std::shared_ptr<const WeightedTree> wt);

/// (W mu)(t) = alpha(t) 2^{-k} sum_{s >= t, s in I_k} mu(s) for t in I_k.
/// Localized counterpart of apply_V; single pass over the tree.
SparseVec apply_W(const LevelPartition& lp, const SparseVec& mu);

/// Column of W at s: sigma_hat(s) * alpha(t) on the branch [lambda(s), s], else 0.
SparseVec w_column(const LevelPartition& lp, int s);

}  // namespace wst
