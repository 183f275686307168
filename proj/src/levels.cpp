#include "levels.hpp"

#include <cmath>

#include "errors.hpp"

namespace wst {

namespace {

// Unique k with 2^{-k-1} < sigma <= 2^{-k}; bracket-checked to absorb
// floating error in log2 near exact powers of two.
int dyadic_level(double sigma) {
  int k = static_cast<int>(std::floor(-std::log2(sigma)));
  while (sigma > std::ldexp(1.0, -k)) ++k;
  while (sigma <= std::ldexp(1.0, -k - 1)) --k;
  return k;
}

}  // namespace

LevelPartition::LevelPartition(std::shared_ptr<const WeightedTree> base) : base_(std::move(base)) {
  const auto& t = base_->tree();
  const int n = t.node_count();
  level_.resize(n);
  sigma_hat_.resize(n);
  lambda_.resize(n);
  for (int v = 0; v < n; ++v) {
    level_[v] = dyadic_level(base_->sigma(v));
    sigma_hat_[v] = std::ldexp(1.0, -level_[v]);
  }
  for (int v : t.preorder()) {
    int p = t.parent_of(v);
    lambda_[v] = (p >= 0 && level_[p] == level_[v]) ? lambda_[p] : v;
  }
  dyadic_ = std::make_shared<WeightedTree>(base_->tree_ptr(), base_->alphas(), sigma_hat_, base_->q());
}

LevelPartition dyadic_reduction(std::shared_ptr<const WeightedTree> wt) {
  return LevelPartition(std::move(wt));
}

SparseVec apply_W(const LevelPartition& lp, const SparseVec& mu) {
  const auto& t = lp.tree();
  std::vector<double> subtotal(t.node_count(), 0.0);
  for (const auto& [node, val] : mu.entries) subtotal[node] = val;
  const auto& order = t.preorder();
  // subtotal(t) = sum of mu over descendants of t inside t's own level set
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    int p = t.parent_of(*it);
    if (p >= 0 && lp.level_of(p) == lp.level_of(*it)) subtotal[p] += subtotal[*it];
  }
  SparseVec out;
  for (int v = 0; v < t.node_count(); ++v) {
    double x = lp.base().alpha(v) * lp.sigma_hat(v) * subtotal[v];
    if (x != 0.0) out.entries.emplace_back(v, x);
  }
  return out;
}

SparseVec w_column(const LevelPartition& lp, int s) {
  const auto& t = lp.tree();
  t.check_node(s);
  std::vector<std::pair<int, double>> entries;
  for (int v = s; v != -1 && lp.level_of(v) == lp.level_of(s); v = t.parent_of(v))
    entries.emplace_back(v, lp.base().alpha(v) * lp.sigma_hat(s));
  return SparseVec::from_pairs(std::move(entries));
}

}  // namespace wst
