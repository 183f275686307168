#include "metrics.hpp"

#include <cmath>
#include <limits>

#include "errors.hpp"

namespace wst {

DistanceContext::DistanceContext(std::shared_ptr<const LevelPartition> lp) : lp_(std::move(lp)) {
  const auto& t = lp_->tree();
  const auto& wt = lp_->base();
  const int n = t.node_count();
  prefix_.resize(n);
  level_prefix_.resize(n);
  kappa_hat_ = 0.0;
  for (int v : t.preorder()) {
    int p = t.parent_of(v);
    double aq = std::pow(wt.alpha(v), wt.q());
    prefix_[v] = (p >= 0 ? prefix_[p] : 0.0) + aq;
    level_prefix_[v] = (p >= 0 && lp_->level_of(p) == lp_->level_of(v) ? level_prefix_[p] : 0.0) + aq;
    kappa_hat_ = std::max(kappa_hat_, std::pow(prefix_[v], 1.0 / wt.q()) * lp_->sigma_hat(v));
  }
}

double DistanceContext::order_distance(int t, int s, WeightKind kind) const {
  const auto& tr = tree();
  tr.check_node(t);
  tr.check_node(s);
  if (!tr.is_ancestor(t, s))
    fail(ErrorCode::not_comparable, std::to_string(t) + " does not precede " + std::to_string(s));
  double q = this->q();
  double best = 0.0;
  for (int v = s; v != t; v = tr.parent_of(v)) {
    double w = (kind == WeightKind::dyadic) ? lp_->sigma_hat(v) : lp_->base().sigma(v);
    best = std::max(best, std::pow(prefix_[v] - prefix_[t], 1.0 / q) * w);
  }
  return best;
}

double DistanceContext::full_distance(int t, int s, WeightKind kind) const {
  const auto& tr = tree();
  if (t == s) {
    tr.check_node(t);
    return 0.0;
  }
  int w = tr.common_ancestor(t, s);
  if (w == t) return order_distance(t, s, kind);
  if (w == s) return order_distance(s, t, kind);
  return std::max(order_distance(w, t, kind), order_distance(w, s, kind));
}

double DistanceContext::localized_distance(int t, int s) const {
  const auto& tr = tree();
  tr.check_node(t);
  tr.check_node(s);
  if (!tr.is_ancestor(t, s)) return std::numeric_limits<double>::infinity();
  double sum = level_prefix_[s];
  if (lp_->level_of(t) == lp_->level_of(s)) sum -= level_prefix_[t];
  return lp_->sigma_hat(s) * std::pow(sum, 1.0 / q());
}

double DistanceContext::diameter(WeightKind kind) const {
  const auto& tr = tree();
  double best = 0.0;
  for (int a = 0; a < tr.node_count(); ++a)
    for (int b = a + 1; b < tr.node_count(); ++b) best = std::max(best, full_distance(a, b, kind));
  return best;
}

}  // namespace wst
