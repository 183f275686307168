#pragma once

// Shared fixtures and independent brute-force oracles. Oracles compute the
// quantities straight from their definitions (interval enumeration, subset
// search) and never reuse the library's prefix-sum or greedy paths.

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "decompose.hpp"
#include "instances.hpp"

namespace wsttest {

using namespace wst;

inline std::shared_ptr<const RootedTree> make_tree(const std::vector<int>& parents) {
  std::vector<std::pair<int, std::optional<int>>> entries;
  for (int v = 0; v < static_cast<int>(parents.size()); ++v)
    entries.emplace_back(v, parents[v] < 0 ? std::nullopt : std::optional<int>(parents[v]));
  return std::make_shared<RootedTree>(build_tree(entries));
}

inline std::shared_ptr<const WeightedTree> make_wt(const std::vector<int>& parents,
                                                   std::vector<double> alpha,
                                                   std::vector<double> sigma, double q = 2.0) {
  return std::make_shared<WeightedTree>(make_tree(parents), std::move(alpha), std::move(sigma), q);
}

inline std::shared_ptr<const WeightedTree> make_uniform(const std::vector<int>& parents,
                                                        double alpha = 1.0, double sigma = 1.0,
                                                        double q = 2.0) {
  std::vector<double> a(parents.size(), alpha), s(parents.size(), sigma);
  return make_wt(parents, a, s, q);
}

inline DistanceContext make_ctx(std::shared_ptr<const WeightedTree> wt) {
  return DistanceContext(std::make_shared<LevelPartition>(std::move(wt)));
}

inline std::shared_ptr<const DistanceContext> make_ctx_ptr(std::shared_ptr<const WeightedTree> wt) {
  return std::make_shared<DistanceContext>(std::make_shared<LevelPartition>(std::move(wt)));
}

inline WeightedTree random_instance(int size, uint64_t seed, double q = 2.0) {
  InstanceSpec spec;
  spec.shape = InstanceSpec::Shape::random_attach;
  spec.size = size;
  spec.profile = InstanceSpec::Profile::random_levels;
  spec.q = q;
  spec.seed = seed;
  return generate(spec);
}

inline WeightedTree corollary_instance(int depth) {
  InstanceSpec spec;
  spec.shape = InstanceSpec::Shape::binary;
  spec.depth = depth;
  spec.profile = InstanceSpec::Profile::corollary;
  return generate(spec);
}

// ---------------------------------------------------------------- oracles

// d(t,s) straight from the definition: enumerate v in (t,s], sum alpha^q
// over (t,v] by walking the interval.
inline double oracle_order_distance(const LevelPartition& lp, int t, int s, bool dyadic = true) {
  const auto& tr = lp.tree();
  auto interval = tr.order_interval(t, s, RootedTree::IntervalKind::left_open);
  double q = lp.q();
  double best = 0.0;
  for (int v : interval) {
    double sum = 0.0;
    for (int u : tr.order_interval(t, v, RootedTree::IntervalKind::left_open))
      sum += std::pow(lp.base().alpha(u), q);
    double w = dyadic ? lp.sigma_hat(v) : lp.base().sigma(v);
    best = std::max(best, std::pow(sum, 1.0 / q) * w);
  }
  return best;
}

inline double oracle_full_distance(const LevelPartition& lp, int t, int s, bool dyadic = true) {
  const auto& tr = lp.tree();
  int w = tr.common_ancestor(t, s);
  double a = oracle_order_distance(lp, w, t, dyadic);
  double b = oracle_order_distance(lp, w, s, dyadic);
  return std::max(a, b);
}

inline double oracle_localized_distance(const LevelPartition& lp, int t, int s) {
  const auto& tr = lp.tree();
  if (!tr.is_ancestor(t, s)) return std::numeric_limits<double>::infinity();
  double q = lp.q();
  double sum = 0.0;
  for (int v : tr.order_interval(t, s, RootedTree::IntervalKind::left_open))
    if (lp.level_of(v) == lp.level_of(s)) sum += std::pow(lp.base().alpha(v), q);
  return lp.sigma_hat(s) * std::pow(sum, 1.0 / q);
}

inline double oracle_kappa(const WeightedTree& wt) {
  const auto& tr = wt.tree();
  double best = 0.0;
  for (int s = 0; s < tr.node_count(); ++s)
    for (int v = 0; v < tr.node_count(); ++v) {
      if (!tr.is_ancestor(v, s)) continue;
      double sum = 0.0;
      for (int u = 0; u < tr.node_count(); ++u)
        if (tr.is_ancestor(u, v)) sum += std::pow(wt.alpha(u), wt.q());
      best = std::max(best, std::pow(sum, 1.0 / wt.q()) * wt.sigma(v));
    }
  return best;
}

inline SparseVec oracle_apply_V(const WeightedTree& wt, const SparseVec& mu) {
  const auto& tr = wt.tree();
  std::vector<double> dense(tr.node_count(), 0.0);
  for (int t = 0; t < tr.node_count(); ++t)
    for (const auto& [s, val] : mu.entries)
      if (tr.is_ancestor(t, s)) dense[t] += wt.alpha(t) * wt.sigma(s) * val;
  return SparseVec::from_dense(dense);
}

struct OracleNet {
  int size = 0;
  long long min_order_sum = 0;  // min F among minimum-cardinality solutions
};

// Minimum order net (optionally an augmentation of `existing`) by exhaustive
// subset search; trees up to ~14 nodes.
inline OracleNet oracle_min_order_net(const DistanceContext& ctx, double eps, NetMetric metric,
                                      const std::vector<int>& existing = {}) {
  const auto& tr = ctx.tree();
  const int n = tr.node_count();
  auto dist = [&](int t, int s) {
    if (!tr.is_ancestor(t, s)) return std::numeric_limits<double>::infinity();
    return metric == NetMetric::d_I ? ctx.localized_distance(t, s) : ctx.order_distance(t, s);
  };
  auto is_net = [&](uint64_t mask) {
    for (int s = 0; s < n; ++s) {
      bool ok = false;
      for (int r = 0; r < n && !ok; ++r)
        if (mask & (uint64_t(1) << r)) ok = dist(r, s) < eps;
      for (int r : existing)
        if (!ok) ok = dist(r, s) < eps;
      if (!ok) return false;
    }
    return true;
  };
  for (int k = 0; k <= n; ++k) {
    long long best_f = -1;
    // iterate subsets of size k
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    while (true) {
      uint64_t mask = 0;
      long long f = 0;
      for (int i : idx) {
        mask |= uint64_t(1) << i;
        f += tr.order_of(i);
      }
      if (k == 0) mask = 0, f = 0;
      if (is_net(mask) && (best_f < 0 || f < best_f)) best_f = f;
      // next combination
      int i = k - 1;
      while (i >= 0 && idx[i] == n - k + i) --i;
      if (i < 0) break;
      ++idx[i];
      for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      if (k == 0) break;
    }
    if (best_f >= 0) return {k, best_f};
  }
  return {n, 0};
}

// Minimum ball cover by exhaustive subset search; trees up to ~14 nodes.
inline int oracle_min_cover(const DistanceContext& ctx, double eps,
                            WeightKind kind = WeightKind::dyadic) {
  const auto& tr = ctx.tree();
  const int n = tr.node_count();
  for (int k = 1; k <= n; ++k) {
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    while (true) {
      bool covers = true;
      for (int s = 0; s < n && covers; ++s) {
        bool ok = false;
        for (int c : idx)
          if (ctx.full_distance(c, s, kind) < eps) {
            ok = true;
            break;
          }
        covers = ok;
      }
      if (covers) return k;
      int i = k - 1;
      while (i >= 0 && idx[i] == n - k + i) --i;
      if (i < 0) break;
      ++idx[i];
      for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return n;
}

// Counts root-containing ancestor-closed subtrees of the partition tree with
// terminal level sum < n, by bitmask enumeration over all domains.
inline long long oracle_count_subtrees(const PartitionTree& pt, int n) {
  std::vector<DomainRef> domains;
  for (int m = 0; m <= pt.depth(); ++m)
    for (int r : pt.roots(m)) domains.push_back({m, r});
  const int D = static_cast<int>(domains.size());
  auto index_of = [&](const DomainRef& d) {
    for (int i = 0; i < D; ++i)
      if (domains[i] == d) return i;
    return -1;
  };
  long long count = 0;
  for (uint64_t mask = 0; mask < (uint64_t(1) << D); ++mask) {
    bool valid = (mask & 1) != 0;  // domain 0 is the root domain (level 0)
    if (!valid) continue;
    // ancestor-closed
    for (int i = 0; i < D && valid; ++i) {
      if (!(mask & (uint64_t(1) << i)) || domains[i].level == 0) continue;
      DomainRef parent{domains[i].level - 1,
                       pt.parent_domain_root(domains[i].level, domains[i].root)};
      valid = (mask & (uint64_t(1) << index_of(parent))) != 0;
    }
    if (!valid) continue;
    long long terminal_sum = 0;
    for (int i = 0; i < D; ++i) {
      if (!(mask & (uint64_t(1) << i))) continue;
      bool has_child = false;
      for (int j = 0; j < D && !has_child; ++j) {
        if (!(mask & (uint64_t(1) << j)) || domains[j].level != domains[i].level + 1) continue;
        has_child = pt.parent_domain_root(domains[j].level, domains[j].root) == domains[i].root;
      }
      if (!has_child) terminal_sum += domains[i].level;
    }
    if (terminal_sum < n) ++count;
  }
  return count;
}

}  // namespace wsttest
