#include "instances.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "errors.hpp"

namespace wst {

InstanceSpec parse_shape(const std::string& name, InstanceSpec spec) {
  if (name == "binary")
    spec.shape = InstanceSpec::Shape::binary;
  else if (name == "chain")
    spec.shape = InstanceSpec::Shape::chain;
  else if (name == "random")
    spec.shape = InstanceSpec::Shape::random_attach;
  else
    fail(ErrorCode::usage, "unknown shape: " + name);
  return spec;
}

std::shared_ptr<const RootedTree> generate_tree(const InstanceSpec& spec) {
  std::vector<std::pair<int, std::optional<int>>> entries;
  switch (spec.shape) {
    case InstanceSpec::Shape::binary: {
      if (spec.depth < 0 || spec.depth > 24) fail(ErrorCode::usage, "binary depth must be in 0..24");
      int n = (1 << (spec.depth + 1)) - 1;
      entries.emplace_back(0, std::nullopt);
      for (int v = 1; v < n; ++v) entries.emplace_back(v, (v - 1) / 2);
      break;
    }
    case InstanceSpec::Shape::chain: {
      if (spec.size < 1) fail(ErrorCode::usage, "chain size must be positive");
      entries.emplace_back(0, std::nullopt);
      for (int v = 1; v < spec.size; ++v) entries.emplace_back(v, v - 1);
      break;
    }
    case InstanceSpec::Shape::random_attach: {
      if (spec.size < 1) fail(ErrorCode::usage, "size must be positive");
      Rng rng(spec.seed);
      entries.emplace_back(0, std::nullopt);
      std::vector<int> degree(spec.size, 0);
      std::vector<int> open = {0};  // nodes with out-degree < 3
      for (int v = 1; v < spec.size; ++v) {
        int pick = static_cast<int>(rng.next_below(open.size()));
        int parent = open[pick];
        entries.emplace_back(v, parent);
        if (++degree[parent] >= 3) open.erase(open.begin() + pick);
        open.push_back(v);
      }
      break;
    }
  }
  return std::make_shared<RootedTree>(build_tree(entries));
}

WeightedTree generate(const InstanceSpec& spec) {
  auto tree = generate_tree(spec);
  const int n = tree->node_count();
  std::vector<double> alpha(n), sigma(n);
  switch (spec.profile) {
    case InstanceSpec::Profile::corollary:
      for (int v = 0; v < n; ++v) {
        alpha[v] = 1.0 / (tree->order_of(v) + 1);
        sigma[v] = 1.0;
      }
      break;
    case InstanceSpec::Profile::constant:
      for (int v = 0; v < n; ++v) {
        alpha[v] = 1.0;
        sigma[v] = 1.0;
      }
      break;
    case InstanceSpec::Profile::random_levels: {
      // sigma = scale * 2^{-bucket(depth)}: dyadic steps of random width with
      // a non-dyadic scale, so the reduction has something to round
      Rng rng(spec.seed ^ 0x9e3779b97f4a7c15ULL);
      double scale = 0.5 + 0.5 * rng.next_double();
      int max_depth = 0;
      for (int v = 0; v < n; ++v) max_depth = std::max(max_depth, tree->order_of(v));
      std::vector<int> bucket(max_depth + 1, 0);
      int b = 0;
      for (int d = 1; d <= max_depth; ++d) {
        if (rng.next_double() < 0.45) ++b;
        bucket[d] = b;
      }
      for (int v = 0; v < n; ++v) {
        sigma[v] = scale * std::ldexp(1.0, -bucket[tree->order_of(v)]);
        alpha[v] = 0.3 + 1.2 * rng.next_double();
      }
      break;
    }
    case InstanceSpec::Profile::custom:
      return read_weights_file(spec.weights_file, tree, spec.q);
  }
  return WeightedTree(tree, std::move(alpha), std::move(sigma), spec.q);
}

SparseVec random_unit_mu(const RootedTree& tree, Rng& rng) {
  const int n = tree.node_count();
  int support = 1 + static_cast<int>(rng.next_below(std::min(n, 24)));
  std::set<int> nodes;
  while (static_cast<int>(nodes.size()) < support) nodes.insert(static_cast<int>(rng.next_below(n)));
  std::vector<std::pair<int, double>> ent;
  double total = 0.0;
  for (int v : nodes) {
    double x = 0.05 + rng.next_double();
    total += x;
    ent.emplace_back(v, rng.next_bool() ? x : -x);
  }
  double target = rng.next_double() < 0.3 ? 1.0 : 0.2 + 0.8 * rng.next_double();
  for (auto& [v, x] : ent) x *= target / total;
  SparseVec mu = SparseVec::from_pairs(std::move(ent));
  while (mu.l1_norm() > 1.0) mu = mu.scaled(1.0 - 4e-16);
  return mu;
}

}  // namespace wst
