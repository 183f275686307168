#include "weights.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "errors.hpp"

namespace wst {

SparseVec SparseVec::delta(int node, double value) {
  SparseVec v;
  if (value != 0.0) v.entries.emplace_back(node, value);
  return v;
}

SparseVec SparseVec::from_pairs(std::vector<std::pair<int, double>> pairs) {
  std::sort(pairs.begin(), pairs.end());
  SparseVec v;
  for (auto& [node, val] : pairs) {
    if (!v.entries.empty() && v.entries.back().first == node)
      v.entries.back().second += val;
    else
      v.entries.emplace_back(node, val);
  }
  std::erase_if(v.entries, [](const auto& e) { return e.second == 0.0; });
  return v;
}

SparseVec SparseVec::from_dense(const std::vector<double>& dense) {
  SparseVec v;
  for (int i = 0; i < static_cast<int>(dense.size()); ++i)
    if (dense[i] != 0.0) v.entries.emplace_back(i, dense[i]);
  return v;
}

double SparseVec::at(int node) const {
  auto it = std::lower_bound(entries.begin(), entries.end(), node,
                             [](const auto& e, int n) { return e.first < n; });
  return (it != entries.end() && it->first == node) ? it->second : 0.0;
}

double SparseVec::l1_norm() const {
  double s = 0.0;
  for (const auto& [node, val] : entries) s += std::abs(val);
  return s;
}

double SparseVec::lq_norm(double q) const {
  if (q < 1.0) fail(ErrorCode::usage, "lq_norm requires q >= 1");
  double s = 0.0;
  for (const auto& [node, val] : entries) s += std::pow(std::abs(val), q);
  return std::pow(s, 1.0 / q);
}

SparseVec SparseVec::scaled(double a) const {
  if (a == 0.0) return {};
  SparseVec v;
  v.entries.reserve(entries.size());
  for (const auto& [node, val] : entries) v.entries.emplace_back(node, a * val);
  return v;
}

SparseVec SparseVec::minus(const SparseVec& other) const {
  return plus(other.scaled(-1.0));
}

SparseVec SparseVec::plus(const SparseVec& other) const {
  SparseVec out;
  out.entries.reserve(entries.size() + other.entries.size());
  size_t i = 0, j = 0;
  while (i < entries.size() || j < other.entries.size()) {
    if (j == other.entries.size() || (i < entries.size() && entries[i].first < other.entries[j].first)) {
      out.entries.push_back(entries[i++]);
    } else if (i == entries.size() || other.entries[j].first < entries[i].first) {
      out.entries.push_back(other.entries[j++]);
    } else {
      double v = entries[i].second + other.entries[j].second;
      if (v != 0.0) out.entries.emplace_back(entries[i].first, v);
      ++i;
      ++j;
    }
  }
  return out;
}

double lq_distance(const SparseVec& a, const SparseVec& b, double q) {
  double s = 0.0;
  size_t i = 0, j = 0;
  const auto& ae = a.entries;
  const auto& be = b.entries;
  while (i < ae.size() || j < be.size()) {
    double diff;
    if (j == be.size() || (i < ae.size() && ae[i].first < be[j].first))
      diff = ae[i++].second;
    else if (i == ae.size() || be[j].first < ae[i].first)
      diff = -be[j++].second;
    else {
      diff = ae[i].second - be[j].second;
      ++i;
      ++j;
    }
    s += std::pow(std::abs(diff), q);
  }
  return std::pow(s, 1.0 / q);
}

WeightedTree::WeightedTree(std::shared_ptr<const RootedTree> tree, std::vector<double> alpha,
                           std::vector<double> sigma, double q)
    : tree_(std::move(tree)), alpha_(std::move(alpha)), sigma_(std::move(sigma)), q_(q) {
  const int n = tree_->node_count();
  if (static_cast<int>(alpha_.size()) != n || static_cast<int>(sigma_.size()) != n)
    fail(ErrorCode::malformed_input, "weight vectors must cover every node");
  if (!(q_ > 1.0 && q_ <= 2.0)) fail(ErrorCode::malformed_input, "q must lie in (1, 2]");
  for (int v = 0; v < n; ++v) {
    if (!(alpha_[v] > 0.0) || !std::isfinite(alpha_[v]))
      fail(ErrorCode::malformed_input, "alpha must be strictly positive at node " + std::to_string(v));
    if (!(sigma_[v] > 0.0) || !std::isfinite(sigma_[v]))
      fail(ErrorCode::malformed_input, "sigma must be strictly positive at node " + std::to_string(v));
  }
  for (int v = 0; v < n; ++v) {
    int p = tree_->parent_of(v);
    if (p >= 0 && sigma_[p] < sigma_[v])
      fail(ErrorCode::invariant_violation,
           "sigma increases along the branch into node " + std::to_string(v));
  }
}

WeightedTree WeightedTree::normalize_c0(double c0) const {
  if (!(c0 > 0.0)) fail(ErrorCode::usage, "c0 must be positive");
  double factor = std::pow(c0, -(1.0 - 1.0 / q_));
  std::vector<double> a = alpha_;
  for (double& x : a) x *= factor;
  return WeightedTree(tree_, std::move(a), sigma_, q_);
}

double kappa(const WeightedTree& wt) {
  const auto& t = wt.tree();
  std::vector<double> prefix(t.node_count(), 0.0);
  double best = 0.0;
  for (int v : t.preorder()) {
    int p = t.parent_of(v);
    prefix[v] = (p >= 0 ? prefix[p] : 0.0) + std::pow(wt.alpha(v), wt.q());
    best = std::max(best, std::pow(prefix[v], 1.0 / wt.q()) * wt.sigma(v));
  }
  return best;
}

SparseVec apply_V(const WeightedTree& wt, const SparseVec& mu) {
  const auto& t = wt.tree();
  std::vector<double> subtotal(t.node_count(), 0.0);
  for (const auto& [node, val] : mu.entries) subtotal[node] = wt.sigma(node) * val;
  const auto& order = t.preorder();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    int p = t.parent_of(*it);
    if (p >= 0) subtotal[p] += subtotal[*it];
  }
  SparseVec out;
  for (int v = 0; v < t.node_count(); ++v) {
    double x = wt.alpha(v) * subtotal[v];
    if (x != 0.0) out.entries.emplace_back(v, x);
  }
  return out;
}

WeightedTree read_weights(std::istream& in, std::shared_ptr<const RootedTree> tree, double q) {
  const int n = tree->node_count();
  std::vector<double> alpha(n, -1.0), sigma(n, -1.0);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    int id;
    double a, s;
    if (!(ls >> id)) continue;
    if (!(ls >> a >> s)) fail(ErrorCode::malformed_input, "bad weight line: " + line);
    if (id < 0 || id >= n) fail(ErrorCode::malformed_input, "weight line for unknown node " + std::to_string(id));
    alpha[id] = a;
    sigma[id] = s;
  }
  for (int v = 0; v < n; ++v)
    if (alpha[v] < 0.0) fail(ErrorCode::malformed_input, "missing weights for node " + std::to_string(v));
  return WeightedTree(std::move(tree), std::move(alpha), std::move(sigma), q);
}

WeightedTree read_weights_file(const std::string& path, std::shared_ptr<const RootedTree> tree, double q) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::malformed_input, "cannot open weights file " + path);
  return read_weights(in, std::move(tree), q);
}

void write_weights(std::ostream& out, const WeightedTree& wt) {
  char buf[80];
  for (int v = 0; v < wt.tree().node_count(); ++v) {
    std::snprintf(buf, sizeof buf, "%d %.17g %.17g\n", v, wt.alpha(v), wt.sigma(v));
    out << buf;
  }
}

void write_weights_file(const std::string& path, const WeightedTree& wt) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::malformed_input, "cannot open " + path + " for writing");
  write_weights(out, wt);
}

}  // namespace wst
