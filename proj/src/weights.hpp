#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "tree.hpp"

namespace wst {

/// Sparse real-valued function on tree nodes; entries sorted by node id,
/// absent nodes are zero. Mutating helpers keep the representation normalized.
struct SparseVec {
  std::vector<std::pair<int, double>> entries;  // sorted, unique, nonzero

  static SparseVec delta(int node, double value = 1.0);
  static SparseVec from_pairs(std::vector<std::pair<int, double>> pairs);
  static SparseVec from_dense(const std::vector<double>& dense);

  double at(int node) const;
  bool empty() const { return entries.empty(); }

  double l1_norm() const;
  /// (sum |v|^q)^(1/q), q >= 1; deterministic node-id summation order.
  double lq_norm(double q) const;

  SparseVec scaled(double a) const;
  /// this - other
  SparseVec minus(const SparseVec& other) const;
  SparseVec plus(const SparseVec& other) const;
};

double lq_distance(const SparseVec& a, const SparseVec& b, double q);

/// Tree with weight pairs (alpha, sigma) and exponent q in (1,2].
/// sigma must be non-increasing along branches; checked at construction.
class WeightedTree {
public:
  WeightedTree(std::shared_ptr<const RootedTree> tree, std::vector<double> alpha,
               std::vector<double> sigma, double q);

  const RootedTree& tree() const { return *tree_; }
  std::shared_ptr<const RootedTree> tree_ptr() const { return tree_; }
  double q() const { return q_; }
  /// conjugate exponent exponent: 1 - 1/q
  double one_minus_inv_q() const { return 1.0 - 1.0 / q_; }

  double alpha(int v) const { return alpha_[v]; }
  double sigma(int v) const { return sigma_[v]; }
  const std::vector<double>& alphas() const { return alpha_; }
  const std::vector<double>& sigmas() const { return sigma_; }

  /// Scales alpha by c0^{-(1-1/q)} so that a covering hypothesis with
  /// constant c0 holds with constant 1 for the rescaled tree.
  WeightedTree normalize_c0(double c0) const;

private:
  std::shared_ptr<const RootedTree> tree_;
  std::vector<double> alpha_;
  std::vector<double> sigma_;
  double q_;
};

/// Operator-norm constant: max over nodes v of (sum_{u<=v} alpha(u)^q)^{1/q} * sigma(v).
/// Equals the l1 -> lq norm of apply_V.
double kappa(const WeightedTree& wt);

/// (V mu)(t) = alpha(t) * sum_{s >= t} sigma(s) mu(s); one leaf-to-root pass.
SparseVec apply_V(const WeightedTree& wt, const SparseVec& mu);

/// Weight file format: one line per node, "<id> <alpha> <sigma>".
WeightedTree read_weights(std::istream& in, std::shared_ptr<const RootedTree> tree, double q);
WeightedTree read_weights_file(const std::string& path, std::shared_ptr<const RootedTree> tree, double q);
void write_weights(std::ostream& out, const WeightedTree& wt);
void write_weights_file(const std::string& path, const WeightedTree& wt);

}  // namespace wst
