#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace wst {

/// Finite rooted tree over dense node ids 0..n-1. Immutable after build_tree.
/// t precedes s ("t is an ancestor of s") when t lies on the root path of s,
/// including t == s.
class RootedTree {
public:
  int node_count() const { return static_cast<int>(parent_.size()); }
  int root() const { return root_; }

  /// -1 for the root.
  int parent_of(int v) const;
  const std::vector<int>& children_of(int v) const;

  /// Depth below the root, i.e. the number of strict ancestors.
  int order_of(int v) const;

  bool is_ancestor(int t, int s) const;

  /// Deepest common ancestor of t and s.
  int common_ancestor(int t, int s) const;

  enum class IntervalKind { closed, left_open };

  /// Order interval [t,s] (or (t,s]) in root-to-leaf order. t must precede s.
  std::vector<int> order_interval(int t, int s, IntervalKind kind) const;

  /// Root-first traversal order, children in input order. Fixed at build time;
  /// all deterministic summations in the library iterate in this order.
  const std::vector<int>& preorder() const { return preorder_; }

  void check_node(int v) const;

  friend RootedTree build_tree(const std::vector<std::pair<int, std::optional<int>>>& parent_list);

private:
  std::vector<int> parent_;
  std::vector<std::vector<int>> children_;
  std::vector<int> depth_;
  std::vector<int> preorder_;
  int root_ = -1;
};

/// Validates and builds a tree from (node, parent-or-none) entries.
/// Node ids must be exactly 0..n-1; exactly one entry has no parent.
RootedTree build_tree(const std::vector<std::pair<int, std::optional<int>>>& parent_list);

/// Tree file format: one line per node, "<id> <parent-id-or-dash>".
RootedTree read_tree(std::istream& in);
RootedTree read_tree_file(const std::string& path);
void write_tree(std::ostream& out, const RootedTree& tree);
void write_tree_file(const std::string& path, const RootedTree& tree);

}  // namespace wst
