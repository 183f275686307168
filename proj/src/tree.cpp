#include "tree.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "errors.hpp"

namespace wst {

void RootedTree::check_node(int v) const {
  if (v < 0 || v >= node_count()) fail(ErrorCode::unknown_node, "node id " + std::to_string(v));
}

int RootedTree::parent_of(int v) const {
  check_node(v);
  return parent_[v];
}

const std::vector<int>& RootedTree::children_of(int v) const {
  check_node(v);
  return children_[v];
}

int RootedTree::order_of(int v) const {
  check_node(v);
  return depth_[v];
}

bool RootedTree::is_ancestor(int t, int s) const {
  check_node(t);
  check_node(s);
  while (depth_[s] > depth_[t]) s = parent_[s];
  return s == t;
}

int RootedTree::common_ancestor(int t, int s) const {
  check_node(t);
  check_node(s);
  while (depth_[t] > depth_[s]) t = parent_[t];
  while (depth_[s] > depth_[t]) s = parent_[s];
  while (t != s) {
    t = parent_[t];
    s = parent_[s];
  }
  return t;
}

std::vector<int> RootedTree::order_interval(int t, int s, IntervalKind kind) const {
  check_node(t);
  check_node(s);
  if (!is_ancestor(t, s)) fail(ErrorCode::not_comparable, std::to_string(t) + " does not precede " + std::to_string(s));
  std::vector<int> path;
  for (int v = s; v != t; v = parent_[v]) path.push_back(v);
  if (kind == IntervalKind::closed) path.push_back(t);
  std::reverse(path.begin(), path.end());
  return path;
}

RootedTree build_tree(const std::vector<std::pair<int, std::optional<int>>>& parent_list) {
  const int n = static_cast<int>(parent_list.size());
  if (n == 0) fail(ErrorCode::malformed_tree, "empty node list");

  RootedTree t;
  t.parent_.assign(n, -2);  // -2 = unseen
  t.children_.assign(n, {});
  int root = -1;
  for (const auto& [id, par] : parent_list) {
    if (id < 0 || id >= n) fail(ErrorCode::malformed_tree, "node ids must be dense 0..n-1, got " + std::to_string(id));
    if (t.parent_[id] != -2) fail(ErrorCode::malformed_tree, "duplicate node id " + std::to_string(id));
    if (!par.has_value()) {
      if (root != -1) fail(ErrorCode::malformed_tree, "multiple roots");
      root = id;
      t.parent_[id] = -1;
    } else {
      if (*par < 0 || *par >= n) fail(ErrorCode::malformed_tree, "parent id out of range: " + std::to_string(*par));
      if (*par == id) fail(ErrorCode::malformed_tree, "node is its own parent: " + std::to_string(id));
      t.parent_[id] = *par;
    }
  }
  if (root == -1) fail(ErrorCode::malformed_tree, "no root");
  t.root_ = root;

  // children in input order
  for (const auto& [id, par] : parent_list)
    if (par.has_value()) t.children_[*par].push_back(id);

  // reachability from the root doubles as the cycle check
  t.depth_.assign(n, -1);
  t.preorder_.clear();
  t.preorder_.reserve(n);
  std::vector<int> stack = {root};
  t.depth_[root] = 0;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    t.preorder_.push_back(v);
    const auto& ch = t.children_[v];
    for (auto it = ch.rbegin(); it != ch.rend(); ++it) {
      t.depth_[*it] = t.depth_[v] + 1;
      stack.push_back(*it);
    }
  }
  if (static_cast<int>(t.preorder_.size()) != n)
    fail(ErrorCode::malformed_tree, "cycle detected or unreachable nodes");
  return t;
}

RootedTree read_tree(std::istream& in) {
  std::vector<std::pair<int, std::optional<int>>> entries;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    int id;
    std::string par;
    if (!(ls >> id)) continue;  // blank line
    if (!(ls >> par)) fail(ErrorCode::malformed_input, "tree line missing parent field: " + line);
    if (par == "-")
      entries.emplace_back(id, std::nullopt);
    else {
      try {
        entries.emplace_back(id, std::stoi(par));
      } catch (const std::exception&) {
        fail(ErrorCode::malformed_input, "bad parent field: " + par);
      }
    }
  }
  return build_tree(entries);
}

RootedTree read_tree_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::malformed_input, "cannot open tree file " + path);
  return read_tree(in);
}

void write_tree(std::ostream& out, const RootedTree& tree) {
  for (int v = 0; v < tree.node_count(); ++v) {
    int p = tree.parent_of(v);
    if (p < 0)
      out << v << " -\n";
    else
      out << v << ' ' << p << '\n';
  }
}

void write_tree_file(const std::string& path, const RootedTree& tree) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::malformed_input, "cannot open " + path + " for writing");
  write_tree(out, tree);
}

}  // namespace wst
