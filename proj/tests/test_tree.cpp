#include <doctest.h>

#include <sstream>

#include "errors.hpp"
#include "helpers.hpp"

using namespace wst;
using namespace wsttest;

TEST_CASE("single-node tree") {
  auto t = make_tree({-1});
  CHECK(t->node_count() == 1);
  CHECK(t->root() == 0);
  CHECK(t->order_of(0) == 0);
  CHECK(t->is_ancestor(0, 0));
  CHECK(t->order_interval(0, 0, RootedTree::IntervalKind::closed) == std::vector<int>{0});
}

TEST_CASE("root with two children") {
  auto t = make_tree({-1, 0, 0});
  CHECK(t->children_of(0) == std::vector<int>{1, 2});
  CHECK(t->order_of(1) == 1);
  CHECK(t->order_of(2) == 1);
}

TEST_CASE("five-node example") {
  // 0 -> {1, 4}, 1 -> {2, 3}
  auto t = make_tree({-1, 0, 1, 1, 0});
  CHECK(t->children_of(1) == std::vector<int>{2, 3});
  CHECK(t->order_of(3) == 2);
  CHECK(t->is_ancestor(0, 4));
  CHECK(t->is_ancestor(3, 3));
  CHECK_FALSE(t->is_ancestor(1, 4));
  CHECK(t->common_ancestor(3, 4) == 0);
  CHECK(t->common_ancestor(2, 3) == 1);
}

TEST_CASE("order intervals on a chain") {
  auto t = make_tree({-1, 0, 1});
  CHECK(t->order_interval(0, 2, RootedTree::IntervalKind::closed) == std::vector<int>{0, 1, 2});
  CHECK(t->order_interval(0, 2, RootedTree::IntervalKind::left_open) == std::vector<int>{1, 2});
  CHECK(t->order_interval(2, 2, RootedTree::IntervalKind::closed) == std::vector<int>{2});
  CHECK_THROWS_AS((void)t->order_interval(1, 0, RootedTree::IntervalKind::closed), Error);
  CHECK_THROWS_AS((void)t->order_interval(1, 4, RootedTree::IntervalKind::closed), Error);
}

TEST_CASE("malformed trees are rejected") {
  CHECK_THROWS_AS(make_tree({-1, -1}), Error);      // two roots
  CHECK_THROWS_AS(make_tree({1, 0}), Error);        // no root (mutual parents)
  CHECK_THROWS_AS(make_tree({-1, 2, 1}), Error);    // 1 <-> 2 cycle unreachable from root
  CHECK_THROWS_AS(make_tree({}), Error);            // empty
  CHECK_THROWS_AS(build_tree({{0, std::nullopt}, {2, 0}}), Error);  // ids not dense
  CHECK_THROWS_AS(build_tree({{0, std::nullopt}, {1, 0}, {1, 0}}), Error);  // duplicate
}

TEST_CASE("partial order axioms, exhaustive on small random trees") {
  for (uint64_t seed : {1u, 2u, 3u}) {
    InstanceSpec spec;
    spec.shape = InstanceSpec::Shape::random_attach;
    spec.size = 12;
    spec.seed = seed;
    auto t = generate_tree(spec);
    const int n = t->node_count();
    for (int a = 0; a < n; ++a) {
      CHECK(t->is_ancestor(a, a));
      CHECK(t->is_ancestor(t->root(), a));
      for (int b = 0; b < n; ++b) {
        if (a != b && t->is_ancestor(a, b)) CHECK_FALSE(t->is_ancestor(b, a));
        for (int c = 0; c < n; ++c)
          if (t->is_ancestor(a, b) && t->is_ancestor(b, c)) CHECK(t->is_ancestor(a, c));
      }
    }
  }
}

TEST_CASE("orders agree with root-path lengths; parents sit one level up") {
  auto wt = random_instance(40, 7);
  const auto& t = wt.tree();
  for (int v = 0; v < t.node_count(); ++v) {
    auto path = t.order_interval(t.root(), v, RootedTree::IntervalKind::closed);
    CHECK(t.order_of(v) == static_cast<int>(path.size()) - 1);
    if (v != t.root()) CHECK(t.order_of(t.parent_of(v)) == t.order_of(v) - 1);
  }
}

TEST_CASE("tree file round trip") {
  auto t = make_tree({-1, 0, 1, 1, 0});
  std::stringstream ss;
  write_tree(ss, *t);
  RootedTree back = read_tree(ss);
  CHECK(back.node_count() == t->node_count());
  for (int v = 0; v < t->node_count(); ++v) CHECK(back.parent_of(v) == t->parent_of(v));

  std::stringstream bad("0 -\n1 x\n");
  CHECK_THROWS_AS((void)read_tree(bad), Error);
}

TEST_CASE("unknown nodes are reported") {
  auto t = make_tree({-1, 0});
  CHECK_THROWS_AS((void)t->order_of(5), Error);
  CHECK_THROWS_AS((void)t->is_ancestor(0, -1), Error);
}
