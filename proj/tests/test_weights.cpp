#include <doctest.h>

#include <cmath>
#include <sstream>

#include "errors.hpp"
#include "helpers.hpp"

using namespace wst;
using namespace wsttest;

TEST_CASE("kappa on pinned examples") {
  CHECK(kappa(*make_wt({-1}, {2.0}, {0.5})) == doctest::Approx(1.0));
  CHECK(kappa(*make_uniform({-1, 0, 1})) == doctest::Approx(std::sqrt(3.0)));
  CHECK(kappa(*make_wt({-1, 0, 1}, {1, 1, 1}, {1.0, 0.5, 0.25})) == doctest::Approx(1.0));
}

TEST_CASE("kappa equals the exhaustive double-maximum") {
  for (uint64_t seed : {4u, 9u, 21u}) {
    auto wt = random_instance(16, seed);
    CHECK(kappa(wt) == doctest::Approx(oracle_kappa(wt)).epsilon(1e-12));
  }
}

TEST_CASE("apply_V on pinned examples") {
  auto chain = make_uniform({-1, 0, 1});
  SparseVec v = apply_V(*chain, SparseVec::delta(2));
  CHECK(v.at(0) == doctest::Approx(1.0));
  CHECK(v.at(1) == doctest::Approx(1.0));
  CHECK(v.at(2) == doctest::Approx(1.0));

  CHECK(apply_V(*chain, SparseVec{}).empty());

  auto star = make_uniform({-1, 0, 0});
  SparseVec w = apply_V(*star, SparseVec::delta(1));
  CHECK(w.at(1) == doctest::Approx(1.0));
  CHECK(w.at(0) == doctest::Approx(1.0));
  CHECK(w.at(2) == 0.0);
}

TEST_CASE("apply_V matches the quadratic oracle and respects the norm bound") {
  for (uint64_t seed : {3u, 8u, 15u}) {
    auto wt = random_instance(24, seed);
    Rng rng(seed);
    double k = kappa(wt);
    for (int i = 0; i < 10; ++i) {
      SparseVec mu = random_unit_mu(wt.tree(), rng);
      SparseVec fast = apply_V(wt, mu);
      SparseVec slow = oracle_apply_V(wt, mu);
      CHECK(lq_distance(fast, slow, wt.q()) <= 1e-12 * std::max(1.0, slow.lq_norm(wt.q())));
      CHECK(fast.lq_norm(wt.q()) <= k * mu.l1_norm() * (1 + 1e-9));
    }
  }
}

TEST_CASE("construction rejects bad weights") {
  CHECK_THROWS_AS(make_wt({-1, 0}, {1, 1}, {0.5, 1.0}), Error);   // sigma increases
  CHECK_THROWS_AS(make_wt({-1}, {0.0}, {1.0}), Error);            // alpha not positive
  CHECK_THROWS_AS(make_wt({-1}, {1.0}, {-2.0}), Error);           // sigma not positive
  CHECK_THROWS_AS(make_wt({-1}, {1.0}, {1.0}, 1.0), Error);       // q out of range
  CHECK_THROWS_AS(make_wt({-1}, {1.0}, {1.0}, 2.5), Error);       // q out of range
}

TEST_CASE("norms") {
  CHECK(SparseVec{}.lq_norm(2.0) == 0.0);
  CHECK(SparseVec::delta(3).lq_norm(1.5) == doctest::Approx(1.0));
  SparseVec v = SparseVec::from_pairs({{0, 3.0}, {5, -4.0}});
  CHECK(v.lq_norm(2.0) == doctest::Approx(5.0));
  CHECK(v.l1_norm() == doctest::Approx(7.0));
  CHECK_THROWS_AS((void)v.lq_norm(0.5), Error);
}

TEST_CASE("normalize_c0 scales distances by c0^{-(1-1/q)}") {
  auto wt = std::make_shared<WeightedTree>(random_instance(12, 5));
  auto ctx = make_ctx(wt);
  auto scaled = std::make_shared<WeightedTree>(wt->normalize_c0(4.0));
  auto ctx2 = make_ctx(scaled);
  // q = 2: factor 4^{-1/2} = 1/2
  for (int a = 0; a < 12; ++a)
    for (int b = 0; b < 12; ++b)
      CHECK(ctx2.full_distance(a, b) == doctest::Approx(0.5 * ctx.full_distance(a, b)).epsilon(1e-12));

  auto once = wt->normalize_c0(6.0);
  auto twice = wt->normalize_c0(2.0).normalize_c0(3.0);
  for (int v = 0; v < 12; ++v) CHECK(once.alpha(v) == doctest::Approx(twice.alpha(v)).epsilon(1e-14));

  auto same = wt->normalize_c0(1.0);
  for (int v = 0; v < 12; ++v) CHECK(same.alpha(v) == wt->alpha(v));
}

TEST_CASE("dyadic reduction levels on pinned values") {
  auto lp1 = LevelPartition(make_uniform({-1, 0, 1}));
  for (int v = 0; v < 3; ++v) {
    CHECK(lp1.level_of(v) == 0);
    CHECK(lp1.sigma_hat(v) == 1.0);
  }
  auto lp2 = LevelPartition(make_wt({-1}, {1.0}, {0.3}));
  CHECK(lp2.level_of(0) == 1);
  auto lp3 = LevelPartition(make_wt({-1, 0, 1}, {1, 1, 1}, {1.0, 0.6, 0.2}));
  CHECK(lp3.level_of(0) == 0);
  CHECK(lp3.level_of(1) == 0);
  CHECK(lp3.level_of(2) == 2);
  // exact powers of two stay on their own level
  auto lp4 = LevelPartition(make_wt({-1, 0}, {1, 1}, {1.0, 0.5}));
  CHECK(lp4.level_of(0) == 0);
  CHECK(lp4.level_of(1) == 1);
}

TEST_CASE("dyadic bracket sigma <= sigma_hat < 2 sigma on random instances") {
  for (uint64_t seed : {2u, 13u, 31u}) {
    auto wt = std::make_shared<WeightedTree>(random_instance(40, seed));
    LevelPartition lp(wt);
    for (int v = 0; v < 40; ++v) {
      CHECK(wt->sigma(v) <= lp.sigma_hat(v));
      CHECK(lp.sigma_hat(v) < 2 * wt->sigma(v));
      int p = wt->tree().parent_of(v);
      if (p >= 0) {
        CHECK(lp.level_of(p) <= lp.level_of(v));
        CHECK(lp.sigma_hat(p) >= lp.sigma_hat(v));
      }
    }
  }
}

TEST_CASE("lambda marks the start of the level branch") {
  auto lp = LevelPartition(make_wt({-1, 0, 1}, {1, 1, 1}, {1.0, 0.5, 0.5}));
  CHECK(lp.level_of(0) == 0);
  CHECK(lp.level_of(1) == 1);
  CHECK(lp.lambda_of(1) == 1);  // level differs from the parent
  CHECK(lp.lambda_of(2) == 1);  // deepest of (0,1,1) starts at the middle
  auto flat = LevelPartition(make_uniform({-1, 0, 1}));
  CHECK(flat.lambda_of(2) == 0);  // whole path on one level
}

TEST_CASE("apply_W on pinned examples") {
  // all levels equal: W coincides with V built on sigma_hat
  auto wt = make_wt({-1, 0, 0, 1}, {1.0, 0.7, 0.4, 1.1}, {0.9, 0.9, 0.9, 0.9});
  LevelPartition lp(wt);
  WeightedTree hat(wt->tree_ptr(), wt->alphas(),
                   std::vector<double>(wt->tree().node_count(), lp.sigma_hat(0)), wt->q());
  Rng rng(4);
  for (int i = 0; i < 5; ++i) {
    SparseVec mu = random_unit_mu(wt->tree(), rng);
    CHECK(lq_distance(apply_W(lp, mu), apply_V(hat, mu), 2.0) <= 1e-12);
  }

  auto lp2 = LevelPartition(make_wt({-1, 0, 1}, {1, 1, 1}, {1.0, 0.5, 0.5}));
  SparseVec w = apply_W(lp2, SparseVec::delta(2));
  CHECK(w.at(0) == 0.0);
  CHECK(w.at(1) == doctest::Approx(0.5));
  CHECK(w.at(2) == doctest::Approx(0.5));

  SparseVec at_root = apply_W(lp2, SparseVec::delta(0));
  CHECK(at_root.at(0) == doctest::Approx(1.0));
  CHECK(at_root.entries.size() == 1);
}

TEST_CASE("W columns live on the level branch and W is linear") {
  auto wt = std::make_shared<WeightedTree>(random_instance(32, 19));
  LevelPartition lp(wt);
  const auto& tr = wt->tree();
  for (int s = 0; s < tr.node_count(); ++s) {
    SparseVec col = apply_W(lp, SparseVec::delta(s));
    CHECK(lq_distance(col, w_column(lp, s), 2.0) == 0.0);
    for (const auto& [t, val] : col.entries) {
      CHECK(tr.is_ancestor(t, s));
      CHECK(lp.level_of(t) == lp.level_of(s));
      CHECK(tr.is_ancestor(lp.lambda_of(s), t));
      CHECK(val != 0.0);
    }
  }
  Rng rng(77);
  SparseVec a = random_unit_mu(tr, rng), b = random_unit_mu(tr, rng);
  SparseVec lhs = apply_W(lp, a.scaled(0.3).plus(b.scaled(-1.2)));
  SparseVec rhs = apply_W(lp, a).scaled(0.3).plus(apply_W(lp, b).scaled(-1.2));
  CHECK(lq_distance(lhs, rhs, wt->q()) <= 1e-12 * std::max(1.0, lhs.lq_norm(wt->q())));
}

TEST_CASE("weight file round trip") {
  auto wt = random_instance(10, 3);
  std::stringstream ss;
  write_weights(ss, wt);
  WeightedTree back = read_weights(ss, wt.tree_ptr(), wt.q());
  for (int v = 0; v < 10; ++v) {
    CHECK(back.alpha(v) == wt.alpha(v));
    CHECK(back.sigma(v) == wt.sigma(v));
  }
  std::stringstream missing("0 1.0 1.0\n");
  auto two = make_tree({-1, 0});
  CHECK_THROWS_AS((void)read_weights(missing, two, 2.0), Error);
}
