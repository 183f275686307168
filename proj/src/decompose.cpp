#include "decompose.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "errors.hpp"

namespace wst {

namespace {

void require_unit_ball(const SparseVec& mu) {
  if (mu.l1_norm() > 1.0 + 1e-12) fail(ErrorCode::usage, "mu must lie in the l1 unit ball");
}

}  // namespace

long long EssentialTree::terminal_level_sum() const {
  long long s = 0;
  for (const auto& d : terminal) s += d.level;
  return s;
}

EssentialTree essential_tree(const PartitionTree& pt, const SparseVec& mu, int n) {
  if (n < 1) fail(ErrorCode::usage, "n must be positive");
  if (mu.empty()) fail(ErrorCode::empty_measure, "essential tree undefined for mu = 0");
  require_unit_ball(mu);
  if (pt.depth() < n)
    fail(ErrorCode::usage, "partition tree must reach level n = " + std::to_string(n) +
                               " so every node owns a light domain");

  EssentialTree et;
  et.n = n;
  et.mu = mu;

  // |mu|(B) per domain touched by the support, level by level. Levels >= n
  // are light by definition for unit-ball mu (|B|/n >= 1), so the scan stops
  // at n - 1; this also keeps summation dust at the 1.0 boundary harmless.
  for (int m = 0; m < std::min(pt.depth() + 1, n); ++m) {
    std::map<int, double> mass;  // domain root -> mass, id order for determinism
    for (const auto& [node, val] : mu.entries) mass[pt.domain_root(m, node)] += std::abs(val);
    for (const auto& [root, w] : mass) {
      if (w > static_cast<double>(m) / n) {
        et.heavy.push_back({m, root});
        et.heavy_mass.push_back(w);
      }
    }
  }
  std::sort(et.heavy.begin(), et.heavy.end());  // already sorted by construction; keep the contract

  // ancestor closure and terminal identification
  std::vector<char> has_heavy_child(et.heavy.size(), 0);
  for (size_t i = 0; i < et.heavy.size(); ++i) {
    const auto& d = et.heavy[i];
    if (d.level == 0) continue;
    DomainRef parent{d.level - 1, pt.parent_domain_root(d.level, d.root)};
    auto it = std::lower_bound(et.heavy.begin(), et.heavy.end(), parent);
    if (it == et.heavy.end() || !(*it == parent))
      fail(ErrorCode::invariant_violation, "heavy family is not ancestor-closed");
    has_heavy_child[it - et.heavy.begin()] = 1;
  }
  for (size_t i = 0; i < et.heavy.size(); ++i)
    if (!has_heavy_child[i]) et.terminal.push_back(et.heavy[i]);

  if (et.heavy.empty()) fail(ErrorCode::invariant_violation, "root domain must be heavy for nonzero mu");
  if (et.terminal_level_sum() >= n)
    fail(ErrorCode::invariant_violation, "terminal level sum reached n");
  if (static_cast<long long>(et.heavy.size()) > n)
    fail(ErrorCode::invariant_violation, "essential tree larger than n");
  return et;
}

const LightDomain* LightPartition::find(const DomainRef& d) const {
  auto it = std::lower_bound(lights.begin(), lights.end(), d,
                             [](const LightDomain& l, const DomainRef& ref) { return l.domain < ref; });
  return (it != lights.end() && it->domain == d) ? &*it : nullptr;
}

LightPartition light_partition(const PartitionTree& pt, const EssentialTree& et) {
  LightPartition lp;
  lp.n = et.n;
  lp.mu = et.mu;
  const auto& tr = pt.ctx().tree();
  for (const auto& d : et.heavy) {
    if (d.level >= pt.depth()) continue;
    for (int r : pt.offspring_roots(d.level, d.root)) {
      DomainRef child{d.level + 1, r};
      if (et.is_heavy(child)) continue;
      LightDomain l;
      l.domain = child;
      l.r_circ = r;
      l.r_bullet = d.root;
      l.generic = (l.r_bullet != l.r_circ);
      l.r_minus = (r == tr.root()) ? -1 : tr.parent_of(r);
      lp.lights.push_back(l);
    }
  }
  std::sort(lp.lights.begin(), lp.lights.end(),
            [](const LightDomain& a, const LightDomain& b) { return a.domain < b.domain; });
  return lp;
}

DomainRef light_domain_of(const PartitionTree& pt, const EssentialTree& et, int s) {
  pt.ctx().tree().check_node(s);
  for (int m = 1; m <= pt.depth(); ++m) {
    DomainRef d{m, pt.domain_root(m, s)};
    if (!et.is_heavy(d)) return d;
  }
  fail(ErrorCode::invariant_violation, "node with an all-heavy domain chain");
}

namespace {

const LightDomain& light_of_node(const PartitionTree& pt, const LightPartition& light, int s) {
  for (int m = 1; m <= pt.depth(); ++m) {
    const LightDomain* l = light.find({m, pt.domain_root(m, s)});
    if (l) return *l;
  }
  fail(ErrorCode::invariant_violation, "light partition does not cover node " + std::to_string(s));
}

}  // namespace

SparseVec split_operator(const PartitionTree& pt, const LightPartition& light, const SparseVec& mu,
                         int part) {
  if (part < 1 || part > 4) fail(ErrorCode::usage, "part must be 1..4");
  const auto& ctx = pt.ctx();
  const auto& tr = ctx.tree();
  const auto& lp = ctx.levels();
  std::vector<std::pair<int, double>> acc;
  for (const auto& [s, val] : mu.entries) {
    const LightDomain& L = light_of_node(pt, light, s);
    int d_circ = tr.order_of(L.r_circ);
    int d_bullet = tr.order_of(L.r_bullet);
    double coef = lp.sigma_hat(s) * val;
    // walk the level branch [lambda(s), s]; the level indicator kills the rest
    for (int t = s; t != -1 && lp.level_of(t) == lp.level_of(s); t = tr.parent_of(t)) {
      int dt = tr.order_of(t);
      int piece;
      if (L.generic) {
        if (dt <= d_bullet)
          piece = 1;
        else if (dt < d_circ)
          piece = 2;
        else if (dt == d_circ)
          piece = 3;
        else
          piece = 4;
      } else {
        piece = (dt <= d_circ) ? 1 : 4;
      }
      if (piece == part) acc.emplace_back(t, coef * lp.base().alpha(t));
    }
  }
  return SparseVec::from_pairs(std::move(acc));
}

W4Certificate w4_certificate(const PartitionTree& pt, const LightPartition& light,
                             const SparseVec& mu, int n) {
  if (light.n != n || !(light.mu.entries == mu.entries))
    fail(ErrorCode::mismatched_partition, "light partition was built for a different (mu, n)");
  require_unit_ball(mu);
  W4Certificate cert;
  cert.norm = split_operator(pt, light, mu, 4).lq_norm(pt.ctx().q());
  cert.bound = std::pow(n * std::log(2.0), -(1.0 - 1.0 / pt.ctx().q()));
  cert.pass = cert.norm <= cert.bound * (1.0 + 1e-9);
  return cert;
}

ComponentData component_data(const PartitionTree& pt, const LightPartition& light) {
  ComponentData data;
  const auto& ctx = pt.ctx();
  const auto& lp = ctx.levels();
  const auto& chain = pt.chain();
  const double q = ctx.q();
  for (const auto& L : light.lights) {
    if (!L.generic) continue;
    ComponentEntry e;
    e.domain = L.domain;
    e.gamma = lp.sigma_hat(L.r_circ) * lp.base().alpha(L.r_circ);
    double sum = 0.0;
    if (L.r_minus >= 0 && lp.level_of(L.r_minus) == lp.level_of(L.r_circ))
      sum = ctx.level_prefix(L.r_minus) -
            (lp.level_of(L.r_bullet) == lp.level_of(L.r_circ) ? ctx.level_prefix(L.r_bullet) : 0.0);
    e.x_norm_q = std::pow(lp.sigma_hat(L.r_circ), q) * sum;
    data.generic.push_back(e);

    int m = L.domain.level;
    if (m >= 2) {
      ++data.checked;
      double rhs = std::pow(chain.eps[m - 1], q) - std::pow(chain.eps[m], q);
      if (e.x_norm_q > rhs * (1.0 + 1e-9)) ++data.x_violations;
      if (e.gamma > chain.eps[m - 1] * (1.0 + 1e-9)) ++data.gamma_violations;
    } else {
      ++data.level1_generic;
    }
  }
  for (int m = 1; m <= chain.depth; ++m) {
    if (m + 3 >= 62) break;  // counting bound exceeds any finite family
    long long cap = 1LL << (m + 3);
    long long count = 0;
    for (const auto& e : data.generic)
      if (e.gamma >= chain.eps[m]) ++count;
    if (count > cap) ++data.count_violations;
  }
  return data;
}

namespace {

// polynomial coefficients over terminal-level sums, truncated below n
using Poly = std::vector<long long>;

Poly count_subtrees(const PartitionTree& pt, const DomainRef& d, int n, long long cap) {
  Poly self(n, 0);
  Poly prod(n, 0);
  prod[0] = 1;  // empty offspring selection
  for (int r : pt.offspring_roots(d.level, d.root)) {
    Poly child = count_subtrees(pt, {d.level + 1, r}, n, cap);
    Poly next = prod;  // child excluded
    for (int a = 0; a < n; ++a) {
      if (prod[a] == 0) continue;
      for (int b = 0; a + b < n; ++b) {
        if (child[b] == 0) continue;
        next[a + b] += prod[a] * child[b];
        if (next[a + b] > cap) fail(ErrorCode::size_limit, "subtree count exceeded the enumeration cap");
      }
    }
    prod = std::move(next);
  }
  // replace the all-excluded combination by "d is terminal"
  prod[0] -= 1;
  if (d.level < n) prod[d.level] += 1;
  self = std::move(prod);
  return self;
}

}  // namespace

long long enumerate_partitions(const PartitionTree& pt, int n, long long cap) {
  if (n < 1) fail(ErrorCode::usage, "n must be positive");
  long long domains = 0;
  for (int m = 0; m <= pt.depth(); ++m) domains += static_cast<long long>(pt.roots(m).size());
  if (domains > 4096) fail(ErrorCode::size_limit, "partition tree too large for exhaustive enumeration");
  Poly root = count_subtrees(pt, {0, pt.ctx().tree().root()}, n, cap);
  long long total = 0;
  for (long long c : root) total += c;
  return total;
}

}  // namespace wst
