#include "partitions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "errors.hpp"

namespace wst {

std::vector<int> RootChain::added_at(int m) const {
  if (m <= 0 || m > depth) return {};
  std::vector<int> out;
  std::set_difference(roots[m].begin(), roots[m].end(), roots[m - 1].begin(), roots[m - 1].end(),
                      std::back_inserter(out));
  return out;
}

namespace {

// Largest augmentation cardinality the paper's construction tolerates at
// level m; beyond 62 the bound exceeds any finite tree.
long long augment_cap(int m) {
  return m >= 62 ? std::numeric_limits<long long>::max() : (1LL << m);
}

std::vector<int> greedy_farthest_net(const DistanceContext& ctx, double eps,
                                     const std::vector<int>& existing) {
  const auto& tr = ctx.tree();
  const int n = tr.node_count();
  std::vector<char> in_r(n, 0);
  std::vector<int> roots = existing;
  for (int r : roots) in_r[r] = 1;
  auto min_dist = [&](int s) {
    // distances grow while ascending, so the first root on the way up is
    // the nearest one
    for (int tau = s; tau != -1; tau = tr.parent_of(tau))
      if (in_r[tau]) return ctx.localized_distance(tau, s);
    return std::numeric_limits<double>::infinity();
  };
  while (true) {
    int far = -1;
    double fd = -1.0;
    for (int s = 0; s < n; ++s) {
      double d = min_dist(s);
      if (d > fd) {
        fd = d;
        far = s;
      }
    }
    if (fd < eps) break;
    in_r[far] = 1;
    roots.push_back(far);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace

RootChain construct_root_chain(const DistanceContext& ctx, int depth, SolveMode mode) {
  if (depth < 0) fail(ErrorCode::usage, "chain depth must be nonnegative");
  RootChain chain;
  chain.depth = depth;
  chain.q = ctx.q();
  chain.eps.assign(depth + 1, std::numeric_limits<double>::quiet_NaN());
  chain.roots.resize(depth + 1);
  chain.roots[0] = {ctx.tree().root()};
  chain.property4_certified = (mode == SolveMode::exact);
  for (int m = 1; m <= depth; ++m) {
    chain.eps[m] = epsilon_schedule(m, ctx.q());
    if (mode == SolveMode::exact) {
      auto add = order_net_augment(ctx, chain.eps[m], NetMetric::d_I, chain.roots[m - 1]);
      if (static_cast<long long>(add.size()) > augment_cap(m))
        fail(ErrorCode::infeasible_net,
             "no eps_" + std::to_string(m) + " order net of size <= 2^" + std::to_string(m) +
                 " exists (minimum augmentation " + std::to_string(add.size()) + ")");
      std::vector<int> merged;
      std::merge(chain.roots[m - 1].begin(), chain.roots[m - 1].end(), add.begin(), add.end(),
                 std::back_inserter(merged));
      chain.roots[m] = std::move(merged);
    } else {
      chain.roots[m] = greedy_farthest_net(ctx, chain.eps[m], chain.roots[m - 1]);
      if (static_cast<long long>(chain.roots[m].size()) >
          augment_cap(m) + static_cast<long long>(chain.roots[m - 1].size()))
        fail(ErrorCode::infeasible_net, "greedy net exceeded the level size budget at m = " + std::to_string(m));
    }
  }
  return chain;
}

double feasible_c0(const DistanceContext& ctx, int depth) {
  const int n = ctx.tree().node_count();
  const double q = ctx.q();
  double f = 1.0;  // admissible alpha scale factor; distances scale with it
  int m_top = 1;
  while (m_top < depth && (1LL << std::min(m_top, 62)) < n) ++m_top;
  for (int m = 1; m <= std::min(depth, m_top); ++m) {
    long long cap = m >= 62 ? std::numeric_limits<long long>::max() : (1LL << m);
    double eps = epsilon_schedule(m, q);
    // smallest delta with an order net of size <= 2^m (nets grow as delta shrinks)
    double hi = 2 * ctx.kappa_hat() + 1e-30;
    double lo = 0.0;
    if (static_cast<long long>(order_net_number(ctx, hi, NetMetric::d_I, SolveMode::exact).value) > cap)
      fail(ErrorCode::infeasible_net, "tree too large for the level budget at m = " + std::to_string(m));
    for (int it = 0; it < 80 && hi - lo > 1e-14 * hi; ++it) {
      double mid = 0.5 * (lo + hi);
      if (mid <= 0.0) break;
      long long v = order_net_number(ctx, mid, NetMetric::d_I, SolveMode::exact).value;
      (v <= cap ? hi : lo) = mid;
    }
    f = std::min(f, eps / hi * (1.0 - 1e-9));
  }
  if (f >= 1.0) return 1.0;
  // alpha scales by c0^{-(1-1/q)}; invert for the required factor
  return std::pow(f, -q / (q - 1.0));
}

PartitionTree::PartitionTree(std::shared_ptr<const DistanceContext> ctx, RootChain chain)
    : ctx_(std::move(ctx)), chain_(std::move(chain)) {
  const auto& tr = ctx_->tree();
  const int n = tr.node_count();
  const int M = chain_.depth;
  droot_.assign(M + 1, std::vector<int>(n, -1));
  sizes_.resize(M + 1);
  offspring_.resize(M + 1);
  for (int m = 0; m <= M; ++m) {
    std::vector<char> in_r(n, 0);
    for (int r : chain_.roots[m]) in_r[r] = 1;
    if (!in_r[tr.root()]) fail(ErrorCode::invariant_violation, "root set must contain the tree root");
    for (int v : tr.preorder()) {
      int p = tr.parent_of(v);
      droot_[m][v] = in_r[v] ? v : droot_[m][p];
    }
    sizes_[m].assign(chain_.roots[m].size(), 0);
    for (int v = 0; v < n; ++v) ++sizes_[m][domain_index(m, droot_[m][v])];
    if (m + 1 <= M) offspring_[m].assign(chain_.roots[m].size(), {});
  }
  for (int m = 1; m <= M; ++m)
    for (int r : chain_.roots[m]) offspring_[m - 1][domain_index(m - 1, droot_[m - 1][r])].push_back(r);
}

int PartitionTree::domain_index(int m, int r) const {
  const auto& v = chain_.roots[m];
  auto it = std::lower_bound(v.begin(), v.end(), r);
  if (it == v.end() || *it != r) fail(ErrorCode::unknown_node, "not a level-" + std::to_string(m) + " root");
  return static_cast<int>(it - v.begin());
}

int PartitionTree::parent_domain_root(int m, int r) const {
  if (m <= 0) fail(ErrorCode::usage, "level-0 domain has no parent");
  domain_index(m, r);  // validates
  return droot_[m - 1][r];
}

int PartitionTree::domain_size(int m, int r) const { return sizes_[m][domain_index(m, r)]; }

std::vector<int> PartitionTree::domain_members(int m, int r) const {
  domain_index(m, r);
  std::vector<int> out;
  const auto& dr = droot_[m];
  for (int v = 0; v < static_cast<int>(dr.size()); ++v)
    if (dr[v] == r) out.push_back(v);
  return out;
}

std::vector<int> PartitionTree::offspring_roots(int m, int r) const {
  if (m >= chain_.depth) return {};
  return offspring_[m][domain_index(m, r)];
}

ChainCheckResult check_chain_properties(const DistanceContext& ctx, const RootChain& chain,
                                        bool check_minimality) {
  ChainCheckResult res;
  const auto& tr = ctx.tree();
  auto note = [&](const std::string& s) {
    ++res.violations;
    if (res.details.size() < 32) res.details.push_back(s);
  };

  if (chain.roots[0] != std::vector<int>{tr.root()}) {
    res.nested = false;
    note("R_0 differs from {root}");
  }
  for (int m = 1; m <= chain.depth; ++m) {
    if (!std::includes(chain.roots[m].begin(), chain.roots[m].end(), chain.roots[m - 1].begin(),
                       chain.roots[m - 1].end())) {
      res.nested = false;
      note("R_" + std::to_string(m - 1) + " not contained in R_" + std::to_string(m));
    }
    if (m < 62 && static_cast<long long>(chain.roots[m].size()) > (2LL << m)) {
      res.size_bounded = false;
      note("#R_" + std::to_string(m) + " exceeds 2^" + std::to_string(m + 1));
    }
    if (!uncovered_by(ctx, chain.eps[m], chain.roots[m]).empty()) {
      res.nets_valid = false;
      note("R_" + std::to_string(m) + " is not an eps_" + std::to_string(m) + " order net");
    }
  }

  if (check_minimality) {
    for (int m = 1; m <= chain.depth; ++m) {
      for (int tau : chain.added_at(m)) {
        int parent = tr.parent_of(tau);
        if (parent < 0) {
          res.minimal = false;
          note("added root has no parent at m = " + std::to_string(m));
          continue;
        }
        std::vector<int> replaced;
        replaced.reserve(chain.roots[m].size());
        for (int r : chain.roots[m])
          if (r != tau) replaced.push_back(r);
        replaced.push_back(parent);
        std::sort(replaced.begin(), replaced.end());
        replaced.erase(std::unique(replaced.begin(), replaced.end()), replaced.end());
        if (uncovered_by(ctx, chain.eps[m], replaced).empty()) {
          res.minimal = false;
          note("replacing " + std::to_string(tau) + " by its parent keeps R_" + std::to_string(m) +
               " a net");
        }
      }
    }
  }
  return res;
}

CrucialCheckResult check_crucial(const PartitionTree& pt) {
  CrucialCheckResult res;
  const auto& ctx = pt.ctx();
  const auto& chain = pt.chain();
  const auto& tr = ctx.tree();
  const auto& lp = ctx.levels();
  const double q = ctx.q();
  for (int m = 2; m <= chain.depth; ++m) {
    double rhs = std::pow(chain.eps[m - 1], q) - std::pow(chain.eps[m], q);
    for (int tau : chain.added_at(m)) {
      int r = pt.domain_root(m - 1, tau);
      if (r == tau) fail(ErrorCode::invariant_violation, "added root already generates its (m-1)-domain");
      ++res.triples;
      int tp = tr.parent_of(tau);
      double sum = 0.0;
      if (lp.level_of(tp) == lp.level_of(tau))
        sum = ctx.level_prefix(tp) - (lp.level_of(r) == lp.level_of(tau) ? ctx.level_prefix(r) : 0.0);
      double lhs = std::pow(lp.sigma_hat(tau), q) * sum;
      res.max_ratio = std::max(res.max_ratio, rhs > 0 ? lhs / rhs : (lhs > 0 ? 1e300 : 0.0));
      if (lhs > rhs * (1.0 + 1e-9)) {
        ++res.violations;
        if (res.details.size() < 32)
          res.details.push_back("m=" + std::to_string(m) + " tau=" + std::to_string(tau) +
                                " lhs=" + std::to_string(lhs) + " rhs=" + std::to_string(rhs));
      }
    }
  }
  return res;
}

bool check_domain_radius(const PartitionTree& pt, std::string* detail) {
  const auto& ctx = pt.ctx();
  const auto& chain = pt.chain();
  const int n = ctx.tree().node_count();
  for (int m = 1; m <= chain.depth; ++m)
    for (int s = 0; s < n; ++s) {
      double d = ctx.localized_distance(pt.domain_root(m, s), s);
      if (!(d < chain.eps[m])) {
        if (detail)
          *detail = "d_I(r, s) >= eps_m at m=" + std::to_string(m) + " s=" + std::to_string(s);
        return false;
      }
    }
  return true;
}

}  // namespace wst
