#include "entropy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "errors.hpp"
#include "rng.hpp"

namespace wst {

namespace {

constexpr unsigned __int128 kSaturated = ~static_cast<unsigned __int128>(0);

unsigned __int128 sat_mul(unsigned __int128 a, unsigned __int128 b) {
  if (a == 0 || b == 0) return 0;
  if (a > kSaturated / b) return kSaturated;
  return a * b;
}

unsigned __int128 sat_add(unsigned __int128 a, unsigned __int128 b) {
  unsigned __int128 s = a + b;
  return s < a ? kSaturated : s;
}

// binomial C(a, b) with saturation; exact while below saturation
unsigned __int128 sat_binom(long long a, long long b) {
  if (b < 0 || b > a) return 0;
  b = std::min(b, a - b);
  unsigned __int128 num = 1;
  for (long long i = 1; i <= b; ++i) {
    num = sat_mul(num, static_cast<unsigned __int128>(a - b + i));
    if (num == kSaturated) return kSaturated;
    num /= static_cast<unsigned __int128>(i);  // prefix binomials stay integral
  }
  return num;
}

// #{ z in Z^P : ||z||_1 <= H }
unsigned __int128 lattice_count(int P, long long H) {
  unsigned __int128 total = 0;
  for (long long i = 0; i <= std::min<long long>(P, H); ++i) {
    unsigned __int128 term = sat_mul(sat_binom(P, i), sat_binom(H, i));
    for (long long j = 0; j < i; ++j) term = sat_mul(term, 2);
    total = sat_add(total, term);
    if (total == kSaturated) return kSaturated;
  }
  return total;
}

unsigned __int128 ball_budget(int n) {
  if (n - 1 >= 120) return kSaturated;
  return static_cast<unsigned __int128>(1) << (n - 1);
}

// Empirical-average constant: provable sparsification error is
// c(q) * maxnorm * k^{-(1-1/q)} with c(2) = 1 (second moments in l2) and
// c(q) = 2 otherwise (symmetrization + type-q constant 1).
double maurey_constant(double q) { return q == 2.0 ? 1.0 : 2.0; }

// Largest k >= 1 such that the k-sparse signed average grid over `count`
// points fits into 2^{n-1} balls by counting; 0 when even k = 1 fails.
// The grid size is the multiset count C(2*count + k, k), advanced
// incrementally (the running value stays below the 2^{n-1} <= 2^127 budget,
// so the product cannot saturate before the exact division).
long long maurey_k(long long count, int n) {
  if (count <= 0) return 0;
  unsigned __int128 budget = ball_budget(n);
  unsigned __int128 c = 1;  // C(2*count, 0)
  long long k = 0;
  while (k < 65536) {
    unsigned __int128 next = sat_mul(c, static_cast<unsigned __int128>(2 * count + k + 1));
    if (next == kSaturated) break;
    next /= static_cast<unsigned __int128>(k + 1);
    if (next > budget) break;
    c = next;
    ++k;
  }
  return k;
}

}  // namespace

double ColumnOperator::max_column_norm() const {
  double m = 0.0;
  for (const auto& c : columns) m = std::max(m, c.lq_norm(q));
  return m;
}

ColumnOperator operator_V(const WeightedTree& wt) {
  ColumnOperator op;
  op.q = wt.q();
  op.label = "V";
  const auto& tr = wt.tree();
  op.columns.reserve(tr.node_count());
  for (int s = 0; s < tr.node_count(); ++s) {
    std::vector<std::pair<int, double>> ent;
    for (int t = s; t != -1; t = tr.parent_of(t)) ent.emplace_back(t, wt.alpha(t) * wt.sigma(s));
    op.columns.push_back(SparseVec::from_pairs(std::move(ent)));
  }
  return op;
}

ColumnOperator operator_W(const LevelPartition& lp) {
  ColumnOperator op;
  op.q = lp.q();
  op.label = "W";
  const auto& tr = lp.tree();
  op.columns.reserve(tr.node_count());
  for (int s = 0; s < tr.node_count(); ++s) op.columns.push_back(w_column(lp, s));
  return op;
}

ColumnOperator operator_W_component(const PartitionTree& pt, const LightPartition& light, int part) {
  if (part < 0 || part > 3) fail(ErrorCode::usage, "component part must be 0 (W_L) or 1..3");
  ColumnOperator op;
  op.q = pt.ctx().q();
  op.label = part == 0 ? "WL" : "W" + std::to_string(part);
  const auto& tr = pt.ctx().tree();
  for (int s = 0; s < tr.node_count(); ++s) {
    SparseVec mu = SparseVec::delta(s);
    SparseVec col;
    if (part == 0) {
      for (int i = 1; i <= 3; ++i) col = col.plus(split_operator(pt, light, mu, i));
    } else {
      col = split_operator(pt, light, mu, part);
    }
    op.columns.push_back(std::move(col));
  }
  return op;
}

ColumnOperator operator_xL(const PartitionTree& pt, const LightPartition& light) {
  ColumnOperator op;
  op.q = pt.ctx().q();
  op.label = "xL";
  const auto& ctx = pt.ctx();
  const auto& tr = ctx.tree();
  const auto& lp = ctx.levels();
  for (const auto& L : light.lights) {
    if (!L.generic) continue;
    std::vector<std::pair<int, double>> ent;
    for (int t = L.r_minus; t != -1 && t != L.r_bullet && lp.level_of(t) == lp.level_of(L.r_circ);
         t = tr.parent_of(t))
      ent.emplace_back(t, lp.base().alpha(t) * lp.sigma_hat(L.r_circ));
    op.columns.push_back(SparseVec::from_pairs(std::move(ent)));
  }
  return op;
}

EntropyEstimator::EntropyEstimator(ColumnOperator op, int budget, uint64_t seed)
    : op_(std::move(op)), budget_(std::max(budget, 16)), seed_(seed) {
  const double q = op_.q;
  const int N = static_cast<int>(op_.columns.size());
  std::vector<double> norms(N);
  for (int j = 0; j < N; ++j) norms[j] = op_.columns[j].lq_norm(q);
  maxnorm_ = norms.empty() ? 0.0 : *std::max_element(norms.begin(), norms.end());

  // collinear detection: every nonzero column proportional to the first one
  collinear_ = true;
  const SparseVec* base = nullptr;
  double base_norm = 0.0;
  for (int j = 0; j < N && collinear_; ++j) {
    if (norms[j] == 0.0) continue;
    if (!base) {
      base = &op_.columns[j];
      base_norm = norms[j];
      continue;
    }
    double r = norms[j] / base_norm;
    double d_plus = lq_distance(op_.columns[j], base->scaled(r), q);
    double d_minus = lq_distance(op_.columns[j], base->scaled(-r), q);
    if (std::min(d_plus, d_minus) > 1e-12 * norms[j]) collinear_ = false;
  }

  if (maxnorm_ == 0.0) return;

  // Column nets. Centers may be arbitrary points, not just columns: the
  // inclusion aco(C) in aco(centers) + radius * ball only needs every
  // column within the measured radius of some center. Small nets are
  // refined by per-cluster 1-center iterations (step toward the farthest
  // member); each stored radius is re-measured against all columns, so the
  // refinement heuristics cannot invalidate a certificate.
  // sizes beyond a few hundred never win a split for the entropy indices in
  // scope; capping the sweep keeps construction time in the refinement
  const int pmax = std::min({N, budget_, 256});
  const int improve_cap = std::min(12, pmax);
  Rng net_rng(seed_ ^ 0x5bd1e995u);

  // drop negligible entries so synthesized centers stay cheap to measure
  auto pruned = [](const SparseVec& z) {
    double top = 0.0;
    for (const auto& [node, val] : z.entries) top = std::max(top, std::abs(val));
    SparseVec out;
    for (const auto& [node, val] : z.entries)
      if (std::abs(val) >= 1e-4 * top) out.entries.emplace_back(node, val);
    return out;
  };

  struct Assignment {
    std::vector<double> dist;
    std::vector<int> owner;
    double radius = 0.0;
  };
  auto assign = [&](const std::vector<SparseVec>& cs) {
    Assignment a;
    a.dist.assign(N, 1e300);
    a.owner.assign(N, 0);
    for (int j = 0; j < N; ++j)
      for (size_t c = 0; c < cs.size(); ++c) {
        double d = lq_distance(op_.columns[j], cs[c], q);
        if (d < a.dist[j]) {
          a.dist[j] = d;
          a.owner[j] = static_cast<int>(c);
        }
      }
    a.radius = *std::max_element(a.dist.begin(), a.dist.end());
    return a;
  };

  // approximate 1-center of a cluster: repeatedly step toward the farthest
  // sampled member (core-set style); the caller re-measures exactly
  auto spanning_center_sized = [&](const std::vector<int>& members, const SparseVec& start,
                                   size_t probe_cap, int iters) {
    std::vector<int> probe = members;
    if (probe.size() > probe_cap) {
      for (size_t i = 0; i < probe_cap; ++i)
        std::swap(probe[i], probe[i + net_rng.next_below(probe.size() - i)]);
      probe.resize(probe_cap);
    }
    SparseVec z = start;
    for (int it = 1; it <= iters; ++it) {
      int far = probe[0];
      double fd = -1.0;
      for (int j : probe) {
        double d = lq_distance(op_.columns[j], z, q);
        if (d > fd) {
          fd = d;
          far = j;
        }
      }
      double step = 1.0 / (it + 1);
      z = pruned(z.scaled(1.0 - step).plus(op_.columns[far].scaled(step)));
    }
    return z;
  };
  auto spanning_center = [&](const std::vector<int>& members, const SparseVec& start) {
    return spanning_center_sized(members, start, 768, 64);
  };

  // Lloyd-style rounds: re-center every nonempty cluster, keep the result
  // only while the exact radius improves
  auto refine = [&](std::vector<SparseVec> cs, Assignment a, int rounds) {
    for (int round = 0; round < rounds; ++round) {
      std::vector<std::vector<int>> clusters(cs.size());
      for (int j = 0; j < N; ++j) clusters[a.owner[j]].push_back(j);
      std::vector<SparseVec> trial = cs;
      for (size_t c = 0; c < cs.size(); ++c)
        if (!clusters[c].empty()) trial[c] = spanning_center(clusters[c], cs[c]);
      Assignment ta = assign(trial);
      if (ta.radius >= a.radius) break;
      cs = std::move(trial);
      a = std::move(ta);
    }
    return std::make_pair(cs, a);
  };

  std::vector<SparseVec> centers = {op_.columns[net_rng.next_below(N)]};
  Assignment cur = assign(centers);
  while (true) {
    const int P = static_cast<int>(centers.size());
    if (P <= improve_cap) {
      int rounds = P <= 8 ? 10 : 4;
      std::tie(centers, cur) = refine(std::move(centers), std::move(cur), rounds);
      int restarts = (P >= 2 && P < N) ? (P <= 8 ? 2 : 1) : 0;
      for (int r = 0; r < restarts; ++r) {
        // restart from distance-squared weighted seeds, refined the same way
        std::vector<SparseVec> alt = {op_.columns[net_rng.next_below(N)]};
        Assignment aa = assign(alt);
        for (int c = 1; c < P; ++c) {
          double total = 0.0;
          for (int j = 0; j < N; ++j) total += aa.dist[j] * aa.dist[j];
          double draw = net_rng.next_double() * total;
          int pick = N - 1;
          for (int j = 0; j < N; ++j) {
            draw -= aa.dist[j] * aa.dist[j];
            if (draw <= 0) {
              pick = j;
              break;
            }
          }
          alt.push_back(op_.columns[pick]);
          for (int j = 0; j < N; ++j) {
            double d = lq_distance(op_.columns[j], alt.back(), q);
            if (d < aa.dist[j]) {
              aa.dist[j] = d;
              aa.owner[j] = c;
            }
          }
        }
        aa.radius = *std::max_element(aa.dist.begin(), aa.dist.end());
        std::tie(alt, aa) = refine(std::move(alt), std::move(aa), rounds);
        if (aa.radius < cur.radius) {
          centers = std::move(alt);
          cur = std::move(aa);
        }
      }
      // polish the binding cluster with a heavier 1-center pass
      if (P >= 2 && P <= 8) {
        for (int step = 0; step < 8; ++step) {
          int far = static_cast<int>(std::max_element(cur.dist.begin(), cur.dist.end()) -
                                     cur.dist.begin());
          int worst = cur.owner[far];
          std::vector<int> members;
          for (int j = 0; j < N; ++j)
            if (cur.owner[j] == worst) members.push_back(j);
          std::vector<SparseVec> trial = centers;
          trial[worst] = spanning_center_sized(members, centers[worst], 2048, 120);
          Assignment ta = assign(trial);
          if (ta.radius >= cur.radius) break;
          centers = std::move(trial);
          cur = std::move(ta);
        }
      }
    }
    Net net;
    net.size = P;
    net.radius = cur.radius;
    for (const auto& c : centers) net.norms_sorted.push_back(c.lq_norm(q));
    std::sort(net.norms_sorted.rbegin(), net.norms_sorted.rend());
    nets_.push_back(net);
    if (P >= pmax || net.radius == 0.0) break;
    int far = static_cast<int>(std::max_element(cur.dist.begin(), cur.dist.end()) -
                               cur.dist.begin());
    centers.push_back(op_.columns[far]);
    for (int j = 0; j < N; ++j) {
      double d = lq_distance(op_.columns[j], centers.back(), q);
      if (d < cur.dist[j]) {
        cur.dist[j] = d;
        cur.owner[j] = P;
      }
    }
    cur.radius = *std::max_element(cur.dist.begin(), cur.dist.end());
  }

  // greedy packing over +-columns, subsampled under the budget
  std::vector<SparseVec> cand;
  {
    Rng rng(seed_);
    std::vector<int> idx(N);
    std::iota(idx.begin(), idx.end(), 0);
    if (2 * N > 2 * budget_) {
      for (int j = N - 1; j > 0; --j) std::swap(idx[j], idx[rng.next_below(j + 1)]);
      idx.resize(budget_);
      std::sort(idx.begin(), idx.end());
    }
    for (int j : idx) {
      cand.push_back(op_.columns[j]);
      cand.push_back(op_.columns[j].scaled(-1.0));
    }
  }
  const int C = static_cast<int>(cand.size());
  std::vector<double> pd(C);
  int pfirst = 0;
  double bn = -1.0;
  for (int j = 0; j < C; ++j) {
    double nj = cand[j].lq_norm(q);
    if (nj > bn) {
      bn = nj;
      pfirst = j;
    }
  }
  for (int j = 0; j < C; ++j) pd[j] = lq_distance(cand[j], cand[pfirst], q);
  int cap = std::min(C, budget_ + 1);
  for (int added = 1; added < cap; ++added) {
    int far = static_cast<int>(std::max_element(pd.begin(), pd.end()) - pd.begin());
    if (pd[far] == 0.0) break;
    packing_insert_dist_.push_back(pd[far]);
    for (int j = 0; j < C; ++j) pd[j] = std::min(pd[j], lq_distance(cand[j], cand[far], q));
  }
}

// Best certified radius for covering the hull of `count` points with
// 2^{budget-1} balls, given their sorted norms (descending).
double EntropyEstimator::inner_cover(int count, double maxnorm, const std::vector<double>& sorted_norms,
                                     int budget, std::string* how) const {
  double best = maxnorm;
  std::string method = "trivial";
  if (count <= 0 || maxnorm == 0.0) {
    if (how) *how = "zero";
    return 0.0;
  }
  long long k = maurey_k(count, budget);
  if (k >= 1) {
    double v = maurey_constant(op_.q) * maxnorm * std::pow(static_cast<double>(k), -(1.0 - 1.0 / op_.q));
    if (v < best) {
      best = v;
      method = "maurey k=" + std::to_string(k);
    }
  }
  if (count <= 30) {
    // largest grid resolution whose center count fits the ball budget; the
    // rounding error shrinks monotonically with h, so only the largest
    // feasible h matters
    unsigned __int128 cap = ball_budget(budget);
    auto fits = [&](long long h) { return lattice_count(count, h + (count + 1) / 2) <= cap; };
    if (fits(1)) {
      long long lo = 1, hi = 1;
      while (hi < (1LL << 40) && fits(hi * 2)) hi *= 2;
      hi *= 2;
      while (lo + 1 < hi) {
        long long mid = lo + (hi - lo) / 2;
        (fits(mid) ? lo : hi) = mid;
      }
      std::vector<double> psums(sorted_norms.size() + 1, 0.0);
      for (size_t i = 0; i < sorted_norms.size(); ++i) psums[i + 1] = psums[i] + sorted_norms[i];
      long long top = std::min<long long>(count, 2 * lo);
      double err = psums[top] / (2.0 * lo);
      if (err < best) {
        best = err;
        method = "lattice h=" + std::to_string(lo);
      }
    }
  }
  if (how) *how = method;
  return best;
}

UpperBound EntropyEstimator::upper(int n) const {
  if (n < 1) fail(ErrorCode::usage, "entropy index must be positive");
  const double q = op_.q;
  const long long N = static_cast<long long>(op_.columns.size());
  UpperBound ub;
  if (maxnorm_ == 0.0) {
    ub.value = 0.0;
    ub.method = "zero";
    return ub;
  }
  ub.value = maxnorm_;
  ub.method = "trivial";
  ub.detail = "single ball at the origin";

  if (collinear_) {
    double v = maxnorm_ * std::ldexp(1.0, -(n - 1)) * (1.0 + 1e-9);
    if (v < ub.value) {
      ub.value = v;
      ub.method = "segment";
      ub.detail = "1-d interval cover with 2^{n-1} pieces";
    }
    return ub;
  }

  // direct sparse-average counting over all columns
  {
    long long k = maurey_k(N, n);
    if (k >= 1) {
      double v = maurey_constant(q) * maxnorm_ * std::pow(static_cast<double>(k), -(1.0 - 1.0 / q));
      if (v < ub.value) {
        ub.value = v;
        ub.method = "maurey";
        ub.detail = "k=" + std::to_string(k) + " over " + std::to_string(N) + " columns";
      }
    }
  }

  // column net of P centers + cover of the center hull + residual handling
  std::vector<long long> tail_k(n + 2, -1);  // maurey_k(N, n1), lazily
  auto tail_k_of = [&](int n1) {
    if (tail_k[n1] < 0) tail_k[n1] = maurey_k(N, n1);
    return tail_k[n1];
  };
  for (const Net& net : nets_) {
    int P = net.size;
    if (P > 24 && P < static_cast<int>(nets_.size()) && (P & (P - 1)) != 0 && P % 3 != 0)
      continue;  // thin the size grid past the improved range
    double eta = net.radius;
    const std::vector<double>& sn = net.norms_sorted;
    for (int n0 = 1; n0 <= n; ++n0) {
      std::string how;
      double head = inner_cover(P, sn[0], sn, n0, &how);
      // residual as a single ball
      {
        double v = head + eta;
        if (v < ub.value) {
          ub.value = v;
          ub.method = "net+ball";
          ub.detail = "P=" + std::to_string(P) + " eta=" + std::to_string(eta) + " head[" + how +
                      ",n0=" + std::to_string(n0) + "]";
        }
      }
      // residual hull of column differences via sparse averages
      int n1 = n + 1 - n0;
      if (n1 >= 1) {
        long long k = tail_k_of(n1);
        if (k >= 1) {
          double tail = maurey_constant(q) * eta * std::pow(static_cast<double>(k), -(1.0 - 1.0 / q));
          double v = head + tail;
          if (v < ub.value) {
            ub.value = v;
            ub.method = "net+maurey";
            ub.detail = "P=" + std::to_string(P) + " eta=" + std::to_string(eta) + " head[" + how +
                        ",n0=" + std::to_string(n0) + "] tail k=" + std::to_string(k);
          }
        }
      }
    }
  }
  return ub;
}

LowerBound EntropyEstimator::lower(int n) const {
  if (n < 1) fail(ErrorCode::usage, "entropy index must be positive");
  LowerBound lb;
  if (maxnorm_ == 0.0) {
    lb.method = "none";
    return lb;
  }
  if (collinear_) {
    lb.value = maxnorm_ * std::ldexp(1.0, -(n - 1)) * (1.0 - 1e-9);
    lb.method = "segment";
    lb.witnesses = (n - 1 < 30) ? (1 << (n - 1)) + 1 : 0;
    return lb;
  }
  // packing of 2^{n-1}+1 points pairwise > 2 delta apart
  if (n - 1 < 30) {
    long long need = (1LL << (n - 1));  // insertion index; need+1 points
    if (need <= static_cast<long long>(packing_insert_dist_.size())) {
      lb.value = packing_insert_dist_[need - 1] / 2.0 * (1.0 - 1e-9);
      lb.method = "packing";
      lb.witnesses = static_cast<int>(need + 1);
      return lb;
    }
  }
  lb.method = "none";
  return lb;
}

EntropyEstimate EntropyEstimator::estimate(int n) const {
  UpperBound ub = upper(n);
  LowerBound lb = lower(n);
  if (lb.value > ub.value)
    fail(ErrorCode::invariant_violation, "packing lower bound exceeded the certified upper bound");
  return {n, ub.value, lb.value, ub.method, lb.method};
}

CombinedBound combine_apprV(double base_upper_per_gamma, double approx_error, double family_size,
                            int k) {
  if (k < 1 || family_size < 1.0) fail(ErrorCode::usage, "combine_apprV needs k >= 1 and a nonempty family");
  int M = static_cast<int>(std::floor(std::log2(family_size))) + 1;
  return {k + M, base_upper_per_gamma + approx_error};
}

double dimension_bound_f(int n, int N, double q) {
  if (n < 1 || N < 1) fail(ErrorCode::usage, "dimension_bound_f needs n, N >= 1");
  double a = std::max(static_cast<double>(n) / N, 1.0);
  double inner = std::max(std::log(static_cast<double>(N) / n + 1.0) / n, 1.0 / N);
  return std::pow(2.0, -a) * std::min(1.0, std::pow(inner, 1.0 - 1.0 / q));
}

double fit_log2_slope(const std::vector<int>& ns, const std::vector<double>& uppers) {
  if (ns.size() != uppers.size() || ns.size() < 2) fail(ErrorCode::usage, "slope fit needs >= 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int m = static_cast<int>(ns.size());
  for (int i = 0; i < m; ++i) {
    double x = std::log2(static_cast<double>(ns[i]));
    double y = std::log2(uppers[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

EntropyReport entropy_report(const WeightedTree& wt, const LevelPartition& lp,
                             const std::vector<int>& n_grid, int budget, uint64_t seed) {
  EntropyReport rep;
  EntropyEstimator est_w(operator_W(lp), budget, seed);
  EntropyEstimator est_v(operator_V(wt), budget, seed);
  std::vector<double> w_uppers;
  double w_cummin = std::numeric_limits<double>::infinity();
  for (int n : n_grid) {
    EntropyEstimate e = est_w.estimate(n);
    w_cummin = std::min(w_cummin, e.upper);  // entropy numbers are monotone in n
    EntropyReportRow row{n, e.lower, w_cummin, e.method_lower, e.method_upper};
    rep.w_rows.push_back(row);
    w_uppers.push_back(w_cummin);

    EntropyEstimate ev = est_v.estimate(n);
    double via_w = 2.0 * w_cummin;
    EntropyReportRow vrow{n, ev.lower, std::min(ev.upper, via_w), ev.method_lower,
                          ev.upper <= via_w ? ev.method_upper : "2*e_n(W)"};
    rep.v_rows.push_back(vrow);
  }
  std::vector<int> ns(n_grid.begin(), n_grid.end());
  rep.slope_w = fit_log2_slope(ns, w_uppers);
  return rep;
}

}  // namespace wst
