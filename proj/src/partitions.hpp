#pragma once

#include <memory>
#include <string>
#include <vector>

#include "nets.hpp"

namespace wst {

/// Nested root sets {root} = R_0 <= R_1 <= ... <= R_M, each R_m an
/// eps_m-order net w.r.t. d_I with #R_m <= 2^{m+1}; exact mode additionally
/// guarantees order-minimality (replacing any new root by its parent breaks
/// the net property).
struct RootChain {
  int depth = 0;                        // M
  double q = 2.0;
  std::vector<std::vector<int>> roots;  // roots[m], sorted; m = 0..M
  std::vector<double> eps;              // eps[m] for m >= 1; eps[0] = NaN
  bool property4_certified = false;     // false for greedy construction

  const std::vector<int>& level(int m) const { return roots.at(m); }
  /// Roots added at level m (R_m minus R_{m-1}).
  std::vector<int> added_at(int m) const;
};

RootChain construct_root_chain(const DistanceContext& ctx, int depth, SolveMode mode);

/// Smallest scaling constant c0 >= 1 such that the instance rescaled by
/// normalize_c0(c0) admits the exact chain construction to the given depth
/// (the covering hypothesis with constant 1). Returns 1 when the instance is
/// feasible as is.
double feasible_c0(const DistanceContext& ctx, int depth);

/// Tree partitions B_m = { B_{r,m} : r in R_m } induced by a root chain,
/// with refinement links. Domain (r, m) holds the descendants s of r whose
/// path (r, s] avoids R_m.
class PartitionTree {
public:
  PartitionTree(std::shared_ptr<const DistanceContext> ctx, RootChain chain);

  const DistanceContext& ctx() const { return *ctx_; }
  const RootChain& chain() const { return chain_; }
  int depth() const { return chain_.depth; }

  /// Root of the level-m domain containing node s.
  int domain_root(int m, int s) const { return droot_[m][s]; }
  /// Root of the parent domain (level m-1) of domain (r, m).
  int parent_domain_root(int m, int r) const;
  int domain_size(int m, int r) const;
  std::vector<int> domain_members(int m, int r) const;
  const std::vector<int>& roots(int m) const { return chain_.roots[m]; }
  /// Roots of level-(m+1) domains nested inside (r, m).
  std::vector<int> offspring_roots(int m, int r) const;

private:
  int domain_index(int m, int r) const;

  std::shared_ptr<const DistanceContext> ctx_;
  RootChain chain_;
  std::vector<std::vector<int>> droot_;       // [m][node] -> domain root
  std::vector<std::vector<int>> sizes_;       // [m][root index]
  std::vector<std::vector<std::vector<int>>> offspring_;  // [m][root index] -> roots at m+1
};

struct ChainCheckResult {
  bool nested = true;           // property (1)
  bool size_bounded = true;     // property (2): #R_m <= 2^{m+1}
  bool nets_valid = true;       // property (3)
  bool minimal = true;          // property (4), via the replacement test
  int violations = 0;
  std::vector<std::string> details;
  bool all(bool include_minimality) const {
    return nested && size_bounded && nets_valid && (!include_minimality || minimal);
  }
};

/// Verifies the four root-chain properties directly against their
/// definitions. The minimality test rebuilds coverage for every replacement
/// candidate, so it is the expensive part.
ChainCheckResult check_chain_properties(const DistanceContext& ctx, const RootChain& chain,
                                        bool check_minimality);

struct CrucialCheckResult {
  int triples = 0;
  int violations = 0;
  double max_ratio = 0.0;  // max lhs/rhs over triples
  std::vector<std::string> details;
  bool pass() const { return violations == 0; }
};

/// For every level m >= 2 and every root tau added at level m with
/// (m-1)-domain root r: sigma_hat(tau)^q * sum_{r < v <= tau^-, v ~ tau}
/// alpha(v)^q <= eps_{m-1}^q - eps_m^q, within relative slack 1e-9.
CrucialCheckResult check_crucial(const PartitionTree& pt);

/// Eq.-style domain radius check: d_I(r, s) < eps_m for every s in B_{r,m}.
bool check_domain_radius(const PartitionTree& pt, std::string* detail = nullptr);

}  // namespace wst
