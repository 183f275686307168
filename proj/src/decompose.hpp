#pragma once

#include <memory>
#include <string>
#include <vector>

#include "partitions.hpp"

namespace wst {

struct DomainRef {
  int level = 0;
  int root = -1;
  bool operator==(const DomainRef&) const = default;
  bool operator<(const DomainRef& o) const {
    return level != o.level ? level < o.level : root < o.root;
  }
};

/// Heavy domains of the partition tree for a fixed mu and n:
/// B is heavy iff |mu|(B) > |B| / n where |B| is the domain level.
/// Ancestor-closed; terminal members form the set Q.
struct EssentialTree {
  int n = 0;
  SparseVec mu;                    // the measure this tree was built for
  std::vector<DomainRef> heavy;    // sorted
  std::vector<DomainRef> terminal; // heavy domains with no heavy offspring
  std::vector<double> heavy_mass;  // |mu|(B) aligned with `heavy`

  bool is_heavy(const DomainRef& d) const {
    return std::binary_search(heavy.begin(), heavy.end(), d);
  }
  /// sum of levels over terminal domains; Lemma-style bound: < n
  long long terminal_level_sum() const;
};

/// Light domains whose partition-tree parent is heavy, together with the
/// marks used by the operator splitting. These form a tree partition.
struct LightDomain {
  DomainRef domain;     // (level m, root r_circ)
  int r_circ = -1;      // root of the domain
  int r_minus = -1;     // parent node of r_circ; -1 when r_circ is the tree root
  int r_bullet = -1;    // root of the parent domain in the partition tree
  bool generic = false; // r_bullet strictly precedes r_circ
};

struct LightPartition {
  int n = 0;
  SparseVec mu;
  std::vector<LightDomain> lights;  // sorted by (level, root)

  const LightDomain* find(const DomainRef& d) const;
};

EssentialTree essential_tree(const PartitionTree& pt, const SparseVec& mu, int n);
LightPartition light_partition(const PartitionTree& pt, const EssentialTree& et);

/// Light domain containing node s (the smallest light level along its chain).
DomainRef light_domain_of(const PartitionTree& pt, const EssentialTree& et, int s);

/// W^i pieces of W relative to a light partition; parts split each branch
/// [root, s] as [root, r_bullet] + (r_bullet, r_minus] + {r_circ} + (r_circ, s].
/// Parts 2 and 3 vanish on degenerate domains. Sum over parts equals apply_W.
SparseVec split_operator(const PartitionTree& pt, const LightPartition& light, const SparseVec& mu,
                         int part);

struct W4Certificate {
  double norm = 0.0;
  double bound = 0.0;
  bool pass = false;
};

/// ||W^4_{L_mu} mu||_q against the constant-free bound (n ln 2)^{-(1-1/q)}.
W4Certificate w4_certificate(const PartitionTree& pt, const LightPartition& light,
                             const SparseVec& mu, int n);

struct ComponentEntry {
  DomainRef domain;
  double x_norm_q = 0.0;  // ||x_L||_q^q
  double gamma = 0.0;     // sigma_hat(r_circ) * alpha(r_circ)
};

struct ComponentData {
  std::vector<ComponentEntry> generic;  // one entry per generic light domain
  int checked = 0;        // generic domains at levels >= 2
  int level1_generic = 0; // generic level-1 domains (no eps_0; reported only)
  int x_violations = 0;   // ||x_L||^q > eps_{m-1}^q - eps_m^q
  int gamma_violations = 0;
  int count_violations = 0;  // #{gamma_L >= eps_m} > 2^{m+3}
  bool pass() const { return x_violations + gamma_violations + count_violations == 0; }
};

/// Per generic light domain: ||x_L||_q^q and gamma_L with the bounds from the
/// crucial inequality and the domain radius, plus the counting bound.
ComponentData component_data(const PartitionTree& pt, const LightPartition& light);

/// Exhaustively counts root-containing, ancestor-closed subtrees of the
/// partition tree whose terminal levels sum to less than n. Tiny instances
/// only; the count is bounded by (8e)^n.
long long enumerate_partitions(const PartitionTree& pt, int n, long long cap = 50'000'000);

}  // namespace wst
