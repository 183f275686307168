#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "rng.hpp"
#include "weights.hpp"

namespace wst {

/// Deterministic instance generation: same spec + seed gives the same tree,
/// weights and downstream reports bit for bit.
struct InstanceSpec {
  enum class Shape { binary, chain, random_attach };
  enum class Profile { corollary, constant, random_levels, custom };

  Shape shape = Shape::binary;
  int depth = 3;  // binary truncation depth
  int size = 8;   // chain / random node count
  Profile profile = Profile::corollary;
  std::string weights_file;  // custom profile
  double q = 2.0;
  uint64_t seed = 1;
};

InstanceSpec parse_shape(const std::string& name, InstanceSpec spec);

std::shared_ptr<const RootedTree> generate_tree(const InstanceSpec& spec);
WeightedTree generate(const InstanceSpec& spec);

/// Random measure in the l1 unit ball with small support; never zero.
SparseVec random_unit_mu(const RootedTree& tree, Rng& rng);

}  // namespace wst
