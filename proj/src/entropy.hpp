#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "decompose.hpp"

namespace wst {

/// Finite-rank l1 -> lq operator described by its columns (images of the
/// unit basis vectors). The image of the unit ball is the absolutely convex
/// hull of the columns.
struct ColumnOperator {
  std::vector<SparseVec> columns;
  double q = 2.0;
  std::string label;

  double max_column_norm() const;
};

ColumnOperator operator_V(const WeightedTree& wt);
ColumnOperator operator_W(const LevelPartition& lp);
/// Columns of W^i for i in 1..3, or of W_L = W^1 + W^2 + W^3 when part == 0.
ColumnOperator operator_W_component(const PartitionTree& pt, const LightPartition& light, int part);
/// The x_L vectors of the generic light domains as columns.
ColumnOperator operator_xL(const PartitionTree& pt, const LightPartition& light);

struct UpperBound {
  double value = 0.0;
  std::string method;  // trivial | segment | maurey | net+...
  std::string detail;  // human-readable construction summary
};

struct LowerBound {
  double value = 0.0;
  std::string method;  // segment | packing | none
  int witnesses = 0;   // packing size certifying the bound
};

struct EntropyEstimate {
  int n = 0;
  double upper = 0.0;
  double lower = 0.0;
  std::string method_upper;
  std::string method_lower;
};

/// Certified dyadic entropy bounds for one operator. Upper bounds come from
/// constructive covers whose ball counts are verified by exact counting
/// (column nets + coefficient-lattice covers + sparse empirical averages);
/// lower bounds from explicit packings. Deterministic given (budget, seed).
class EntropyEstimator {
public:
  EntropyEstimator(ColumnOperator op, int budget = 4096, uint64_t seed = 1);

  UpperBound upper(int n) const;
  LowerBound lower(int n) const;
  EntropyEstimate estimate(int n) const;

  const ColumnOperator& op() const { return op_; }

private:
  struct Net {
    int size = 0;
    double radius = 0.0;               // exact covering radius over all columns
    std::vector<double> norms_sorted;  // center norms, descending
  };

  double inner_cover(int count, double maxnorm, const std::vector<double>& sorted_norms, int budget,
                     std::string* how) const;

  ColumnOperator op_;
  int budget_;
  uint64_t seed_;
  double maxnorm_ = 0.0;
  bool collinear_ = false;
  // column nets by size: locally improved medoid nets for small sizes, a
  // plain farthest-point trajectory beyond
  std::vector<Net> nets_;
  // greedy packing over +-columns (subsampled by budget)
  std::vector<double> packing_insert_dist_;
};

/// e_{k+M}(V) <= sup_gamma e_k(V_gamma) + approximation error, with
/// M = floor(log2(family_size)) + 1.
struct CombinedBound {
  int index = 0;
  double upper = 0.0;
};
CombinedBound combine_apprV(double base_upper_per_gamma, double approx_error, double family_size,
                            int k);

/// Dimension-based entropy shape for operators from l1^N into a type-q space;
/// reported only (the reference constants are not pinned down numerically).
double dimension_bound_f(int n, int N, double q);

/// Least-squares slope of log2(upper) against log2(n).
double fit_log2_slope(const std::vector<int>& ns, const std::vector<double>& uppers);

struct EntropyReportRow {
  int n = 0;
  double lower = 0.0;
  double upper = 0.0;
  std::string method_lower;
  std::string method_upper;
};

struct EntropyReport {
  std::vector<EntropyReportRow> w_rows;
  std::vector<EntropyReportRow> v_rows;  // via e_n(V) <= 2 e_n(W) and direct bounds
  double slope_w = 0.0;                  // fitted on the W uppers
};

EntropyReport entropy_report(const WeightedTree& wt, const LevelPartition& lp,
                             const std::vector<int>& n_grid, int budget, uint64_t seed);

}  // namespace wst
