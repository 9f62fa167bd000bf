// Dynamic programming for instances whose channels partition into K groups
// with per-user-uniform gain inside each group. Only the per-group channel
// counts matter, so the state is the vector of counts handed to the first m
// users:
//   c_m(h_1..h_K) = min over (k_1..k_K) != 0 of p_m(k) + c_{m-1}(h - k)
// with p_m(k) the grouped-waterfill power of user m on k_j channels of each
// group. For K = 1 this collapses to an O(MN^2) scan.
#pragma once

#include <cstdint>
#include <vector>

#include "mpca/model.hpp"
#include "mpca/recognition.hpp"

namespace mpca {

struct GroupedInstance {
  MpcaInstance base;
  GroupStructure groups;
  std::vector<std::vector<double>> user_group_gains;  // M x K
};

/// Validates that gains are exactly uniform per user inside each group and
/// extracts the M x K gain table. Throws WrongStructure otherwise.
GroupedInstance make_grouped(const MpcaInstance& instance, const GroupStructure& groups);

/// Partial-cost table c_m(h_1..h_K) with backpointers; row m covers users
/// 1..m (1-based), cells indexed by per-group channel counts 0..N_j.
class DpTable {
 public:
  DpTable(int num_users, std::vector<int> group_sizes);

  double value(int user, const std::vector<int>& counts) const;
  const std::vector<int>& group_sizes() const { return sizes_; }
  int num_users() const { return users_; }

  std::size_t encode(const std::vector<int>& counts) const;

  // flat storage, row-major in (user, encoded counts); used by the solvers
  std::vector<double> values;
  std::vector<int32_t> back;  // encoded k-vector chosen per cell, -1 if none

 private:
  int users_;
  std::vector<int> sizes_;
  std::vector<std::size_t> strides_;
  std::size_t cells_;
};

/// Fills the K=1 table per the O(MN^2) recursion.
DpTable one_mpca_table(const GroupedInstance& instance);

/// Fills the general-K table. Guards: K <= 4 and M * N^{2K} <= 1e9.
DpTable kmpca_table(const GroupedInstance& instance);

/// Optimum for K = 1 (throws WrongStructure otherwise), O(MN^2).
SolveReport solve_1mpca(const GroupedInstance& instance);

/// Optimum for general fixed K, O(MN^{2K}).
SolveReport solve_kmpca(const GroupedInstance& instance);

}  // namespace mpca
