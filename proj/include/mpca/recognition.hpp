// Group-structure recognition: decide whether the channels partition into K
// groups with per-user-uniform gain inside each group, and extract that
// partition. Two channels are equivalent iff their gain columns agree for
// every user; with a positive tolerance the comparison runs on gains
// quantized in log2 space, which keeps the relation transitive.
#pragma once

#include <vector>

#include "mpca/model.hpp"

namespace mpca {

struct GroupStructure {
  std::vector<int> group_id;  // per channel, ids 0..k-1 by first occurrence
  int k = 0;
  std::vector<int> group_sizes;

  bool operator==(const GroupStructure&) const = default;
};

/// Hash/sort based recognizer, O(MN log N).
GroupStructure recognize(const MpcaInstance& instance, double tolerance = 0.0);

/// Reference implementation: explicit pairwise channel-equivalence graph and
/// its connected components, O(MN^2). Same output; kept for differential
/// testing against the fast path.
GroupStructure recognize_reference(const MpcaInstance& instance, double tolerance = 0.0);

/// One-pass O(MN) check equivalent to recognize(instance, 0).k == 1.
bool fast_is_1mpca(const MpcaInstance& instance);

/// Builds a GroupStructure from explicit per-channel ids (e.g. the optional
/// channel_groups field), renumbering ids by first occurrence.
GroupStructure group_structure_from_ids(const std::vector<int>& ids);

}  // namespace mpca
