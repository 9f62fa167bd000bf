#include "mpca/recognition.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <map>

namespace mpca {

namespace {

// Column key: raw gains for exact matching, quantized log2 gains otherwise.
std::vector<int64_t> column_key(const MpcaInstance& inst, int ch, double tolerance) {
  std::vector<int64_t> key(inst.num_users);
  for (int m = 0; m < inst.num_users; ++m) {
    double g = inst.gains[m][ch];
    if (tolerance == 0.0) {
      int64_t bits;
      static_assert(sizeof(bits) == sizeof(g));
      std::memcpy(&bits, &g, sizeof(bits));
      key[m] = bits;
    } else {
      key[m] = std::llround(std::log2(g) / tolerance);
    }
  }
  return key;
}

GroupStructure finalize(std::vector<int> ids) {
  GroupStructure s;
  s.group_id = std::move(ids);
  for (int id : s.group_id) s.k = std::max(s.k, id + 1);
  s.group_sizes.assign(s.k, 0);
  for (int id : s.group_id) ++s.group_sizes[id];
  return s;
}

}  // namespace

GroupStructure recognize(const MpcaInstance& inst, double tolerance) {
  validate(inst);
  if (tolerance < 0.0)
    throw MpcaError(ErrorCode::BadFlags, "tolerance must be nonnegative");
  std::map<std::vector<int64_t>, int> seen;
  std::vector<int> ids(inst.num_channels);
  for (int ch = 0; ch < inst.num_channels; ++ch) {
    auto [it, inserted] = seen.try_emplace(column_key(inst, ch, tolerance),
                                           static_cast<int>(seen.size()));
    ids[ch] = it->second;
  }
  return finalize(std::move(ids));
}

GroupStructure recognize_reference(const MpcaInstance& inst, double tolerance) {
  validate(inst);
  if (tolerance < 0.0)
    throw MpcaError(ErrorCode::BadFlags, "tolerance must be nonnegative");
  const int n = inst.num_channels;
  std::vector<std::vector<int64_t>> keys(n);
  for (int ch = 0; ch < n; ++ch) keys[ch] = column_key(inst, ch, tolerance);

  // Channel-equivalence graph: edge iff the columns agree for every user.
  std::vector<std::vector<int>> adj(n);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (keys[a] == keys[b]) {
        adj[a].push_back(b);
        adj[b].push_back(a);
      }

  std::vector<int> ids(n, -1);
  int next = 0;
  for (int start = 0; start < n; ++start) {
    if (ids[start] != -1) continue;
    std::vector<int> stack{start};
    ids[start] = next;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w : adj[v])
        if (ids[w] == -1) {
          ids[w] = next;
          stack.push_back(w);
        }
    }
    ++next;
  }
  return finalize(std::move(ids));
}

bool fast_is_1mpca(const MpcaInstance& inst) {
  validate(inst);
  for (int m = 0; m < inst.num_users; ++m)
    for (int ch = 1; ch < inst.num_channels; ++ch)
      if (inst.gains[m][ch] != inst.gains[m][0]) return false;
  return true;
}

GroupStructure group_structure_from_ids(const std::vector<int>& raw_ids) {
  std::map<int, int> renumber;
  std::vector<int> ids(raw_ids.size());
  for (std::size_t ch = 0; ch < raw_ids.size(); ++ch) {
    if (raw_ids[ch] < 0)
      throw MpcaError(ErrorCode::DimensionMismatch, "group ids must be nonnegative");
    auto [it, inserted] = renumber.try_emplace(raw_ids[ch], static_cast<int>(renumber.size()));
    ids[ch] = it->second;
  }
  return finalize(std::move(ids));
}

}  // namespace mpca
