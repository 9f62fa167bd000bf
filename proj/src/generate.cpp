#include "mpca/generate.hpp"

#include <cmath>
#include <set>

namespace mpca {

double uniform_double(std::mt19937_64& rng) {
  return double(rng() >> 11) * 0x1.0p-53;
}

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::exp(std::log(lo) + uniform_double(rng) * (std::log(hi) - std::log(lo)));
}

int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return lo + int(rng() % uint64_t(hi - lo + 1));
}

MpcaInstance generate_grouped_instance(const GenSpec& spec) {
  if (spec.users <= 0 || spec.channels < spec.users || spec.groups < 1 ||
      spec.groups > spec.channels)
    throw MpcaError(ErrorCode::BadFlags, "need 0 < M <= N and 1 <= K <= N");

  std::vector<int> sizes;
  if (spec.group_sizes) {
    sizes = *spec.group_sizes;
    if (static_cast<int>(sizes.size()) != spec.groups)
      throw MpcaError(ErrorCode::BadFlags, "group_sizes length must equal K");
    int total = 0;
    for (int s : sizes) {
      if (s <= 0) throw MpcaError(ErrorCode::BadFlags, "group sizes must be positive");
      total += s;
    }
    if (total != spec.channels)
      throw MpcaError(ErrorCode::BadFlags, "group sizes must sum to N");
  } else {
    int base = spec.channels / spec.groups, extra = spec.channels % spec.groups;
    for (int j = 0; j < spec.groups; ++j) sizes.push_back(base + (j < extra ? 1 : 0));
  }

  std::mt19937_64 rng(spec.seed);
  // per-user per-group gains; resample until all K columns are distinct
  std::vector<std::vector<double>> cols;
  for (;;) {
    cols.assign(spec.groups, std::vector<double>(spec.users));
    for (auto& col : cols)
      for (double& g : col) g = log_uniform(rng, spec.gain_lo, spec.gain_hi);
    std::set<std::vector<double>> distinct(cols.begin(), cols.end());
    if (static_cast<int>(distinct.size()) == spec.groups) break;
  }

  MpcaInstance inst;
  inst.num_users = spec.users;
  inst.num_channels = spec.channels;
  inst.rate_model = spec.rate_model;
  inst.gains.assign(spec.users, std::vector<double>(spec.channels));
  std::vector<int> ids;
  for (int j = 0; j < spec.groups; ++j)
    for (int c = 0; c < sizes[j]; ++c) ids.push_back(j);
  for (int m = 0; m < spec.users; ++m)
    for (int ch = 0; ch < spec.channels; ++ch) inst.gains[m][ch] = cols[ids[ch]][m];
  inst.channel_groups = std::move(ids);
  for (int m = 0; m < spec.users; ++m)
    inst.rate_targets.push_back(log_uniform(rng, spec.rate_lo, spec.rate_hi));
  return inst;
}

MpcaInstance generate_general_instance(int users, int channels, uint64_t seed,
                                       double gain_lo, double gain_hi, double rate_lo,
                                       double rate_hi, RateModel model) {
  if (users <= 0 || channels < users)
    throw MpcaError(ErrorCode::BadFlags, "need 0 < M <= N");
  std::mt19937_64 rng(seed);
  MpcaInstance inst;
  inst.num_users = users;
  inst.num_channels = channels;
  inst.rate_model = model;
  inst.gains.assign(users, std::vector<double>(channels));
  for (auto& row : inst.gains)
    for (double& g : row) g = log_uniform(rng, gain_lo, gain_hi);
  for (int m = 0; m < users; ++m)
    inst.rate_targets.push_back(log_uniform(rng, rate_lo, rate_hi));
  return inst;
}

}  // namespace mpca
