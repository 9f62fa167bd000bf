// Seeded synthetic instances for tests, differential suites and the bench
// harness. All draws come from a hand-rolled uniform on mt19937_64 bits so
// the stream is identical across standard libraries.
#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "mpca/model.hpp"

namespace mpca {

inline constexpr const char* kRngName = "mt19937_64";

double uniform_double(std::mt19937_64& rng);                       // [0, 1)
double log_uniform(std::mt19937_64& rng, double lo, double hi);    // ratio-scale
int uniform_int(std::mt19937_64& rng, int lo, int hi);             // inclusive

struct GenSpec {
  int users = 2;
  int channels = 4;
  int groups = 1;  // distinct gain columns; channels sorted by group
  uint64_t seed = 1;
  double gain_lo = 0.01, gain_hi = 100.0;
  double rate_lo = 0.1, rate_hi = 4.0;
  std::optional<std::vector<int>> group_sizes;  // default: split evenly
  RateModel rate_model = RateModel::LogSnr;
};

/// Instance with exactly `groups` distinct gain columns (rejection-resampled)
/// and channel_groups filled in. Deterministic per seed.
MpcaInstance generate_grouped_instance(const GenSpec& spec);

/// Fully random gains matrix (no planted group structure).
MpcaInstance generate_general_instance(int users, int channels, uint64_t seed,
                                       double gain_lo = 0.01, double gain_hi = 100.0,
                                       double rate_lo = 0.1, double rate_hi = 4.0,
                                       RateModel model = RateModel::LogSnr);

}  // namespace mpca
