// Problem instance, allocation and report types for minimum-power channel
// allocation (MPCA): M users must be assigned disjoint channel sets and
// per-channel rates so that each user's rate target is met at minimum total
// transmit power.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mpca/errors.hpp"

namespace mpca {

enum class RateModel {
  LogSnr,  // rate(g, P) = log2(1 + g*P), power(g, r) = (2^r - 1)/g
  Linear,  // rate(l, P) = l*P,           power(l, r) = r/l
};

/// Power needed to carry rate `rate` on a channel with gain/coefficient `gain`.
double power_for_rate(RateModel model, double gain, double rate);

/// Rate carried with power `power` on a channel with gain/coefficient `gain`.
double rate_for_power(RateModel model, double gain, double power);

/// d(power)/d(rate) at the given rate; used by the KKT checks.
double power_derivative(RateModel model, double gain, double rate);

struct MpcaInstance {
  int num_users = 0;
  int num_channels = 0;
  std::vector<std::vector<double>> gains;  // num_users rows, num_channels cols
  std::vector<double> rate_targets;        // per user, bits per channel use
  RateModel rate_model = RateModel::LogSnr;
  // Optional group id per channel, carried through from the instance file.
  std::optional<std::vector<int>> channel_groups;

  bool operator==(const MpcaInstance&) const = default;
};

inline constexpr int kUnassigned = -1;

struct Allocation {
  std::vector<int> channel_owner;  // user index (0-based) or kUnassigned
  std::vector<double> rates;
  std::vector<double> powers;

  bool operator==(const Allocation&) const = default;
};

struct SolveReport {
  double objective = 0.0;
  Allocation allocation;
  std::string algorithm;
  double wall_time_s = 0.0;
  std::string instance_digest;
};

/// Checks every MpcaInstance invariant; throws MpcaError on violation.
/// Errors: DimensionMismatch, NonPositiveGain, NonPositiveRate, TooManyUsers.
void validate(const MpcaInstance& instance);

/// Audits an allocation against an instance and returns the total power.
/// This is the single source of truth every solver objective is checked
/// against. Throws RateTargetMissed / PowerRateMismatch / DimensionMismatch.
double evaluate(const MpcaInstance& instance, const Allocation& allocation);

/// Absolute feasibility tolerance on per-user rate sums.
inline constexpr double kRateTolerance = 1e-9;

}  // namespace mpca
