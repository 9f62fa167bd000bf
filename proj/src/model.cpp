#include "mpca/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>

namespace mpca {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonPositiveGain: return "NonPositiveGain";
    case ErrorCode::NonPositiveRate: return "NonPositiveRate";
    case ErrorCode::TooManyUsers: return "TooManyUsers";
    case ErrorCode::RateTargetMissed: return "RateTargetMissed";
    case ErrorCode::PowerRateMismatch: return "PowerRateMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InstanceTooLarge: return "InstanceTooLarge";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::WrongStructure: return "WrongStructure";
    case ErrorCode::WrongModel: return "WrongModel";
    case ErrorCode::NotDivisible: return "NotDivisible";
    case ErrorCode::MalformedCnf: return "MalformedCnf";
    case ErrorCode::NotThreeSat: return "NotThreeSat";
    case ErrorCode::OccurrenceBoundViolated: return "OccurrenceBoundViolated";
    case ErrorCode::BadFlags: return "BadFlags";
  }
  return "Unknown";
}

double power_for_rate(RateModel model, double gain, double rate) {
  if (model == RateModel::Linear) return rate / gain;
  // expm1 keeps full relative precision for rates near zero
  return std::expm1(rate * std::numbers::ln2_v<double>) / gain;
}

double rate_for_power(RateModel model, double gain, double power) {
  if (model == RateModel::Linear) return gain * power;
  return std::log1p(gain * power) / std::numbers::ln2_v<double>;
}

double power_derivative(RateModel model, double gain, double rate) {
  if (model == RateModel::Linear) return 1.0 / gain;
  return std::numbers::ln2_v<double> * std::exp2(rate) / gain;
}

void validate(const MpcaInstance& inst) {
  if (inst.num_users <= 0 || inst.num_channels <= 0)
    throw MpcaError(ErrorCode::DimensionMismatch, "num_users and num_channels must be positive");
  if (inst.num_users > inst.num_channels)
    throw MpcaError(ErrorCode::TooManyUsers,
                    "M=" + std::to_string(inst.num_users) + " exceeds N=" +
                        std::to_string(inst.num_channels));
  if (static_cast<int>(inst.gains.size()) != inst.num_users)
    throw MpcaError(ErrorCode::DimensionMismatch, "gains must have one row per user");
  for (const auto& row : inst.gains) {
    if (static_cast<int>(row.size()) != inst.num_channels)
      throw MpcaError(ErrorCode::DimensionMismatch, "gain row length must equal num_channels");
    for (double g : row) {
      if (!(g > 0.0) || !std::isfinite(g))
        throw MpcaError(ErrorCode::NonPositiveGain, "all gains must be strictly positive");
    }
  }
  if (static_cast<int>(inst.rate_targets.size()) != inst.num_users)
    throw MpcaError(ErrorCode::DimensionMismatch, "rate_targets must have one entry per user");
  for (double r : inst.rate_targets) {
    if (!(r > 0.0) || !std::isfinite(r))
      throw MpcaError(ErrorCode::NonPositiveRate, "all rate targets must be strictly positive");
  }
  if (inst.channel_groups) {
    if (static_cast<int>(inst.channel_groups->size()) != inst.num_channels)
      throw MpcaError(ErrorCode::DimensionMismatch, "channel_groups length must equal num_channels");
    for (int id : *inst.channel_groups) {
      if (id < 0)
        throw MpcaError(ErrorCode::DimensionMismatch, "channel group ids must be nonnegative");
    }
  }
}

namespace {

bool close_rel(double a, double b, double tol) {
  double scale = std::max({1.0, std::abs(a), std::abs(b)});
  return std::abs(a - b) <= tol * scale;
}

}  // namespace

double evaluate(const MpcaInstance& inst, const Allocation& alloc) {
  const std::size_t n = static_cast<std::size_t>(inst.num_channels);
  if (alloc.channel_owner.size() != n || alloc.rates.size() != n || alloc.powers.size() != n)
    throw MpcaError(ErrorCode::DimensionMismatch, "allocation vectors must have num_channels entries");

  std::vector<double> user_rate(inst.num_users, 0.0);
  double total = 0.0;
  for (std::size_t ch = 0; ch < n; ++ch) {
    int owner = alloc.channel_owner[ch];
    if (owner == kUnassigned) {
      if (alloc.rates[ch] != 0.0 || alloc.powers[ch] != 0.0)
        throw MpcaError(ErrorCode::PowerRateMismatch,
                        "unassigned channel " + std::to_string(ch) + " carries rate or power");
      continue;
    }
    if (owner < 0 || owner >= inst.num_users)
      throw MpcaError(ErrorCode::DimensionMismatch,
                      "channel " + std::to_string(ch) + " owned by out-of-range user");
    if (alloc.rates[ch] < 0.0)
      throw MpcaError(ErrorCode::PowerRateMismatch,
                      "channel " + std::to_string(ch) + " has negative rate");
    double expected =
        power_for_rate(inst.rate_model, inst.gains[owner][ch], alloc.rates[ch]);
    if (!close_rel(alloc.powers[ch], expected, 1e-9))
      throw MpcaError(ErrorCode::PowerRateMismatch,
                      "channel " + std::to_string(ch) + " power does not match its rate");
    user_rate[owner] += alloc.rates[ch];
    total += alloc.powers[ch];
  }
  for (int m = 0; m < inst.num_users; ++m) {
    if (user_rate[m] < inst.rate_targets[m] - kRateTolerance)
      throw MpcaError(ErrorCode::RateTargetMissed,
                      "user " + std::to_string(m) + " rate sum " + std::to_string(user_rate[m]) +
                          " misses target " + std::to_string(inst.rate_targets[m]));
  }
  return total;
}

}  // namespace mpca
