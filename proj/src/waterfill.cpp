#include "mpca/waterfill.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mpca {

namespace {

void check_problem(const SingleUserProblem& p) {
  if (p.gains.empty())
    throw MpcaError(ErrorCode::DimensionMismatch, "waterfill requires at least one channel");
  for (double g : p.gains)
    if (!(g > 0.0)) throw MpcaError(ErrorCode::NonPositiveGain, "waterfill gains must be positive");
  if (!(p.rate_target > 0.0))
    throw MpcaError(ErrorCode::NonPositiveRate, "waterfill rate target must be positive");
}

SingleUserSolution solve_linear(const SingleUserProblem& p) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < p.gains.size(); ++i)
    if (p.gains[i] > p.gains[best]) best = i;  // ties keep the lowest index
  SingleUserSolution sol;
  sol.rates.assign(p.gains.size(), 0.0);
  sol.rates[best] = p.rate_target;
  sol.total_power = p.rate_target / p.gains[best];
  sol.active_count = 1;
  return sol;
}

}  // namespace

SingleUserSolution waterfill(const SingleUserProblem& p) {
  check_problem(p);
  if (p.rate_model == RateModel::Linear) return solve_linear(p);

  const std::size_t n = p.gains.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (p.gains[a] != p.gains[b]) return p.gains[a] > p.gains[b];
    return a < b;
  });

  std::vector<double> log_gain(n);
  for (std::size_t i = 0; i < n; ++i) log_gain[i] = std::log2(p.gains[order[i]]);

  // Maximal active-set size keeping the smallest rate positive. The
  // feasibility condition is monotone in k, so a single scan suffices.
  const double R = p.rate_target;
  std::size_t active = 1;
  double prefix = log_gain[0];
  double active_prefix = prefix;
  for (std::size_t k = 2; k <= n; ++k) {
    prefix += log_gain[k - 1];
    double smallest_rate = R / double(k) + log_gain[k - 1] - prefix / double(k);
    if (smallest_rate > 0.0) {
      active = k;
      active_prefix = prefix;
    }
  }

  SingleUserSolution sol;
  sol.rates.assign(n, 0.0);
  sol.active_count = static_cast<int>(active);
  const double level = R / double(active) - active_prefix / double(active);
  double power = 0.0;
  for (std::size_t i = 0; i < active; ++i) {
    double r = level + log_gain[i];
    sol.rates[order[i]] = r;
    power += power_for_rate(RateModel::LogSnr, p.gains[order[i]], r);
  }
  sol.total_power = power;
  return sol;
}

double waterfill_grouped(const std::vector<double>& group_gains,
                         const std::vector<long long>& group_counts,
                         double rate_target, RateModel rate_model) {
  const std::size_t k = group_gains.size();
  if (k == 0 || group_counts.size() != k)
    throw MpcaError(ErrorCode::DimensionMismatch, "group gain/count vectors must match and be nonempty");
  for (std::size_t j = 0; j < k; ++j) {
    if (!(group_gains[j] > 0.0))
      throw MpcaError(ErrorCode::NonPositiveGain, "group gains must be positive");
    if (group_counts[j] <= 0)
      throw MpcaError(ErrorCode::DimensionMismatch, "group counts must be positive");
  }
  if (!(rate_target > 0.0))
    throw MpcaError(ErrorCode::NonPositiveRate, "rate target must be positive");

  if (rate_model == RateModel::Linear)
    return rate_target / *std::max_element(group_gains.begin(), group_gains.end());

  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (group_gains[a] != group_gains[b]) return group_gains[a] > group_gains[b];
    return a < b;
  });

  // The active set in the expanded channel multiset always ends at a group
  // boundary (equal gains share the feasibility condition), so only the K
  // prefix boundaries need checking.
  const double R = rate_target;
  double count_prefix = 0.0;
  double weighted_log = 0.0;
  std::size_t active_groups = 0;
  double active_count = 0.0, active_weighted = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    double g = group_gains[order[j]];
    double c = static_cast<double>(group_counts[order[j]]);
    count_prefix += c;
    weighted_log += c * std::log2(g);
    double smallest_rate = R / count_prefix + std::log2(g) - weighted_log / count_prefix;
    if (j == 0 || smallest_rate > 0.0) {
      active_groups = j + 1;
      active_count = count_prefix;
      active_weighted = weighted_log;
    }
  }

  const double level = R / active_count - active_weighted / active_count;
  double power = 0.0;
  for (std::size_t j = 0; j < active_groups; ++j) {
    double g = group_gains[order[j]];
    double r = level + std::log2(g);
    power += static_cast<double>(group_counts[order[j]]) *
             power_for_rate(RateModel::LogSnr, g, r);
  }
  return power;
}

}  // namespace mpca
