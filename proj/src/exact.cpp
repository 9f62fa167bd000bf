#include "mpca/exact.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

#include "mpca/io.hpp"
#include "mpca/waterfill.hpp"

namespace mpca {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Waterfill of one user restricted to the channels in `mask`; returns power
// and, when `rates` is non-null, writes per-channel rates into it.
double user_subset_power(const MpcaInstance& inst, int user, uint32_t mask,
                         std::vector<double>* rates = nullptr) {
  SingleUserProblem p;
  p.rate_model = inst.rate_model;
  p.rate_target = inst.rate_targets[user];
  std::vector<int> channels;
  for (int ch = 0; ch < inst.num_channels; ++ch)
    if (mask & (1u << ch)) {
      channels.push_back(ch);
      p.gains.push_back(inst.gains[user][ch]);
    }
  SingleUserSolution sol = waterfill(p);
  if (rates)
    for (std::size_t i = 0; i < channels.size(); ++i) (*rates)[channels[i]] = sol.rates[i];
  return sol.total_power;
}

SolveReport finish_report(const MpcaInstance& inst, double objective, Allocation alloc,
                          std::string algorithm, Clock::time_point start) {
  SolveReport rep;
  rep.objective = objective;
  rep.allocation = std::move(alloc);
  rep.algorithm = std::move(algorithm);
  rep.wall_time_s = seconds_since(start);  // digest is metadata, not solve work
  rep.instance_digest = instance_digest(inst);
  return rep;
}

Allocation allocation_from_owners(const MpcaInstance& inst, const std::vector<int>& owners) {
  Allocation alloc;
  alloc.channel_owner = owners;
  alloc.rates.assign(inst.num_channels, 0.0);
  alloc.powers.assign(inst.num_channels, 0.0);
  for (int m = 0; m < inst.num_users; ++m) {
    std::vector<int> channels;
    SingleUserProblem p;
    p.rate_model = inst.rate_model;
    p.rate_target = inst.rate_targets[m];
    for (int ch = 0; ch < inst.num_channels; ++ch)
      if (owners[ch] == m) {
        channels.push_back(ch);
        p.gains.push_back(inst.gains[m][ch]);
      }
    if (channels.empty()) continue;
    SingleUserSolution sol = waterfill(p);
    for (std::size_t i = 0; i < channels.size(); ++i) alloc.rates[channels[i]] = sol.rates[i];
  }
  for (int ch = 0; ch < inst.num_channels; ++ch) {
    int owner = owners[ch];
    if (owner != kUnassigned)
      alloc.powers[ch] = power_for_rate(inst.rate_model, inst.gains[owner][ch], alloc.rates[ch]);
  }
  return alloc;
}

}  // namespace

SolveReport solve_subset_dp(const MpcaInstance& inst) {
  auto start = Clock::now();
  validate(inst);
  const int n = inst.num_channels;
  const int m_users = inst.num_users;
  if (n > 18)
    throw MpcaError(ErrorCode::InstanceTooLarge, "subset DP supports at most 18 channels");

  const uint32_t full = (n == 32) ? ~0u : ((1u << n) - 1u);
  const std::size_t num_sets = std::size_t(full) + 1;

  // dp[S] for the current user prefix; with zero users served every
  // leftover set costs nothing (those channels stay unassigned).
  std::vector<double> prev(num_sets, 0.0), cur(num_sets);
  std::vector<std::vector<uint32_t>> parent(m_users, std::vector<uint32_t>(num_sets, 0));
  std::vector<double> cost(num_sets);

  for (int m = 0; m < m_users; ++m) {
    cost[0] = kInf;
    for (uint32_t s = 1; s <= full; ++s) cost[s] = user_subset_power(inst, m, s);
    cur[0] = kInf;
    for (uint32_t s = 1; s <= full; ++s) {
      double best = kInf;
      uint32_t best_sub = 0;
      // standard descending submask walk; first-found minimum kept
      for (uint32_t sub = s; sub; sub = (sub - 1) & s) {
        double cand = cost[sub] + prev[s ^ sub];
        if (cand < best) {
          best = cand;
          best_sub = sub;
        }
      }
      cur[s] = best;
      parent[m][s] = best_sub;
    }
    std::swap(prev, cur);
  }

  std::vector<int> owners(n, kUnassigned);
  uint32_t s = full;
  for (int m = m_users - 1; m >= 0; --m) {
    uint32_t sub = parent[m][s];
    for (int ch = 0; ch < n; ++ch)
      if (sub & (1u << ch)) owners[ch] = m;
    s ^= sub;
  }
  return finish_report(inst, prev[full], allocation_from_owners(inst, owners), "subset-dp", start);
}

SolveReport solve_enumeration(const MpcaInstance& inst) {
  auto start = Clock::now();
  validate(inst);
  const int n = inst.num_channels;
  const int m_users = inst.num_users;
  double combos = std::pow(double(m_users + 1), double(n));
  if (combos > 2e7)
    throw MpcaError(ErrorCode::InstanceTooLarge, "(M+1)^N exceeds the enumeration guard");

  // owner digits: 0 = unassigned, 1..M = user index + 1; odometer order with
  // channel 0 least significant, first-found minimum kept.
  std::vector<int> digits(n, 0);
  std::vector<int> best_owners;
  double best = kInf;
  SingleUserProblem p;
  p.rate_model = inst.rate_model;
  for (;;) {
    double total = 0.0;
    bool feasible = true;
    for (int m = 0; m < m_users && feasible; ++m) {
      p.gains.clear();
      for (int ch = 0; ch < n; ++ch)
        if (digits[ch] == m + 1) p.gains.push_back(inst.gains[m][ch]);
      if (p.gains.empty()) {
        feasible = false;
        break;
      }
      p.rate_target = inst.rate_targets[m];
      total += waterfill(p).total_power;
      if (total >= best) break;  // monotone partial sums; safe prune
    }
    if (feasible && total < best) {
      best = total;
      best_owners = digits;
    }
    int pos = 0;
    while (pos < n && ++digits[pos] > m_users) digits[pos++] = 0;
    if (pos == n) break;
  }

  std::vector<int> owners(n, kUnassigned);
  for (int ch = 0; ch < n; ++ch)
    if (best_owners[ch] > 0) owners[ch] = best_owners[ch] - 1;
  return finish_report(inst, best, allocation_from_owners(inst, owners), "enum", start);
}

SolveReport solve_consecutive_exact(const MpcaInstance& inst,
                                    const std::vector<int>& block_sizes) {
  auto start = Clock::now();
  validate(inst);
  const int n = inst.num_channels;
  const int m_users = inst.num_users;
  if (static_cast<int>(block_sizes.size()) != m_users)
    throw MpcaError(ErrorCode::DimensionMismatch, "one block size per user required");
  long long total_blocks = 0;
  for (int b : block_sizes) {
    if (b <= 0) throw MpcaError(ErrorCode::DimensionMismatch, "block sizes must be positive");
    total_blocks += b;
  }
  if (total_blocks > n)
    throw MpcaError(ErrorCode::Infeasible, "block sizes sum exceeds the channel count");
  if (m_users > 20)
    throw MpcaError(ErrorCode::InstanceTooLarge, "consecutive DP supports at most 20 users");
  const std::size_t num_masks = std::size_t(1) << m_users;
  if (double(n + 1) * double(num_masks) > 2.7e8)
    throw MpcaError(ErrorCode::InstanceTooLarge, "consecutive DP state space too large");

  // block_cost[m][s]: user m on channels [s, s + b_m)
  std::vector<std::vector<double>> block_cost(m_users);
  for (int m = 0; m < m_users; ++m) {
    int b = block_sizes[m];
    block_cost[m].assign(std::max(0, n - b + 1), 0.0);
    SingleUserProblem p;
    p.rate_model = inst.rate_model;
    p.rate_target = inst.rate_targets[m];
    for (int s = 0; s + b <= n; ++s) {
      p.gains.assign(inst.gains[m].begin() + s, inst.gains[m].begin() + s + b);
      block_cost[m][s] = waterfill(p).total_power;
    }
  }

  // dp[pos * num_masks + mask]: best cost with channels < pos decided and
  // `mask` users already given their block. Action: -1 skip, else user id.
  std::vector<double> dp((n + 1) * num_masks, kInf);
  std::vector<int8_t> action((n + 1) * num_masks, -2);
  dp[0] = 0.0;
  const uint32_t full = static_cast<uint32_t>(num_masks - 1);
  for (int pos = 0; pos < n; ++pos) {
    for (uint32_t mask = 0; mask <= full; ++mask) {
      double here = dp[pos * num_masks + mask];
      if (here == kInf) continue;
      std::size_t skip = (pos + 1) * num_masks + mask;
      if (here < dp[skip]) {
        dp[skip] = here;
        action[skip] = -1;
      }
      for (int m = 0; m < m_users; ++m) {
        if (mask & (1u << m)) continue;
        int b = block_sizes[m];
        if (pos + b > n) continue;
        std::size_t next = (pos + b) * num_masks + (mask | (1u << m));
        double cand = here + block_cost[m][pos];
        if (cand < dp[next]) {
          dp[next] = cand;
          action[next] = static_cast<int8_t>(m);
        }
      }
    }
  }

  std::vector<int> owners(n, kUnassigned);
  int pos = n;
  uint32_t mask = full;
  while (pos > 0) {
    int8_t act = action[pos * num_masks + mask];
    if (act == -1) {
      --pos;
    } else {
      int m = act;
      int b = block_sizes[m];
      for (int ch = pos - b; ch < pos; ++ch) owners[ch] = m;
      pos -= b;
      mask &= ~(1u << m);
    }
  }
  return finish_report(inst, dp[n * num_masks + full], allocation_from_owners(inst, owners),
                       "consecutive", start);
}

}  // namespace mpca
