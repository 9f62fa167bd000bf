#include "mpca/kmpca.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "mpca/io.hpp"
#include "mpca/waterfill.hpp"

namespace mpca {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
using Clock = std::chrono::steady_clock;

}  // namespace

GroupedInstance make_grouped(const MpcaInstance& inst, const GroupStructure& groups) {
  validate(inst);
  if (static_cast<int>(groups.group_id.size()) != inst.num_channels || groups.k <= 0)
    throw MpcaError(ErrorCode::WrongStructure, "group structure does not match the instance");
  GroupedInstance g;
  g.base = inst;
  g.groups = groups;
  g.user_group_gains.assign(inst.num_users, std::vector<double>(groups.k, -1.0));
  for (int ch = 0; ch < inst.num_channels; ++ch) {
    int id = groups.group_id[ch];
    if (id < 0 || id >= groups.k)
      throw MpcaError(ErrorCode::WrongStructure, "group id out of range");
    for (int m = 0; m < inst.num_users; ++m) {
      double& slot = g.user_group_gains[m][id];
      if (slot < 0.0) {
        slot = inst.gains[m][ch];
      } else if (slot != inst.gains[m][ch]) {
        throw MpcaError(ErrorCode::WrongStructure,
                        "gains are not uniform within group " + std::to_string(id));
      }
    }
  }
  return g;
}

DpTable::DpTable(int num_users, std::vector<int> group_sizes)
    : users_(num_users), sizes_(std::move(group_sizes)) {
  strides_.resize(sizes_.size());
  cells_ = 1;
  for (std::size_t j = 0; j < sizes_.size(); ++j) {
    strides_[j] = cells_;
    cells_ *= static_cast<std::size_t>(sizes_[j] + 1);
  }
  values.assign(static_cast<std::size_t>(users_) * cells_, kInf);
  back.assign(values.size(), -1);
}

std::size_t DpTable::encode(const std::vector<int>& counts) const {
  std::size_t idx = 0;
  for (std::size_t j = 0; j < sizes_.size(); ++j)
    idx += static_cast<std::size_t>(counts[j]) * strides_[j];
  return idx;
}

double DpTable::value(int user, const std::vector<int>& counts) const {
  return values[static_cast<std::size_t>(user - 1) * cells_ + encode(counts)];
}

DpTable one_mpca_table(const GroupedInstance& g) {
  if (g.groups.k != 1)
    throw MpcaError(ErrorCode::WrongStructure, "instance has more than one channel group");
  const int m_users = g.base.num_users;
  const int n = g.base.num_channels;
  const int max_take = n - m_users + 1;  // leaves one channel per later user
  DpTable table(m_users, {n});

  // p[m][k]: power of user m on k uniform-gain channels
  std::vector<std::vector<double>> p(m_users, std::vector<double>(max_take + 1, kInf));
  for (int m = 0; m < m_users; ++m) {
    double gain = g.user_group_gains[m][0];
    double target = g.base.rate_targets[m];
    if (g.base.rate_model == RateModel::Linear) {
      for (int k = 1; k <= max_take; ++k) p[m][k] = target / gain;
    } else {
      for (int k = 1; k <= max_take; ++k)
        p[m][k] = double(k) * (std::exp2(target / double(k)) - 1.0) / gain;
    }
  }

  const std::size_t row = static_cast<std::size_t>(n + 1);
  for (int h = 1; h <= max_take; ++h) {
    table.values[static_cast<std::size_t>(h)] = p[0][h];
    table.back[static_cast<std::size_t>(h)] = h;
  }
  for (int m = 2; m <= m_users; ++m) {
    const std::size_t cur = static_cast<std::size_t>(m - 1) * row;
    const std::size_t prev = cur - row;
    for (int h = m; h <= n - m_users + m; ++h) {
      double best = kInf;
      int best_k = -1;
      for (int k = 1; k <= h - m + 1; ++k) {
        double cand = p[m - 1][k] + table.values[prev + std::size_t(h - k)];
        if (cand < best) {
          best = cand;
          best_k = k;
        }
      }
      table.values[cur + std::size_t(h)] = best;
      table.back[cur + std::size_t(h)] = best_k;
    }
  }
  return table;
}

namespace {

// Channels listed per group in ascending index order.
std::vector<std::vector<int>> group_channel_lists(const GroupedInstance& g) {
  std::vector<std::vector<int>> lists(g.groups.k);
  for (int ch = 0; ch < g.base.num_channels; ++ch)
    lists[g.groups.group_id[ch]].push_back(ch);
  return lists;
}

// Builds the allocation from per-user per-group channel counts; users take
// ascending channel indices within each group, in user order.
Allocation allocation_from_counts(const GroupedInstance& g,
                                  const std::vector<std::vector<int>>& take) {
  auto lists = group_channel_lists(g);
  std::vector<std::size_t> next(g.groups.k, 0);
  Allocation alloc;
  alloc.channel_owner.assign(g.base.num_channels, kUnassigned);
  alloc.rates.assign(g.base.num_channels, 0.0);
  alloc.powers.assign(g.base.num_channels, 0.0);
  for (int m = 0; m < g.base.num_users; ++m) {
    SingleUserProblem p;
    p.rate_model = g.base.rate_model;
    p.rate_target = g.base.rate_targets[m];
    std::vector<int> channels;
    for (int j = 0; j < g.groups.k; ++j) {
      for (int c = 0; c < take[m][j]; ++c) {
        int ch = lists[j][next[j]++];
        channels.push_back(ch);
        p.gains.push_back(g.base.gains[m][ch]);
      }
    }
    if (channels.empty()) continue;
    SingleUserSolution sol = waterfill(p);
    for (std::size_t i = 0; i < channels.size(); ++i) {
      alloc.channel_owner[channels[i]] = m;
      alloc.rates[channels[i]] = sol.rates[i];
      alloc.powers[channels[i]] =
          power_for_rate(g.base.rate_model, p.gains[i], sol.rates[i]);
    }
  }
  return alloc;
}

SolveReport report_from_table(const GroupedInstance& g, const DpTable& table,
                              std::string algorithm, Clock::time_point start) {
  const int m_users = g.base.num_users;
  const int k = g.groups.k;
  const auto& sizes = table.group_sizes();

  std::size_t cells = 1;
  for (int j = 0; j < k; ++j) cells *= static_cast<std::size_t>(sizes[j] + 1);

  // Walk the backpointers from c_M(N_1..N_K) down to user 1.
  std::vector<int> counts(sizes.begin(), sizes.end());
  std::vector<std::vector<int>> take(m_users, std::vector<int>(k, 0));
  double objective = table.value(m_users, counts);
  for (int m = m_users; m >= 1; --m) {
    std::size_t cell = table.encode(counts);
    int32_t enc = table.back[static_cast<std::size_t>(m - 1) * cells + cell];
    if (enc < 0)
      throw MpcaError(ErrorCode::Infeasible, "dp table has no feasible completion");
    std::size_t rest = static_cast<std::size_t>(enc);
    for (int j = 0; j < k; ++j) {
      int dim = sizes[j] + 1;
      take[m - 1][j] = static_cast<int>(rest % dim);
      rest /= dim;
      counts[j] -= take[m - 1][j];
    }
  }

  SolveReport rep;
  rep.objective = objective;
  rep.allocation = allocation_from_counts(g, take);
  rep.algorithm = std::move(algorithm);
  rep.wall_time_s = std::chrono::duration<double>(Clock::now() - start).count();
  rep.instance_digest = instance_digest(g.base);
  return rep;
}

}  // namespace

DpTable kmpca_table(const GroupedInstance& g) {
  const int m_users = g.base.num_users;
  const int n = g.base.num_channels;
  const int k = g.groups.k;
  if (k > 4)
    throw MpcaError(ErrorCode::InstanceTooLarge, "kmpca supports at most 4 channel groups");
  if (std::pow(double(n), 2.0 * k) * m_users > 1e9)
    throw MpcaError(ErrorCode::InstanceTooLarge, "kmpca work bound M*N^(2K) exceeds 1e9");

  const auto& sizes = g.groups.group_sizes;
  DpTable table(m_users, sizes);
  std::size_t cells = 1;
  for (int j = 0; j < k; ++j) cells *= static_cast<std::size_t>(sizes[j] + 1);

  // Power of user m for every per-group channel-count vector; the all-zero
  // vector stays infinite by convention.
  std::vector<std::vector<double>> pcost(m_users, std::vector<double>(cells, kInf));
  {
    std::vector<int> kvec(k, 0);
    std::vector<double> gains;
    std::vector<long long> counts;
    for (std::size_t cell = 1; cell < cells; ++cell) {
      int j = 0;
      while (++kvec[j] > sizes[j]) kvec[j++] = 0;
      for (int m = 0; m < m_users; ++m) {
        gains.clear();
        counts.clear();
        for (int q = 0; q < k; ++q)
          if (kvec[q] > 0) {
            gains.push_back(g.user_group_gains[m][q]);
            counts.push_back(kvec[q]);
          }
        pcost[m][cell] = waterfill_grouped(gains, counts, g.base.rate_targets[m],
                                           g.base.rate_model);
      }
    }
  }

  const int cap = n - m_users + 1;  // per-group bound on one user's take
  std::vector<int> hvec(k, 0), kvec(k);
  for (std::size_t cell = 0; cell < cells; ++cell) {
    if (cell > 0) {
      int j = 0;
      while (++hvec[j] > sizes[j]) hvec[j++] = 0;
    }
    int h_total = std::accumulate(hvec.begin(), hvec.end(), 0);
    for (int m = 1; m <= m_users; ++m) {
      if (h_total < m || h_total > n - m_users + m) continue;  // invalid region
      if (m == 1) {
        // user 1 consumes the whole count vector; h_total <= cap here, so no
        // per-group bound can cut it off
        table.values[cell] = pcost[0][cell];
        table.back[cell] = static_cast<int32_t>(cell);
        continue;
      }
      double best = kInf;
      int32_t best_enc = -1;
      const double* prev_row = table.values.data() + static_cast<std::size_t>(m - 2) * cells;
      // odometer over k_j in 0..min(h_j, cap); ascending encoded order,
      // all-zero vector skipped, first-found minimum kept
      std::fill(kvec.begin(), kvec.end(), 0);
      std::size_t kenc = 0;
      const std::vector<double>& pm = pcost[m - 1];
      for (;;) {
        int j = 0;
        std::size_t stride = 1;
        while (j < k) {
          if (kvec[j] < std::min(hvec[j], cap)) {
            ++kvec[j];
            kenc += stride;
            break;
          }
          kenc -= static_cast<std::size_t>(kvec[j]) * stride;
          kvec[j] = 0;
          stride *= static_cast<std::size_t>(sizes[j] + 1);
          ++j;
        }
        if (j == k) break;
        int k_total = std::accumulate(kvec.begin(), kvec.end(), 0);
        if (h_total - k_total < m - 1) continue;  // strands a later user
        double cand = pm[kenc] + prev_row[cell - kenc];
        if (cand < best) {
          best = cand;
          best_enc = static_cast<int32_t>(kenc);
        }
      }
      table.values[static_cast<std::size_t>(m - 1) * cells + cell] = best;
      table.back[static_cast<std::size_t>(m - 1) * cells + cell] = best_enc;
    }
  }
  return table;
}

SolveReport solve_1mpca(const GroupedInstance& g) {
  auto start = Clock::now();
  DpTable table = one_mpca_table(g);
  return report_from_table(g, table, "1mpca", start);
}

SolveReport solve_kmpca(const GroupedInstance& g) {
  auto start = Clock::now();
  DpTable table = kmpca_table(g);
  return report_from_table(g, table, "kmpca", start);
}

}  // namespace mpca
