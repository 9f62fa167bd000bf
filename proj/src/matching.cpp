#include "mpca/matching.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "mpca/io.hpp"
#include "mpca/waterfill.hpp"

namespace mpca {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
using Clock = std::chrono::steady_clock;

bool edge_allowed(const AssignmentProblem& p, int i, int j) {
  return p.allowed.empty() || p.allowed[i][j];
}

// Augmenting-path search for one left node over the tight-edge adjacency,
// honoring already-fixed left nodes. Standard Kuhn step.
bool kuhn_augment(int i, const std::vector<std::vector<int>>& tight,
                  const std::vector<char>& fixed_left, std::vector<int>& match_right,
                  std::vector<char>& visited) {
  for (int j : tight[i]) {
    if (visited[j]) continue;
    visited[j] = true;
    int other = match_right[j];
    if (other == -1 ||
        (!fixed_left[other] && kuhn_augment(other, tight, fixed_left, match_right, visited))) {
      match_right[j] = i;
      return true;
    }
  }
  return false;
}

}  // namespace

AssignmentResult solve_assignment(const AssignmentProblem& p) {
  const int n = static_cast<int>(p.cost.size());
  if (n == 0) throw MpcaError(ErrorCode::DimensionMismatch, "empty cost matrix");
  for (const auto& row : p.cost)
    if (static_cast<int>(row.size()) != n)
      throw MpcaError(ErrorCode::DimensionMismatch, "cost matrix must be square");
  if (!p.allowed.empty() && static_cast<int>(p.allowed.size()) != n)
    throw MpcaError(ErrorCode::DimensionMismatch, "allowed mask shape mismatch");

  // Shortest augmenting paths with potentials, 1-based with a virtual
  // column 0. Forbidden entries enter as +inf.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> way(n + 1, 0), match_col(n + 1, 0);  // match_col[j] = row matched to j
  for (int i = 1; i <= n; ++i) {
    match_col[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<char> used(n + 1, false);
    do {
      used[j0] = true;
      int i0 = match_col[j0], j1 = 0;
      double delta = kInf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        double c = edge_allowed(p, i0 - 1, j - 1) ? p.cost[i0 - 1][j - 1] : kInf;
        double cur = c - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      if (!(delta < kInf))
        throw MpcaError(ErrorCode::Infeasible, "no perfect matching avoids forbidden entries");
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match_col[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match_col[j0] != 0);
    do {
      int j1 = way[j0];
      match_col[j0] = match_col[j1];
      j0 = j1;
    } while (j0);
  }

  std::vector<int> match_right(n, -1);  // right -> left over tight edges
  for (int j = 1; j <= n; ++j)
    if (match_col[j]) match_right[j - 1] = match_col[j] - 1;

  // Every optimal matching lives inside the tight subgraph (complementary
  // slackness), and any perfect matching of tight edges is optimal. Pick the
  // lexicographically smallest one by fixing rows in order.
  std::vector<std::vector<int>> tight(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (!edge_allowed(p, i, j)) continue;
      double slack = p.cost[i][j] - u[i + 1] - v[j + 1];
      if (std::abs(slack) <= 1e-9 * std::max(1.0, std::abs(p.cost[i][j])))
        tight[i].push_back(j);
    }

  std::vector<char> fixed_left(n, false);
  std::vector<int> match_left(n, -1);
  for (int j = 0; j < n; ++j)
    if (match_right[j] >= 0) match_left[match_right[j]] = j;
  for (int i = 0; i < n; ++i) {
    for (int j : tight[i]) {
      if (match_left[i] == j) break;  // already the smallest viable column
      int displaced = match_right[j];
      if (displaced != -1 && fixed_left[displaced]) continue;
      // tentatively re-route: give j to i, re-match the displaced row
      int old_j = match_left[i];
      match_right[j] = i;
      match_left[i] = j;
      if (old_j >= 0) match_right[old_j] = -1;
      bool ok = true;
      if (displaced != -1) {
        match_left[displaced] = -1;
        std::vector<char> visited(n, false);
        visited[j] = true;
        ok = kuhn_augment(displaced, tight, fixed_left, match_right, visited);
        if (ok)
          for (int jj = 0; jj < n; ++jj)
            if (match_right[jj] >= 0) match_left[match_right[jj]] = jj;
      }
      if (ok) break;
      // roll back
      match_right[j] = displaced;
      match_left[displaced] = j;
      match_left[i] = old_j;
      if (old_j >= 0) match_right[old_j] = i;
    }
    fixed_left[i] = true;
  }

  AssignmentResult result;
  result.match = match_left;
  double total = 0.0;
  for (int i = 0; i < n; ++i) total += p.cost[i][match_left[i]];
  result.total_cost = total;
  return result;
}

SolveReport solve_linear_rate(const MpcaInstance& inst) {
  auto start = Clock::now();
  validate(inst);
  if (inst.rate_model != RateModel::Linear)
    throw MpcaError(ErrorCode::WrongModel, "linear-match requires the linear rate model");
  const int m_users = inst.num_users;
  const int n = inst.num_channels;

  AssignmentProblem ap;
  ap.cost.assign(n, std::vector<double>(n, 0.0));
  for (int m = 0; m < m_users; ++m)
    for (int ch = 0; ch < n; ++ch)
      ap.cost[m][ch] = inst.rate_targets[m] / inst.gains[m][ch];
  // rows m_users..n-1 are artificial users with uniform zero cost
  AssignmentResult res = solve_assignment(ap);

  Allocation alloc;
  alloc.channel_owner.assign(n, kUnassigned);
  alloc.rates.assign(n, 0.0);
  alloc.powers.assign(n, 0.0);
  double objective = 0.0;
  for (int m = 0; m < m_users; ++m) {
    int ch = res.match[m];
    alloc.channel_owner[ch] = m;
    alloc.rates[ch] = inst.rate_targets[m];
    alloc.powers[ch] = ap.cost[m][ch];
    objective += ap.cost[m][ch];
  }

  SolveReport rep;
  rep.objective = objective;
  rep.allocation = std::move(alloc);
  rep.algorithm = "linear-match";
  rep.wall_time_s = std::chrono::duration<double>(Clock::now() - start).count();
  rep.instance_digest = instance_digest(inst);
  return rep;
}

SolveReport solve_equal_blocks(const MpcaInstance& inst) {
  auto start = Clock::now();
  validate(inst);
  const int m_users = inst.num_users;
  const int n = inst.num_channels;
  if (n % m_users != 0)
    throw MpcaError(ErrorCode::NotDivisible, "block-match requires M to divide N");
  const int width = n / m_users;

  // cost(user, block): single-user optimum over the block's channels
  std::vector<std::vector<SingleUserSolution>> cell(
      m_users, std::vector<SingleUserSolution>(m_users));
  AssignmentProblem ap;
  ap.cost.assign(m_users, std::vector<double>(m_users, 0.0));
  for (int m = 0; m < m_users; ++m) {
    SingleUserProblem p;
    p.rate_model = inst.rate_model;
    p.rate_target = inst.rate_targets[m];
    for (int b = 0; b < m_users; ++b) {
      p.gains.assign(inst.gains[m].begin() + b * width,
                     inst.gains[m].begin() + (b + 1) * width);
      cell[m][b] = waterfill(p);
      ap.cost[m][b] = cell[m][b].total_power;
    }
  }
  AssignmentResult res = solve_assignment(ap);

  Allocation alloc;
  alloc.channel_owner.assign(n, kUnassigned);
  alloc.rates.assign(n, 0.0);
  alloc.powers.assign(n, 0.0);
  for (int m = 0; m < m_users; ++m) {
    int b = res.match[m];
    const SingleUserSolution& sol = cell[m][b];
    for (int i = 0; i < width; ++i) {
      int ch = b * width + i;
      alloc.channel_owner[ch] = m;
      alloc.rates[ch] = sol.rates[i];
      alloc.powers[ch] = power_for_rate(inst.rate_model, inst.gains[m][ch], sol.rates[i]);
    }
  }

  SolveReport rep;
  rep.objective = res.total_cost;
  rep.allocation = std::move(alloc);
  rep.algorithm = "block-match";
  rep.wall_time_s = std::chrono::duration<double>(Clock::now() - start).count();
  rep.instance_digest = instance_digest(inst);
  return rep;
}

}  // namespace mpca
