// Min-cost bipartite assignment and the two solvers built on it: linear-rate
// MPCA (each user served entirely by one matched channel) and the
// equal-consecutive-blocks restriction (users matched to the M fixed blocks
// of N/M channels).
#pragma once

#include <string>
#include <vector>

#include "mpca/model.hpp"

namespace mpca {

struct AssignmentProblem {
  // square cost matrix; entries with allowed[i][j] == false are forbidden
  std::vector<std::vector<double>> cost;
  std::vector<std::vector<char>> allowed;  // empty means all allowed
  std::vector<std::string> left_labels;    // optional
  std::vector<std::string> right_labels;   // optional
};

struct AssignmentResult {
  std::vector<int> match;  // left index -> right index
  double total_cost = 0.0;
};

/// Minimum-cost perfect matching via shortest augmenting paths with
/// potentials, O(n^3). Among optimal matchings, returns the
/// lexicographically smallest one by left index then right index.
/// Throws Infeasible when no perfect matching avoids forbidden entries.
AssignmentResult solve_assignment(const AssignmentProblem& problem);

/// MPCA with a linear rate model: each user puts its whole rate on one
/// channel, so the problem is an assignment with edge cost R_m / l_mn after
/// padding with zero-cost artificial users. Throws WrongModel otherwise.
SolveReport solve_linear_rate(const MpcaInstance& instance);

/// Restriction to exactly N/M consecutive channels per user: the partition
/// into blocks is forced, so only the user-to-block pairing is optimized.
/// Works for any rate model. Throws NotDivisible when M does not divide N.
SolveReport solve_equal_blocks(const MpcaInstance& instance);

}  // namespace mpca
