// Optimal single-user rate allocation over a fixed channel set.
//
// For the log-SNR model the optimum equalizes the power-function derivative
// 2^r/g across all channels carrying positive rate; the closed form is
//   r_i = R/k + log2(g_i) - (1/k) * sum_{j<=k} log2(g_j)
// over the k strongest channels, with k the largest active-set size keeping
// every rate strictly positive. For the linear model the whole rate goes on
// the single channel with the largest coefficient.
#pragma once

#include <vector>

#include "mpca/model.hpp"

namespace mpca {

struct SingleUserProblem {
  std::vector<double> gains;  // nonempty, all > 0
  double rate_target = 0.0;   // > 0
  RateModel rate_model = RateModel::LogSnr;
};

struct SingleUserSolution {
  std::vector<double> rates;  // aligned with problem.gains, zero entries exact
  double total_power = 0.0;
  int active_count = 0;  // channels with strictly positive rate
};

SingleUserSolution waterfill(const SingleUserProblem& problem);

/// Same optimum when the channel multiset is given as (gain, count) groups;
/// runs in time linear in the number of groups, not in the channel count.
double waterfill_grouped(const std::vector<double>& group_gains,
                         const std::vector<long long>& group_counts,
                         double rate_target,
                         RateModel rate_model = RateModel::LogSnr);

}  // namespace mpca
