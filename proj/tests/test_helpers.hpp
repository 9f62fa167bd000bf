// Shared test utilities: independent oracles and small builders. Everything
// here is deliberately dumb and closed-form-free so it can audit the
// library's fast paths.
#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "mpca/model.hpp"
#include "mpca/waterfill.hpp"

namespace mpca::testing {

// Power of a full rate vector under the instance-free single-user model.
inline double rate_vector_power(const std::vector<double>& gains,
                                const std::vector<double>& rates, RateModel model) {
  double total = 0.0;
  for (std::size_t i = 0; i < gains.size(); ++i)
    total += power_for_rate(model, gains[i], rates[i]);
  return total;
}

// Independent single-user oracle: cyclic pairwise rate transfers, each
// one-dimensional subproblem minimized by golden-section search. Converges
// to the global optimum of the separable convex objective without using the
// closed form.
inline double waterfill_search_oracle(const std::vector<double>& gains, double rate_target,
                                      RateModel model = RateModel::LogSnr) {
  const std::size_t n = gains.size();
  if (model == RateModel::Linear) {
    double best = std::numeric_limits<double>::infinity();
    for (double g : gains) best = std::min(best, rate_target / g);
    return best;
  }
  std::vector<double> rates(n, rate_target / double(n));
  auto pair_cost = [&](std::size_t i, std::size_t j, double ri) {
    double rj = rates[i] + rates[j] - ri;
    return power_for_rate(model, gains[i], ri) + power_for_rate(model, gains[j], rj);
  };
  const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int pass = 0; pass < 400; ++pass) {
    double improved = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        double lo = 0.0, hi = rates[i] + rates[j];
        if (hi <= 0.0) continue;
        double before = pair_cost(i, j, rates[i]);
        double x1 = hi - golden * (hi - lo), x2 = lo + golden * (hi - lo);
        double f1 = pair_cost(i, j, x1), f2 = pair_cost(i, j, x2);
        while (hi - lo > 1e-13 * std::max(1.0, hi)) {
          if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - golden * (hi - lo);
            f1 = pair_cost(i, j, x1);
          } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + golden * (hi - lo);
            f2 = pair_cost(i, j, x2);
          }
        }
        double ri = 0.5 * (lo + hi);
        double after = pair_cost(i, j, ri);
        if (after < before) {
          improved += before - after;
          double rj = rates[i] + rates[j] - ri;
          rates[i] = std::max(0.0, ri);
          rates[j] = std::max(0.0, rj);
        }
      }
    if (improved < 1e-14) break;
  }
  return rate_vector_power(gains, rates, model);
}

// Literal 1-D grid search for two channels: r1 on a uniform grid, r2 = R-r1.
inline double waterfill_grid_oracle_2ch(double g1, double g2, double rate_target,
                                        double step) {
  double best = std::numeric_limits<double>::infinity();
  long long cells = static_cast<long long>(rate_target / step);
  for (long long k = 0; k <= cells; ++k) {
    double r1 = std::min(rate_target, double(k) * step);
    double p = power_for_rate(RateModel::LogSnr, g1, r1) +
               power_for_rate(RateModel::LogSnr, g2, rate_target - r1);
    best = std::min(best, p);
  }
  return best;
}

// Expands (gain, count) groups into a flat channel list.
inline std::vector<double> expand_groups(const std::vector<double>& gains,
                                         const std::vector<long long>& counts) {
  std::vector<double> out;
  for (std::size_t j = 0; j < gains.size(); ++j)
    for (long long c = 0; c < counts[j]; ++c) out.push_back(gains[j]);
  return out;
}

// KKT audit of a log-SNR waterfill solution: 2^r/g equal on active channels,
// and at least as large as 1/g on inactive ones.
inline bool kkt_holds(const std::vector<double>& gains, const SingleUserSolution& sol,
                      double rel_tol = 1e-9) {
  double level = 0.0;
  bool have_level = false;
  for (std::size_t i = 0; i < gains.size(); ++i) {
    if (sol.rates[i] <= 0.0) continue;
    double v = std::exp2(sol.rates[i]) / gains[i];
    if (!have_level) {
      level = v;
      have_level = true;
    } else if (std::abs(v - level) > rel_tol * std::max(level, v)) {
      return false;
    }
  }
  if (!have_level) return false;
  for (std::size_t i = 0; i < gains.size(); ++i)
    if (sol.rates[i] == 0.0 && 1.0 / gains[i] < level * (1.0 - rel_tol)) return false;
  return true;
}

}  // namespace mpca::testing
