// Differential verification suites: each pits a solver against an
// independent oracle on seeded random cases. Shared by the CLI `verify`
// command and the test binaries.
#pragma once

#include <string>
#include <vector>

#include "mpca/reduction.hpp"

namespace mpca {

struct VerifyCase {
  std::string name;
  double gap = 0.0;  // absolute objective difference (or decision margin)
  bool pass = false;
};

/// subset-dp vs exhaustive enumeration; M <= 3, N <= 7, |gap| <= 1e-9.
std::vector<VerifyCase> verify_oracle_suite(int num_seeds);

/// kmpca DP vs subset-dp on grouped instances; M <= 4, N <= 12, K <= 3.
std::vector<VerifyCase> verify_kmpca_suite(int num_seeds);

/// assignment vs permutation brute force, equal-blocks vs consecutive DP,
/// linear-match vs injective brute force.
std::vector<VerifyCase> verify_matching_suite(int num_seeds);

/// decide_sat (both modes where applicable) vs truth-table SAT on every
/// valid single-clause formula plus the fixed fixtures.
std::vector<VerifyCase> verify_reduction_suite();

/// Truth-table SAT oracle, 2^v assignments.
bool brute_force_sat(const CnfFormula& cnf);

/// Permutation brute force for square assignment matrices (n <= 10).
double min_cost_by_permutations(const std::vector<std::vector<double>>& cost);

}  // namespace mpca
