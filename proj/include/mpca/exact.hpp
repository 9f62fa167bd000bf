// Exponential-time exact solvers for small instances. These are the ground
// truth that every polynomial-time algorithm and both reduction modes are
// audited against, so there are two of them with different search structure.
#pragma once

#include "mpca/model.hpp"

namespace mpca {

/// Exact optimum via DP over channel subsets (3^N submask walk).
/// Guard: N <= 18. Leftover channels stay unassigned; zero-rate channels
/// stay attached to the user the DP gave them to.
SolveReport solve_subset_dp(const MpcaInstance& instance);

/// Exact optimum via exhaustive scan of all owner vectors
/// (owner in users + unassigned). Guard: (M+1)^N <= 2e7.
SolveReport solve_enumeration(const MpcaInstance& instance);

/// Exact optimum over allocations where user m receives exactly
/// block_sizes[m] consecutive channels, blocks pairwise disjoint, channels
/// may be skipped. DP over (position, served-user bitmask). Guard: M <= 20.
SolveReport solve_consecutive_exact(const MpcaInstance& instance,
                                    const std::vector<int>& block_sizes);

}  // namespace mpca
