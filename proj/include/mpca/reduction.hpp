// 3-SAT to MPCA instance generators and the threshold decision logic.
//
// A formula with v variables and w clauses becomes an instance with 2v
// literal users and w clause users. Per variable: one super-channel shared
// by both polarities and three identical literal channels per polarity; at
// optimum a literal user takes the super-channel or all three of its literal
// channels, never a mix, which encodes the truth assignment. Each clause
// user reaches the channels of its three literal occurrences plus a private
// auxiliary channel; the clause users' optimal power stays at or below w
// exactly when the formula is satisfiable. The consecutive variant appends
// two dummy channels per variable so every optimal block is contiguous with
// known size.
#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "mpca/model.hpp"

namespace mpca {

struct Literal {
  int var = 0;  // 0-based variable index
  bool negated = false;

  bool operator==(const Literal&) const = default;
};

struct CnfFormula {
  int num_vars = 0;
  std::vector<std::array<Literal, 3>> clauses;
};

/// Invariants: 1 <= occurrences of each polarity of each variable <= 3.
/// Throws MalformedCnf.
void validate_cnf(const CnfFormula& cnf);

enum class ChannelRole { Super, LiteralCopy, Auxiliary, Dummy };
enum class UserRole { Literal, Clause };

struct ChannelInfo {
  ChannelRole role;
  int var = -1;          // Super, LiteralCopy, Dummy
  bool negated = false;  // LiteralCopy
  int copy = -1;         // LiteralCopy: 0..2
  int clause = -1;       // Auxiliary
};

struct UserInfo {
  UserRole role;
  int var = -1;
  bool negated = false;  // literal users
  int clause = -1;       // clause users
};

struct ReductionLayout {
  std::vector<ChannelInfo> channels;
  std::vector<UserInfo> users;
  double g_super = 0.0, g_clause = 0.0, g_aux = 0.0, g_literal = 0.0, g_eps = 0.0;
  // channel of each clause's literal occurrence, by (clause, slot)
  std::vector<std::array<int, 3>> occurrence_channel;

  int super_channel(int var) const;
  int literal_channel(int var, bool negated, int copy) const;
  int aux_channel(int clause) const;
  int literal_user(int var, bool negated) const;
  int clause_user(int clause) const;

  /// True when the channel's gain for this user exceeds g_eps.
  bool is_valid_channel(int user, int channel) const;
};

struct ReductionResult {
  MpcaInstance instance;
  ReductionLayout layout;
  std::vector<int> block_sizes;  // consecutive variant only; empty otherwise
};

/// Gadget without channel-order restrictions: M = 2v+w, N = 7v+w.
ReductionResult build_appendix_a(const CnfFormula& cnf);

/// Consecutive-blocks variant: N = 9v+w with 2v dummy channels, channel
/// order [super,dummy,dummy]*v ++ literal chunks ++ auxiliaries, and block
/// sizes 3 per literal user, 1 per clause user.
ReductionResult build_appendix_b(const CnfFormula& cnf);

/// Decision threshold: v + 78*v*(2^(1/3)-1)*(0.9w+0.1) + w.
double sat_threshold(int num_vars, int num_clauses);

enum class ReductionMode { AppendixA, AppendixB };

/// Exact-solves the gadget instance and compares against the threshold.
/// Margin 1e-6 sits far below the proven >0.09 unsat separation.
bool decide_sat(const CnfFormula& cnf, ReductionMode mode);

/// Detaches every zero-rate channel from its owner; objective unchanged.
Allocation canonicalize_optimum(const Allocation& allocation);

/// Best solution with every literal user on its super-channel XOR its three
/// literal channels; clause users then solved exactly over the remaining
/// valid channels. Enumerates all 2^v assignments.
struct StructuredOptimum {
  double objective = 0.0;
  double literal_user_power = 0.0;
  Allocation allocation;
  uint32_t assignment_bits = 0;  // bit q set = positive literal user of var q on super
};
StructuredOptimum structured_optimum(const MpcaInstance& instance,
                                     const ReductionLayout& layout);

/// Structural checks evaluated on a canonicalized exact optimum.
struct GadgetLemmaReport {
  bool no_invalid_channels = false;     // no owned channel is invalid for its owner
  bool literal_users_structured = false;  // super XOR all three literal channels
  bool constant_chain = false;          // f1 > f2 > f3 and f2-f3 > 0.04/g_l > 1/g_a
  bool literal_power_matches = false;   // literal-user total == closed form (1e-9)
  double literal_user_power = 0.0;
  double expected_literal_power = 0.0;
  double f1 = 0.0, f2 = 0.0, f3 = 0.0;

  bool all_pass() const {
    return no_invalid_channels && literal_users_structured && constant_chain &&
           literal_power_matches;
  }
};
GadgetLemmaReport check_gadget_lemmas(const MpcaInstance& instance,
                                      const ReductionLayout& layout,
                                      const Allocation& canonical_optimum);

/// DIMACS CNF parser restricted to 3-literal clauses within the occurrence
/// bounds. Throws ParseError / NotThreeSat / OccurrenceBoundViolated.
CnfFormula parse_dimacs(std::string_view text);

}  // namespace mpca
