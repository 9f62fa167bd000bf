#include "mpca/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

#include "mpca/exact.hpp"
#include "mpca/waterfill.hpp"

namespace mpca {

void validate_cnf(const CnfFormula& cnf) {
  if (cnf.num_vars <= 0)
    throw MpcaError(ErrorCode::MalformedCnf, "formula must have at least one variable");
  if (cnf.clauses.empty())
    throw MpcaError(ErrorCode::MalformedCnf, "formula must have at least one clause");
  // occurrence count per literal: [var][polarity]
  std::vector<std::array<int, 2>> occ(cnf.num_vars, {0, 0});
  for (const auto& clause : cnf.clauses)
    for (const Literal& lit : clause) {
      if (lit.var < 0 || lit.var >= cnf.num_vars)
        throw MpcaError(ErrorCode::MalformedCnf, "literal references unknown variable");
      ++occ[lit.var][lit.negated ? 1 : 0];
    }
  for (int q = 0; q < cnf.num_vars; ++q)
    for (int s = 0; s < 2; ++s) {
      if (occ[q][s] < 1)
        throw MpcaError(ErrorCode::MalformedCnf,
                        "literal " + std::to_string(q + 1) + (s ? " negated" : "") +
                            " never occurs in a clause");
      if (occ[q][s] > 3)
        throw MpcaError(ErrorCode::MalformedCnf,
                        "literal " + std::to_string(q + 1) + (s ? " negated" : "") +
                            " occurs more than three times");
    }
}

namespace {

struct GainConstants {
  double g_super, g_clause, g_aux, g_literal, g_eps;
};

GainConstants gain_constants(int w) {
  GainConstants c;
  c.g_super = 1.0;
  c.g_clause = 1.0;
  c.g_aux = 1.0 / (0.9 * w + 0.1);
  c.g_literal = c.g_aux / 26.0;
  c.g_eps = 1.0 / (53.0 * w);
  return c;
}

ReductionResult build_gadget(const CnfFormula& cnf, bool consecutive) {
  validate_cnf(cnf);
  const int v = cnf.num_vars;
  const int w = static_cast<int>(cnf.clauses.size());
  const int m_users = 2 * v + w;
  const int n = consecutive ? 9 * v + w : 7 * v + w;
  GainConstants gc = gain_constants(w);

  ReductionResult out;
  ReductionLayout& layout = out.layout;
  layout.g_super = gc.g_super;
  layout.g_clause = gc.g_clause;
  layout.g_aux = gc.g_aux;
  layout.g_literal = gc.g_literal;
  layout.g_eps = gc.g_eps;

  layout.channels.resize(n);
  if (consecutive) {
    // block 1: v chunks of [super, dummy, dummy]
    for (int q = 0; q < v; ++q) {
      layout.channels[3 * q] = {ChannelRole::Super, q};
      layout.channels[3 * q + 1] = {ChannelRole::Dummy, q};
      layout.channels[3 * q + 2] = {ChannelRole::Dummy, q};
    }
    // block 2: per variable the six literal channels z z' z'' ^z ^z' ^z''
    for (int q = 0; q < v; ++q)
      for (int s = 0; s < 2; ++s)
        for (int c = 0; c < 3; ++c)
          layout.channels[3 * v + 6 * q + 3 * s + c] =
              {ChannelRole::LiteralCopy, q, s == 1, c};
    // block 3: auxiliaries
    for (int c = 0; c < w; ++c)
      layout.channels[9 * v + c] = {ChannelRole::Auxiliary, -1, false, -1, c};
  } else {
    for (int q = 0; q < v; ++q) layout.channels[q] = {ChannelRole::Super, q};
    for (int q = 0; q < v; ++q)
      for (int s = 0; s < 2; ++s)
        for (int c = 0; c < 3; ++c)
          layout.channels[v + 6 * q + 3 * s + c] = {ChannelRole::LiteralCopy, q, s == 1, c};
    for (int c = 0; c < w; ++c)
      layout.channels[7 * v + c] = {ChannelRole::Auxiliary, -1, false, -1, c};
  }

  layout.users.resize(m_users);
  for (int q = 0; q < v; ++q) {
    layout.users[2 * q] = {UserRole::Literal, q, false};
    layout.users[2 * q + 1] = {UserRole::Literal, q, true};
  }
  for (int c = 0; c < w; ++c) layout.users[2 * v + c] = {UserRole::Clause, -1, false, c};

  MpcaInstance& inst = out.instance;
  inst.num_users = m_users;
  inst.num_channels = n;
  inst.rate_model = RateModel::LogSnr;
  inst.rate_targets.assign(m_users, 1.0);
  inst.gains.assign(m_users, std::vector<double>(n, gc.g_eps));

  for (int q = 0; q < v; ++q)
    for (int s = 0; s < 2; ++s) {
      int user = layout.literal_user(q, s == 1);
      inst.gains[user][layout.super_channel(q)] = gc.g_super;
      for (int c = 0; c < 3; ++c)
        inst.gains[user][layout.literal_channel(q, s == 1, c)] = gc.g_literal;
    }

  // occurrences of a literal consume copies 0..t-1 in clause order
  std::vector<std::array<int, 2>> next_copy(v, {0, 0});
  layout.occurrence_channel.assign(w, {-1, -1, -1});
  for (int c = 0; c < w; ++c) {
    int user = layout.clause_user(c);
    for (int slot = 0; slot < 3; ++slot) {
      const Literal& lit = cnf.clauses[c][slot];
      int copy = next_copy[lit.var][lit.negated ? 1 : 0]++;
      int ch = layout.literal_channel(lit.var, lit.negated, copy);
      layout.occurrence_channel[c][slot] = ch;
      inst.gains[user][ch] = gc.g_clause;
    }
    inst.gains[user][layout.aux_channel(c)] = gc.g_aux;
  }

  if (consecutive) {
    out.block_sizes.assign(m_users, 1);
    for (int u = 0; u < 2 * v; ++u) out.block_sizes[u] = 3;
  }
  return out;
}

}  // namespace

int ReductionLayout::super_channel(int var) const {
  for (int ch = 0; ch < static_cast<int>(channels.size()); ++ch)
    if (channels[ch].role == ChannelRole::Super && channels[ch].var == var) return ch;
  throw MpcaError(ErrorCode::DimensionMismatch, "no super channel for variable");
}

int ReductionLayout::literal_channel(int var, bool negated, int copy) const {
  for (int ch = 0; ch < static_cast<int>(channels.size()); ++ch) {
    const ChannelInfo& info = channels[ch];
    if (info.role == ChannelRole::LiteralCopy && info.var == var &&
        info.negated == negated && info.copy == copy)
      return ch;
  }
  throw MpcaError(ErrorCode::DimensionMismatch, "no such literal channel");
}

int ReductionLayout::aux_channel(int clause) const {
  for (int ch = 0; ch < static_cast<int>(channels.size()); ++ch)
    if (channels[ch].role == ChannelRole::Auxiliary && channels[ch].clause == clause)
      return ch;
  throw MpcaError(ErrorCode::DimensionMismatch, "no auxiliary channel for clause");
}

int ReductionLayout::literal_user(int var, bool negated) const {
  return 2 * var + (negated ? 1 : 0);
}

int ReductionLayout::clause_user(int clause) const {
  int v = 0;
  for (const UserInfo& u : users)
    if (u.role == UserRole::Literal) ++v;
  return v + clause;
}

bool ReductionLayout::is_valid_channel(int user, int channel) const {
  const UserInfo& u = users[user];
  const ChannelInfo& ch = channels[channel];
  if (u.role == UserRole::Literal) {
    if (ch.role == ChannelRole::Super) return ch.var == u.var;
    if (ch.role == ChannelRole::LiteralCopy)
      return ch.var == u.var && ch.negated == u.negated;
    return false;
  }
  if (ch.role == ChannelRole::Auxiliary) return ch.clause == u.clause;
  if (ch.role == ChannelRole::LiteralCopy) {
    const auto& occ = occurrence_channel[u.clause];
    return std::find(occ.begin(), occ.end(), channel) != occ.end();
  }
  return false;
}

ReductionResult build_appendix_a(const CnfFormula& cnf) { return build_gadget(cnf, false); }

ReductionResult build_appendix_b(const CnfFormula& cnf) { return build_gadget(cnf, true); }

double sat_threshold(int num_vars, int num_clauses) {
  double v = num_vars, w = num_clauses;
  return v + 78.0 * v * (std::exp2(1.0 / 3.0) - 1.0) * (0.9 * w + 0.1) + w;
}

bool decide_sat(const CnfFormula& cnf, ReductionMode mode) {
  ReductionResult r =
      mode == ReductionMode::AppendixA ? build_appendix_a(cnf) : build_appendix_b(cnf);
  SolveReport rep = mode == ReductionMode::AppendixA
                        ? solve_subset_dp(r.instance)
                        : solve_consecutive_exact(r.instance, r.block_sizes);
  double threshold =
      sat_threshold(cnf.num_vars, static_cast<int>(cnf.clauses.size()));
  return rep.objective <= threshold + 1e-6;
}

Allocation canonicalize_optimum(const Allocation& alloc) {
  Allocation out = alloc;
  for (std::size_t ch = 0; ch < out.channel_owner.size(); ++ch)
    if (out.channel_owner[ch] != kUnassigned && out.rates[ch] == 0.0) {
      out.channel_owner[ch] = kUnassigned;
      out.powers[ch] = 0.0;
    }
  return out;
}

StructuredOptimum structured_optimum(const MpcaInstance& inst,
                                     const ReductionLayout& layout) {
  int v = 0, w = 0;
  for (const UserInfo& u : layout.users)
    (u.role == UserRole::Literal ? v : w) += 1;
  v /= 2;
  const int n = inst.num_channels;

  StructuredOptimum best;
  best.objective = std::numeric_limits<double>::infinity();

  for (uint32_t bits = 0; bits < (1u << v); ++bits) {
    Allocation alloc;
    alloc.channel_owner.assign(n, kUnassigned);
    alloc.rates.assign(n, 0.0);
    alloc.powers.assign(n, 0.0);
    double literal_power = 0.0;

    // literal users: bit q set = positive user on the super-channel
    for (int q = 0; q < v; ++q) {
      bool positive_on_super = (bits >> q) & 1u;
      for (int s = 0; s < 2; ++s) {
        bool negated = s == 1;
        int user = layout.literal_user(q, negated);
        bool on_super = negated ? !positive_on_super : positive_on_super;
        if (on_super) {
          int ch = layout.super_channel(q);
          alloc.channel_owner[ch] = user;
          alloc.rates[ch] = inst.rate_targets[user];
          alloc.powers[ch] =
              power_for_rate(inst.rate_model, inst.gains[user][ch], alloc.rates[ch]);
          literal_power += alloc.powers[ch];
        } else {
          SingleUserProblem p;
          p.rate_model = inst.rate_model;
          p.rate_target = inst.rate_targets[user];
          std::array<int, 3> chs{};
          for (int c = 0; c < 3; ++c) {
            chs[c] = layout.literal_channel(q, negated, c);
            p.gains.push_back(inst.gains[user][chs[c]]);
          }
          SingleUserSolution sol = waterfill(p);
          for (int c = 0; c < 3; ++c) {
            alloc.channel_owner[chs[c]] = user;
            alloc.rates[chs[c]] = sol.rates[c];
            alloc.powers[chs[c]] =
                power_for_rate(inst.rate_model, p.gains[c], sol.rates[c]);
          }
          literal_power += sol.total_power;
        }
      }
    }

    // clause users: exact subset solve over the remaining valid channels
    std::vector<int> sub_channels;
    for (int ch = 0; ch < n; ++ch) {
      if (alloc.channel_owner[ch] != kUnassigned) continue;
      bool valid_for_some_clause = false;
      for (int c = 0; c < w && !valid_for_some_clause; ++c)
        valid_for_some_clause = layout.is_valid_channel(layout.clause_user(c), ch);
      if (valid_for_some_clause) sub_channels.push_back(ch);
    }
    MpcaInstance sub;
    sub.num_users = w;
    sub.num_channels = static_cast<int>(sub_channels.size());
    sub.rate_model = inst.rate_model;
    for (int c = 0; c < w; ++c) {
      int user = layout.clause_user(c);
      sub.rate_targets.push_back(inst.rate_targets[user]);
      std::vector<double> row;
      for (int ch : sub_channels) row.push_back(inst.gains[user][ch]);
      sub.gains.push_back(std::move(row));
    }
    SolveReport sub_rep = solve_subset_dp(sub);
    for (int i = 0; i < sub.num_channels; ++i) {
      int owner = sub_rep.allocation.channel_owner[i];
      if (owner == kUnassigned) continue;
      int ch = sub_channels[i];
      alloc.channel_owner[ch] = layout.clause_user(owner);
      alloc.rates[ch] = sub_rep.allocation.rates[i];
      alloc.powers[ch] = sub_rep.allocation.powers[i];
    }

    double total = literal_power + sub_rep.objective;
    if (total < best.objective) {
      best.objective = total;
      best.literal_user_power = literal_power;
      best.allocation = std::move(alloc);
      best.assignment_bits = bits;
    }
  }
  return best;
}

GadgetLemmaReport check_gadget_lemmas(const MpcaInstance& inst,
                                      const ReductionLayout& layout,
                                      const Allocation& canonical) {
  GadgetLemmaReport rep;
  int v = 0, w = 0;
  for (const UserInfo& u : layout.users)
    (u.role == UserRole::Literal ? v : w) += 1;
  v /= 2;

  rep.no_invalid_channels = true;
  for (std::size_t ch = 0; ch < canonical.channel_owner.size(); ++ch) {
    int owner = canonical.channel_owner[ch];
    if (owner != kUnassigned && !layout.is_valid_channel(owner, static_cast<int>(ch)))
      rep.no_invalid_channels = false;
  }

  rep.literal_users_structured = true;
  double literal_power = 0.0;
  for (int q = 0; q < v; ++q)
    for (int s = 0; s < 2; ++s) {
      int user = layout.literal_user(q, s == 1);
      bool has_super = false;
      int literal_count = 0;
      for (std::size_t ch = 0; ch < canonical.channel_owner.size(); ++ch) {
        if (canonical.channel_owner[ch] != user) continue;
        literal_power += canonical.powers[ch];
        const ChannelInfo& info = layout.channels[ch];
        if (info.role == ChannelRole::Super) has_super = true;
        if (info.role == ChannelRole::LiteralCopy) ++literal_count;
      }
      bool structured = (has_super && literal_count == 0) ||
                        (!has_super && literal_count == 3);
      if (!structured) rep.literal_users_structured = false;
    }
  rep.literal_user_power = literal_power;

  rep.f1 = 1.0 / layout.g_literal;
  rep.f2 = 2.0 * (std::exp2(0.5) - 1.0) / layout.g_literal;
  rep.f3 = 3.0 * (std::exp2(1.0 / 3.0) - 1.0) / layout.g_literal;
  rep.constant_chain = rep.f1 > rep.f2 && rep.f2 > rep.f3 &&
                       rep.f2 - rep.f3 > 0.04 / layout.g_literal &&
                       0.04 / layout.g_literal > 1.0 / layout.g_aux;

  rep.expected_literal_power =
      double(v) + 78.0 * double(v) * (std::exp2(1.0 / 3.0) - 1.0) * (0.9 * w + 0.1);
  rep.literal_power_matches =
      std::abs(literal_power - rep.expected_literal_power) <=
      1e-9 * std::max(1.0, rep.expected_literal_power);
  return rep;
}

CnfFormula parse_dimacs(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  CnfFormula cnf;
  bool have_header = false;
  int declared_clauses = 0;
  std::vector<int> pending;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == 'c') continue;
    std::istringstream ls(line);
    if (line[0] == 'p') {
      std::string p, fmt;
      if (!(ls >> p >> fmt >> cnf.num_vars >> declared_clauses) || fmt != "cnf")
        throw MpcaError(ErrorCode::ParseError,
                        "line " + std::to_string(line_no) + ": malformed problem line");
      if (cnf.num_vars <= 0)
        throw MpcaError(ErrorCode::ParseError,
                        "line " + std::to_string(line_no) + ": variable count must be positive");
      have_header = true;
      continue;
    }
    if (!have_header)
      throw MpcaError(ErrorCode::ParseError,
                      "line " + std::to_string(line_no) + ": clause before problem line");
    int lit;
    while (ls >> lit) {
      if (lit == 0) {
        if (pending.size() != 3)
          throw MpcaError(ErrorCode::NotThreeSat,
                          "line " + std::to_string(line_no) + ": clause with " +
                              std::to_string(pending.size()) + " literals");
        std::array<Literal, 3> clause;
        for (int i = 0; i < 3; ++i)
          clause[i] = {std::abs(pending[i]) - 1, pending[i] < 0};
        cnf.clauses.push_back(clause);
        pending.clear();
      } else {
        if (std::abs(lit) > cnf.num_vars)
          throw MpcaError(ErrorCode::ParseError,
                          "line " + std::to_string(line_no) + ": literal out of range");
        pending.push_back(lit);
      }
    }
    if (!ls.eof())
      throw MpcaError(ErrorCode::ParseError,
                      "line " + std::to_string(line_no) + ": unreadable token");
  }
  if (!have_header) throw MpcaError(ErrorCode::ParseError, "missing problem line");
  if (!pending.empty())
    throw MpcaError(ErrorCode::ParseError, "unterminated clause at end of input");
  if (declared_clauses != static_cast<int>(cnf.clauses.size()))
    throw MpcaError(ErrorCode::ParseError, "clause count does not match the problem line");

  // occurrence bounds; reported per literal
  std::vector<std::array<int, 2>> occ(cnf.num_vars, {0, 0});
  for (const auto& clause : cnf.clauses)
    for (const Literal& lit : clause) ++occ[lit.var][lit.negated ? 1 : 0];
  for (int q = 0; q < cnf.num_vars; ++q)
    for (int s = 0; s < 2; ++s)
      if (occ[q][s] < 1 || occ[q][s] > 3)
        throw MpcaError(ErrorCode::OccurrenceBoundViolated,
                        std::string(s ? "-" : "") + std::to_string(q + 1) + " occurs " +
                            std::to_string(occ[q][s]) + " times (must be 1..3)");
  return cnf;
}

}  // namespace mpca
