#include "mpca/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mpca/exact.hpp"
#include "mpca/generate.hpp"
#include "mpca/kmpca.hpp"
#include "mpca/matching.hpp"
#include "mpca/recognition.hpp"

namespace mpca {

namespace {

VerifyCase gap_case(std::string name, double a, double b, double tol) {
  VerifyCase c;
  c.name = std::move(name);
  c.gap = std::abs(a - b);
  c.pass = c.gap <= tol;
  return c;
}

}  // namespace

std::vector<VerifyCase> verify_oracle_suite(int num_seeds) {
  std::vector<VerifyCase> out;
  for (int i = 0; i < num_seeds; ++i) {
    std::mt19937_64 pick(0x5eed0000u + i);
    int m = uniform_int(pick, 1, 3);
    int n = uniform_int(pick, m, 7);
    MpcaInstance inst = generate_general_instance(m, n, 1000 + i);
    double a = solve_subset_dp(inst).objective;
    double b = solve_enumeration(inst).objective;
    out.push_back(gap_case("oracle/" + std::to_string(i) + "/m" + std::to_string(m) + "n" +
                               std::to_string(n),
                           a, b, 1e-9));
  }
  return out;
}

std::vector<VerifyCase> verify_kmpca_suite(int num_seeds) {
  std::vector<VerifyCase> out;
  for (int i = 0; i < num_seeds; ++i) {
    GenSpec spec;
    spec.seed = 2000 + i;
    std::mt19937_64 dims(0xabc000u + i);
    spec.users = uniform_int(dims, 1, 4);
    spec.channels = uniform_int(dims, spec.users, 12);
    spec.groups = uniform_int(dims, 1, std::min(3, spec.channels));
    MpcaInstance inst = generate_grouped_instance(spec);
    GroupedInstance grouped = make_grouped(inst, recognize(inst));
    double a = solve_kmpca(grouped).objective;
    double b = solve_subset_dp(inst).objective;
    out.push_back(gap_case("kmpca/" + std::to_string(i) + "/m" + std::to_string(spec.users) +
                               "n" + std::to_string(spec.channels) + "k" +
                               std::to_string(spec.groups),
                           a, b, 1e-9));
  }
  return out;
}

double min_cost_by_permutations(const std::vector<std::vector<double>>& cost) {
  const int n = static_cast<int>(cost.size());
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (int i = 0; i < n; ++i) total += cost[i][perm[i]];
    best = std::min(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

namespace {

// min over injective user->channel maps of sum R_m / l_{m,sigma(m)}
double brute_force_linear(const MpcaInstance& inst) {
  std::vector<int> chosen(inst.num_users, -1);
  std::vector<char> used(inst.num_channels, false);
  double best = std::numeric_limits<double>::infinity();
  auto rec = [&](auto&& self, int m, double acc) -> void {
    if (m == inst.num_users) {
      best = std::min(best, acc);
      return;
    }
    for (int ch = 0; ch < inst.num_channels; ++ch) {
      if (used[ch]) continue;
      used[ch] = true;
      self(self, m + 1, acc + inst.rate_targets[m] / inst.gains[m][ch]);
      used[ch] = false;
    }
  };
  rec(rec, 0, 0.0);
  return best;
}

}  // namespace

std::vector<VerifyCase> verify_matching_suite(int num_seeds) {
  std::vector<VerifyCase> out;
  for (int i = 0; i < num_seeds; ++i) {
    std::mt19937_64 rng(0x3a7c00u + i);
    int n = uniform_int(rng, 1, 7);
    AssignmentProblem ap;
    ap.cost.assign(n, std::vector<double>(n));
    for (auto& row : ap.cost)
      for (double& c : row) c = log_uniform(rng, 0.1, 10.0);
    double a = solve_assignment(ap).total_cost;
    double b = min_cost_by_permutations(ap.cost);
    out.push_back(gap_case("assignment/" + std::to_string(i) + "/n" + std::to_string(n), a, b,
                           1e-9));
  }
  for (int i = 0; i < num_seeds; ++i) {
    std::mt19937_64 dims(0xb10c00u + i);
    int m = uniform_int(dims, 1, 3);
    int n = m * uniform_int(dims, 1, 9 / m);
    MpcaInstance inst = generate_general_instance(m, n, 3000 + i);
    double a = solve_equal_blocks(inst).objective;
    double b = solve_consecutive_exact(inst, std::vector<int>(m, n / m)).objective;
    out.push_back(gap_case("equal-blocks/" + std::to_string(i) + "/m" + std::to_string(m) +
                               "n" + std::to_string(n),
                           a, b, 1e-9));
  }
  for (int i = 0; i < num_seeds; ++i) {
    std::mt19937_64 dims(0x11c00u + i);
    int m = uniform_int(dims, 1, 3);
    int n = uniform_int(dims, m, 6);
    MpcaInstance inst =
        generate_general_instance(m, n, 4000 + i, 0.01, 100.0, 0.1, 4.0, RateModel::Linear);
    double a = solve_linear_rate(inst).objective;
    double b = brute_force_linear(inst);
    out.push_back(gap_case("linear/" + std::to_string(i) + "/m" + std::to_string(m) + "n" +
                               std::to_string(n),
                           a, b, 0.0));
  }
  return out;
}

bool brute_force_sat(const CnfFormula& cnf) {
  for (uint32_t bits = 0; bits < (1u << cnf.num_vars); ++bits) {
    bool all = true;
    for (const auto& clause : cnf.clauses) {
      bool sat = false;
      for (const Literal& lit : clause) {
        bool value = (bits >> lit.var) & 1u;
        if (value != lit.negated) sat = true;
      }
      if (!sat) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

std::vector<VerifyCase> verify_reduction_suite() {
  std::vector<VerifyCase> out;
  // all single-clause formulas on one variable with both polarities present
  int index = 0;
  for (int pattern = 0; pattern < 8; ++pattern) {
    CnfFormula cnf;
    cnf.num_vars = 1;
    std::array<Literal, 3> clause;
    int negs = 0;
    for (int slot = 0; slot < 3; ++slot) {
      bool neg = (pattern >> slot) & 1;
      clause[slot] = {0, neg};
      negs += neg;
    }
    if (negs == 0 || negs == 3) continue;  // one polarity missing
    cnf.clauses.push_back(clause);
    bool expected = brute_force_sat(cnf);
    for (ReductionMode mode : {ReductionMode::AppendixA, ReductionMode::AppendixB}) {
      bool got = decide_sat(cnf, mode);
      VerifyCase c;
      c.name = "reduction/v1w1/p" + std::to_string(pattern) +
               (mode == ReductionMode::AppendixA ? "/a" : "/b");
      c.pass = got == expected;
      c.gap = c.pass ? 0.0 : 1.0;
      out.push_back(c);
    }
    ++index;
  }
  // unsatisfiable fixture: (z v z v z) and (^z v ^z v ^z)
  CnfFormula unsat;
  unsat.num_vars = 1;
  unsat.clauses.push_back({Literal{0, false}, Literal{0, false}, Literal{0, false}});
  unsat.clauses.push_back({Literal{0, true}, Literal{0, true}, Literal{0, true}});
  for (ReductionMode mode : {ReductionMode::AppendixA, ReductionMode::AppendixB}) {
    VerifyCase c;
    c.name = std::string("reduction/v1w2-unsat") +
             (mode == ReductionMode::AppendixA ? "/a" : "/b");
    c.pass = decide_sat(unsat, mode) == false && brute_force_sat(unsat) == false;
    c.gap = c.pass ? 0.0 : 1.0;
    out.push_back(c);
  }
  return out;
}

}  // namespace mpca
