#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "mpca/exact.hpp"
#include "mpca/generate.hpp"
#include "mpca/kmpca.hpp"
#include "mpca/verify.hpp"

using namespace mpca;

namespace {

GroupedInstance grouped(const MpcaInstance& inst) {
  return make_grouped(inst, recognize(inst));
}

MpcaInstance uniform_instance(int m, int n, std::vector<double> gains_per_user,
                              std::vector<double> targets) {
  MpcaInstance inst;
  inst.num_users = m;
  inst.num_channels = n;
  for (double g : gains_per_user) inst.gains.push_back(std::vector<double>(n, g));
  inst.rate_targets = std::move(targets);
  return inst;
}

}  // namespace

TEST_CASE("one user, three uniform channels") {
  MpcaInstance inst = uniform_instance(1, 3, {1.0}, {1.0});
  SolveReport rep = solve_1mpca(grouped(inst));
  CHECK(rep.objective == doctest::Approx(3.0 * (std::exp2(1.0 / 3.0) - 1.0)).epsilon(1e-12));
  CHECK(rep.algorithm == "1mpca");
  CHECK(evaluate(inst, rep.allocation) == doctest::Approx(rep.objective).epsilon(1e-9));
}

TEST_CASE("two users forced to one channel each") {
  MpcaInstance inst = uniform_instance(2, 2, {1.0, 1.0}, {1.0, 1.0});
  CHECK(solve_1mpca(grouped(inst)).objective == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("1-MPCA matches the subset oracle") {
  MpcaInstance inst = uniform_instance(2, 3, {1.0, 2.0}, {1.0, 1.0});
  double dp = solve_1mpca(grouped(inst)).objective;
  double oracle = solve_subset_dp(inst).objective;
  CHECK(std::abs(dp - oracle) <= 1e-9);

  for (uint64_t seed = 0; seed < 30; ++seed) {
    std::mt19937_64 dims(9300 + seed);
    GenSpec spec;
    spec.users = uniform_int(dims, 1, 4);
    spec.channels = uniform_int(dims, spec.users, 10);
    spec.groups = 1;
    spec.seed = 9400 + seed;
    MpcaInstance random_inst = generate_grouped_instance(spec);
    double a = solve_1mpca(grouped(random_inst)).objective;
    double b = solve_subset_dp(random_inst).objective;
    CHECK(std::abs(a - b) <= 1e-9);
  }
}

TEST_CASE("solve_kmpca specializes to solve_1mpca at K = 1") {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    std::mt19937_64 dims(10'500 + seed);
    GenSpec spec;
    spec.users = uniform_int(dims, 1, 4);
    spec.channels = uniform_int(dims, spec.users, 10);
    spec.groups = 1;
    spec.seed = 10'600 + seed;
    MpcaInstance inst = generate_grouped_instance(spec);
    GroupedInstance g = grouped(inst);
    CHECK(solve_kmpca(g).objective == doctest::Approx(solve_1mpca(g).objective).epsilon(1e-12));
  }
}

TEST_CASE("K = 2 hand case matches the subset oracle") {
  MpcaInstance inst;
  inst.num_users = 2;
  inst.num_channels = 4;
  inst.gains = {{1.0, 1.0, 1.0, 1.0}, {1.0, 1.0, 1.0, 1.0}};
  inst.rate_targets = {1.0, 1.0};
  inst.gains[0][2] = inst.gains[0][3] = 2.0;  // second group; per-user gains differ
  inst.gains[1][2] = inst.gains[1][3] = 0.5;
  GroupedInstance g = grouped(inst);
  CHECK(g.groups.k == 2);
  CHECK(solve_kmpca(g).objective ==
        doctest::Approx(solve_subset_dp(inst).objective).epsilon(1e-12));
}

TEST_CASE("kmpca matches the subset oracle on a random grouped suite") {
  auto cases = verify_kmpca_suite(60);
  for (const auto& c : cases) {
    CAPTURE(c.name);
    CHECK(c.pass);
  }
}

TEST_CASE("kmpca allocations audit cleanly") {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    std::mt19937_64 dims(11'700 + seed);
    GenSpec spec;
    spec.users = uniform_int(dims, 1, 4);
    spec.channels = uniform_int(dims, spec.users, 10);
    spec.groups = uniform_int(dims, 1, std::min(3, spec.channels));
    spec.seed = 11'800 + seed;
    MpcaInstance inst = generate_grouped_instance(spec);
    SolveReport rep = solve_kmpca(grouped(inst));
    CHECK(std::abs(evaluate(inst, rep.allocation) - rep.objective) <=
          1e-9 * std::max(1.0, rep.objective));
  }
}

TEST_CASE("table values are nonincreasing in every coordinate where finite") {
  for (uint64_t seed = 0; seed < 10; ++seed) {
    std::mt19937_64 dims(12'900 + seed);
    GenSpec spec;
    spec.users = uniform_int(dims, 1, 3);
    spec.channels = uniform_int(dims, spec.users + 1, 9);
    spec.groups = uniform_int(dims, 1, 2);
    spec.seed = 13'000 + seed;
    MpcaInstance inst = generate_grouped_instance(spec);
    GroupedInstance g = grouped(inst);
    DpTable table = kmpca_table(g);
    const auto& sizes = table.group_sizes();

    std::vector<int> counts(sizes.size(), 0);
    for (;;) {
      for (int m = 1; m <= table.num_users(); ++m) {
        double here = table.value(m, counts);
        if (!std::isfinite(here)) continue;
        for (std::size_t j = 0; j < sizes.size(); ++j) {
          if (counts[j] == 0) continue;
          std::vector<int> fewer = counts;
          --fewer[j];
          double prev = table.value(m, fewer);
          if (std::isfinite(prev)) CHECK(here <= prev + 1e-12 * std::max(1.0, prev));
        }
      }
      std::size_t j = 0;
      while (j < sizes.size() && ++counts[j] > sizes[j]) counts[j++] = 0;
      if (j == sizes.size()) break;
    }
  }
}

TEST_CASE("one-channel-per-user entries accumulate the single-channel powers") {
  for (uint64_t seed = 0; seed < 10; ++seed) {
    std::mt19937_64 dims(14'100 + seed);
    GenSpec spec;
    spec.users = uniform_int(dims, 2, 6);
    spec.channels = uniform_int(dims, spec.users + 1, 14);
    spec.groups = 1;
    spec.seed = 14'200 + seed;
    MpcaInstance inst = generate_grouped_instance(spec);
    GroupedInstance g = grouped(inst);
    DpTable table = one_mpca_table(g);
    double acc = 0.0;
    for (int m = 1; m <= spec.users; ++m) {
      acc = (std::exp2(inst.rate_targets[m - 1]) - 1.0) / g.user_group_gains[m - 1][0] + acc;
      CHECK(table.value(m, {m}) == acc);  // identical fold, bit for bit
    }
  }
}

TEST_CASE("structure and size guards") {
  MpcaInstance two_groups;
  two_groups.num_users = 1;
  two_groups.num_channels = 2;
  two_groups.gains = {{1.0, 2.0}};
  two_groups.rate_targets = {1.0};
  try {
    solve_1mpca(grouped(two_groups));
    FAIL("expected throw");
  } catch (const MpcaError& e) {
    CHECK(e.code() == ErrorCode::WrongStructure);
  }

  GenSpec spec;
  spec.users = 2;
  spec.channels = 10;
  spec.groups = 5;
  spec.seed = 99;
  MpcaInstance five_groups = generate_grouped_instance(spec);
  try {
    solve_kmpca(grouped(five_groups));
    FAIL("expected throw");
  } catch (const MpcaError& e) {
    CHECK(e.code() == ErrorCode::InstanceTooLarge);
  }
}

TEST_CASE("make_grouped rejects non-uniform gains inside a group") {
  MpcaInstance inst;
  inst.num_users = 1;
  inst.num_channels = 2;
  inst.gains = {{1.0, 2.0}};
  inst.rate_targets = {1.0};
  GroupStructure claim;
  claim.group_id = {0, 0};
  claim.k = 1;
  claim.group_sizes = {2};
  try {
    make_grouped(inst, claim);
    FAIL("expected throw");
  } catch (const MpcaError& e) {
    CHECK(e.code() == ErrorCode::WrongStructure);
  }
}
