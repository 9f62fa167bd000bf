#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "mpca/generate.hpp"
#include "mpca/waterfill.hpp"
#include "test_helpers.hpp"

using namespace mpca;
using namespace mpca::testing;

TEST_CASE("single unit-gain channel carries the whole rate") {
  SingleUserSolution sol = waterfill({{1.0}, 1.0, RateModel::LogSnr});
  CHECK(sol.total_power == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(sol.active_count == 1);
  CHECK(sol.rates[0] == doctest::Approx(1.0));
}

TEST_CASE("identical gains split the rate evenly") {
  const double g = 0.125;
  SingleUserSolution sol = waterfill({{g, g, g}, 1.0, RateModel::LogSnr});
  for (double r : sol.rates) CHECK(r == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(sol.total_power ==
        doctest::Approx(3.0 * (std::exp2(1.0 / 3.0) - 1.0) / g).epsilon(1e-14));
}

TEST_CASE("weak channel is dropped when the strong one suffices") {
  SingleUserSolution sol = waterfill({{4.0, 1.0}, 1.0, RateModel::LogSnr});
  CHECK(sol.rates[0] == doctest::Approx(1.0));
  CHECK(sol.rates[1] == 0.0);
  CHECK(sol.active_count == 1);
  CHECK(sol.total_power == doctest::Approx(0.25).epsilon(1e-15));
  // the literal grid oracle agrees
  double oracle = waterfill_grid_oracle_2ch(4.0, 1.0, 1.0, 1e-6);
  CHECK(sol.total_power <= oracle + 1e-9);
  CHECK(oracle <= sol.total_power + 1e-9);
}

TEST_CASE("KKT conditions hold on random problems") {
  for (int i = 0; i < 200; ++i) {
    std::mt19937_64 rng(900 + i);
    int n = uniform_int(rng, 1, 8);
    SingleUserProblem p;
    for (int c = 0; c < n; ++c) p.gains.push_back(log_uniform(rng, 0.01, 100.0));
    p.rate_target = log_uniform(rng, 0.1, 4.0);
    SingleUserSolution sol = waterfill(p);
    CHECK(kkt_holds(p.gains, sol));
    // rates sum to the target and zero entries are exact zeros
    double sum = 0.0;
    int active = 0;
    for (double r : sol.rates) {
      CHECK(r >= 0.0);
      sum += r;
      if (r > 0.0) ++active;
    }
    CHECK(std::abs(sum - p.rate_target) <= 1e-12 * p.rate_target);
    CHECK(active == sol.active_count);
  }
}

TEST_CASE("adding a channel never increases the optimal power") {
  for (int i = 0; i < 100; ++i) {
    std::mt19937_64 rng(1700 + i);
    int n = uniform_int(rng, 1, 7);
    SingleUserProblem p;
    for (int c = 0; c < n; ++c) p.gains.push_back(log_uniform(rng, 0.01, 100.0));
    p.rate_target = log_uniform(rng, 0.1, 4.0);
    double before = waterfill(p).total_power;
    p.gains.push_back(log_uniform(rng, 0.01, 100.0));
    double after = waterfill(p).total_power;
    CHECK(after <= before * (1.0 + 1e-12) + 1e-15);
  }
}

TEST_CASE("search oracle matches the closed form on small problems") {
  for (int i = 0; i < 50; ++i) {
    std::mt19937_64 rng(2600 + i);
    int n = uniform_int(rng, 2, 4);
    SingleUserProblem p;
    for (int c = 0; c < n; ++c) p.gains.push_back(log_uniform(rng, 0.05, 20.0));
    p.rate_target = log_uniform(rng, 0.2, 3.0);
    double fast = waterfill(p).total_power;
    double oracle = waterfill_search_oracle(p.gains, p.rate_target);
    CHECK(std::abs(fast - oracle) <= 1e-6);
  }
}

TEST_CASE("linear model sends everything to the best coefficient") {
  SingleUserSolution sol = waterfill({{2.0, 5.0, 5.0}, 3.0, RateModel::Linear});
  CHECK(sol.rates == std::vector<double>{0.0, 3.0, 0.0});  // tie -> lowest index
  CHECK(sol.total_power == doctest::Approx(0.6));
  CHECK(sol.active_count == 1);
}

TEST_CASE("grouped closed form: one group of k channels") {
  double p = waterfill_grouped({1.0}, {3}, 1.0);
  CHECK(p == doctest::Approx(3.0 * (std::exp2(1.0 / 3.0) - 1.0)).epsilon(1e-15));
  double g = 0.04;
  double pk = waterfill_grouped({g}, {5}, 2.0);
  CHECK(pk == doctest::Approx(5.0 * (std::exp2(2.0 / 5.0) - 1.0) / g).epsilon(1e-14));
}

TEST_CASE("grouped equals expanded waterfill") {
  // singleton counts reproduce the plain solver bit for bit
  double grouped = waterfill_grouped({2.0, 1.0}, {1, 1}, 2.0);
  double flat = waterfill({{2.0, 1.0}, 2.0, RateModel::LogSnr}).total_power;
  CHECK(grouped == flat);

  for (int i = 0; i < 100; ++i) {
    std::mt19937_64 rng(3500 + i);
    int k = uniform_int(rng, 1, 4);
    std::vector<double> gains;
    std::vector<long long> counts;
    for (int j = 0; j < k; ++j) {
      gains.push_back(log_uniform(rng, 0.01, 100.0));
      counts.push_back(uniform_int(rng, 1, 5));
    }
    double target = log_uniform(rng, 0.1, 4.0);
    double a = waterfill_grouped(gains, counts, target);
    std::vector<double> expanded = expand_groups(gains, counts);
    double b = waterfill({expanded, target, RateModel::LogSnr}).total_power;
    CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, b));
  }
}

TEST_CASE("grouped linear model picks the best group") {
  CHECK(waterfill_grouped({2.0, 8.0}, {3, 1}, 4.0, RateModel::Linear) ==
        doctest::Approx(0.5));
}

TEST_CASE("invalid inputs are rejected") {
  CHECK_THROWS_AS(waterfill({{}, 1.0, RateModel::LogSnr}), MpcaError);
  CHECK_THROWS_AS(waterfill({{1.0}, 0.0, RateModel::LogSnr}), MpcaError);
  CHECK_THROWS_AS(waterfill({{0.0}, 1.0, RateModel::LogSnr}), MpcaError);
  CHECK_THROWS_AS(waterfill_grouped({1.0}, {0}, 1.0), MpcaError);
  CHECK_THROWS_AS(waterfill_grouped({}, {}, 1.0), MpcaError);
}
