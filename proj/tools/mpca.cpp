// Command-line front end: instance generation, solving with auto-dispatch,
// recognition, 3-SAT reduction, differential verification and benchmark
// sweeps. All stdout is JSON or CSV; diagnostics go to stderr.
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "mpca/exact.hpp"
#include "mpca/generate.hpp"
#include "mpca/io.hpp"
#include "mpca/kmpca.hpp"
#include "mpca/matching.hpp"
#include "mpca/recognition.hpp"
#include "mpca/reduction.hpp"
#include "mpca/verify.hpp"
#include "mpca/waterfill.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitUnsupported = 2;

int exit_code_for(mpca::ErrorCode code) {
  switch (code) {
    case mpca::ErrorCode::InstanceTooLarge:
    case mpca::ErrorCode::Infeasible:
    case mpca::ErrorCode::WrongStructure:
    case mpca::ErrorCode::WrongModel:
    case mpca::ErrorCode::NotDivisible:
      return kExitUnsupported;
    default:
      return kExitInputError;
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw mpca::MpcaError(mpca::ErrorCode::ParseError, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

mpca::MpcaInstance load_instance(const std::string& path) {
  mpca::MpcaInstance inst = mpca::read_instance(read_file(path));
  mpca::validate(inst);
  return inst;
}

mpca::GroupedInstance grouped_from(const mpca::MpcaInstance& inst, double tol) {
  mpca::GroupStructure gs = inst.channel_groups
                                ? mpca::group_structure_from_ids(*inst.channel_groups)
                                : mpca::recognize(inst, tol);
  return mpca::make_grouped(inst, gs);
}

mpca::SolveReport solve_waterfill_single(const mpca::MpcaInstance& inst) {
  if (inst.num_users != 1)
    throw mpca::MpcaError(mpca::ErrorCode::WrongStructure,
                          "waterfill solves single-user instances only");
  mpca::SingleUserProblem p{inst.gains[0], inst.rate_targets[0], inst.rate_model};
  auto start = std::chrono::steady_clock::now();
  mpca::SingleUserSolution sol = mpca::waterfill(p);
  mpca::SolveReport rep;
  rep.allocation.channel_owner.assign(inst.num_channels, 0);
  rep.allocation.rates = sol.rates;
  for (int ch = 0; ch < inst.num_channels; ++ch)
    rep.allocation.powers.push_back(
        mpca::power_for_rate(inst.rate_model, inst.gains[0][ch], sol.rates[ch]));
  rep.objective = sol.total_power;
  rep.algorithm = "waterfill";
  rep.instance_digest = mpca::instance_digest(inst);
  rep.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

mpca::SolveReport dispatch_auto(const mpca::MpcaInstance& inst, double tol) {
  mpca::GroupStructure gs = mpca::recognize(inst, tol);
  if (gs.k <= 4) {
    try {
      mpca::GroupedInstance g = mpca::make_grouped(inst, gs);
      return gs.k == 1 ? mpca::solve_1mpca(g) : mpca::solve_kmpca(g);
    } catch (const mpca::MpcaError& e) {
      if (e.code() != mpca::ErrorCode::InstanceTooLarge) throw;
    }
  }
  if (inst.num_channels <= 18) return mpca::solve_subset_dp(inst);
  throw mpca::MpcaError(mpca::ErrorCode::InstanceTooLarge,
                        "general MPCA is NP-hard; no tractable structure detected "
                        "(K > 4 and N > 18)");
}

mpca::SolveReport run_algo(const std::string& algo, const mpca::MpcaInstance& inst,
                           const std::vector<int>& blocks, double tol) {
  if (algo == "auto") return dispatch_auto(inst, tol);
  if (algo == "waterfill") return solve_waterfill_single(inst);
  if (algo == "subset-dp") return mpca::solve_subset_dp(inst);
  if (algo == "enum") return mpca::solve_enumeration(inst);
  if (algo == "consecutive") {
    if (blocks.empty())
      throw mpca::MpcaError(mpca::ErrorCode::BadFlags,
                            "--blocks is required for the consecutive solver");
    return mpca::solve_consecutive_exact(inst, blocks);
  }
  if (algo == "1mpca") return mpca::solve_1mpca(grouped_from(inst, tol));
  if (algo == "kmpca") return mpca::solve_kmpca(grouped_from(inst, tol));
  if (algo == "linear-match") return mpca::solve_linear_rate(inst);
  if (algo == "block-match") return mpca::solve_equal_blocks(inst);
  throw mpca::MpcaError(mpca::ErrorCode::BadFlags, "unknown algorithm " + algo);
}

struct SweepSpec {
  char variable = 'N';
  std::vector<int> values;
};

SweepSpec parse_sweep(const std::string& text) {
  SweepSpec sweep;
  auto fail = [&]() {
    throw mpca::MpcaError(mpca::ErrorCode::BadFlags,
                          "sweep must look like N=128..1024 or M=2..8:2");
  };
  if (text.size() < 2 || (text[0] != 'N' && text[0] != 'M') || text[1] != '=') fail();
  sweep.variable = text[0];
  std::string rest = text.substr(2);
  int step = 0;
  if (auto colon = rest.find(':'); colon != std::string::npos) {
    step = std::atoi(rest.substr(colon + 1).c_str());
    if (step <= 0) fail();
    rest = rest.substr(0, colon);
  }
  auto dots = rest.find("..");
  if (dots == std::string::npos) fail();
  int lo = std::atoi(rest.substr(0, dots).c_str());
  int hi = std::atoi(rest.substr(dots + 2).c_str());
  if (lo <= 0 || hi < lo) fail();
  if (step > 0)
    for (int v = lo; v <= hi; v += step) sweep.values.push_back(v);
  else
    for (int v = lo; v <= hi; v *= 2) sweep.values.push_back(v);  // doubling by default
  return sweep;
}

void parse_dist(const std::string& text, double& lo, double& hi) {
  auto fail = [&]() {
    throw mpca::MpcaError(mpca::ErrorCode::BadFlags,
                          "distribution must look like loguniform:0.01,100");
  };
  const std::string prefix = "loguniform:";
  if (text.rfind(prefix, 0) != 0) fail();
  std::string rest = text.substr(prefix.size());
  auto comma = rest.find(',');
  if (comma == std::string::npos) fail();
  lo = std::atof(rest.substr(0, comma).c_str());
  hi = std::atof(rest.substr(comma + 1).c_str());
  if (!(lo > 0.0) || !(hi >= lo)) fail();
}

int cmd_solve(const std::string& in, const std::string& algo,
              const std::vector<int>& blocks, double tol) {
  mpca::MpcaInstance inst = load_instance(in);
  mpca::SolveReport rep = run_algo(algo, inst, blocks, tol);
  std::cout << mpca::write_report(rep) << "\n";
  return kExitOk;
}

int cmd_gen(const mpca::GenSpec& spec) {
  mpca::MpcaInstance inst = mpca::generate_grouped_instance(spec);
  json doc = json::parse(mpca::write_instance(inst));
  doc["generator"] = {{"rng", mpca::kRngName}, {"seed", spec.seed}};
  std::cout << doc.dump() << "\n";
  return kExitOk;
}

int cmd_recognize(const std::string& in, double tol, bool reference) {
  mpca::MpcaInstance inst = load_instance(in);
  mpca::GroupStructure gs =
      reference ? mpca::recognize_reference(inst, tol) : mpca::recognize(inst, tol);
  json doc;
  doc["k"] = gs.k;
  doc["group_id"] = gs.group_id;
  doc["group_sizes"] = gs.group_sizes;
  std::cout << doc.dump() << "\n";
  return kExitOk;
}

int cmd_reduce(const std::string& mode, const std::string& cnf_path,
               const std::string& out_path, bool decide) {
  mpca::CnfFormula cnf = mpca::parse_dimacs(read_file(cnf_path));
  bool appendix_a = mode == "a";
  mpca::ReductionResult r =
      appendix_a ? mpca::build_appendix_a(cnf) : mpca::build_appendix_b(cnf);
  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out)
      throw mpca::MpcaError(mpca::ErrorCode::ParseError, "cannot write " + out_path);
    out << mpca::write_instance(r.instance) << "\n";
  }
  json doc;
  doc["mode"] = mode;
  doc["num_vars"] = cnf.num_vars;
  doc["num_clauses"] = cnf.clauses.size();
  doc["num_users"] = r.instance.num_users;
  doc["num_channels"] = r.instance.num_channels;
  if (!appendix_a) doc["block_sizes"] = r.block_sizes;
  if (!out_path.empty()) doc["out"] = out_path;
  if (decide) {
    mpca::SolveReport rep =
        appendix_a ? mpca::solve_subset_dp(r.instance)
                   : mpca::solve_consecutive_exact(r.instance, r.block_sizes);
    double threshold =
        mpca::sat_threshold(cnf.num_vars, static_cast<int>(cnf.clauses.size()));
    doc["objective"] = rep.objective;
    doc["threshold"] = threshold;
    doc["margin"] = rep.objective - threshold;
    doc["sat"] = rep.objective <= threshold + 1e-6;
  }
  std::cout << doc.dump() << "\n";
  return kExitOk;
}

int cmd_verify(const std::string& suite, int seeds) {
  std::vector<mpca::VerifyCase> cases;
  if (suite == "oracle")
    cases = mpca::verify_oracle_suite(seeds);
  else if (suite == "kmpca")
    cases = mpca::verify_kmpca_suite(seeds);
  else if (suite == "matching")
    cases = mpca::verify_matching_suite(seeds);
  else if (suite == "reduction")
    cases = mpca::verify_reduction_suite();
  else
    throw mpca::MpcaError(mpca::ErrorCode::BadFlags, "unknown suite " + suite);

  int failures = 0;
  double max_gap = 0.0;
  for (const auto& c : cases) {
    json line;
    line["case"] = c.name;
    line["gap"] = c.gap;
    line["pass"] = c.pass;
    std::cout << line.dump() << "\n";
    if (!c.pass) ++failures;
    max_gap = std::max(max_gap, c.gap);
  }
  json summary;
  summary["suite"] = suite;
  summary["cases"] = cases.size();
  summary["failures"] = failures;
  summary["max_gap"] = max_gap;
  std::cout << summary.dump() << "\n";
  return failures == 0 ? kExitOk : kExitUnsupported;
}

struct BenchCell {
  int m, n, k;
  uint64_t seed;
  double objective = 0.0, wall = 0.0;
};

int cmd_bench(const std::string& algo, const std::string& sweep_text, int users, int k,
              uint64_t seed, int reps) {
  SweepSpec sweep = parse_sweep(sweep_text);
  std::vector<BenchCell> cells;
  for (int value : sweep.values)
    for (int rep = 0; rep < reps; ++rep) {
      BenchCell cell;
      cell.m = sweep.variable == 'M' ? value : users;
      cell.n = sweep.variable == 'N' ? value : users * 8;
      cell.k = k;
      cell.seed = seed + rep;
      cells.push_back(cell);
    }

  auto run_cell = [&](BenchCell& cell) {
    mpca::GenSpec spec;
    spec.users = cell.m;
    spec.channels = cell.n;
    spec.groups = cell.k;
    spec.seed = cell.seed;
    if (algo == "linear-match") spec.rate_model = mpca::RateModel::Linear;
    mpca::MpcaInstance inst = mpca::generate_grouped_instance(spec);
    mpca::SolveReport rep = run_algo(algo, inst, {}, 0.0);
    cell.objective = rep.objective;
    cell.wall = rep.wall_time_s;
    cell.k = mpca::recognize(inst).k;
  };

  int threads = static_cast<int>(std::thread::hardware_concurrency());
  if (const char* env = std::getenv("MPCA_THREADS")) threads = std::max(1, std::atoi(env));
  threads = std::min<int>(threads, static_cast<int>(cells.size()));
  if (threads <= 1) {
    for (auto& cell : cells) run_cell(cell);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&]() {
        for (std::size_t i = next.fetch_add(1); i < cells.size(); i = next.fetch_add(1))
          run_cell(cells[i]);
      });
    for (auto& th : pool) th.join();
  }

  std::cout << "algo,M,N,K,seed,objective,wall_time_s\n";
  for (const auto& cell : cells) {
    std::ostringstream row;
    row << algo << ',' << cell.m << ',' << cell.n << ',' << cell.k << ',' << cell.seed << ','
        << json(cell.objective).dump() << ',' << json(cell.wall).dump();
    std::cout << row.str() << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"minimum-power OFDMA channel allocation toolkit"};
  app.require_subcommand(1);

  // solve
  auto* solve = app.add_subcommand("solve", "solve an instance file");
  std::string solve_in, solve_algo = "auto";
  std::vector<int> solve_blocks;
  double solve_tol = 0.0;
  solve->add_option("--in", solve_in, "instance JSON file")->required();
  solve->add_option("--algo", solve_algo,
                    "auto|waterfill|subset-dp|enum|consecutive|1mpca|kmpca|"
                    "linear-match|block-match");
  solve->add_option("--blocks", solve_blocks, "block sizes for consecutive")
      ->delimiter(',');
  solve->add_option("--tol", solve_tol, "recognition tolerance for auto/kmpca");

  // gen
  auto* gen = app.add_subcommand("gen", "generate a grouped instance");
  mpca::GenSpec spec;
  std::string gen_dist, gen_rates, gen_model = "log_snr";
  std::vector<int> gen_group_sizes;
  gen->add_option("--users", spec.users)->required();
  gen->add_option("--channels", spec.channels)->required();
  gen->add_option("--k", spec.groups, "number of gain groups");
  gen->add_option("--seed", spec.seed);
  gen->add_option("--dist", gen_dist, "gain distribution, loguniform:lo,hi");
  gen->add_option("--rates", gen_rates, "rate-target distribution, loguniform:lo,hi");
  gen->add_option("--group-sizes", gen_group_sizes)->delimiter(',');
  gen->add_option("--model", gen_model, "log_snr|linear");

  // recognize
  auto* rec = app.add_subcommand("recognize", "extract the channel-group structure");
  std::string rec_in;
  double rec_tol = 0.0;
  bool rec_reference = false;
  rec->add_option("--in", rec_in)->required();
  rec->add_option("--tol", rec_tol, "quantization tolerance in log2-gain space");
  rec->add_flag("--reference", rec_reference, "use the pairwise-graph implementation");

  // reduce
  auto* red = app.add_subcommand("reduce", "build an instance from a 3-SAT file");
  std::string red_mode, red_cnf, red_out;
  bool red_decide = false;
  red->add_option("--mode", red_mode, "a|b")->required()->check(CLI::IsMember({"a", "b"}));
  red->add_option("--cnf", red_cnf, "DIMACS CNF file")->required();
  red->add_option("--out", red_out, "instance JSON output path");
  red->add_flag("--decide", red_decide, "solve and print the SAT decision");

  // verify
  auto* ver = app.add_subcommand("verify", "run a differential suite");
  std::string ver_suite;
  int ver_seeds = 100;
  ver->add_option("--suite", ver_suite, "oracle|kmpca|matching|reduction")->required();
  ver->add_option("--seeds", ver_seeds);

  // bench
  auto* bench = app.add_subcommand("bench", "sweep sizes and emit CSV timings");
  std::string bench_algo = "1mpca", bench_sweep;
  int bench_users = 8, bench_k = 1, bench_reps = 1;
  uint64_t bench_seed = 1;
  bench->add_option("--algo", bench_algo);
  bench->add_option("--sweep", bench_sweep, "N=a..b (doubling) or N=a..b:step")->required();
  bench->add_option("--users", bench_users);
  bench->add_option("--k", bench_k);
  bench->add_option("--seed", bench_seed);
  bench->add_option("--reps", bench_reps);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) return cmd_solve(solve_in, solve_algo, solve_blocks, solve_tol);
    if (*gen) {
      if (!gen_dist.empty()) parse_dist(gen_dist, spec.gain_lo, spec.gain_hi);
      if (!gen_rates.empty()) parse_dist(gen_rates, spec.rate_lo, spec.rate_hi);
      if (!gen_group_sizes.empty()) spec.group_sizes = gen_group_sizes;
      if (gen_model == "linear")
        spec.rate_model = mpca::RateModel::Linear;
      else if (gen_model != "log_snr")
        throw mpca::MpcaError(mpca::ErrorCode::BadFlags, "unknown model " + gen_model);
      return cmd_gen(spec);
    }
    if (*rec) return cmd_recognize(rec_in, rec_tol, rec_reference);
    if (*red) return cmd_reduce(red_mode, red_cnf, red_out, red_decide);
    if (*ver) return cmd_verify(ver_suite, ver_seeds);
    if (*bench)
      return cmd_bench(bench_algo, bench_sweep, bench_users, bench_k, bench_seed, bench_reps);
  } catch (const mpca::MpcaError& e) {
    json err;
    err["error"] = mpca::error_code_name(e.code());
    err["message"] = e.what();
    std::cerr << err.dump() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
