#include "mixsat/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mixsat/generator.hpp"
#include "mixsat/instance.hpp"
#include "mixsat/oracle.hpp"
#include "mixsat/search.hpp"

namespace mixsat {

namespace {

constexpr int kUsageError = 2;

struct SolveOptions {
  std::string input;
  std::string mode = "complete";
  std::optional<double> timeout;
  std::uint64_t seed = 0;
  double eps = 1e-2;
  int rank = 0;
  int depth_limit = 8;
  double rounding_c = 4.0;
};

struct GenerateOptions {
  int n = 0;
  int m = 0;
  int len = 2;
  std::uint64_t seed = 0;
  std::string output;
};

struct BenchOptions {
  std::string dir;
  int n = 0;
  int m = 0;
  int len = 2;
  int count = 0;
  std::uint64_t seed = 0;
  std::string mode = "complete";
  double timeout = 10.0;
};

void add_solver_flags(CLI::App& cmd, SolveOptions& opt) {
  cmd.add_option("--mode", opt.mode, "complete or incomplete")
      ->check(CLI::IsMember({"complete", "incomplete"}));
  cmd.add_option("--timeout", opt.timeout, "wall-clock limit in seconds")->check(CLI::NonNegativeNumber);
  cmd.add_option("--seed", opt.seed, "random seed (default: $MIXSAT_SEED or 0)");
  cmd.add_option("--eps", opt.eps, "SDP stopping gap")->check(CLI::PositiveNumber);
  cmd.add_option("--rank", opt.rank, "factor rank, 0 = automatic")->check(CLI::NonNegativeNumber);
  cmd.add_option("--depth-limit", opt.depth_limit, "variables branched per solved root")->check(CLI::PositiveNumber);
  cmd.add_option("--rounding-c", opt.rounding_c, "roundings per root = ceil(c sqrt(free))")
      ->check(CLI::PositiveNumber);
}

SolverConfig to_config(const SolveOptions& opt) {
  SolverConfig config;
  config.eps = opt.eps;
  config.rank = opt.rank;
  config.seed = opt.seed;
  config.time_limit = opt.timeout;
  config.depth_limit = opt.depth_limit;
  config.rounding_c = opt.rounding_c;
  return config;
}

void print_stats(std::ostream& err, const SearchResult& r) {
  const SearchStats& s = r.stats;
  err << "c nodes_popped " << s.nodes_popped << "\n"
      << "c popped_pruned " << s.popped_pruned << "\n"
      << "c popped_leaves " << s.popped_leaves << "\n"
      << "c sdp_solves " << s.sdp_solves << "\n"
      << "c solved_pruned " << s.solved_pruned << "\n"
      << "c sweeps_total " << s.sweeps_total << "\n"
      << "c prunes_by_dual " << s.prunes_by_dual << "\n"
      << "c expands_by_primal " << s.expands_by_primal << "\n"
      << "c children_pushed " << s.children_pushed << "\n"
      << "c leaves " << s.leaves << "\n"
      << "c roundings " << s.roundings << "\n"
      << "c root_lower_bound " << r.lower_bound << "\n"
      << "c wall_time " << std::fixed << std::setprecision(3) << s.wall_time << "\n";
  err.unsetf(std::ios::floatfield);
}

int cmd_solve(const SolveOptions& opt, std::ostream& out, std::ostream& err) {
  if (!std::filesystem::exists(opt.input)) {
    err << "c error: no such file '" << opt.input << "'\n";
    return kUsageError;
  }
  Instance instance;
  try {
    instance = parse_dimacs_file(opt.input);
  } catch (const std::exception& e) {
    err << "c error: " << e.what() << "\n";
    return kUsageError;
  }

  const bool complete = opt.mode == "complete";
  const EmitFn emit = [&out](const Incumbent& inc) { out << "o " << inc.unsat << std::endl; };
  BranchAndBound search(instance, to_config(opt));
  const SearchResult result = complete ? search.solve_complete(emit) : search.solve_incomplete(emit);

  const bool proved = complete && result.status == SearchStatus::Optimum;
  out << (proved ? "s OPTIMUM FOUND" : "s UNKNOWN") << "\n";
  out << "v";
  for (Var v = 1; v <= instance.num_vars(); ++v) {
    out << ' ' << (result.incumbent.values[static_cast<std::size_t>(v)] > 0 ? v : -v);
  }
  out << "\n";
  out.flush();
  print_stats(err, result);
  return 0;
}

int cmd_generate(const GenerateOptions& opt, std::ostream& out, std::ostream& err) {
  std::string text;
  try {
    text = generate_random(opt.n, opt.m, opt.len, opt.seed);
  } catch (const std::invalid_argument& e) {
    err << "c error: " << e.what() << "\n";
    return kUsageError;
  }
  if (opt.output.empty()) {
    out << text;
    return 0;
  }
  std::ofstream file(opt.output, std::ios::binary);
  if (!file) {
    err << "c error: cannot write '" << opt.output << "'\n";
    return kUsageError;
  }
  file << text;
  return 0;
}

struct BenchInput {
  std::string name;
  Instance instance;
};

std::string num(double x) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(6) << x;
  return s.str();
}

int cmd_bench(const BenchOptions& opt, const SolveOptions& solver, std::ostream& out, std::ostream& err) {
  std::vector<BenchInput> inputs;
  try {
    if (!opt.dir.empty()) {
      if (!std::filesystem::is_directory(opt.dir)) {
        err << "c error: not a directory '" << opt.dir << "'\n";
        return kUsageError;
      }
      std::vector<std::filesystem::path> files;
      for (const auto& entry : std::filesystem::directory_iterator(opt.dir)) {
        const auto ext = entry.path().extension();
        if (entry.is_regular_file() && (ext == ".cnf" || ext == ".wcnf")) files.push_back(entry.path());
      }
      std::sort(files.begin(), files.end());
      for (const auto& f : files) inputs.push_back({f.filename().string(), parse_dimacs_file(f.string())});
    }
    for (int i = 0; i < opt.count; ++i) {
      const std::uint64_t s = opt.seed + static_cast<std::uint64_t>(i);
      inputs.push_back({"gen_n" + std::to_string(opt.n) + "_m" + std::to_string(opt.m) + "_l" +
                            std::to_string(opt.len) + "_s" + std::to_string(s),
                        parse_dimacs_string(generate_random(opt.n, opt.m, opt.len, s))});
    }
  } catch (const std::exception& e) {
    err << "c error: " << e.what() << "\n";
    return kUsageError;
  }
  if (inputs.empty()) {
    err << "c error: empty input set\n";
    return kUsageError;
  }

  SolveOptions per = solver;
  per.mode = opt.mode;
  per.timeout = opt.timeout;
  const bool complete = opt.mode == "complete";

  out << "kind,name,n,m,mode,best_unsat,oracle_unsat,proved,time_to_best,time_total,nodes,sdp_solves,t,value\n";
  std::vector<double> solved_times;
  for (const auto& input : inputs) {
    const Instance& inst = input.instance;
    std::vector<std::pair<double, int>> trace;
    const EmitFn emit = [&trace](const Incumbent& inc) { trace.emplace_back(inc.found_at, inc.unsat); };
    BranchAndBound search(inst, to_config(per));
    const SearchResult r = complete ? search.solve_complete(emit) : search.solve_incomplete(emit);
    std::optional<int> oracle_unsat;
    if (inst.num_vars() <= oracle::kMaxBruteForceVars) oracle_unsat = oracle::brute_force(inst).min_unsat;
    const bool proved = complete && r.status == SearchStatus::Optimum;
    if (proved) solved_times.push_back(r.stats.wall_time);

    const int total = inst.num_clauses() + inst.tautologies() + inst.empty_clauses();
    const std::string prefix =
        input.name + "," + std::to_string(inst.num_vars()) + "," + std::to_string(total) + "," + opt.mode;
    out << "instance," << prefix << "," << r.incumbent.unsat << ","
        << (oracle_unsat ? std::to_string(*oracle_unsat) : "") << "," << (proved ? "true" : "false") << ","
        << num(r.incumbent.found_at) << "," << num(r.stats.wall_time) << "," << r.stats.nodes_popped << ","
        << r.stats.sdp_solves << ",,\n";

    const int reference = oracle_unsat ? *oracle_unsat : r.incumbent.unsat;
    const int best_sat = total - reference;
    for (const auto& [t, unsat] : trace) {
      const double ratio = best_sat > 0 ? static_cast<double>(total - unsat) / best_sat : 1.0;
      out << "ratio," << prefix << "," << unsat << "," << (oracle_unsat ? std::to_string(*oracle_unsat) : "")
          << ",,,,,," << num(t) << "," << num(ratio) << "\n";
    }
  }
  std::sort(solved_times.begin(), solved_times.end());
  for (std::size_t i = 0; i < solved_times.size(); ++i) {
    out << "cactus,,,," << opt.mode << ",,,,,,,," << num(solved_times[i]) << "," << (i + 1) << "\n";
  }
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"MIXSAT: low-rank SDP branch and bound for MAXSAT", "mixsat"};
  app.require_subcommand(1);

  SolveOptions solve_opt;
  std::uint64_t env_seed = 0;
  if (const char* env = std::getenv("MIXSAT_SEED")) {
    try {
      env_seed = std::stoull(env);
    } catch (const std::exception&) {
      err << "c error: MIXSAT_SEED is not an unsigned integer\n";
      return kUsageError;
    }
  }
  solve_opt.seed = env_seed;

  auto* solve_cmd = app.add_subcommand("solve", "solve a DIMACS CNF/WCNF file");
  solve_cmd->add_option("input", solve_opt.input, "instance path")->required();
  add_solver_flags(*solve_cmd, solve_opt);

  GenerateOptions gen_opt;
  gen_opt.seed = env_seed;
  auto* gen_cmd = app.add_subcommand("generate", "write a random MAX-kSAT instance");
  gen_cmd->add_option("-n,--vars", gen_opt.n, "variables")->required()->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("-m,--clauses", gen_opt.m, "clauses")->required()->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("-l,--len", gen_opt.len, "literals per clause")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--seed", gen_opt.seed, "random seed");
  gen_cmd->add_option("-o,--output", gen_opt.output, "output file (default stdout)");

  BenchOptions bench_opt;
  SolveOptions bench_solver;
  bench_opt.seed = env_seed;
  bench_solver.seed = env_seed;
  auto* bench_cmd = app.add_subcommand("bench", "solve a set of instances and print CSV");
  bench_cmd->add_option("--dir", bench_opt.dir, "directory of .cnf/.wcnf files");
  bench_cmd->add_option("--gen-n", bench_opt.n, "generated instances: variables")->check(CLI::NonNegativeNumber);
  bench_cmd->add_option("--gen-m", bench_opt.m, "generated instances: clauses")->check(CLI::NonNegativeNumber);
  bench_cmd->add_option("--gen-len", bench_opt.len, "generated instances: clause length")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--gen-count", bench_opt.count, "number of generated instances")
      ->check(CLI::NonNegativeNumber);
  bench_cmd->add_option("--gen-seed", bench_opt.seed, "seed of the first generated instance");
  bench_cmd->add_option("--mode", bench_opt.mode, "complete or incomplete")
      ->check(CLI::IsMember({"complete", "incomplete"}));
  bench_cmd->add_option("--timeout", bench_opt.timeout, "per-instance limit in seconds")
      ->check(CLI::NonNegativeNumber);
  bench_cmd->add_option("--seed", bench_solver.seed, "solver seed");
  bench_cmd->add_option("--eps", bench_solver.eps, "SDP stopping gap")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--rank", bench_solver.rank, "factor rank, 0 = automatic")
      ->check(CLI::NonNegativeNumber);
  bench_cmd->add_option("--depth-limit", bench_solver.depth_limit, "variables branched per solved root")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--rounding-c", bench_solver.rounding_c, "rounding budget constant")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (*solve_cmd) return cmd_solve(solve_opt, out, err);
    if (*gen_cmd) return cmd_generate(gen_opt, out, err);
    return cmd_bench(bench_opt, bench_solver, out, err);
  } catch (const std::invalid_argument& e) {
    err << "c error: " << e.what() << "\n";
    return kUsageError;
  }
}

}  // namespace mixsat
