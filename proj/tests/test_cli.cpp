#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mixsat/cli.hpp"
#include "mixsat/generator.hpp"
#include "mixsat/oracle.hpp"

using namespace mixsat;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "mixsat");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  Run r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::filesystem::path scratch() {
  const auto dir = std::filesystem::temp_directory_path() / "mixsat_cli_test";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string write_file(const std::string& name, const std::string& text) {
  const auto path = scratch() / name;
  std::ofstream(path) << text;
  return path.string();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream s(text);
  for (std::string line; std::getline(s, line);) out.push_back(line);
  return out;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream s(line);
  while (std::getline(s, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

TEST_CASE("solve reports the optimum in competition format") {
  const auto path = write_file("three.cnf", "p cnf 2 3\n1 2 0\n-1 2 0\n-2 0\n");
  const auto r = run({"solve", path});
  CHECK(r.code == 0);
  const auto out = lines(r.out);
  REQUIRE(out.size() >= 3);
  CHECK(out[out.size() - 3] == "o 1");
  CHECK(out[out.size() - 2] == "s OPTIMUM FOUND");
  const auto v = split(out.back(), ' ');
  CHECK(v.front() == "v");
  CHECK(v.size() == 3);
  CHECK(r.err.find("c nodes") != std::string::npos);
}

TEST_CASE("satisfiable instance reaches o 0") {
  const auto path = write_file("sat.cnf", "p cnf 3 3\n1 0\n-1 2 0\n-2 3 0\n");
  const auto r = run({"solve", "--mode", "incomplete", path});
  CHECK(r.code == 0);
  CHECK(r.out.find("o 0\n") != std::string::npos);
  CHECK(r.out.find("s UNKNOWN") != std::string::npos);
  CHECK(r.out.find("v 1 2 3") != std::string::npos);
}

TEST_CASE("tiny timeout still prints a solution") {
  const auto path = write_file("big.cnf", generate_random(400, 1600, 2, 1));
  const auto r = run({"solve", "--timeout", "0.001", path});
  CHECK(r.code == 0);
  CHECK(r.out.find("s UNKNOWN") != std::string::npos);
  CHECK(r.out.rfind("o ", 0) == 0);
  const auto out = lines(r.out);
  CHECK(split(out.back(), ' ').size() == 401);
}

TEST_CASE("input errors exit with code 2") {
  CHECK(run({"solve", (scratch() / "missing.cnf").string()}).code == 2);
  CHECK(run({"solve", write_file("bad.cnf", "p cnf 2 1\n1 3 0\n")}).code == 2);
  CHECK(run({"solve", write_file("count.cnf", "p cnf 2 2\n1 0\n")}).code == 2);
  CHECK(run({"solve", "--mode", "sideways", write_file("ok.cnf", "p cnf 1 1\n1 0\n")}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"generate", "-n", "3", "-m", "2", "-l", "4"}).code == 2);
}

TEST_CASE("generate is deterministic and matches the library") {
  const auto a = run({"generate", "-n", "10", "-m", "30", "-l", "3", "--seed", "4"});
  const auto b = run({"generate", "-n", "10", "-m", "30", "-l", "3", "--seed", "4"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out == generate_random(10, 30, 3, 4));
  const auto path = (scratch() / "gen.cnf").string();
  CHECK(run({"generate", "-n", "10", "-m", "30", "-l", "3", "--seed", "4", "-o", path}).code == 0);
  std::ifstream in(path);
  CHECK(std::string(std::istreambuf_iterator<char>(in), {}) == a.out);
}

TEST_CASE("seed from the environment, overridden by the flag") {
  ::setenv("MIXSAT_SEED", "17", 1);
  const auto env = run({"generate", "-n", "8", "-m", "20", "-l", "2"});
  const auto flag = run({"generate", "-n", "8", "-m", "20", "-l", "2", "--seed", "3"});
  ::setenv("MIXSAT_SEED", "x", 1);
  const auto bad = run({"generate", "-n", "8", "-m", "20", "-l", "2"});
  ::unsetenv("MIXSAT_SEED");
  CHECK(env.out == generate_random(8, 20, 2, 17));
  CHECK(flag.out == generate_random(8, 20, 2, 3));
  CHECK(bad.code == 2);
}

TEST_CASE("bench proves every small instance and writes a rectangular CSV") {
  const auto r = run({"bench", "--gen-n", "12", "--gen-m", "48", "--gen-len", "2", "--gen-count", "10", "--gen-seed",
                      "100"});
  REQUIRE(r.code == 0);
  const auto out = lines(r.out);
  REQUIRE_FALSE(out.empty());
  const auto header = split(out.front(), ',');
  CHECK(header.size() == 14);
  int instances = 0;
  int cactus = 0;
  for (std::size_t i = 1; i < out.size(); ++i) {
    const auto cells = split(out[i], ',');
    REQUIRE(cells.size() == header.size());
    if (cells[0] == "instance") {
      ++instances;
      CHECK(cells[7] == "true");
      CHECK(cells[5] == cells[6]);
      const std::uint64_t seed = 100 + static_cast<std::uint64_t>(instances - 1);
      CHECK(std::stoi(cells[6]) == oracle::brute_force(parse_dimacs_string(generate_random(12, 48, 2, seed))).min_unsat);
    } else if (cells[0] == "ratio") {
      CHECK(std::stod(cells[13]) <= 1.0 + 1e-12);
    } else if (cells[0] == "cactus") {
      ++cactus;
    }
  }
  CHECK(instances == 10);
  CHECK(cactus == 10);
}

TEST_CASE("bench reads a directory") {
  const auto dir = scratch() / "suite";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "a.cnf") << generate_random(8, 24, 2, 1);
  std::ofstream(dir / "b.wcnf") << "p wcnf 2 2 20\n10 1 0\n10 -1 2 0\n";
  std::ofstream(dir / "skip.txt") << "not an instance\n";
  const auto r = run({"bench", "--dir", dir.string(), "--mode", "incomplete", "--timeout", "2"});
  CHECK(r.code == 0);
  CHECK(r.out.find("instance,a.cnf,8,24,incomplete") != std::string::npos);
  CHECK(r.out.find("instance,b.wcnf,2,2,incomplete,0") != std::string::npos);
  CHECK(r.out.find("skip") == std::string::npos);
}

TEST_CASE("bench rejects an empty input set") {
  CHECK(run({"bench"}).code == 2);
  const auto empty = scratch() / "empty_suite";
  std::filesystem::create_directories(empty);
  CHECK(run({"bench", "--dir", empty.string()}).code == 2);
}
