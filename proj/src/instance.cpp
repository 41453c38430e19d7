#include "mixsat/instance.hpp"

#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>

namespace mixsat {

Instance Instance::from_dimacs_clauses(int num_vars,
                                       const std::vector<std::vector<int>>& clauses) {
  if (num_vars < 0) throw ParseError("negative variable count");
  Instance inst;
  inst.num_vars_ = num_vars;
  inst.occurrences_.resize(static_cast<std::size_t>(num_vars) + 1);

  // seen[v] holds the sign recorded for v in the clause being built, 0 otherwise
  std::vector<std::int8_t> seen(static_cast<std::size_t>(num_vars) + 1, 0);
  for (const auto& raw : clauses) {
    Clause clause;
    bool tautology = false;
    for (int lit : raw) {
      if (lit == 0) throw ParseError("literal 0 inside clause");
      const long long var = lit < 0 ? -static_cast<long long>(lit) : lit;
      if (var > num_vars) {
        throw ParseError("literal " + std::to_string(lit) + " out of range (n = " +
                         std::to_string(num_vars) + ")");
      }
      const auto sign = static_cast<std::int8_t>(lit > 0 ? 1 : -1);
      auto& mark = seen[static_cast<std::size_t>(var)];
      if (mark == sign) continue;
      if (mark == -sign) {
        tautology = true;
        continue;
      }
      mark = sign;
      clause.literals.push_back({static_cast<Var>(var), sign});
    }
    for (int lit : raw) seen[static_cast<std::size_t>(lit < 0 ? -lit : lit)] = 0;

    if (tautology) {
      ++inst.tautologies_;
      continue;
    }
    if (clause.literals.empty()) {
      ++inst.empty_clauses_;
      continue;
    }
    const auto id = static_cast<ClauseId>(inst.clauses_.size());
    for (std::size_t p = 0; p < clause.literals.size(); ++p) {
      const auto& l = clause.literals[p];
      inst.occurrences_[static_cast<std::size_t>(l.var)].push_back(
          {id, l.sign, static_cast<std::int32_t>(p)});
    }
    inst.nnz_ += clause.literals.size();
    inst.clauses_.push_back(std::move(clause));
  }
  return inst;
}

namespace {

long long to_integer(std::string_view token, std::size_t line_no) {
  long long value = 0;
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ParseError("line " + std::to_string(line_no) + ": expected integer, got '" +
                     std::string(token) + "'");
  }
  return value;
}

}  // namespace

Instance parse_dimacs(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  bool weighted = false;
  long long num_vars = 0;
  long long declared = 0;
  std::optional<long long> top;
  std::optional<long long> soft_weight;

  std::vector<std::vector<int>> clauses;
  std::vector<int> current;
  bool expect_weight = true;

  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream tokens(line);
    std::string tok;
    if (!(tokens >> tok)) continue;
    if (tok[0] == 'c') continue;
    if (tok == "%") break;
    if (tok == "p") {
      if (have_header) throw ParseError("line " + std::to_string(line_no) + ": duplicate header");
      std::string format, n_tok, m_tok, top_tok;
      if (!(tokens >> format >> n_tok >> m_tok)) {
        throw ParseError("line " + std::to_string(line_no) + ": malformed header");
      }
      if (format == "wcnf") {
        weighted = true;
      } else if (format != "cnf") {
        throw ParseError("line " + std::to_string(line_no) + ": unknown format '" + format + "'");
      }
      num_vars = to_integer(n_tok, line_no);
      declared = to_integer(m_tok, line_no);
      if (num_vars < 0 || declared < 0 || num_vars > 100'000'000) {
        throw ParseError("line " + std::to_string(line_no) + ": malformed header");
      }
      if (tokens >> top_tok) {
        if (!weighted) throw ParseError("line " + std::to_string(line_no) + ": malformed header");
        top = to_integer(top_tok, line_no);
      }
      if (tokens >> tok) throw ParseError("line " + std::to_string(line_no) + ": malformed header");
      have_header = true;
      continue;
    }
    if (!have_header) throw ParseError("line " + std::to_string(line_no) + ": clause before header");

    do {
      const long long value = to_integer(tok, line_no);
      if (weighted && expect_weight) {
        if (value <= 0) throw ParseError("line " + std::to_string(line_no) + ": nonpositive weight");
        if (top && value >= *top) {
          throw ParseError("line " + std::to_string(line_no) +
                           ": hard clauses (partial MAXSAT) are not supported");
        }
        if (soft_weight && *soft_weight != value) {
          throw ParseError("line " + std::to_string(line_no) +
                           ": non-uniform soft weights (weighted MAXSAT) are not supported");
        }
        soft_weight = value;
        expect_weight = false;
        continue;
      }
      if (value == 0) {
        clauses.push_back(std::move(current));
        current.clear();
        expect_weight = true;
        continue;
      }
      if (value > num_vars || value < -num_vars) {
        throw ParseError("line " + std::to_string(line_no) + ": literal " + std::to_string(value) +
                         " out of range (n = " + std::to_string(num_vars) + ")");
      }
      current.push_back(static_cast<int>(value));
    } while (tokens >> tok);
  }

  if (!have_header) throw ParseError("missing 'p cnf' / 'p wcnf' header");
  if (!current.empty() || !expect_weight) throw ParseError("last clause is not terminated by 0");
  if (static_cast<long long>(clauses.size()) != declared) {
    throw ParseError("header declares " + std::to_string(declared) + " clauses, found " +
                     std::to_string(clauses.size()));
  }
  return Instance::from_dimacs_clauses(static_cast<int>(num_vars), clauses);
}

Instance parse_dimacs_string(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_dimacs(in);
}

Instance parse_dimacs_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return parse_dimacs(in);
}

std::string to_dimacs(const Instance& instance) {
  std::ostringstream out;
  out << "p cnf " << instance.num_vars() << ' ' << instance.num_clauses() << '\n';
  for (const auto& clause : instance.clauses()) {
    for (const auto& l : clause.literals) out << static_cast<int>(l.sign) * l.var << ' ';
    out << "0\n";
  }
  return out.str();
}

int evaluate(const Instance& instance, std::span<const std::int8_t> values) {
  int unsat = instance.empty_clauses();
  for (const auto& clause : instance.clauses()) {
    bool satisfied = false;
    for (const auto& l : clause.literals) {
      if (l.sign * values[static_cast<std::size_t>(l.var)] > 0) {
        satisfied = true;
        break;
      }
    }
    if (!satisfied) ++unsat;
  }
  return unsat;
}

}  // namespace mixsat
