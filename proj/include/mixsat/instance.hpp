#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mixsat {

// Variables are 1-based so that variable i maps onto factor column i and
// column 0 stays reserved for the truth direction.
using Var = std::int32_t;
using ClauseId = std::int32_t;

struct Literal {
  Var var = 0;
  std::int8_t sign = 1;  // +1 plain, -1 negated

  friend bool operator==(const Literal&, const Literal&) = default;
};

struct Clause {
  std::vector<Literal> literals;

  int size() const { return static_cast<int>(literals.size()); }
};

struct Occurrence {
  ClauseId clause = 0;
  std::int8_t sign = 1;
  std::int32_t position = 0;  // index of the literal inside the clause

  friend bool operator==(const Occurrence&, const Occurrence&) = default;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Immutable clause model. Duplicate literals are merged, tautologies are
// dropped (and counted), empty clauses are counted but not stored.
class Instance {
 public:
  Instance() = default;

  // Clauses in DIMACS signed-integer form, without the terminating 0.
  static Instance from_dimacs_clauses(int num_vars,
                                      const std::vector<std::vector<int>>& clauses);

  int num_vars() const { return num_vars_; }
  int num_clauses() const { return static_cast<int>(clauses_.size()); }
  const Clause& clause(ClauseId j) const { return clauses_[static_cast<std::size_t>(j)]; }
  std::span<const Clause> clauses() const { return clauses_; }
  std::span<const Occurrence> occurrences(Var v) const {
    return occurrences_[static_cast<std::size_t>(v)];
  }

  std::size_t nnz() const { return nnz_; }
  int tautologies() const { return tautologies_; }
  int empty_clauses() const { return empty_clauses_; }

 private:
  int num_vars_ = 0;
  std::vector<Clause> clauses_;
  std::vector<std::vector<Occurrence>> occurrences_;  // indexed 0..n, slot 0 unused
  std::size_t nnz_ = 0;
  int tautologies_ = 0;
  int empty_clauses_ = 0;
};

// DIMACS "p cnf" and unweighted "p wcnf" (all soft weights equal, no hard
// clauses). Throws ParseError.
Instance parse_dimacs(std::istream& in);
Instance parse_dimacs_string(std::string_view text);
Instance parse_dimacs_file(const std::string& path);

std::string to_dimacs(const Instance& instance);

// values[v] in {-1,+1} for v = 1..n; values[0] is ignored.
int evaluate(const Instance& instance, std::span<const std::int8_t> values);

}  // namespace mixsat
