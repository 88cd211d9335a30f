#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace safecomp {

using Clause = std::vector<int>;  // nonzero signed literals

struct CnfFormula {
  std::uint32_t num_vars = 0;
  std::vector<Clause> clauses;

  bool operator==(const CnfFormula&) const = default;
};

/// Standard DIMACS CNF: 'c' comment lines, a 'p cnf <vars> <clauses>' header,
/// zero-terminated clauses. ParseError carries the offending line number;
/// HeaderMismatch when the declared counts disagree with the body.
CnfFormula parse_dimacs(std::string_view text);

std::string emit_dimacs(const CnfFormula& f);

struct SatVerdict {
  bool satisfiable = false;
  std::vector<bool> assignment;  // 1-based semantics: assignment[v-1] for variable v

  bool operator==(const SatVerdict&) const = default;
};

/// Exhaustive truth-table oracle. TooManyVariables beyond 24 variables.
SatVerdict brute_force_sat(const CnfFormula& f);

/// True iff the assignment satisfies every clause.
bool satisfies(const CnfFormula& f, const std::vector<bool>& assignment);

}  // namespace safecomp
