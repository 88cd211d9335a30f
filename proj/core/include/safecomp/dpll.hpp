#pragma once

#include <cstdint>

#include "safecomp/dimacs.hpp"
#include "safecomp/iterative.hpp"
#include "safecomp/value.hpp"

namespace safecomp {

// DPLL expressed as a fixpoint-form task. Each step performs one bounded
// unit of work: a unit-propagation round, a decision, or a backtrack. The
// fixpoints are exactly the Sat/Unsat states.
//
// State layout (canonical Value):
//   tuple( mode,                         0 = search, 1 = sat, 2 = unsat
//          tuple(num_vars, list(clause)) clause = list of zigzagged literals
//          list(tuple(var, value, flag)) the trail; flag 1 marks a decision )
//
// Decisions pick the lowest-numbered unassigned variable, true first; a
// backtrack flips the deepest decision to a forced false. Both choices are
// fixed so independent runs reproduce the certificate chain bit-exactly.

enum class DpllMode : std::uint8_t { Search = 0, Sat = 1, Unsat = 2 };

Value dpll_initial_state(const CnfFormula& f);

DpllMode dpll_mode(const Value& state);

/// Verdict of a fixpoint state; unassigned variables default to false.
/// BadArgument when the state is still searching.
SatVerdict dpll_verdict(const Value& state);

TaskProgram dpll_task();

}  // namespace safecomp
