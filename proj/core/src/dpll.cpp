#include "safecomp/dpll.hpp"

#include <optional>

#include "safecomp/errors.hpp"
#include "safecomp/task_ids.hpp"

namespace safecomp {

namespace {

constexpr std::uint8_t kForced = 0;
constexpr std::uint8_t kDecision = 1;

struct TrailEntry {
  std::uint32_t var;  // 1-based
  bool value;
  std::uint8_t flag;
};

struct DpllView {
  DpllMode mode;
  CnfFormula formula;
  std::vector<TrailEntry> trail;
};

DpllView unpack(const Value& state) {
  const auto& parts = state.items();
  if (parts.size() != 3) raise(Errc::BadArgument, "dpll state needs 3 fields");
  DpllView view;
  view.mode = static_cast<DpllMode>(parts[0].as_nat().as_u64());

  const auto& formula = parts[1].items();
  view.formula.num_vars = static_cast<std::uint32_t>(formula[0].as_nat().as_u64());
  for (const Value& clause : formula[1].items()) {
    Clause c;
    for (const Value& lit : clause.items())
      c.push_back(static_cast<int>(unzigzag(lit.as_nat())));
    view.formula.clauses.push_back(std::move(c));
  }

  for (const Value& entry : parts[2].items()) {
    const auto& fields = entry.items();
    view.trail.push_back(TrailEntry{static_cast<std::uint32_t>(fields[0].as_nat().as_u64()),
                                    fields[1].as_nat().as_u64() != 0,
                                    static_cast<std::uint8_t>(fields[2].as_nat().as_u64())});
  }
  return view;
}

Value pack(const DpllView& view) {
  std::vector<Value> clauses;
  clauses.reserve(view.formula.clauses.size());
  for (const Clause& clause : view.formula.clauses) {
    std::vector<Value> lits;
    lits.reserve(clause.size());
    for (int lit : clause) lits.push_back(Value::nat(zigzag(lit)));
    clauses.push_back(Value::list(std::move(lits)));
  }

  std::vector<Value> trail;
  trail.reserve(view.trail.size());
  for (const TrailEntry& e : view.trail) {
    trail.push_back(Value::tuple({Value::nat(e.var), Value::nat(e.value ? 1 : 0),
                                  Value::nat(e.flag)}));
  }

  return Value::tuple(
      {Value::nat(static_cast<std::uint64_t>(view.mode)),
       Value::tuple({Value::nat(view.formula.num_vars), Value::list(std::move(clauses))}),
       Value::list(std::move(trail))});
}

enum class ClauseState { Satisfied, Falsified, Unit, Open };

ClauseState classify(const Clause& clause, const std::vector<int>& assigned, int* unit_lit) {
  std::size_t unassigned = 0;
  int last_free = 0;
  for (int lit : clause) {
    const std::uint32_t var = static_cast<std::uint32_t>(lit < 0 ? -lit : lit);
    const int val = assigned[var];  // -1 unassigned, 0 false, 1 true
    if (val < 0) {
      ++unassigned;
      last_free = lit;
    } else if ((lit > 0) == (val == 1)) {
      return ClauseState::Satisfied;
    }
  }
  if (unassigned == 0) return ClauseState::Falsified;
  if (unassigned == 1) {
    *unit_lit = last_free;
    return ClauseState::Unit;
  }
  return ClauseState::Open;
}

Value dpll_step(const Value& state) {
  DpllView view = unpack(state);
  if (view.mode != DpllMode::Search) return state;

  std::vector<int> assigned(view.formula.num_vars + 1, -1);
  for (const TrailEntry& e : view.trail) assigned[e.var] = e.value ? 1 : 0;

  bool conflict = false;
  bool any_unit = false;
  bool all_satisfied = true;
  int ignored;
  for (const Clause& clause : view.formula.clauses) {
    switch (classify(clause, assigned, &ignored)) {
      case ClauseState::Falsified: conflict = true; break;
      case ClauseState::Unit: any_unit = true; all_satisfied = false; break;
      case ClauseState::Open: all_satisfied = false; break;
      case ClauseState::Satisfied: break;
    }
    if (conflict) break;
  }

  if (conflict) {
    // One backtrack: drop forced assignments, flip the deepest decision.
    while (!view.trail.empty() && view.trail.back().flag == kForced) view.trail.pop_back();
    if (view.trail.empty()) {
      view.mode = DpllMode::Unsat;
      return pack(view);
    }
    TrailEntry& decision = view.trail.back();
    decision.value = false;
    decision.flag = kForced;
    return pack(view);
  }

  if (any_unit) {
    // One propagation round: a single in-order pass assigning unit literals.
    for (const Clause& clause : view.formula.clauses) {
      int unit_lit = 0;
      if (classify(clause, assigned, &unit_lit) == ClauseState::Unit) {
        const std::uint32_t var = static_cast<std::uint32_t>(unit_lit < 0 ? -unit_lit : unit_lit);
        const bool value = unit_lit > 0;
        assigned[var] = value ? 1 : 0;
        view.trail.push_back(TrailEntry{var, value, kForced});
      }
    }
    return pack(view);
  }

  if (all_satisfied) {
    view.mode = DpllMode::Sat;
    return pack(view);
  }

  // Decide: lowest unassigned variable, true first.
  for (std::uint32_t var = 1; var <= view.formula.num_vars; ++var) {
    if (assigned[var] < 0) {
      view.trail.push_back(TrailEntry{var, true, kDecision});
      return pack(view);
    }
  }
  // All variables assigned with nothing falsified or open: satisfied.
  view.mode = DpllMode::Sat;
  return pack(view);
}

}  // namespace

Value dpll_initial_state(const CnfFormula& f) {
  DpllView view;
  view.mode = DpllMode::Search;
  view.formula = f;
  return pack(view);
}

DpllMode dpll_mode(const Value& state) {
  return static_cast<DpllMode>(state.items().at(0).as_nat().as_u64());
}

SatVerdict dpll_verdict(const Value& state) {
  const DpllView view = unpack(state);
  if (view.mode == DpllMode::Search) raise(Errc::BadArgument, "dpll state not a fixpoint");
  if (view.mode == DpllMode::Unsat) return SatVerdict{false, {}};
  SatVerdict verdict{true, std::vector<bool>(view.formula.num_vars, false)};
  for (const TrailEntry& e : view.trail) verdict.assignment[e.var - 1] = e.value;
  return verdict;
}

TaskProgram dpll_task() {
  TaskProgram task;
  task.name = "dpll";
  task.task_id = task_descriptor_id("dpll", 1);
  task.step = dpll_step;
  task.render = [](const Value& state) -> std::string {
    const DpllMode mode = dpll_mode(state);
    if (mode == DpllMode::Search) return "search:" + state.to_string();
    if (mode == DpllMode::Unsat) return "unsat";
    const SatVerdict v = dpll_verdict(state);
    std::string out = "sat:";
    for (std::size_t i = 0; i < v.assignment.size(); ++i) {
      if (i) out.push_back(' ');
      out += v.assignment[i] ? std::to_string(i + 1) : "-" + std::to_string(i + 1);
    }
    return out;
  };
  task.parse_input = [](std::string_view text) {
    return dpll_initial_state(parse_dimacs(text));
  };
  return task;
}

}  // namespace safecomp
