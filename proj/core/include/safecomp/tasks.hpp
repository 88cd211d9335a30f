#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "safecomp/iterative.hpp"
#include "safecomp/value.hpp"

namespace safecomp {

// Iterative factorial over {n, acc} pairs: one multiplication per step,
// fixpoint at n = 0.
Value factorial_state(const Natural& n, const Natural& acc);
Value factorial_initial(std::uint64_t n);
TaskProgram factorial_task();

/// The degenerate one-step construction: inj(d) = ⟨d, 0⟩, the step applies
/// the reference function once and tags the state done.
Value trivial_inj(const Value& d);
Value trivial_proj(const Value& state);
TaskProgram trivial_lift(std::string name, std::function<Value(const Value&)> reference);

/// Shared task table keyed by descriptor digest; the arbiter resolves step
/// functions through it.
class TaskRegistry {
 public:
  void add(TaskProgram task);

  const TaskProgram& by_id(const Digest& task_id) const;      // UnknownTask
  const TaskProgram& by_name(const std::string& name) const;  // UnknownTask
  bool contains(const Digest& task_id) const { return by_id_.contains(task_id.hex()); }

  std::vector<std::string> names() const;

 private:
  std::map<std::string, TaskProgram> by_id_;    // digest hex -> task
  std::map<std::string, std::string> by_name_;  // name -> digest hex
};

/// Registry with every bundled task: factorial, dpll, the two Turing
/// machines and two trivial reference lifts.
TaskRegistry default_registry();

}  // namespace safecomp
