#include "safecomp/tasks.hpp"

#include <algorithm>

#include "safecomp/dpll.hpp"
#include "safecomp/errors.hpp"
#include "safecomp/task_ids.hpp"
#include "safecomp/turing.hpp"

namespace safecomp {

Value factorial_state(const Natural& n, const Natural& acc) {
  return Value::tuple({Value::nat(n), Value::nat(acc)});
}

Value factorial_initial(std::uint64_t n) {
  return factorial_state(Natural(n), Natural(1));
}

TaskProgram factorial_task() {
  TaskProgram task;
  task.name = "factorial";
  task.task_id = task_descriptor_id("factorial", 1);
  task.step = [](const Value& state) -> Value {
    const auto& fields = state.items();
    const Natural& n = fields[0].as_nat();
    if (n.is_zero()) return state;
    return factorial_state(n.minus_one(), n.times(fields[1].as_nat()));
  };
  task.render = [](const Value& state) {
    const auto& fields = state.items();
    return "{" + fields[0].as_nat().to_decimal() + "," + fields[1].as_nat().to_decimal() + "}";
  };
  task.parse_input = [](std::string_view text) -> Value {
    const std::size_t comma = text.find(',');
    if (comma == std::string_view::npos)
      return factorial_state(Natural::from_decimal(text), Natural(1));
    return factorial_state(Natural::from_decimal(text.substr(0, comma)),
                           Natural::from_decimal(text.substr(comma + 1)));
  };
  return task;
}

Value trivial_inj(const Value& d) {
  return Value::tuple({d, Value::nat(0)});
}

Value trivial_proj(const Value& state) {
  return state.items().at(0);
}

TaskProgram trivial_lift(std::string name, std::function<Value(const Value&)> reference) {
  TaskProgram task;
  task.name = "trivial-" + name;
  task.task_id = task_descriptor_id(task.name, 1);
  task.step = [reference = std::move(reference)](const Value& state) -> Value {
    const auto& fields = state.items();
    if (!fields.at(1).as_nat().is_zero()) return state;
    return Value::tuple({reference(fields[0]), Value::nat(1)});
  };
  task.parse_input = [](std::string_view text) {
    return trivial_inj(Value::nat(Natural::from_decimal(text)));
  };
  return task;
}

void TaskRegistry::add(TaskProgram task) {
  const std::string key = task.task_id.hex();
  by_name_[task.name] = key;
  by_id_[key] = std::move(task);
}

const TaskProgram& TaskRegistry::by_id(const Digest& task_id) const {
  const auto it = by_id_.find(task_id.hex());
  if (it == by_id_.end()) raise(Errc::UnknownTask, "no task with digest " + task_id.hex());
  return it->second;
}

const TaskProgram& TaskRegistry::by_name(const std::string& name) const {
  const auto it = by_name_.find(name);
  if (it == by_name_.end()) raise(Errc::UnknownTask, "no task named '" + name + "'");
  return by_id_.at(it->second);
}

std::vector<std::string> TaskRegistry::names() const {
  std::vector<std::string> out;
  out.reserve(by_name_.size());
  for (const auto& [name, _] : by_name_) out.push_back(name);
  return out;
}

TaskRegistry default_registry() {
  TaskRegistry registry;
  registry.add(factorial_task());
  registry.add(dpll_task());
  registry.add(tm_task(unary_increment_machine()));
  registry.add(tm_task(binary_successor_machine()));
  registry.add(trivial_lift("identity", [](const Value& v) { return v; }));
  registry.add(trivial_lift("square", [](const Value& v) {
    const Natural& n = v.as_nat();
    return Value::nat(n.times(n));
  }));
  return registry;
}

}  // namespace safecomp
