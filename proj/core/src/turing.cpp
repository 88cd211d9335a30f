#include "safecomp/turing.hpp"

#include "safecomp/errors.hpp"
#include "safecomp/task_ids.hpp"

namespace safecomp {

void TuringMachine::validate() const {
  if (num_states == 0 || num_symbols == 0) raise(Errc::BadArgument, "empty state or symbol set");
  if (initial_state >= num_states) raise(Errc::BadArgument, "initial state out of range");
  if (blank >= num_symbols) raise(Errc::BadArgument, "blank symbol out of range");
  for (std::uint32_t q : accepting)
    if (q >= num_states) raise(Errc::BadArgument, "accepting state out of range");
  for (std::uint32_t s : input_symbols)
    if (s >= num_symbols) raise(Errc::BadArgument, "input symbol out of range");
  for (const auto& [key, action] : delta) {
    if (key.first >= num_states || key.second >= num_symbols ||
        action.next_state >= num_states || action.write >= num_symbols)
      raise(Errc::BadArgument, "transition references unknown state or symbol");
  }
  for (std::uint32_t q = 0; q < num_states; ++q) {
    if (accepting.contains(q)) continue;
    for (std::uint32_t s = 0; s < num_symbols; ++s)
      if (!delta.contains({q, s}))
        raise(Errc::BadArgument, "delta not total at state " + std::to_string(q) + ", symbol " +
                                     std::to_string(s));
  }
}

Value tm_config_to_value(const TmConfig& cfg) {
  std::vector<Value> cells;
  cells.reserve(cfg.tape.size());
  for (const auto& [pos, sym] : cfg.tape)
    cells.push_back(Value::tuple({Value::nat(zigzag(pos)), Value::nat(sym)}));
  return Value::tuple(
      {Value::list(std::move(cells)), Value::nat(cfg.q), Value::nat(zigzag(cfg.head))});
}

TmConfig tm_config_from_value(const Value& v) {
  const auto& parts = v.items();
  TmConfig cfg;
  for (const Value& cell : parts[0].items()) {
    const auto& fields = cell.items();
    cfg.tape[unzigzag(fields[0].as_nat())] =
        static_cast<std::uint32_t>(fields[1].as_nat().as_u64());
  }
  cfg.q = static_cast<std::uint32_t>(parts[1].as_nat().as_u64());
  cfg.head = unzigzag(parts[2].as_nat());
  return cfg;
}

TaskProgram tm_task(const TuringMachine& machine) {
  machine.validate();
  TaskProgram task;
  task.name = "tm-" + machine.name;
  task.task_id = task_descriptor_id(task.name, 1);
  task.step = [machine](const Value& state) -> Value {
    TmConfig cfg = tm_config_from_value(state);
    if (machine.accepting.contains(cfg.q)) return state;

    const auto cell = cfg.tape.find(cfg.head);
    const std::uint32_t sym = cell == cfg.tape.end() ? machine.blank : cell->second;
    const TuringMachine::Action& act = machine.delta.at({cfg.q, sym});

    if (act.write == machine.blank)
      cfg.tape.erase(cfg.head);  // canonical sparse tape keeps no blanks
    else
      cfg.tape[cfg.head] = act.write;
    cfg.head += act.move == TuringMachine::Move::Right ? 1 : -1;
    cfg.q = act.next_state;
    return tm_config_to_value(cfg);
  };
  task.render = [machine](const Value& state) {
    const TmConfig cfg = tm_config_from_value(state);
    try {
      return std::to_string(tm_proj(machine, cfg));
    } catch (const Error&) {
      return state.to_string();
    }
  };
  task.parse_input = [machine](std::string_view text) {
    return tm_config_to_value(tm_inj(machine, Natural::from_decimal(text).as_u64()));
  };
  return task;
}

TmConfig tm_inj(const TuringMachine& machine, std::uint64_t d) {
  const auto& conv = machine.convention;
  TmConfig cfg;
  cfg.q = machine.initial_state;
  cfg.head = 1;
  std::int64_t pos = 1;
  switch (conv.encoding) {
    case TuringMachine::TapeConvention::Encoding::Unary:
      for (std::uint64_t i = 0; i < d; ++i) cfg.tape[pos++] = conv.mark;
      break;
    case TuringMachine::TapeConvention::Encoding::BinaryLsb: {
      std::uint64_t rest = d;
      do {
        cfg.tape[pos++] = (rest & 1) ? conv.one : conv.zero;
        rest >>= 1;
      } while (rest != 0);
      break;
    }
  }
  cfg.tape[pos] = conv.end_mark;
  return cfg;
}

std::uint64_t tm_proj(const TuringMachine& machine, const TmConfig& cfg) {
  const auto& conv = machine.convention;
  std::uint64_t value = 0;
  std::uint32_t width = 0;
  for (std::int64_t pos = 1;; ++pos) {
    const auto cell = cfg.tape.find(pos);
    const std::uint32_t sym = cell == cfg.tape.end() ? machine.blank : cell->second;
    if (sym == conv.end_mark) return value;
    if (conv.encoding == TuringMachine::TapeConvention::Encoding::Unary) {
      if (sym != conv.mark) raise(Errc::MalformedTape, "unexpected symbol in answer area");
      ++value;
    } else {
      if (sym != conv.zero && sym != conv.one)
        raise(Errc::MalformedTape, "unexpected symbol in answer area");
      if (width >= 64) raise(Errc::MalformedTape, "answer exceeds 64 bits");
      if (sym == conv.one) value |= 1ull << width;
      ++width;
    }
    if (pos > static_cast<std::int64_t>(cfg.tape.size()) + 1)
      raise(Errc::MalformedTape, "end mark missing");
  }
}

TuringMachine unary_increment_machine() {
  using Move = TuringMachine::Move;
  TuringMachine m;
  m.name = "unary-increment";
  m.num_states = 3;  // 0 scan, 1 extend, 2 accept
  m.num_symbols = 3;  // 0 blank, 1 mark, 2 end
  m.input_symbols = {1, 2};
  m.initial_state = 0;
  m.blank = 0;
  m.accepting = {2};
  m.convention = {TuringMachine::TapeConvention::Encoding::Unary, 2, 1, 0, 0};

  m.delta[{0, 1}] = {0, 1, Move::Right};  // walk over the tally
  m.delta[{0, 2}] = {1, 1, Move::Right};  // end mark becomes one more tally
  m.delta[{1, 0}] = {2, 2, Move::Right};  // re-seat the end mark
  // unreachable fillers keeping delta total
  m.delta[{0, 0}] = {2, 0, Move::Right};
  m.delta[{1, 1}] = {2, 1, Move::Right};
  m.delta[{1, 2}] = {2, 2, Move::Right};
  return m;
}

TuringMachine binary_successor_machine() {
  using Move = TuringMachine::Move;
  TuringMachine m;
  m.name = "binary-successor";
  m.num_states = 3;  // 0 ripple carry, 1 extend, 2 accept
  m.num_symbols = 4;  // 0 blank, 1 zero, 2 one, 3 end
  m.input_symbols = {1, 2, 3};
  m.initial_state = 0;
  m.blank = 0;
  m.accepting = {2};
  m.convention = {TuringMachine::TapeConvention::Encoding::BinaryLsb, 3, 0, 1, 2};

  m.delta[{0, 2}] = {0, 1, Move::Right};  // 1 -> 0, carry continues
  m.delta[{0, 1}] = {2, 2, Move::Right};  // 0 -> 1, carry absorbed
  m.delta[{0, 3}] = {1, 2, Move::Right};  // all ones: end mark becomes a 1
  m.delta[{1, 0}] = {2, 3, Move::Right};  // re-seat the end mark
  // unreachable fillers keeping delta total
  m.delta[{0, 0}] = {2, 0, Move::Right};
  m.delta[{1, 1}] = {2, 1, Move::Right};
  m.delta[{1, 2}] = {2, 2, Move::Right};
  m.delta[{1, 3}] = {2, 3, Move::Right};
  return m;
}

}  // namespace safecomp
