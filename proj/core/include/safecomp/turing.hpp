#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "safecomp/iterative.hpp"
#include "safecomp/value.hpp"

namespace safecomp {

/// Single-tape Turing machine. States and tape symbols are small integers;
/// the transition function must be total on (Q \ Q_f) × Γ.
struct TuringMachine {
  std::string name;
  std::uint32_t num_states = 0;                // Q = {0 .. num_states-1}
  std::uint32_t num_symbols = 0;               // Γ = {0 .. num_symbols-1}
  std::set<std::uint32_t> input_symbols;       // Σ ⊆ Γ
  std::uint32_t initial_state = 0;             // q_0
  std::uint32_t blank = 0;                     // B
  std::set<std::uint32_t> accepting;           // Q_f

  enum class Move : std::uint8_t { Left = 0, Right = 1 };
  struct Action {
    std::uint32_t next_state;
    std::uint32_t write;
    Move move;
  };
  std::map<std::pair<std::uint32_t, std::uint32_t>, Action> delta;

  /// How numbers are laid out on the tape for inj/proj.
  struct TapeConvention {
    enum class Encoding : std::uint8_t { Unary, BinaryLsb };
    Encoding encoding = Encoding::Unary;
    std::uint32_t end_mark = 0;
    std::uint32_t mark = 0;  // unary tally symbol
    std::uint32_t zero = 0;  // binary digits, least significant first
    std::uint32_t one = 0;
  };
  TapeConvention convention;

  void validate() const;  // BadArgument when not well-formed
};

/// Machine configuration ⟨I, q, p⟩: sparse tape (blank default), current
/// state, head position. A configuration is a fixpoint iff q ∈ Q_f.
struct TmConfig {
  std::map<std::int64_t, std::uint32_t> tape;  // non-blank cells only
  std::uint32_t q = 0;
  std::int64_t head = 0;
};

Value tm_config_to_value(const TmConfig& cfg);
TmConfig tm_config_from_value(const Value& v);

/// One δ application per step; identity once an accepting state is reached.
TaskProgram tm_task(const TuringMachine& machine);

/// Writes d in the machine's input convention starting at cell 1, closed by
/// the end-mark symbol, head at 1, state q_0.
TmConfig tm_inj(const TuringMachine& machine, std::uint64_t d);

/// Reads the answer region (cell 1 up to the end mark). MalformedTape when
/// the end mark is missing.
std::uint64_t tm_proj(const TuringMachine& machine, const TmConfig& cfg);

// The two bundled machines. Both compute successor: unary uses tally marks,
// binary uses least-significant-bit-first digits; each closes its region
// with an end mark so answers of unknown length stay readable.
TuringMachine unary_increment_machine();
TuringMachine binary_successor_machine();

}  // namespace safecomp
