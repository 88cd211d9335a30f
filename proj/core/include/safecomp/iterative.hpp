#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>

#include "safecomp/certificate.hpp"
#include "safecomp/value.hpp"

namespace safecomp {

/// An iterative computation: a deterministic total step function over
/// canonical Values whose fixpoints are exactly the finished states.
/// task_id is the content digest of the task descriptor; the registry key.
struct TaskProgram {
  std::string name;
  Digest task_id;
  std::function<Value(const Value&)> step;
  std::size_t max_state_bytes = 64 * 1024;

  /// Optional pretty-printer for results; falls back to Value::to_string.
  std::function<std::string(const Value&)> render;

  /// Optional text-to-initial-state parser used by the CLI (decimal literal,
  /// DIMACS text, ...). BadArgument/ParseError on unusable input.
  std::function<Value(std::string_view)> parse_input;

  std::string render_state(const Value& x) const {
    return render ? render(x) : x.to_string();
  }
};

/// The pair ⟨x, c⟩ the lifted step maps.
struct AugmentedState {
  Value x;
  Digest c;
  bool operator==(const AugmentedState&) const = default;
};

/// F(⟨x,c⟩): identity on fixpoints of the step function, otherwise
/// ⟨step(x), H(x ∘ c)⟩. StateTooLarge when the successor state encodes past
/// task.max_state_bytes.
std::function<AugmentedState(const AugmentedState&)> lift(const TaskProgram& task);

struct RunResult {
  Value r_n;             // the fixpoint reached
  CertChain chain;       // c_0 plus n entries
  std::uint32_t n = 0;   // iteration count
  Secret s;
  Fingerprint hc;
  CertProjection cp;
  std::size_t d0_bytes = 0;     // encoded size of the input
  std::size_t dmax_bytes = 0;   // largest encoded intermediate state
};

/// Iterates the lifted step from ⟨d, H(encode(d))⟩ until the first fixpoint.
/// StepBudgetExhausted after max_steps steps without convergence.
RunResult run_to_fixpoint(const TaskProgram& task, const Value& d, std::uint64_t max_steps,
                          const HashParams& params = kDefaultHashParams);

struct AuditAgree {
  Secret s;  // the auditor's own secret, equal to the solver's
};

/// Refutation material taken from the auditor's honest run: the first index
/// whose published projection diverges, with the state and digests needed by
/// the arbiter's one-step check.
struct AuditDisagree {
  std::uint32_t i = 0;
  Value r_prev;
  Digest c_prev;
  Digest c_i;
};

/// Fingerprints differ but the projections are identical; there is no index
/// to refute at (possible via projection collisions or a malformed hc).
struct AuditFingerprintOnlyMismatch {};

using AuditOutcome = std::variant<AuditAgree, AuditDisagree, AuditFingerprintOnlyMismatch>;

/// Recomputes the task locally and compares against a published projection
/// and fingerprint, per the auditor's role.
AuditOutcome audit_run(const TaskProgram& task, const Value& d, const CertProjection& published_cp,
                       const Fingerprint& published_hc, std::uint64_t max_steps,
                       const HashParams& params = kDefaultHashParams);

}  // namespace safecomp
