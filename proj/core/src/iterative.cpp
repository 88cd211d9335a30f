#include "safecomp/iterative.hpp"

#include <algorithm>

#include "safecomp/errors.hpp"

namespace safecomp {

std::function<AugmentedState(const AugmentedState&)> lift(const TaskProgram& task) {
  const auto step = task.step;
  const std::size_t limit = task.max_state_bytes;
  return [step, limit](const AugmentedState& in) -> AugmentedState {
    Value next = step(in.x);
    if (next == in.x) return in;
    const EncodedValue next_bytes = encode(next);
    if (next_bytes.size() > limit)
      raise(Errc::StateTooLarge,
            "successor state is " + std::to_string(next_bytes.size()) + " bytes");
    return AugmentedState{std::move(next), chain_extend(in.x, in.c)};
  };
}

RunResult run_to_fixpoint(const TaskProgram& task, const Value& d, std::uint64_t max_steps,
                          const HashParams& params) {
  if (max_steps < 1) raise(Errc::BadArgument, "max_steps must be at least 1");

  RunResult result;
  result.d0_bytes = encode(d).size();
  result.dmax_bytes = result.d0_bytes;
  if (result.d0_bytes > task.max_state_bytes)
    raise(Errc::StateTooLarge, "input state is " + std::to_string(result.d0_bytes) + " bytes");

  const auto F = lift(task);
  AugmentedState cur{d, chain_init(d)};
  result.chain.c0 = cur.c;

  for (;;) {
    AugmentedState next = F(cur);
    if (next == cur) break;
    if (result.chain.entries.size() >= max_steps)
      raise(Errc::StepBudgetExhausted,
            "no fixpoint within " + std::to_string(max_steps) + " steps");
    result.chain.entries.push_back(next.c);
    result.dmax_bytes = std::max(result.dmax_bytes, encode(next.x).size());
    cur = std::move(next);
  }

  result.r_n = cur.x;
  result.n = result.chain.length();
  std::tie(result.s, result.hc) = fingerprint_of_entries(result.chain.entries);
  result.cp = make_projection(result.chain, params);
  return result;
}

namespace {

/// State after k applications of the step function.
Value replay_state(const TaskProgram& task, const Value& d, std::uint32_t k) {
  Value x = d;
  for (std::uint32_t i = 0; i < k; ++i) x = task.step(x);
  return x;
}

}  // namespace

AuditOutcome audit_run(const TaskProgram& task, const Value& d, const CertProjection& published_cp,
                       const Fingerprint& published_hc, std::uint64_t max_steps,
                       const HashParams& params) {
  const RunResult local = run_to_fixpoint(task, d, max_steps, params);
  if (local.hc == published_hc) return AuditAgree{local.s};

  auto digest_at = [&](std::uint32_t idx) {  // chain digest c_idx, with c_0 = chain start
    return idx == 0 ? local.chain.c0 : local.chain.entries[idx - 1];
  };

  std::optional<std::uint32_t> divergence;
  try {
    divergence = first_divergence(local.cp, published_cp);
  } catch (const Error& e) {
    if (e.code() != Errc::LengthMismatchBeyondDivergence) throw;
    if (published_cp.length() > local.n) {
      // Published chain continues past the honest fixpoint; refute with the
      // fixpoint state itself (the arbiter recognises the stalled step).
      return AuditDisagree{local.n + 1, local.r_n, digest_at(local.n), digest_at(local.n)};
    }
    if (published_cp.length() == 0) return AuditFingerprintOnlyMismatch{};
    // Published chain stops early: its final pair cannot be the honest
    // state at that index (which is not a fixpoint), so contest the pair.
    divergence = published_cp.length();
  }

  if (!divergence) return AuditFingerprintOnlyMismatch{};

  const std::uint32_t i = *divergence;
  return AuditDisagree{i, replay_state(task, d, i - 1), digest_at(i - 1), digest_at(i)};
}

}  // namespace safecomp
