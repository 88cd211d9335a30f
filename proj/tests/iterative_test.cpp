#include <doctest.h>

#include "safecomp/errors.hpp"
#include "safecomp/iterative.hpp"
#include "safecomp/rng.hpp"
#include "safecomp/tasks.hpp"
#include "support/oracles.hpp"

using namespace safecomp;

TEST_CASE("lift keeps fixpoints and extends the chain otherwise") {
  const TaskProgram task = factorial_task();
  const auto F = lift(task);

  Digest c;
  c.bytes.fill(0x42);

  const AugmentedState fixed{factorial_state(Natural(0), Natural(7)), c};
  CHECK(F(fixed) == fixed);

  const AugmentedState start{factorial_initial(3), chain_init(factorial_initial(3))};
  const AugmentedState next = F(start);
  CHECK(next.x == factorial_state(Natural(2), Natural(3)));
  CHECK(next.c == chain_extend(start.x, start.c));
  // independent recomputation of the first chain entry
  CHECK(next.c.bytes ==
        oracles::sha256(oracles::combine_layout(oracles::encode_pair_of_nats(3, 1),
                                                oracles::sha256(oracles::encode_pair_of_nats(3, 1)))));

  const AugmentedState twice = F(next);
  CHECK(!(twice == next));
}

TEST_CASE("lift enforces the successor size limit") {
  TaskProgram doubler;
  doubler.name = "doubling";
  doubler.step = [](const Value& v) -> Value {
    const Bytes& b = v.as_bytes();
    if (b.size() > 100) return v;
    Bytes twice = b;
    twice.insert(twice.end(), b.begin(), b.end());
    return Value::bytes(twice);
  };
  doubler.max_state_bytes = 64;

  const auto F = lift(doubler);
  AugmentedState state{Value::bytes(Bytes(8, 0xAA)), chain_init(Value::bytes(Bytes(8, 0xAA)))};
  state = F(state);  // 16 bytes payload, fine
  state = F(state);  // 32 bytes payload, fine
  CHECK_THROWS_AS(F(F(state)), Error);  // 128 bytes exceeds the limit
}

TEST_CASE("run_to_fixpoint on factorial matches the direct loop") {
  const TaskProgram task = factorial_task();

  const RunResult r3 = run_to_fixpoint(task, factorial_initial(3), 1000);
  CHECK(r3.n == 3);
  CHECK(r3.r_n == factorial_state(Natural(0), Natural(oracles::factorial_u64(3))));

  const RunResult r5 = run_to_fixpoint(task, factorial_initial(5), 1000);
  CHECK(r5.n == 5);
  CHECK(r5.r_n == factorial_state(Natural(0), Natural(120)));

  // already a fixpoint: zero steps, empty chain
  const RunResult r0 = run_to_fixpoint(task, factorial_state(Natural(0), Natural(7)), 1000);
  CHECK(r0.n == 0);
  CHECK(r0.chain.entries.empty());
  CHECK(r0.r_n == factorial_state(Natural(0), Natural(7)));
}

TEST_CASE("run_to_fixpoint replay soundness and determinism") {
  const TaskProgram task = factorial_task();
  const RunResult run = run_to_fixpoint(task, factorial_initial(9), 1000);

  // replay: every entry is the forced extension of its predecessor
  Value x = factorial_initial(9);
  Digest c = chain_init(x);
  CHECK(run.chain.c0 == c);
  for (std::uint32_t i = 0; i < run.n; ++i) {
    const Digest next = chain_extend(x, c);
    CHECK(run.chain.entries[i] == next);
    x = task.step(x);
    c = next;
  }
  CHECK(run.r_n == x);

  const auto [s, hc] = fingerprint(run.chain);
  CHECK(run.s == s);
  CHECK(run.hc == hc);
  CHECK(run.cp.items == make_projection(run.chain).items);

  const RunResult again = run_to_fixpoint(task, factorial_initial(9), 1000);
  CHECK(again.chain.entries == run.chain.entries);
  CHECK(again.s == run.s);
}

TEST_CASE("run_to_fixpoint exhausts its budget on divergent tasks") {
  TaskProgram counter;
  counter.name = "counter";
  counter.step = [](const Value& v) { return Value::nat(v.as_nat().plus(Natural(1))); };
  CHECK_THROWS_AS(run_to_fixpoint(counter, Value::nat(0), 50), Error);
  try {
    run_to_fixpoint(counter, Value::nat(0), 50);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::StepBudgetExhausted);
  }
}

TEST_CASE("audit agrees with an honest publication") {
  const TaskProgram task = factorial_task();
  const RunResult honest = run_to_fixpoint(task, factorial_initial(8), 1000);
  const AuditOutcome outcome =
      audit_run(task, factorial_initial(8), honest.cp, honest.hc, 1000);
  const auto* agree = std::get_if<AuditAgree>(&outcome);
  REQUIRE(agree != nullptr);
  CHECK(agree->s == honest.s);
}

TEST_CASE("audit pinpoints corrupted publications") {
  const TaskProgram task = factorial_task();
  Rng rng(0x5eed1001);
  const Value d = factorial_initial(30);
  const RunResult honest = run_to_fixpoint(task, d, 1000);

  for (int trial = 0; trial < 50; ++trial) {
    const std::uint32_t k = static_cast<std::uint32_t>(rng.uniform(1, honest.n));
    CertProjection corrupt = honest.cp;
    Fingerprint forged_hc;
    const Bytes noise = rng.bytes(Digest::kSize);
    std::copy(noise.begin(), noise.end(), forged_hc.hc.bytes.begin());
    for (std::uint32_t i = k; i <= honest.n; ++i)
      corrupt.items[i - 1] = Projection{rng.uniform(0, 0xFFFF)};
    if (corrupt.items[k - 1] == honest.cp.items[k - 1]) corrupt.items[k - 1].bits ^= 1;

    const AuditOutcome outcome = audit_run(task, d, corrupt, forged_hc, 1000);
    const auto* disagree = std::get_if<AuditDisagree>(&outcome);
    REQUIRE(disagree != nullptr);
    CHECK(disagree->i <= honest.n);
    CHECK(honest.cp.items[disagree->i - 1] != corrupt.items[disagree->i - 1]);
    // the carried values come from the honest run
    CHECK(disagree->c_i == honest.chain.entries[disagree->i - 1]);
    const Digest expected_prev =
        disagree->i >= 2 ? honest.chain.entries[disagree->i - 2] : honest.chain.c0;
    CHECK(disagree->c_prev == expected_prev);
  }
}

TEST_CASE("audit reports fingerprint-only mismatches") {
  const TaskProgram task = factorial_task();
  const Value d = factorial_initial(6);
  const RunResult honest = run_to_fixpoint(task, d, 1000);

  Fingerprint wrong = honest.hc;
  wrong.hc.bytes[0] ^= 0xFF;
  const AuditOutcome outcome = audit_run(task, d, honest.cp, wrong, 1000);
  CHECK(std::holds_alternative<AuditFingerprintOnlyMismatch>(outcome));
}

TEST_CASE("audit handles published chains of the wrong length") {
  const TaskProgram task = factorial_task();
  const Value d = factorial_initial(6);
  const RunResult honest = run_to_fixpoint(task, d, 1000);
  Fingerprint wrong = honest.hc;
  wrong.hc.bytes[0] ^= 0xFF;

  CertProjection shorter = honest.cp;
  shorter.items.pop_back();
  const AuditOutcome early = audit_run(task, d, shorter, wrong, 1000);
  const auto* stop = std::get_if<AuditDisagree>(&early);
  REQUIRE(stop != nullptr);
  CHECK(stop->i == honest.n - 1);

  CertProjection longer = honest.cp;
  longer.items.push_back(Projection{0x1234});
  const AuditOutcome past = audit_run(task, d, longer, wrong, 1000);
  const auto* overrun = std::get_if<AuditDisagree>(&past);
  REQUIRE(overrun != nullptr);
  CHECK(overrun->i == honest.n + 1);
  CHECK(overrun->r_prev == honest.r_n);
}
