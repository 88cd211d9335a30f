#include <doctest.h>

#include "safecomp/errors.hpp"
#include "safecomp/iterative.hpp"
#include "safecomp/rng.hpp"
#include "safecomp/tasks.hpp"
#include "safecomp/turing.hpp"
#include "support/oracles.hpp"

using namespace safecomp;

TEST_CASE("factorial runs match the direct loop for small n") {
  const TaskProgram task = factorial_task();
  const RunResult r3 = run_to_fixpoint(task, factorial_initial(3), 100);
  CHECK(r3.n == 3);
  CHECK(r3.r_n == factorial_state(Natural(0), Natural(6)));

  const RunResult r10 = run_to_fixpoint(task, factorial_initial(10), 100);
  CHECK(r10.n == 10);
  CHECK(r10.r_n == factorial_state(Natural(0), Natural(3628800)));

  const RunResult fixed = run_to_fixpoint(task, factorial_state(Natural(0), Natural(7)), 100);
  CHECK(fixed.n == 0);
}

TEST_CASE("iterative factorial equals the recursive definition for n in 0..20") {
  const TaskProgram task = factorial_task();
  for (std::uint64_t n = 0; n <= 20; ++n) {
    const RunResult run = run_to_fixpoint(task, factorial_initial(n), 100);
    CHECK(run.n == n);
    CHECK(run.r_n == factorial_state(Natural(0), Natural(oracles::factorial_u64(n))));
  }
}

TEST_CASE("factorial of 1000 has the known digit count, prefix and zero tail") {
  const TaskProgram task = factorial_task();
  const RunResult run = run_to_fixpoint(task, factorial_initial(1000), 2000);
  CHECK(run.n == 1000);
  const std::string digits = run.r_n.items()[1].as_nat().to_decimal();
  CHECK(digits.size() == 2568);
  CHECK(digits.substr(0, 10) == "4023872600");
  std::size_t trailing_zeros = 0;
  for (auto it = digits.rbegin(); it != digits.rend() && *it == '0'; ++it) ++trailing_zeros;
  CHECK(trailing_zeros == 249);  // floor-sum of 1000/5^k
}

TEST_CASE("trivial lift finishes in exactly one step") {
  const TaskProgram identity = trivial_lift("identity", [](const Value& v) { return v; });
  const RunResult r = run_to_fixpoint(identity, trivial_inj(Value::nat(9)), 10);
  CHECK(r.n == 1);
  CHECK(trivial_proj(r.r_n) == Value::nat(9));

  const TaskProgram square = trivial_lift("square", [](const Value& v) {
    return Value::nat(v.as_nat().times(v.as_nat()));
  });
  const RunResult sq = run_to_fixpoint(square, trivial_inj(Value::nat(7)), 10);
  CHECK(sq.n == 1);
  CHECK(trivial_proj(sq.r_n) == Value::nat(49));
}

TEST_CASE("trivial lift realizes proj(fix F inj(d)) = C(d) over a random pool") {
  struct Reference {
    const char* name;
    std::function<std::uint64_t(std::uint64_t)> direct;
    std::function<Value(const Value&)> as_task;
  };
  const std::vector<Reference> pool = {
      {"identity", [](std::uint64_t x) { return x; }, [](const Value& v) { return v; }},
      {"square",
       [](std::uint64_t x) { return x * x; },
       [](const Value& v) { return Value::nat(v.as_nat().times(v.as_nat())); }},
      {"successor",
       [](std::uint64_t x) { return x + 1; },
       [](const Value& v) { return Value::nat(v.as_nat().plus(Natural(1))); }},
      {"double",
       [](std::uint64_t x) { return 2 * x; },
       [](const Value& v) { return Value::nat(v.as_nat().times(Natural(2))); }},
  };

  Rng rng(0x5eed2001);
  for (int trial = 0; trial < 100; ++trial) {
    const Reference& ref = pool[rng.uniform(0, pool.size() - 1)];
    const std::uint64_t d = rng.uniform(0, 1u << 30);
    const TaskProgram task = trivial_lift(ref.name, ref.as_task);
    const RunResult run = run_to_fixpoint(task, trivial_inj(Value::nat(d)), 10);
    CHECK(run.n == 1);
    CHECK(trivial_proj(run.r_n) == Value::nat(ref.direct(d)));
  }
}

TEST_CASE("turing machine validation rejects partial transition functions") {
  TuringMachine broken = unary_increment_machine();
  broken.delta.erase({0, 0});
  CHECK_THROWS_AS(broken.validate(), Error);

  TuringMachine bad_state = unary_increment_machine();
  bad_state.initial_state = 99;
  CHECK_THROWS_AS(bad_state.validate(), Error);

  CHECK_NOTHROW(unary_increment_machine().validate());
  CHECK_NOTHROW(binary_successor_machine().validate());
}

TEST_CASE("unary increment machine: hand-traced run on three marks") {
  const TuringMachine m = unary_increment_machine();
  const TaskProgram task = tm_task(m);

  const TmConfig start = tm_inj(m, 3);
  CHECK(tm_proj(m, start) == 3);  // proj recovers the input before any step

  const RunResult run = run_to_fixpoint(task, tm_config_to_value(start), 100);
  // trace: 3 scan steps over the marks, one end-mark overwrite, one re-seat
  CHECK(run.n == 5);
  const TmConfig final_cfg = tm_config_from_value(run.r_n);
  CHECK(tm_proj(m, final_cfg) == 4);
  for (std::int64_t cell = 1; cell <= 4; ++cell) CHECK(final_cfg.tape.at(cell) == 1);
  CHECK(final_cfg.tape.at(5) == 2);
}

TEST_CASE("machine already accepting takes zero steps") {
  const TuringMachine m = unary_increment_machine();
  TmConfig cfg = tm_inj(m, 2);
  cfg.q = 2;  // accepting
  const RunResult run = run_to_fixpoint(tm_task(m), tm_config_to_value(cfg), 100);
  CHECK(run.n == 0);
}

TEST_CASE("binary successor machine: hand-traced carry ripple") {
  const TuringMachine m = binary_successor_machine();
  const TaskProgram task = tm_task(m);

  // 11 = 1101 (lsb first); successor 12 = 0011 (lsb first)
  const RunResult run = run_to_fixpoint(task, tm_config_to_value(tm_inj(m, 11)), 100);
  CHECK(run.n == 3);  // two carries, one absorb
  CHECK(tm_proj(m, tm_config_from_value(run.r_n)) == 12);

  // all ones: 7 -> 8 grows the answer area by one cell
  const RunResult grow = run_to_fixpoint(task, tm_config_to_value(tm_inj(m, 7)), 100);
  CHECK(tm_proj(m, tm_config_from_value(grow.r_n)) == 8);
}

TEST_CASE("both machines compute successor for d in 0..20") {
  for (const TuringMachine& m : {unary_increment_machine(), binary_successor_machine()}) {
    const TaskProgram task = tm_task(m);
    for (std::uint64_t d = 0; d <= 20; ++d) {
      const RunResult run = run_to_fixpoint(task, tm_config_to_value(tm_inj(m, d)), 1000);
      CHECK(tm_proj(m, tm_config_from_value(run.r_n)) == d + 1);
    }
  }
}

TEST_CASE("proj demands the end mark") {
  const TuringMachine m = unary_increment_machine();
  TmConfig cfg = tm_inj(m, 4);
  cfg.tape.erase(5);  // remove the end mark
  CHECK_THROWS_AS(tm_proj(m, cfg), Error);
}

TEST_CASE("tm config codec round-trips") {
  const TuringMachine m = binary_successor_machine();
  const TmConfig cfg = tm_inj(m, 13);
  const TmConfig back = tm_config_from_value(tm_config_to_value(cfg));
  CHECK(back.tape == cfg.tape);
  CHECK(back.q == cfg.q);
  CHECK(back.head == cfg.head);
}

TEST_CASE("registry resolves by name and digest, rejects strangers") {
  const TaskRegistry registry = default_registry();
  const TaskProgram& fact = registry.by_name("factorial");
  CHECK(registry.by_id(fact.task_id).name == "factorial");
  CHECK(registry.contains(fact.task_id));
  CHECK_THROWS_AS(registry.by_name("no-such-task"), Error);

  Digest unknown;
  unknown.bytes.fill(0xDD);
  CHECK_THROWS_AS(registry.by_id(unknown), Error);
  CHECK(!registry.contains(unknown));

  // ids are distinct content digests
  CHECK(registry.by_name("dpll").task_id != fact.task_id);
  CHECK(registry.names().size() >= 6);
}
