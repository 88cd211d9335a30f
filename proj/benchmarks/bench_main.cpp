#include <benchmark/benchmark.h>

#include "safecomp/agents.hpp"
#include "safecomp/arbiter.hpp"
#include "safecomp/dimacs.hpp"
#include "safecomp/dpll.hpp"
#include "safecomp/rng.hpp"
#include "safecomp/sha256.hpp"
#include "safecomp/tasks.hpp"

using namespace safecomp;

namespace {

void BM_sha256_1k(benchmark::State& state) {
  Rng rng(1);
  const Bytes data = rng.bytes(1024);
  for (auto _ : state) benchmark::DoNotOptimize(Sha256::digest(data));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) * 1024);
}
BENCHMARK(BM_sha256_1k);

void BM_encode_factorial_state(benchmark::State& state) {
  const RunResult run = run_to_fixpoint(factorial_task(), factorial_initial(200), 1000);
  for (auto _ : state) benchmark::DoNotOptimize(encode(run.r_n));
}
BENCHMARK(BM_encode_factorial_state);

void BM_certified_factorial_run(benchmark::State& state) {
  const TaskProgram task = factorial_task();
  const Value d = factorial_initial(static_cast<std::uint64_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run_to_fixpoint(task, d, 1u << 20));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_certified_factorial_run)->Arg(10)->Arg(100)->Arg(1000);

void BM_certified_dpll_run(benchmark::State& state) {
  Rng rng(7);
  const TaskProgram task = dpll_task();
  CnfFormula f;
  f.num_vars = static_cast<std::uint32_t>(state.range(0));
  for (std::uint32_t c = 0; c < 4 * f.num_vars; ++c) {
    Clause clause;
    std::vector<bool> used(f.num_vars + 1, false);
    while (clause.size() < 3) {
      const std::uint32_t var = static_cast<std::uint32_t>(rng.uniform(1, f.num_vars));
      if (used[var]) continue;
      used[var] = true;
      clause.push_back(rng.uniform(0, 1) ? static_cast<int>(var) : -static_cast<int>(var));
    }
    f.clauses.push_back(std::move(clause));
  }
  const Value d = dpll_initial_state(f);
  for (auto _ : state) benchmark::DoNotOptimize(run_to_fixpoint(task, d, 1u << 24));
}
BENCHMARK(BM_certified_dpll_run)->Arg(8)->Arg(12);

void BM_projection_divergence(benchmark::State& state) {
  Rng rng(3);
  const std::uint32_t n = static_cast<std::uint32_t>(state.range(0));
  CertProjection honest{16, {}};
  for (std::uint32_t i = 0; i < n; ++i) honest.items.push_back(Projection{rng.uniform(0, 0xFFFF)});
  CertProjection corrupt = honest;
  for (std::uint32_t i = n / 2; i < n; ++i) corrupt.items[i] = Projection{rng.uniform(0, 0xFFFF)};
  if (corrupt.items[n / 2] == honest.items[n / 2]) corrupt.items[n / 2].bits ^= 1;
  for (auto _ : state) benchmark::DoNotOptimize(first_divergence(honest, corrupt));
}
BENCHMARK(BM_projection_divergence)->Arg(1 << 10)->Arg(1 << 16);

void BM_arbiter_refutation_check(benchmark::State& state) {
  const TaskRegistry registry = default_registry();
  const TaskProgram& task = registry.by_name("factorial");
  Rng rng(5);

  const Value d = factorial_initial(64);
  const RunResult honest = run_to_fixpoint(task, d, 1000);

  for (auto _ : state) {
    state.PauseTiming();
    BlobStore store;
    ArbiterConfig config;
    Arbiter arbiter(config, registry, store);
    arbiter.fund(ParticipantId{1}, 1000);
    arbiter.fund(ParticipantId{2}, 1000);
    const TxOutcome published = arbiter.process({ParticipantId{1}, PublishTask{task.task_id, d}});
    const ForgedPublication forged =
        corrupt_publication(honest, 32, CorruptionMode::FlipCertEntry, rng, task);
    arbiter.process({ParticipantId{1},
                     SubmitSolution{published.request, forged.r_n, forged.c_n,
                                    CpInline{write_projection_file(forged.cp)}, forged.hc}});
    const AuditOutcome audit = audit_run(task, d, forged.cp, forged.hc, 1000);
    const auto& disagree = std::get<AuditDisagree>(audit);
    state.ResumeTiming();

    benchmark::DoNotOptimize(arbiter.process(
        {ParticipantId{2}, Refute{published.request, disagree.i, disagree.r_prev,
                                  disagree.c_prev, disagree.c_i}}));
  }
}
BENCHMARK(BM_arbiter_refutation_check);

void BM_honest_scenario(benchmark::State& state) {
  const TaskRegistry registry = default_registry();
  Scenario sc;
  sc.task_name = "factorial";
  sc.input = factorial_initial(50);
  sc.seed = 1;
  sc.arbiter.verification_period = 10;
  sc.arbiter.reveal_window = 10;
  sc.agents = {
      {ParticipantId{1}, BehaviorKind::HonestSolver, 1},
      {ParticipantId{2}, BehaviorKind::HonestAuditor, 2},
  };
  for (auto _ : state) benchmark::DoNotOptimize(run_scenario(sc, registry));
}
BENCHMARK(BM_honest_scenario);

}  // namespace

BENCHMARK_MAIN();
