#include "acceptance.hpp"

#include <chrono>
#include <functional>
#include <sstream>
#include <vector>

#include "safecomp/agents.hpp"
#include "safecomp/arbiter.hpp"
#include "safecomp/dimacs.hpp"
#include "safecomp/dpll.hpp"
#include "safecomp/rng.hpp"
#include "safecomp/tasks.hpp"
#include "safecomp/turing.hpp"

namespace safecomp::acceptance {

namespace {

struct Check {
  std::ostringstream detail;
  bool ok = true;

  void require(bool condition, const std::string& what) {
    if (!condition) {
      ok = false;
      if (detail.tellp() > 0) detail << "; ";
      detail << what;
    }
  }
};

Digest random_digest(Rng& rng) {
  Digest d;
  const Bytes noise = rng.bytes(Digest::kSize);
  std::copy(noise.begin(), noise.end(), d.bytes.begin());
  return d;
}

// --- criterion 1: certificate bytes are exactly 32 per step ----------------

void criterion_certificate_size(Check& check) {
  const TaskRegistry registry = default_registry();

  const auto verify_run = [&](const TaskProgram& task, const Value& d,
                              std::uint64_t budget, const char* label) {
    const RunResult run = run_to_fixpoint(task, d, budget);
    check.require(run.chain.certificate_bytes() == 32ull * run.n,
                  std::string(label) + ": bytes != 32*n");
    check.require(write_chain_file(run.chain).size() == 8 + 32 + 32ull * run.n,
                  std::string(label) + ": chain file layout");
  };

  const TaskProgram& factorial = registry.by_name("factorial");
  verify_run(factorial, factorial_initial(10), 100, "factorial 10");
  verify_run(factorial, factorial_initial(1000), 2000, "factorial 1000");

  const TaskProgram& dpll = registry.by_name("dpll");
  verify_run(dpll, dpll_initial_state(parse_dimacs("p cnf 1 2\n1 0\n-1 0\n")), 1000,
             "cnf contradiction");
  verify_run(dpll,
             dpll_initial_state(parse_dimacs("p cnf 3 4\n1 2 0\n-1 3 0\n-2 -3 0\n1 -3 0\n")),
             100000, "cnf 3vars");

  // the published table rows satisfy the same identity exactly
  check.require(1656ull * 32 == 52992ull, "1656*32 != 52992");
  check.require(410802ull * 32 == 13145664ull, "410802*32 != 13145664");
}

// --- criterion 2: proj(fix F inj(d)) = C(d) ---------------------------------

void criterion_fixpoint_realization(Check& check) {
  struct Reference {
    const char* name;
    std::function<std::uint64_t(std::uint64_t)> direct;
    std::function<Value(const Value&)> lifted;
  };
  const std::vector<Reference> pool = {
      {"identity", [](std::uint64_t x) { return x; }, [](const Value& v) { return v; }},
      {"square", [](std::uint64_t x) { return x * x; },
       [](const Value& v) { return Value::nat(v.as_nat().times(v.as_nat())); }},
      {"successor", [](std::uint64_t x) { return x + 1; },
       [](const Value& v) { return Value::nat(v.as_nat().plus(Natural(1))); }},
      {"triple", [](std::uint64_t x) { return 3 * x; },
       [](const Value& v) { return Value::nat(v.as_nat().times(Natural(3))); }},
  };

  Rng rng(0xacce0002);
  for (int trial = 0; trial < 100; ++trial) {
    const Reference& ref = pool[rng.uniform(0, pool.size() - 1)];
    const std::uint64_t d = rng.uniform(0, 1u << 30);
    const TaskProgram task = trivial_lift(ref.name, ref.lifted);
    const RunResult run = run_to_fixpoint(task, trivial_inj(Value::nat(d)), 10);
    check.require(trivial_proj(run.r_n) == Value::nat(ref.direct(d)),
                  "trivial lift of " + std::string(ref.name) + " at d=" + std::to_string(d));
    check.require(run.n == 1, "trivial lift takes one step");
  }

  for (const TuringMachine& machine : {unary_increment_machine(), binary_successor_machine()}) {
    const TaskProgram task = tm_task(machine);
    for (std::uint64_t d = 0; d <= 20; ++d) {
      const RunResult run = run_to_fixpoint(task, tm_config_to_value(tm_inj(machine, d)), 1000);
      check.require(tm_proj(machine, tm_config_from_value(run.r_n)) == d + 1,
                    machine.name + " at d=" + std::to_string(d));
    }
  }
}

// --- criterion 3: DPLL verdicts equal the truth-table oracle ----------------

void criterion_dpll_oracle(Check& check) {
  const TaskProgram task = dpll_task();

  const auto agree = [&](const CnfFormula& f, std::uint64_t budget, const std::string& label) {
    const RunResult run = run_to_fixpoint(task, dpll_initial_state(f), budget);
    const SatVerdict mine = dpll_verdict(run.r_n);
    const SatVerdict expected = brute_force_sat(f);
    check.require(mine.satisfiable == expected.satisfiable, label + ": verdict");
    if (mine.satisfiable)
      check.require(satisfies(f, mine.assignment), label + ": witness");
  };

  const std::vector<Clause> universe = {{1}, {-1}, {2}, {-2}, {1, 2}, {1, -2}, {-1, 2}, {-1, -2}};
  std::size_t cases = 0;
  const auto run_subset = [&](std::initializer_list<std::size_t> indices) {
    CnfFormula f;
    f.num_vars = 2;
    for (std::size_t i : indices) f.clauses.push_back(universe[i]);
    agree(f, 100000, "2-var case " + std::to_string(cases));
    ++cases;
  };
  run_subset({});
  for (std::size_t a = 0; a < 8; ++a) {
    run_subset({a});
    for (std::size_t b = a + 1; b < 8; ++b) {
      run_subset({a, b});
      for (std::size_t c = b + 1; c < 8; ++c) run_subset({a, b, c});
    }
  }
  check.require(cases == 93, "exhaustive 2-var universe size");

  Rng rng(0xacce0003);
  for (int trial = 0; trial < 200; ++trial) {
    const std::uint32_t vars = static_cast<std::uint32_t>(rng.uniform(1, 12));
    const std::uint32_t clauses = static_cast<std::uint32_t>(rng.uniform(1, 5 * vars));
    CnfFormula f;
    f.num_vars = vars;
    for (std::uint32_t c = 0; c < clauses; ++c) {
      Clause clause;
      std::vector<bool> used(vars + 1, false);
      const std::uint32_t width =
          static_cast<std::uint32_t>(rng.uniform(1, std::min(3u, vars)));
      while (clause.size() < width) {
        const std::uint32_t var = static_cast<std::uint32_t>(rng.uniform(1, vars));
        if (used[var]) continue;
        used[var] = true;
        clause.push_back(rng.uniform(0, 1) ? static_cast<int>(var) : -static_cast<int>(var));
      }
      f.clauses.push_back(std::move(clause));
    }
    std::uint64_t budget = 2;
    for (std::uint32_t i = 0; i < vars; ++i) budget *= 3;
    agree(f, budget, "random cnf " + std::to_string(trial));
  }
}

// --- criterion 4: honest end-to-end scenarios -------------------------------

void criterion_honest_end_to_end(Check& check) {
  const TaskRegistry registry = default_registry();

  Scenario factorial;
  factorial.task_name = "factorial";
  factorial.input = factorial_initial(6);
  factorial.seed = 401;
  factorial.arbiter.verification_period = 20;
  factorial.arbiter.reveal_window = 20;
  factorial.agents = {
      {ParticipantId{1}, BehaviorKind::HonestSolver, 2},
      {ParticipantId{2}, BehaviorKind::HonestAuditor, 4},
      {ParticipantId{3}, BehaviorKind::HonestAuditor, 5},
  };
  const ScenarioReport fact_report = run_scenario(factorial, registry);
  check.require(fact_report.final_status == RequestStatus::Verified, "factorial: verified");
  check.require(fact_report.result.has_value() &&
                    *fact_report.result == factorial_state(Natural(0), Natural(720)),
                "factorial: r = C(d) = {0,720}");
  check.require((fact_report.V == std::set<std::uint64_t>{2, 3}), "factorial: V = auditors");
  check.require(fact_report.L.empty(), "factorial: L empty");
  check.require(fact_report.secret.has_value(), "factorial: s revealed");
  check.require(fact_report.solver.id == 1, "factorial: solver recorded");

  Scenario unsat = factorial;
  unsat.task_name = "dpll";
  unsat.input = dpll_initial_state(parse_dimacs("p cnf 2 4\n1 2 0\n1 -2 0\n-1 2 0\n-1 -2 0\n"));
  unsat.seed = 402;
  const ScenarioReport unsat_report = run_scenario(unsat, registry);
  check.require(unsat_report.final_status == RequestStatus::Verified, "unsat: verified");
  check.require(unsat_report.result.has_value() &&
                    dpll_mode(*unsat_report.result) == DpllMode::Unsat,
                "unsat: r = Unsat");
  check.require((unsat_report.V == std::set<std::uint64_t>{2, 3}), "unsat: V = auditors");
  check.require(unsat_report.L.empty(), "unsat: L empty");
  check.require(unsat_report.secret.has_value() && unsat_report.solver.id == 1,
                "unsat: output tuple populated");
}

// --- criterion 5: refutation completeness and soundness ---------------------

void criterion_refutation(Check& check) {
  const TaskRegistry registry = default_registry();
  const TaskProgram& task = registry.by_name("factorial");
  Rng rng(0xacce0005);

  // (a) 50 corrupt-at-k publications; the honest refutation lands every time
  for (int trial = 0; trial < 50; ++trial) {
    BlobStore store;
    ArbiterConfig config;
    config.verification_period = 10;
    Arbiter arbiter(config, registry, store);
    for (std::uint64_t id : {1ull, 2ull, 3ull}) arbiter.fund(ParticipantId{id}, 1000);

    const std::uint64_t n = rng.uniform(2, 40);
    const Value d = factorial_initial(n);
    const TxOutcome published =
        arbiter.process({ParticipantId{3}, PublishTask{task.task_id, d}});
    const RunResult honest = run_to_fixpoint(task, d, 10000, config.hash);
    const std::uint32_t k = static_cast<std::uint32_t>(rng.uniform(1, honest.n));
    const ForgedPublication forged =
        corrupt_publication(honest, k, CorruptionMode::FlipCertEntry, rng, task, config.hash);

    const TxOutcome submitted = arbiter.process(
        {ParticipantId{1},
         SubmitSolution{published.request, forged.r_n, forged.c_n,
                        CpInline{write_projection_file(forged.cp)}, forged.hc}});
    check.require(submitted.applied(), "forged submit accepted (trial " + std::to_string(trial) + ")");
    check.require(submitted.f_applications == 1, "submit used one step evaluation");

    const AuditOutcome audit =
        audit_run(task, d, forged.cp, forged.hc, 10000, config.hash);
    const auto* disagree = std::get_if<AuditDisagree>(&audit);
    check.require(disagree != nullptr, "audit found a divergence");
    if (!disagree) continue;

    const TxOutcome refuted = arbiter.process(
        {ParticipantId{2}, Refute{published.request, disagree->i, disagree->r_prev,
                                  disagree->c_prev, disagree->c_i}});
    check.require(refuted.applied(), "refutation accepted at k=" + std::to_string(k));
    check.require(refuted.f_applications == 1, "refutation used one step evaluation");
    const RequestRecord& record = arbiter.inspect_request(published.request);
    check.require(record.L.contains(1), "corrupting solver slashed");
    check.require(record.status == RequestStatus::Published, "request reopened");
  }

  // (b) 10^4 randomized refutation attempts against an honest publication
  BlobStore store;
  ArbiterConfig config;
  Arbiter arbiter(config, registry, store);
  arbiter.fund(ParticipantId{1}, 1000);
  const Value d = factorial_initial(12);
  const TxOutcome published = arbiter.process({ParticipantId{1}, PublishTask{task.task_id, d}});
  const RunResult honest = run_to_fixpoint(task, d, 1000, config.hash);
  const TxOutcome submitted = arbiter.process(
      {ParticipantId{1},
       SubmitSolution{published.request, honest.r_n, honest.chain.entries.back(),
                      CpInline{write_projection_file(honest.cp)}, honest.hc}});
  check.require(submitted.applied(), "honest submit accepted");

  std::size_t accepted = 0;
  for (int attempt = 0; attempt < 10000; ++attempt) {
    const ParticipantId attacker{static_cast<std::uint64_t>(100 + attempt)};
    arbiter.fund(attacker, 10);
    const TxOutcome outcome = arbiter.process(
        {attacker, Refute{published.request, static_cast<std::uint32_t>(rng.uniform(1, honest.n)),
                          Value::nat(rng.next_u64()), random_digest(rng), random_digest(rng)}});
    if (outcome.applied()) ++accepted;
  }
  check.require(accepted == 0, std::to_string(accepted) + " random refutations accepted");
  check.require(arbiter.inspect_request(published.request).status == RequestStatus::Completed,
                "honest publication still stands");
}

// --- criterion 6: proof-of-verification gate --------------------------------

void criterion_proof_gate(Check& check) {
  const TaskRegistry registry = default_registry();
  const TaskProgram& task = registry.by_name("factorial");
  BlobStore store;
  ArbiterConfig config;
  config.verification_period = 5;
  Arbiter arbiter(config, registry, store);
  Rng rng(0xacce0006);

  for (std::uint64_t id : {1ull, 2ull, 3ull}) arbiter.fund(ParticipantId{id}, 1000);
  const Value d = factorial_initial(8);
  const TxOutcome published = arbiter.process({ParticipantId{1}, PublishTask{task.task_id, d}});
  const RunResult honest = run_to_fixpoint(task, d, 1000, config.hash);
  arbiter.process({ParticipantId{1},
                   SubmitSolution{published.request, honest.r_n, honest.chain.entries.back(),
                                  CpInline{write_projection_file(honest.cp)}, honest.hc}});

  // two honest auditors prove their work
  for (std::uint64_t id : {2ull, 3ull}) {
    const VerificationProof proof = make_verification_proof(honest.s, ParticipantId{id});
    arbiter.process({ParticipantId{id}, SubmitProof{published.request, proof.prf}});
  }
  // 10^4 pretenders without the secret
  for (int fake = 0; fake < 10000; ++fake) {
    const ParticipantId id{static_cast<std::uint64_t>(1000 + fake)};
    arbiter.fund(id, 2);
    arbiter.process({id, SubmitProof{published.request, random_digest(rng)}});
  }

  arbiter.tick(config.verification_period);
  const TxOutcome reveal =
      arbiter.process({ParticipantId{1}, RevealSecret{published.request, honest.s}});
  check.require(reveal.applied(), "reveal accepted");

  const RequestRecord& record = arbiter.inspect_request(published.request);
  check.require((record.V == std::set<std::uint64_t>{2, 3}), "V holds exactly the honest auditors");
  std::size_t fakes_in_L = 0;
  for (std::uint64_t id = 1000; id < 11000; ++id)
    if (record.L.contains(id)) ++fakes_in_L;
  check.require(fakes_in_L == 10000, "every pretender landed in L");
}

// --- criterion 7: timeout path ----------------------------------------------

void criterion_timeout(Check& check) {
  const TaskRegistry registry = default_registry();
  Scenario sc;
  sc.task_name = "factorial";
  sc.input = factorial_initial(6);
  sc.seed = 700;
  sc.arbiter.verification_period = 15;
  sc.arbiter.reveal_window = 15;
  sc.agents = {{ParticipantId{9}, BehaviorKind::SilentSolver, 2}};
  const ScenarioReport report = run_scenario(sc, registry);
  check.require(report.final_status == RequestStatus::Published,
                "request returned to published");
  check.require((report.L == std::set<std::uint64_t>{9}), "silent solver slashed");
}

// --- criterion 8: conservation and the deposit pool formula -----------------

void criterion_conservation(Check& check) {
  const TaskRegistry registry = default_registry();
  const TaskProgram& task = registry.by_name("factorial");
  Rng rng(0xacce0008);

  // structured sequences reaching Verified with m refuted rounds, n proofs
  for (int round = 0; round < 50; ++round) {
    BlobStore store;
    ArbiterConfig config;
    config.verification_period = 5;
    Arbiter arbiter(config, registry, store);
    const std::uint32_t m = static_cast<std::uint32_t>(rng.uniform(0, 2));
    const std::uint32_t proofs = static_cast<std::uint32_t>(rng.uniform(0, 3));
    for (std::uint64_t id = 1; id <= 10; ++id) arbiter.fund(ParticipantId{id}, 1000);

    const Value d = factorial_initial(rng.uniform(3, 10));
    const RunResult honest = run_to_fixpoint(task, d, 1000, config.hash);
    const TxOutcome published = arbiter.process({ParticipantId{10}, PublishTask{task.task_id, d}});
    const std::int64_t total = arbiter.total_currency();

    for (std::uint32_t i = 0; i < m; ++i) {
      const ForgedPublication forged = corrupt_publication(
          honest, static_cast<std::uint32_t>(rng.uniform(1, honest.n)),
          CorruptionMode::FlipCertEntry, rng, task, config.hash);
      const TxOutcome bad = arbiter.process(
          {ParticipantId{8}, SubmitSolution{published.request, forged.r_n, forged.c_n,
                                            CpInline{write_projection_file(forged.cp)},
                                            forged.hc}});
      check.require(bad.applied(), "forged round submit");
      const AuditOutcome audit = audit_run(task, d, forged.cp, forged.hc, 10000, config.hash);
      const auto* disagree = std::get_if<AuditDisagree>(&audit);
      check.require(disagree != nullptr, "forged round audited");
      if (!disagree) return;
      const TxOutcome refuted = arbiter.process(
          {ParticipantId{9}, Refute{published.request, disagree->i, disagree->r_prev,
                                    disagree->c_prev, disagree->c_i}});
      check.require(refuted.applied(), "forged round refuted");
    }

    arbiter.process({ParticipantId{1},
                     SubmitSolution{published.request, honest.r_n, honest.chain.entries.back(),
                                    CpInline{write_projection_file(honest.cp)}, honest.hc}});
    for (std::uint32_t i = 0; i < proofs; ++i) {
      const ParticipantId id{2 + i};
      const VerificationProof proof = make_verification_proof(honest.s, id);
      arbiter.process({id, SubmitProof{published.request, proof.prf}});
    }
    arbiter.tick(config.verification_period);
    const TxOutcome reveal =
        arbiter.process({ParticipantId{1}, RevealSecret{published.request, honest.s}});
    check.require(reveal.applied(), "structured reveal");

    const DepositSchedule& dep = config.deposits;
    const std::int64_t expected_pool =
        dep.task + dep.solution + m * dep.refute + proofs * dep.proof;
    check.require(arbiter.payout(published.request).pool == expected_pool,
                  "pool formula with m=" + std::to_string(m) + " n=" + std::to_string(proofs));
    check.require(arbiter.total_currency() == total, "conservation after payout");
    check.require(arbiter.inspect_request(published.request).escrow == 0, "escrow drained");
  }

  // adversarial noise sequences: conservation holds transaction by transaction
  for (int round = 0; round < 50; ++round) {
    BlobStore store;
    ArbiterConfig config;
    config.verification_period = 3;
    config.reveal_window = 3;
    Arbiter arbiter(config, registry, store);
    for (std::uint64_t id = 1; id <= 4; ++id) arbiter.fund(ParticipantId{id}, 1000);
    const Value d = factorial_initial(rng.uniform(2, 6));
    const RunResult honest = run_to_fixpoint(task, d, 1000, config.hash);
    const TxOutcome published =
        arbiter.process({ParticipantId{4}, PublishTask{task.task_id, d}});
    const std::int64_t total = arbiter.total_currency();

    for (int step = 0; step < 40; ++step) {
      const ParticipantId actor{rng.uniform(1, 3)};
      switch (rng.uniform(0, 5)) {
        case 0:
          arbiter.process({actor, SubmitSolution{published.request, honest.r_n,
                                                 honest.chain.entries.back(),
                                                 CpInline{write_projection_file(honest.cp)},
                                                 honest.hc}});
          break;
        case 1:
          arbiter.process(
              {actor, Refute{published.request,
                             static_cast<std::uint32_t>(rng.uniform(1, honest.n)),
                             Value::nat(rng.next_u64()), random_digest(rng),
                             random_digest(rng)}});
          break;
        case 2:
          arbiter.process({actor, SubmitProof{published.request, random_digest(rng)}});
          break;
        case 3:
          arbiter.process({actor, RevealSecret{published.request,
                                               rng.chance_one_in(2) ? honest.s
                                                                    : Secret{random_digest(rng)}}});
          break;
        case 4:
          arbiter.tick(rng.uniform(0, 4));
          break;
        case 5:
          arbiter.expire_due();
          break;
      }
      check.require(arbiter.total_currency() == total, "conservation under noise");
    }
  }
}

// --- criterion 9: deterministic replay --------------------------------------

void criterion_determinism(Check& check) {
  const TaskRegistry registry = default_registry();
  Scenario sc;
  sc.task_name = "factorial";
  sc.input = factorial_initial(9);
  sc.seed = 900;
  sc.arbiter.verification_period = 12;
  sc.arbiter.reveal_window = 12;
  sc.agents = {
      {ParticipantId{4}, BehaviorKind::FaultySolver, 1, 4, CorruptionMode::FlipCertEntry, 0},
      {ParticipantId{2}, BehaviorKind::HonestAuditor, 3},
      {ParticipantId{7}, BehaviorKind::LazyAuditor, 2},
      {ParticipantId{8}, BehaviorKind::GriefingRefuter, 5, 1, CorruptionMode::FlipCertEntry, 2},
  };

  const ScenarioReport first = run_scenario(sc, registry);
  const ScenarioReport second = run_scenario(sc, registry);
  check.require(!first.log.empty(), "log captured");
  check.require(first.log == second.log, "transaction logs bit-identical");
  check.require(first.final_status == RequestStatus::Verified, "adversarial scenario verified");

  Scenario dpll_sc;
  dpll_sc.task_name = "dpll";
  dpll_sc.input = dpll_initial_state(parse_dimacs("p cnf 2 4\n1 2 0\n1 -2 0\n-1 2 0\n-1 -2 0\n"));
  dpll_sc.seed = 901;
  dpll_sc.arbiter.verification_period = 12;
  dpll_sc.arbiter.reveal_window = 12;
  dpll_sc.agents = {
      {ParticipantId{1}, BehaviorKind::HonestSolver, 1},
      {ParticipantId{2}, BehaviorKind::HonestAuditor, 2},
  };
  check.require(run_scenario(dpll_sc, registry).log == run_scenario(dpll_sc, registry).log,
                "dpll scenario log bit-identical");
}

struct Criterion {
  const char* label;
  void (*run)(Check&);
};

}  // namespace

bool run_all(std::ostream& out) {
  const std::vector<Criterion> criteria = {
      {"1. certificate size law: 32 bytes per step; table rows 1656->52992, 410802->13145664",
       criterion_certificate_size},
      {"2. fixpoint realization: proj(fix F inj(d)) = C(d) for trivial lifts and both machines",
       criterion_fixpoint_realization},
      {"3. dpll/oracle agreement: exhaustive 2-var universe plus 200 random 3-cnfs",
       criterion_dpll_oracle},
      {"4. honest end-to-end: solver + 2 auditors verified on factorial and an unsat cnf",
       criterion_honest_end_to_end},
      {"5. refutations: 50 corrupt publications defeated, 10^4 forged attempts rejected",
       criterion_refutation},
      {"6. proof gate: 10^4 fake proofs stay out of V, honest proofs enter",
       criterion_proof_gate},
      {"7. timeout: unrevealed solution returns to published with the solver slashed",
       criterion_timeout},
      {"8. ledger: conservation invariant and the deposit pool formula D_r+D_s+m*D_p+n*D_w",
       criterion_conservation},
      {"9. determinism: identical seeds reproduce bit-identical transaction logs",
       criterion_determinism},
  };

  bool all_ok = true;
  for (const Criterion& criterion : criteria) {
    Check check;
    const auto start = std::chrono::steady_clock::now();
    criterion.run(check);
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - start)
                             .count();
    out << (check.ok ? "PASS" : "FAIL") << "  " << criterion.label << "  [" << elapsed << " ms]";
    if (!check.ok) out << "\n      " << check.detail.str();
    out << '\n';
    all_ok = all_ok && check.ok;
  }
  out << (all_ok ? "acceptance: all criteria hold" : "acceptance: FAILURES above") << '\n';
  return all_ok;
}

}  // namespace safecomp::acceptance
