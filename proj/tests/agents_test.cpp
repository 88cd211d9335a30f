#include <doctest.h>

#include "safecomp/agents.hpp"
#include "safecomp/dimacs.hpp"
#include "safecomp/dpll.hpp"
#include "safecomp/errors.hpp"
#include "safecomp/scenario_io.hpp"
#include "support/oracles.hpp"

using namespace safecomp;

namespace {

Scenario base_scenario(const TaskRegistry& registry, std::uint64_t input_n = 6) {
  (void)registry;
  Scenario sc;
  sc.task_name = "factorial";
  sc.input = factorial_initial(input_n);
  sc.seed = 11;
  sc.arbiter.verification_period = 20;
  sc.arbiter.reveal_window = 20;
  return sc;
}

}  // namespace

TEST_CASE("honest solver with two honest auditors reaches verified") {
  const TaskRegistry registry = default_registry();
  Scenario sc = base_scenario(registry);
  sc.agents = {
      {ParticipantId{1}, BehaviorKind::HonestSolver, 2},
      {ParticipantId{2}, BehaviorKind::HonestAuditor, 5},
      {ParticipantId{3}, BehaviorKind::HonestAuditor, 7},
  };

  const ScenarioReport report = run_scenario(sc, registry);
  CHECK(report.final_status == RequestStatus::Verified);
  CHECK(*report.result == factorial_state(Natural(0), Natural(720)));
  CHECK(report.V == std::set<std::uint64_t>{2, 3});
  CHECK(report.L.empty());
  CHECK(report.solver.id == 1);
  CHECK(report.secret.has_value());
  CHECK(report.metrics.n == 6);
  CHECK(report.metrics.certificate_bytes == 32 * 6);

  // the solver collected the reward, auditors got fair shares, nobody lost
  for (const AgentReport& agent : report.agents) CHECK(agent.ledger_delta >= 0);
}

TEST_CASE("faulty solver is refuted, honest auditor re-solves to verified") {
  const TaskRegistry registry = default_registry();
  Scenario sc = base_scenario(registry, 9);
  sc.agents = {
      {ParticipantId{4}, BehaviorKind::FaultySolver, 1, 3, CorruptionMode::FlipCertEntry, 0},
      {ParticipantId{5}, BehaviorKind::HonestAuditor, 4},
  };

  const ScenarioReport report = run_scenario(sc, registry);
  CHECK(report.final_status == RequestStatus::Verified);
  CHECK(*report.result == factorial_state(Natural(0), Natural(362880)));
  CHECK(report.L == std::set<std::uint64_t>{4});
  CHECK(report.V.contains(5));
  CHECK(report.solver.id == 5);

  // the faulty solver paid: its solution deposit went to the refuter
  for (const AgentReport& agent : report.agents) {
    if (agent.id == 4) CHECK(agent.ledger_delta < 0);
    if (agent.id == 5) CHECK(agent.ledger_delta > 0);
  }
}

TEST_CASE("flip-result fraud is refuted end to end") {
  const TaskRegistry registry = default_registry();
  Scenario sc = base_scenario(registry, 7);
  sc.agents = {
      {ParticipantId{4}, BehaviorKind::FaultySolver, 1, 7, CorruptionMode::FlipResult, 0},
      {ParticipantId{5}, BehaviorKind::HonestAuditor, 3},
  };
  const ScenarioReport report = run_scenario(sc, registry);
  CHECK(report.final_status == RequestStatus::Verified);
  CHECK(report.L == std::set<std::uint64_t>{4});
  CHECK(*report.result == factorial_state(Natural(0), Natural(5040)));
}

TEST_CASE("wrong-fixpoint submissions die at the door and the round recovers") {
  const TaskRegistry registry = default_registry();
  Scenario sc = base_scenario(registry, 5);
  sc.agents = {
      {ParticipantId{4}, BehaviorKind::FaultySolver, 1, 2, CorruptionMode::WrongFixpoint, 0},
      {ParticipantId{6}, BehaviorKind::HonestSolver, 4},
  };
  const ScenarioReport report = run_scenario(sc, registry);
  CHECK(report.final_status == RequestStatus::Verified);
  CHECK(report.L == std::set<std::uint64_t>{4});
  CHECK(report.solver.id == 6);
}

TEST_CASE("lazy auditor lands in L, honest auditors in V") {
  const TaskRegistry registry = default_registry();
  Scenario sc = base_scenario(registry);
  sc.agents = {
      {ParticipantId{1}, BehaviorKind::HonestSolver, 1},
      {ParticipantId{2}, BehaviorKind::HonestAuditor, 3},
      {ParticipantId{7}, BehaviorKind::LazyAuditor, 2},
  };
  const ScenarioReport report = run_scenario(sc, registry);
  CHECK(report.final_status == RequestStatus::Verified);
  CHECK(report.V == std::set<std::uint64_t>{2});
  CHECK(report.L == std::set<std::uint64_t>{7});

  for (const AgentReport& agent : report.agents) {
    if (agent.id == 7) CHECK(agent.ledger_delta == -sc.arbiter.deposits.proof);
  }
}

TEST_CASE("griefing refuter burns its deposits without effect") {
  const TaskRegistry registry = default_registry();
  Scenario sc = base_scenario(registry);
  sc.agents = {
      {ParticipantId{1}, BehaviorKind::HonestSolver, 1},
      {ParticipantId{2}, BehaviorKind::HonestAuditor, 3},
      {ParticipantId{8}, BehaviorKind::GriefingRefuter, 2, 1, CorruptionMode::FlipCertEntry, 3},
  };
  const ScenarioReport report = run_scenario(sc, registry);
  CHECK(report.final_status == RequestStatus::Verified);
  CHECK(report.L.contains(8));
  CHECK(report.V == std::set<std::uint64_t>{2});
  for (const AgentReport& agent : report.agents) {
    if (agent.id == 8) CHECK(agent.ledger_delta == -3 * sc.arbiter.deposits.refute);
  }
}

TEST_CASE("unaudited fraud finalizes: security requires at least one honest auditor") {
  // A consistent forger who did the full computation and then lied about the
  // result cannot be caught by the arbiter alone; this is the protocol's
  // standing assumption, the same one that makes auditors worth paying.
  const TaskRegistry registry = default_registry();
  Scenario sc = base_scenario(registry, 7);
  sc.agents = {
      {ParticipantId{4}, BehaviorKind::FaultySolver, 1, 7, CorruptionMode::FlipResult, 0},
  };
  const ScenarioReport report = run_scenario(sc, registry);
  CHECK(report.final_status == RequestStatus::Verified);
  CHECK(!(*report.result == factorial_state(Natural(0), Natural(5040))));
  CHECK(report.L.empty());
}

TEST_CASE("silent solver: the request falls back to published after the window") {
  const TaskRegistry registry = default_registry();
  Scenario sc = base_scenario(registry);
  sc.agents = {{ParticipantId{9}, BehaviorKind::SilentSolver, 2}};
  const ScenarioReport report = run_scenario(sc, registry);
  CHECK(report.final_status == RequestStatus::Published);
  CHECK(report.L == std::set<std::uint64_t>{9});
}

TEST_CASE("scenario replay is bit-identical") {
  const TaskRegistry registry = default_registry();
  Scenario sc = base_scenario(registry, 8);
  sc.agents = {
      {ParticipantId{4}, BehaviorKind::FaultySolver, 1, 5, CorruptionMode::FlipCertEntry, 0},
      {ParticipantId{2}, BehaviorKind::HonestAuditor, 3},
      {ParticipantId{7}, BehaviorKind::LazyAuditor, 2},
      {ParticipantId{8}, BehaviorKind::GriefingRefuter, 4, 1, CorruptionMode::FlipCertEntry, 2},
  };
  const ScenarioReport a = run_scenario(sc, registry);
  const ScenarioReport b = run_scenario(sc, registry);
  CHECK(a.log == b.log);
  CHECK(a.final_status == b.final_status);
  CHECK(!a.log.empty());

  Scenario different = sc;
  different.seed = 12;
  const ScenarioReport c = run_scenario(different, registry);
  // a different seed may reorder random draws; the protocol outcome holds
  CHECK(c.final_status == RequestStatus::Verified);
}

TEST_CASE("dpll scenario certifies an unsat formula end to end") {
  const TaskRegistry registry = default_registry();
  Scenario sc;
  sc.task_name = "dpll";
  sc.input = dpll_initial_state(parse_dimacs("p cnf 2 4\n1 2 0\n1 -2 0\n-1 2 0\n-1 -2 0\n"));
  sc.seed = 3;
  sc.arbiter.verification_period = 15;
  sc.arbiter.reveal_window = 15;
  sc.agents = {
      {ParticipantId{1}, BehaviorKind::HonestSolver, 1},
      {ParticipantId{2}, BehaviorKind::HonestAuditor, 3},
      {ParticipantId{3}, BehaviorKind::HonestAuditor, 4},
  };
  const ScenarioReport report = run_scenario(sc, registry);
  CHECK(report.final_status == RequestStatus::Verified);
  CHECK(dpll_mode(*report.result) == DpllMode::Unsat);
  CHECK(report.V == std::set<std::uint64_t>{2, 3});
  CHECK(report.L.empty());
  CHECK(report.rendered_result == "unsat");
}

TEST_CASE("external projection with oracle fetch: refutation still lands") {
  const TaskRegistry registry = default_registry();
  Scenario sc;
  sc.task_name = "factorial";
  sc.input = factorial_initial(100);
  sc.seed = 21;
  sc.arbiter.verification_period = 30;
  sc.arbiter.reveal_window = 30;
  sc.arbiter.t_max = 256;  // forces the projection into the external store
  sc.agents = {
      {ParticipantId{4}, BehaviorKind::FaultySolver, 1, 60, CorruptionMode::FlipCertEntry, 0},
      {ParticipantId{5}, BehaviorKind::HonestAuditor, 3},
  };
  const ScenarioReport report = run_scenario(sc, registry);
  CHECK(report.final_status == RequestStatus::Verified);
  CHECK(report.L == std::set<std::uint64_t>{4});
  CHECK(report.solver.id == 5);
  CHECK(report.metrics.n == 100);
}

TEST_CASE("blob outage: the solution is declined and nothing completes") {
  const TaskRegistry registry = default_registry();
  Scenario sc;
  sc.task_name = "factorial";
  sc.input = factorial_initial(100);
  sc.seed = 5;
  sc.arbiter.t_max = 256;
  sc.blob_outage_after_put = true;
  sc.agents = {{ParticipantId{1}, BehaviorKind::HonestSolver, 2}};
  const ScenarioReport report = run_scenario(sc, registry);
  CHECK(report.final_status == RequestStatus::Published);
  CHECK(report.L.empty());  // an outage is not the solver's protocol breach at submit time
}

TEST_CASE("scenario corpus: honest completeness and adversary soundness") {
  // Random agent mixes around one honest solver. Every run must verify with
  // the true result; every listed adversary ends in L whenever any honest
  // party is around to check; V never admits a party without the secret;
  // currency balances out across all participants.
  const TaskRegistry registry = default_registry();
  Rng rng(0x5eed7001);

  for (int round = 0; round < 30; ++round) {
    const std::uint64_t n = rng.uniform(3, 12);
    Scenario sc;
    sc.task_name = "factorial";
    sc.input = factorial_initial(n);
    sc.seed = 5000 + round;
    sc.arbiter.verification_period = 25;
    sc.arbiter.reveal_window = 25;

    std::set<std::uint64_t> honest_ids, adversary_ids;
    std::uint64_t next_id = 1;

    const std::uint64_t solver_id = next_id++;
    honest_ids.insert(solver_id);
    sc.agents.push_back({ParticipantId{solver_id}, BehaviorKind::HonestSolver,
                         rng.uniform(2, 6)});

    const std::uint64_t auditors = rng.uniform(0, 2);
    for (std::uint64_t i = 0; i < auditors; ++i) {
      const std::uint64_t id = next_id++;
      honest_ids.insert(id);
      sc.agents.push_back({ParticipantId{id}, BehaviorKind::HonestAuditor,
                           rng.uniform(3, 10)});
    }
    if (rng.chance_one_in(2)) {
      const std::uint64_t id = next_id++;
      adversary_ids.insert(id);
      const CorruptionMode mode =
          std::array{CorruptionMode::FlipCertEntry, CorruptionMode::FlipResult,
                     CorruptionMode::WrongFixpoint}[rng.uniform(0, 2)];
      // the faulty solver races ahead of the honest one
      sc.agents.push_back({ParticipantId{id}, BehaviorKind::FaultySolver, 1,
                           static_cast<std::uint32_t>(rng.uniform(1, n)), mode, 0});
    }
    if (rng.chance_one_in(2)) {
      const std::uint64_t id = next_id++;
      adversary_ids.insert(id);
      sc.agents.push_back({ParticipantId{id}, BehaviorKind::LazyAuditor, rng.uniform(2, 8)});
    }
    if (rng.chance_one_in(3)) {
      const std::uint64_t id = next_id++;
      adversary_ids.insert(id);
      sc.agents.push_back({ParticipantId{id}, BehaviorKind::GriefingRefuter,
                           rng.uniform(2, 8), 1, CorruptionMode::FlipCertEntry, 1});
    }

    const ScenarioReport report = run_scenario(sc, registry);
    INFO("round ", round, " n=", n, " agents=", sc.agents.size());

    CHECK(report.final_status == RequestStatus::Verified);
    std::uint64_t expected = 1;
    for (std::uint64_t i = 2; i <= n; ++i) expected *= i;
    CHECK(*report.result == factorial_state(Natural(0), Natural(expected)));

    // adversaries are eventually slashed; no honest party is
    for (std::uint64_t id : adversary_ids) CHECK(report.L.contains(id));
    for (std::uint64_t id : honest_ids) CHECK(!report.L.contains(id));
    // nobody enters V without having done the work
    for (std::uint64_t id : report.V) CHECK(honest_ids.contains(id));

    // currency conservation over the whole run
    std::int64_t net = report.user_ledger_delta;
    for (const AgentReport& agent : report.agents) net += agent.ledger_delta;
    CHECK(net == 0);

    // the arbiter never did more than one step evaluation per transaction
    CHECK(report.metrics.arbiter_f_applications <= report.metrics.transactions);
  }
}

TEST_CASE("corrupt_publication shapes") {
  const TaskRegistry registry = default_registry();
  const TaskProgram& task = registry.by_name("factorial");
  const RunResult honest = run_to_fixpoint(task, factorial_initial(12), 100);
  Rng rng(0x5eed6001);

  const ForgedPublication flip =
      corrupt_publication(honest, 5, CorruptionMode::FlipCertEntry, rng, task);
  const auto divergence = first_divergence(honest.cp, flip.cp);
  REQUIRE(divergence.has_value());
  CHECK(*divergence == 5);
  CHECK(task.step(flip.r_n) == flip.r_n);  // still a fixpoint
  CHECK(flip.hc != honest.hc);

  const ForgedPublication wrong =
      corrupt_publication(honest, 3, CorruptionMode::WrongFixpoint, rng, task);
  CHECK(!(task.step(wrong.r_n) == wrong.r_n));

  const ForgedPublication result =
      corrupt_publication(honest, 12, CorruptionMode::FlipResult, rng, task);
  CHECK(task.step(result.r_n) == result.r_n);
  CHECK(!(result.r_n == honest.r_n));
  CHECK(result.cp.items == honest.cp.items);

  CHECK_THROWS_AS(corrupt_publication(honest, 0, CorruptionMode::FlipCertEntry, rng, task),
                  Error);
  CHECK_THROWS_AS(corrupt_publication(honest, 13, CorruptionMode::FlipCertEntry, rng, task),
                  Error);
}

TEST_CASE("scenario failures surface as scenario errors with the offending tick") {
  const TaskRegistry registry = default_registry();
  Scenario sc = base_scenario(registry, 4);
  // corrupt_step beyond the run length makes the forger blow up at its tick
  sc.agents = {{ParticipantId{4}, BehaviorKind::FaultySolver, 3, 99,
                CorruptionMode::FlipCertEntry, 0}};
  try {
    run_scenario(sc, registry);
    FAIL("expected a scenario error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ScenarioError);
    CHECK(std::string(e.what()).find("tick 3") != std::string::npos);
    CHECK(std::string(e.what()).find("agent 4") != std::string::npos);
  }
}

TEST_CASE("metrics: certificate size identities at table and desk scale") {
  // n = 1656 and n = 410802 imply the published certificate sizes exactly
  CHECK(1656u * 32u == 52992u);
  CHECK(410802u * 32u == 13145664u);

  const TaskRegistry registry = default_registry();
  Scenario sc = base_scenario(registry, 10);
  sc.agents = {{ParticipantId{1}, BehaviorKind::HonestSolver, 1}};
  const ScenarioReport report = run_scenario(sc, registry);
  CHECK(report.metrics.n == 10);
  CHECK(report.metrics.certificate_bytes == 320);
  CHECK(report.metrics.d0_bytes > 0);
  CHECK(report.metrics.dmax_bytes >= report.metrics.d0_bytes);
  CHECK(report.metrics.transactions >= 2);  // publish + submit + reveal
  CHECK(report.metrics.arbiter_f_applications <= report.metrics.transactions);

  // a thousand-step run pins the 32-bytes-per-step relation at scale
  Scenario big = base_scenario(registry, 1000);
  big.agents = {{ParticipantId{1}, BehaviorKind::HonestSolver, 1}};
  big.max_steps = 2000;
  const ScenarioReport big_report = run_scenario(big, registry);
  CHECK(big_report.metrics.n == 1000);
  CHECK(big_report.metrics.certificate_bytes == 32000);
}

TEST_CASE("scenario json: load, run, expectations") {
  const TaskRegistry registry = default_registry();
  const std::string doc = R"({
    "task": "factorial",
    "input": "6",
    "seed": 7,
    "arbiter": {"T": 10, "reveal_window": 10,
                "deposits": {"D_r": 100, "D_s": 10, "D_p": 5, "D_w": 1}},
    "agents": [
      {"id": 1, "behavior": "honest-solver", "compute_delay": 1},
      {"id": 2, "behavior": "honest-auditor", "compute_delay": 3}
    ],
    "expect": {"final_status": "verified", "result": "{0,720}", "V": [2], "L": [], "n": 6}
  })";
  const ScenarioFile file = load_scenario(doc, registry);
  CHECK(file.scenario.arbiter.verification_period == 10);
  REQUIRE(file.scenario.agents.size() == 2);

  const ScenarioReport report = run_scenario(file.scenario, registry);
  CHECK(!check_expectations(file.expect, report).has_value());

  ScenarioExpectations wrong = file.expect;
  wrong.result = "{0,721}";
  CHECK(check_expectations(wrong, report).has_value());

  const std::string rendered = report_to_json(report);
  CHECK(rendered.find("\"final_status\": \"verified\"") != std::string::npos);

  CHECK_THROWS_AS(load_scenario("{not json", registry), Error);
  CHECK_THROWS_AS(load_scenario(R"({"task": "nope", "input": "1", "agents": []})", registry),
                  Error);
}
