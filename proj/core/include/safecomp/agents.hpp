#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "safecomp/arbiter.hpp"
#include "safecomp/iterative.hpp"
#include "safecomp/rng.hpp"
#include "safecomp/storage.hpp"
#include "safecomp/tasks.hpp"

namespace safecomp {

enum class BehaviorKind : std::uint8_t {
  HonestSolver,     // computes, submits first chance, reveals on time
  HonestAuditor,    // computes, audits publications, proofs or refutes; re-solves after a refuted round
  SilentSolver,     // honest solver that never reveals (exercises the expiry path)
  FaultySolver,     // computes, then submits a corrupted publication
  LazyAuditor,      // skips the work and submits a made-up proof
  GriefingRefuter,  // fires random refutations at whatever is published
};

const char* behavior_name(BehaviorKind kind);
BehaviorKind behavior_from_name(const std::string& name);  // BadArgument

enum class CorruptionMode : std::uint8_t {
  FlipCertEntry,  // flip a chain entry at step k inside the projection window
  FlipResult,     // keep the honest chain, publish a different fixpoint result
  WrongFixpoint,  // publish a state that is not a fixpoint at all
};

const char* corruption_name(CorruptionMode mode);
CorruptionMode corruption_from_name(const std::string& name);  // BadArgument

struct AgentSpec {
  ParticipantId id;
  BehaviorKind behavior = BehaviorKind::HonestAuditor;
  std::uint64_t compute_delay = 0;  // tick at which this agent's run finishes

  std::uint32_t corrupt_step = 1;  // FaultySolver: k
  CorruptionMode corruption = CorruptionMode::FlipCertEntry;
  std::uint32_t refutation_count = 1;  // GriefingRefuter
};

struct Scenario {
  std::string task_name;
  Value input;
  std::vector<AgentSpec> agents;
  std::uint64_t seed = 0;
  ArbiterConfig arbiter;
  ParticipantId user{999};
  std::int64_t initial_balance = 10000;
  std::uint64_t max_steps = 1000000;  // provider-side iteration budget
  std::uint64_t horizon = 100000;     // scheduler safety cap in ticks

  /// Simulates the external store going dark right after the solver uploads
  /// its projection, so the arbiter's availability probe fails.
  bool blob_outage_after_put = false;

  /// When set, the scenario's blob store mirrors every blob into this
  /// directory as digest-named files.
  std::optional<std::string> blob_dir;
};

struct AgentReport {
  std::uint64_t id = 0;
  std::string behavior;
  std::int64_t ledger_delta = 0;
};

struct ScenarioMetrics {
  std::uint32_t n = 0;                   // honest iteration count
  std::size_t certificate_bytes = 0;     // C_f = (q/8)·n
  std::size_t d0_bytes = 0;
  std::size_t dmax_bytes = 0;
  std::size_t transactions = 0;
  std::uint64_t arbiter_f_applications = 0;
};

struct ScenarioReport {
  std::uint64_t request_id = 0;
  RequestStatus final_status = RequestStatus::Published;
  std::uint64_t final_tick = 0;

  // the protocol output tuple, populated once Verified
  std::optional<Value> result;
  std::optional<Secret> secret;
  ParticipantId solver;
  std::set<std::uint64_t> V;
  std::set<std::uint64_t> L;

  std::vector<AgentReport> agents;
  std::int64_t user_ledger_delta = 0;
  ScenarioMetrics metrics;
  Bytes log;  // canonical arbiter transaction log
  std::string rendered_result;
};

/// A publication forged from an honest run. Consistent enough to clear the
/// submit-time checks (except WrongFixpoint, which is built to fail them);
/// the forger still knows a secret matching its own fingerprint.
struct ForgedPublication {
  Value r_n;
  Digest c_n;
  CertProjection cp;
  Fingerprint hc;
  Secret s;
  std::vector<Digest> entries;
};

ForgedPublication corrupt_publication(const RunResult& honest, std::uint32_t k,
                                      CorruptionMode mode, Rng& rng, const TaskProgram& task,
                                      const HashParams& params = kDefaultHashParams);

ScenarioMetrics collect_metrics(const std::vector<LogRecord>& log, const RunResult& reference,
                                std::uint64_t arbiter_f_applications, const HashParams& params);

/// Runs the discrete-tick schedule: agents compute off-arbiter, transactions
/// enter in (ready tick, agent id) order, the arbiter processes sequentially.
/// ScenarioError wraps agent or arbiter failures with the offending tick.
ScenarioReport run_scenario(const Scenario& scenario, const TaskRegistry& registry);

}  // namespace safecomp
