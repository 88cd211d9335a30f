#include "safecomp/agents.hpp"

#include <algorithm>
#include <string>

#include "safecomp/errors.hpp"

namespace safecomp {

const char* behavior_name(BehaviorKind kind) {
  switch (kind) {
    case BehaviorKind::HonestSolver: return "honest-solver";
    case BehaviorKind::HonestAuditor: return "honest-auditor";
    case BehaviorKind::SilentSolver: return "silent-solver";
    case BehaviorKind::FaultySolver: return "faulty-solver";
    case BehaviorKind::LazyAuditor: return "lazy-auditor";
    case BehaviorKind::GriefingRefuter: return "griefing-refuter";
  }
  return "?";
}

BehaviorKind behavior_from_name(const std::string& name) {
  for (BehaviorKind kind :
       {BehaviorKind::HonestSolver, BehaviorKind::HonestAuditor, BehaviorKind::SilentSolver,
        BehaviorKind::FaultySolver, BehaviorKind::LazyAuditor, BehaviorKind::GriefingRefuter}) {
    if (name == behavior_name(kind)) return kind;
  }
  raise(Errc::BadArgument, "unknown behavior '" + name + "'");
}

const char* corruption_name(CorruptionMode mode) {
  switch (mode) {
    case CorruptionMode::FlipCertEntry: return "flip-cert-entry";
    case CorruptionMode::FlipResult: return "flip-result";
    case CorruptionMode::WrongFixpoint: return "wrong-fixpoint";
  }
  return "?";
}

CorruptionMode corruption_from_name(const std::string& name) {
  for (CorruptionMode mode : {CorruptionMode::FlipCertEntry, CorruptionMode::FlipResult,
                              CorruptionMode::WrongFixpoint}) {
    if (name == corruption_name(mode)) return mode;
  }
  raise(Errc::BadArgument, "unknown corruption mode '" + name + "'");
}

namespace {

/// Another fixpoint of the task, different from the honest result. Used by
/// the flip-result forger; per-task because fixpoint shape is task knowledge.
Value alternate_fixpoint(const TaskProgram& task, const Value& honest, Rng& rng) {
  if (task.name == "factorial") {
    const auto& fields = honest.items();
    return Value::tuple({fields[0], Value::nat(fields[1].as_nat().plus(Natural(1)))});
  }
  if (task.name == "dpll") {
    const auto& fields = honest.items();
    const std::uint64_t mode = fields[0].as_nat().as_u64();
    return Value::tuple({Value::nat(mode == 1 ? 2 : 1), fields[1], fields[2]});
  }
  if (task.name.starts_with("tm-")) {
    // Any tape mutation stays a fixpoint: the machine already accepted.
    const auto& fields = honest.items();
    std::vector<Value> cells = fields[0].items();
    if (!cells.empty()) cells.pop_back();
    else cells.push_back(Value::tuple({Value::nat(zigzag(1)), Value::nat(rng.uniform(1, 2))}));
    return Value::tuple({Value::list(std::move(cells)), fields[1], fields[2]});
  }
  if (task.name.starts_with("trivial-")) {
    const auto& fields = honest.items();
    if (fields[0].is_nat())
      return Value::tuple({Value::nat(fields[0].as_nat().plus(Natural(1))), Value::nat(1)});
  }
  raise(Errc::BadArgument, "no alternate-fixpoint forger for task '" + task.name + "'");
}

Value non_fixpoint(const TaskProgram& task, const Value& honest) {
  if (task.name == "factorial") {
    const auto& fields = honest.items();
    return Value::tuple({Value::nat(1), fields[1]});
  }
  if (task.name == "dpll") {
    const auto& fields = honest.items();
    return Value::tuple({Value::nat(0), fields[1], Value::list({})});
  }
  // A shape the task cannot interpret; the fixpoint check treats a throwing
  // step as "not a fixpoint".
  return Value::tuple({honest, honest});
}

}  // namespace

ForgedPublication corrupt_publication(const RunResult& honest, std::uint32_t k,
                                      CorruptionMode mode, Rng& rng, const TaskProgram& task,
                                      const HashParams& params) {
  if (honest.n == 0) raise(Errc::BadArgument, "cannot corrupt a zero-step run");
  if (k < 1 || k > honest.n) raise(Errc::BadArgument, "corrupt step outside 1..n");

  ForgedPublication out;
  switch (mode) {
    case CorruptionMode::FlipCertEntry: {
      std::vector<Digest> entries = honest.chain.entries;
      // Flip inside the first byte so the projection (p >= 8) always moves.
      entries[k - 1].bytes[0] ^= static_cast<std::uint8_t>(1u << rng.uniform(0, 7));
      out.r_n = honest.r_n;
      out.c_n = entries.back();
      out.cp = CertProjection{params.p, project_chain(entries, params)};
      std::tie(out.s, out.hc) = fingerprint_of_entries(entries);
      out.entries = std::move(entries);
      break;
    }
    case CorruptionMode::FlipResult:
    case CorruptionMode::WrongFixpoint: {
      out.entries = honest.chain.entries;
      out.c_n = honest.chain.entries.back();
      out.cp = honest.cp;
      out.s = honest.s;
      out.hc = honest.hc;
      out.r_n = mode == CorruptionMode::FlipResult ? alternate_fixpoint(task, honest.r_n, rng)
                                                   : non_fixpoint(task, honest.r_n);
      break;
    }
  }
  return out;
}

ScenarioMetrics collect_metrics(const std::vector<LogRecord>& log, const RunResult& reference,
                                std::uint64_t arbiter_f_applications, const HashParams& params) {
  ScenarioMetrics metrics;
  metrics.n = reference.n;
  metrics.certificate_bytes = static_cast<std::size_t>(params.q / 8) * reference.n;
  metrics.d0_bytes = reference.d0_bytes;
  metrics.dmax_bytes = reference.dmax_bytes;
  metrics.arbiter_f_applications = arbiter_f_applications;
  for (const LogRecord& record : log) {
    if (record.sender != 0) ++metrics.transactions;
  }
  return metrics;
}

namespace {

struct AgentState {
  AgentSpec spec;
  Rng rng{0};
  bool computed = false;
  std::optional<ForgedPublication> forged;
  bool submitted_ever = false;
  std::uint64_t attempt_epoch = ~0ull;   // last epoch we tried to submit in
  std::uint64_t accepted_epoch = ~0ull;  // epoch our accepted submission opened
  std::uint64_t acted_epoch = ~0ull;     // audit/proof/refutation bookkeeping
  std::uint32_t refutations_sent = 0;
  bool reveal_attempted = false;
};

class ScenarioEngine {
 public:
  ScenarioEngine(const Scenario& scenario, const TaskRegistry& registry)
      : scenario_(scenario),
        registry_(registry),
        task_(registry.by_name(scenario.task_name)),
        store_(scenario.blob_dir ? BlobStore(std::filesystem::path(*scenario.blob_dir))
                                 : BlobStore()),
        arbiter_(scenario.arbiter, registry_, store_),
        rng_(scenario.seed) {}

  ScenarioReport run();

 private:
  bool act(AgentState& agent);
  bool provider_act(AgentState& agent, const RequestView& view);
  bool submit_publication(AgentState& agent, const Value& r, const Digest& c_n,
                          const CertProjection& cp, const Fingerprint& hc);
  bool audit_and_react(AgentState& agent, const RequestView& view);
  std::optional<CertProjection> fetch_published_cp(const RequestView& view) const;
  const RunResult& honest_run();

  const Scenario& scenario_;
  const TaskRegistry& registry_;
  const TaskProgram& task_;
  BlobStore store_;
  Arbiter arbiter_;
  Rng rng_;

  std::vector<AgentState> agents_;
  std::optional<RunResult> honest_;
  std::uint64_t request_id_ = 0;
  std::uint64_t submit_epoch_ = 0;  // bumps on every accepted solution
  bool outage_armed_ = false;
};

const RunResult& ScenarioEngine::honest_run() {
  if (!honest_) {
    honest_ = run_to_fixpoint(task_, scenario_.input, scenario_.max_steps,
                              scenario_.arbiter.hash);
  }
  return *honest_;
}

std::optional<CertProjection> ScenarioEngine::fetch_published_cp(const RequestView& view) const {
  if (!view.cp) return std::nullopt;
  if (view.cp->inline_cp) return view.cp->inline_cp;
  try {
    return read_projection_file(store_.get(*view.cp->ref));
  } catch (const Error&) {
    return std::nullopt;  // store outage: nothing to audit against
  }
}

bool ScenarioEngine::submit_publication(AgentState& agent, const Value& r, const Digest& c_n,
                                        const CertProjection& cp, const Fingerprint& hc) {
  const Bytes file = write_projection_file(cp);
  const std::size_t inline_payload =
      encode(r).size() + Digest::kSize + file.size() + Digest::kSize;

  CpPayload payload;
  if (inline_payload <= scenario_.arbiter.t_max) {
    payload = CpInline{file};
  } else {
    const BlobRef ref = store_.put(file);
    if (scenario_.blob_outage_after_put && !outage_armed_) {
      store_.set_available(false);
      outage_armed_ = true;
    }
    payload = CpByRef{ref};
  }

  agent.attempt_epoch = submit_epoch_;
  agent.submitted_ever = true;
  const TxOutcome outcome = arbiter_.process(
      {agent.spec.id, SubmitSolution{request_id_, r, c_n, payload, hc}});
  if (outcome.applied()) {
    ++submit_epoch_;
    agent.accepted_epoch = submit_epoch_;
    agent.reveal_attempted = false;
  }
  return true;
}

bool ScenarioEngine::audit_and_react(AgentState& agent, const RequestView& view) {
  if (agent.acted_epoch == submit_epoch_) return false;
  const std::optional<CertProjection> published_cp = fetch_published_cp(view);
  if (!published_cp || !view.hc) return false;  // cannot audit yet

  agent.acted_epoch = submit_epoch_;
  const RunResult& honest = honest_run();

  // The published solution itself must match the honest final pair; a forged
  // result on top of an honest-looking chain is contested at the last index.
  const Digest honest_c_n = honest.n == 0 ? honest.chain.c0 : honest.chain.entries.back();
  const bool pair_matches = view.r && *view.r == honest.r_n && view.c_n &&
                            *view.c_n == honest_c_n;
  if (!pair_matches && honest.n >= 1) {
    const Value r_prev = [&] {
      Value x = scenario_.input;
      for (std::uint32_t i = 0; i + 1 < honest.n; ++i) x = task_.step(x);
      return x;
    }();
    const Digest c_prev =
        honest.n >= 2 ? honest.chain.entries[honest.n - 2] : honest.chain.c0;
    // Only valid when the published projection agrees with ours at n-1; a
    // projection divergence is handled through the regular audit below.
    const bool anchored = honest.n == 1 || (published_cp->length() >= honest.n - 1 &&
                                            published_cp->at(honest.n - 1) ==
                                                honest.cp.at(honest.n - 1));
    if (anchored && published_cp->length() >= honest.n) {
      arbiter_.process({agent.spec.id,
                        Refute{request_id_, honest.n, r_prev, c_prev,
                               honest.chain.entries.back()}});
      return true;
    }
  }

  const AuditOutcome outcome = audit_run(task_, scenario_.input, *published_cp, *view.hc,
                                         scenario_.max_steps, scenario_.arbiter.hash);
  if (const auto* agree = std::get_if<AuditAgree>(&outcome)) {
    const VerificationProof proof = make_verification_proof(agree->s, agent.spec.id);
    arbiter_.process({agent.spec.id, SubmitProof{request_id_, proof.prf}});
    return true;
  }
  if (const auto* disagree = std::get_if<AuditDisagree>(&outcome)) {
    arbiter_.process({agent.spec.id, Refute{request_id_, disagree->i, disagree->r_prev,
                                            disagree->c_prev, disagree->c_i}});
    return true;
  }
  // Fingerprint-only mismatch: no index to refute at; the reveal or the
  // expiry path settles it.
  return true;
}

bool ScenarioEngine::provider_act(AgentState& agent, const RequestView& view) {
  if (arbiter_.now() < agent.spec.compute_delay) return false;
  if (!agent.computed) {
    honest_run();
    if (agent.spec.behavior == BehaviorKind::FaultySolver) {
      agent.forged = corrupt_publication(honest_run(), agent.spec.corrupt_step,
                                         agent.spec.corruption, agent.rng, task_,
                                         scenario_.arbiter.hash);
    }
    agent.computed = true;
  }

  const RunResult& honest = honest_run();

  switch (view.status) {
    case RequestStatus::Published: {
      const Digest honest_c_n =
          honest.n == 0 ? honest.chain.c0 : honest.chain.entries.back();
      switch (agent.spec.behavior) {
        case BehaviorKind::HonestSolver:
          if (agent.attempt_epoch == submit_epoch_) return false;
          return submit_publication(agent, honest.r_n, honest_c_n, honest.cp, honest.hc);
        case BehaviorKind::SilentSolver:
        case BehaviorKind::FaultySolver: {
          if (agent.submitted_ever) return false;  // one attempt, no retries
          if (agent.spec.behavior == BehaviorKind::SilentSolver)
            return submit_publication(agent, honest.r_n, honest_c_n, honest.cp, honest.hc);
          const ForgedPublication& forged = *agent.forged;
          return submit_publication(agent, forged.r_n, forged.c_n, forged.cp, forged.hc);
        }
        case BehaviorKind::HonestAuditor:
          // Auditors step up as solvers only after a completed round failed.
          if (submit_epoch_ == 0) return false;
          if (agent.attempt_epoch == submit_epoch_) return false;
          return submit_publication(agent, honest.r_n, honest_c_n, honest.cp, honest.hc);
        default:
          return false;
      }
    }
    case RequestStatus::Completed: {
      const bool is_solver = agent.accepted_epoch == submit_epoch_;
      if (is_solver) {
        if (agent.spec.behavior == BehaviorKind::SilentSolver) return false;  // never reveals
        if (agent.reveal_attempted || !view.deadline || arbiter_.now() < *view.deadline)
          return false;
        agent.reveal_attempted = true;
        const Secret secret = agent.spec.behavior == BehaviorKind::FaultySolver
                                  ? agent.forged->s
                                  : honest.s;
        arbiter_.process({agent.spec.id, RevealSecret{request_id_, secret}});
        return true;
      }
      if (agent.spec.behavior == BehaviorKind::HonestSolver ||
          agent.spec.behavior == BehaviorKind::HonestAuditor)
        return audit_and_react(agent, view);
      return false;
    }
    case RequestStatus::Verified:
      return false;
  }
  return false;
}

bool ScenarioEngine::act(AgentState& agent) {
  const RequestView view = arbiter_.query_request(request_id_);

  switch (agent.spec.behavior) {
    case BehaviorKind::HonestSolver:
    case BehaviorKind::HonestAuditor:
    case BehaviorKind::SilentSolver:
    case BehaviorKind::FaultySolver:
      return provider_act(agent, view);

    case BehaviorKind::LazyAuditor: {
      if (arbiter_.now() < agent.spec.compute_delay) return false;
      if (view.status != RequestStatus::Completed) return false;
      if (agent.acted_epoch == submit_epoch_) return false;
      agent.acted_epoch = submit_epoch_;
      Digest fake;
      const Bytes noise = agent.rng.bytes(Digest::kSize);
      std::copy(noise.begin(), noise.end(), fake.bytes.begin());
      arbiter_.process({agent.spec.id, SubmitProof{request_id_, fake}});
      return true;
    }

    case BehaviorKind::GriefingRefuter: {
      if (arbiter_.now() < agent.spec.compute_delay) return false;
      if (view.status != RequestStatus::Completed) return false;
      if (agent.refutations_sent >= agent.spec.refutation_count) return false;
      if (!view.cp || view.cp->n == 0) return false;
      ++agent.refutations_sent;
      Digest c_prev, c_i;
      Bytes noise = agent.rng.bytes(Digest::kSize);
      std::copy(noise.begin(), noise.end(), c_prev.bytes.begin());
      noise = agent.rng.bytes(Digest::kSize);
      std::copy(noise.begin(), noise.end(), c_i.bytes.begin());
      const std::uint32_t i =
          static_cast<std::uint32_t>(agent.rng.uniform(1, view.cp->n));
      arbiter_.process({agent.spec.id,
                        Refute{request_id_, i, Value::nat(agent.rng.next_u64()), c_prev, c_i}});
      return true;
    }
  }
  return false;
}

ScenarioReport ScenarioEngine::run() {
  for (const AgentSpec& spec : scenario_.agents) {
    AgentState state;
    state.spec = spec;
    state.rng = rng_.fork(spec.id.id);
    agents_.push_back(std::move(state));
  }
  std::sort(agents_.begin(), agents_.end(),
            [](const AgentState& a, const AgentState& b) { return a.spec.id.id < b.spec.id.id; });

  arbiter_.fund(scenario_.user, scenario_.initial_balance);
  std::map<std::uint64_t, std::int64_t> initial_balances;
  for (const AgentState& agent : agents_) {
    arbiter_.fund(agent.spec.id, scenario_.initial_balance);
    initial_balances[agent.spec.id.id] = scenario_.initial_balance;
  }

  const TxOutcome published = arbiter_.process(
      {scenario_.user, PublishTask{task_.task_id, scenario_.input}});
  if (!published.applied())
    raise(Errc::ScenarioError, "publish failed at tick 0: " + published.detail);
  request_id_ = published.request;

  const std::uint64_t quiesce_after =
      scenario_.arbiter.verification_period + scenario_.arbiter.reveal_window + 4;
  std::uint64_t max_delay = 0;
  for (const AgentState& agent : agents_)
    max_delay = std::max(max_delay, agent.spec.compute_delay);
  std::uint64_t idle_ticks = 0;

  for (std::uint64_t tick = 0; tick <= scenario_.horizon; ++tick) {
    if (tick > 0) arbiter_.tick(1);
    bool activity = !arbiter_.expire_due().empty();
    for (AgentState& agent : agents_) {
      try {
        activity = act(agent) || activity;
      } catch (const Error& e) {
        raise(Errc::ScenarioError, "agent " + std::to_string(agent.spec.id.id) + " at tick " +
                                       std::to_string(arbiter_.now()) + ": " + e.what());
      }
    }
    idle_ticks = activity ? 0 : idle_ticks + 1;
    const RequestStatus status = arbiter_.query_request(request_id_).status;
    if (status == RequestStatus::Verified) break;
    if (tick > max_delay && idle_ticks > quiesce_after) break;
  }

  ScenarioReport report;
  report.request_id = request_id_;
  report.final_tick = arbiter_.now();
  const RequestRecord& final = arbiter_.inspect_request(request_id_);
  report.final_status = final.status;
  report.result = final.r;
  report.secret = final.s;
  report.solver = final.solver;
  report.V = final.V;
  report.L = final.L;
  if (final.r) report.rendered_result = task_.render_state(*final.r);

  for (const AgentState& agent : agents_) {
    report.agents.push_back(AgentReport{
        agent.spec.id.id, behavior_name(agent.spec.behavior),
        arbiter_.balance(agent.spec.id) - initial_balances[agent.spec.id.id]});
  }
  report.user_ledger_delta = arbiter_.balance(scenario_.user) - scenario_.initial_balance;

  report.metrics = collect_metrics(arbiter_.log(), honest_run(),
                                   arbiter_.total_f_applications(), scenario_.arbiter.hash);
  report.log = arbiter_.log_bytes();
  return report;
}

}  // namespace

ScenarioReport run_scenario(const Scenario& scenario, const TaskRegistry& registry) {
  ScenarioEngine engine(scenario, registry);
  return engine.run();
}

}  // namespace safecomp
