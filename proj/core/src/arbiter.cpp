#include "safecomp/arbiter.hpp"

#include <algorithm>

#include "safecomp/errors.hpp"

namespace safecomp {

const char* status_name(RequestStatus status) {
  switch (status) {
    case RequestStatus::Published: return "published";
    case RequestStatus::Completed: return "completed";
    case RequestStatus::Verified: return "verified";
  }
  return "?";
}

const char* tx_kind_name(const Transaction& tx) {
  switch (tx.kind.index()) {
    case 0: return "publish";
    case 1: return "submit";
    case 2: return "refute";
    case 3: return "proof";
    case 4: return "reveal";
  }
  return "?";
}

namespace {

Value cp_payload_to_value(const CpPayload& cp) {
  if (const auto* inline_cp = std::get_if<CpInline>(&cp))
    return Value::tuple({Value::nat(0), Value::bytes(inline_cp->file)});
  const auto& ref = std::get<CpByRef>(cp).ref;
  return Value::tuple({Value::nat(1), ref.digest.as_value()});
}

}  // namespace

Value transaction_to_value(const Transaction& tx) {
  return std::visit(
      [&](const auto& body) -> Value {
        using T = std::decay_t<decltype(body)>;
        if constexpr (std::is_same_v<T, PublishTask>) {
          return Value::tuple({Value::nat(0), body.task_ref.as_value(), body.d});
        } else if constexpr (std::is_same_v<T, SubmitSolution>) {
          return Value::tuple({Value::nat(1), Value::nat(body.request), body.r_n,
                               body.c_n.as_value(), cp_payload_to_value(body.cp),
                               body.hc.hc.as_value()});
        } else if constexpr (std::is_same_v<T, Refute>) {
          return Value::tuple({Value::nat(2), Value::nat(body.request), Value::nat(body.i),
                               body.r_prev, body.c_prev.as_value(), body.c_i.as_value()});
        } else if constexpr (std::is_same_v<T, SubmitProof>) {
          return Value::tuple({Value::nat(3), Value::nat(body.request), body.prf.as_value()});
        } else {
          return Value::tuple({Value::nat(4), Value::nat(body.request), body.s.s.as_value()});
        }
      },
      tx.kind);
}

Value LogRecord::to_value() const {
  return Value::tuple({Value::nat(tick), Value::nat(sender), Value::bytes(bytes_of(kind)),
                       payload, Value::nat(static_cast<std::uint64_t>(result)),
                       Value::bytes(bytes_of(detail))});
}

Transaction transaction_from_value(ParticipantId sender, const Value& payload) {
  const auto& fields = payload.items();
  const std::uint64_t tag = fields.at(0).as_nat().as_u64();
  switch (tag) {
    case 0:
      return {sender, PublishTask{Digest::from_value(fields.at(1)), fields.at(2)}};
    case 1: {
      const auto& cp_fields = fields.at(4).items();
      CpPayload cp;
      if (cp_fields.at(0).as_nat().is_zero())
        cp = CpInline{cp_fields.at(1).as_bytes()};
      else
        cp = CpByRef{BlobRef{Digest::from_value(cp_fields.at(1))}};
      return {sender, SubmitSolution{fields.at(1).as_nat().as_u64(), fields.at(2),
                                     Digest::from_value(fields.at(3)), std::move(cp),
                                     Fingerprint{Digest::from_value(fields.at(5))}}};
    }
    case 2:
      return {sender, Refute{fields.at(1).as_nat().as_u64(),
                             static_cast<std::uint32_t>(fields.at(2).as_nat().as_u64()),
                             fields.at(3), Digest::from_value(fields.at(4)),
                             Digest::from_value(fields.at(5))}};
    case 3:
      return {sender, SubmitProof{fields.at(1).as_nat().as_u64(),
                                  Digest::from_value(fields.at(2))}};
    case 4:
      return {sender, RevealSecret{fields.at(1).as_nat().as_u64(),
                                   Secret{Digest::from_value(fields.at(2))}}};
    default:
      raise(Errc::UnencodableValue, "unknown transaction tag " + std::to_string(tag));
  }
}

std::vector<LogRecord> parse_log(const Bytes& log_bytes) {
  std::vector<LogRecord> records;
  std::size_t pos = 0;
  while (pos < log_bytes.size()) {
    if (pos + 5 > log_bytes.size()) raise(Errc::UnencodableValue, "truncated log record");
    const std::uint32_t len = read_u32_be({log_bytes.data() + pos + 1, 4});
    if (pos + 5 + len > log_bytes.size()) raise(Errc::UnencodableValue, "truncated log record");
    const Value v = decode(Bytes(log_bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                                 log_bytes.begin() + static_cast<std::ptrdiff_t>(pos + 5 + len)));
    pos += 5 + len;

    const auto& fields = v.items();
    LogRecord record;
    record.tick = fields.at(0).as_nat().as_u64();
    record.sender = fields.at(1).as_nat().as_u64();
    record.kind = std::string(fields.at(2).as_bytes().begin(), fields.at(2).as_bytes().end());
    record.payload = fields.at(3);
    record.result = static_cast<TxResult>(fields.at(4).as_nat().as_u64());
    record.detail = std::string(fields.at(5).as_bytes().begin(), fields.at(5).as_bytes().end());
    records.push_back(std::move(record));
  }
  return records;
}

void replay_log(const Bytes& log_bytes, Arbiter& arbiter) {
  for (const LogRecord& record : parse_log(log_bytes)) {
    if (record.tick > arbiter.now()) arbiter.tick(record.tick - arbiter.now());
    if (record.sender == 0) {
      if (record.kind == "fund") {
        const auto& fields = record.payload.items();
        arbiter.fund(ParticipantId{fields.at(0).as_nat().as_u64()},
                     static_cast<std::int64_t>(fields.at(1).as_nat().as_u64()));
      } else if (record.kind == "expire") {
        arbiter.expire_due();
      } else {
        raise(Errc::UnencodableValue, "unknown system record '" + record.kind + "'");
      }
      continue;
    }
    arbiter.process(transaction_from_value(ParticipantId{record.sender}, record.payload));
  }
}

namespace {

Value opt_value(const std::optional<Value>& v) {
  return v ? Value::list({*v}) : Value::list({});
}

Value id_set_value(const std::set<std::uint64_t>& ids) {
  std::vector<Value> items;
  items.reserve(ids.size());
  for (std::uint64_t id : ids) items.push_back(Value::nat(id));
  return Value::list(std::move(items));
}

}  // namespace

Value request_view_to_value(const RequestView& view) {
  std::optional<Value> cp;
  if (view.cp) {
    cp = view.cp->inline_cp
             ? Value::tuple({Value::nat(0), Value::bytes(write_projection_file(*view.cp->inline_cp)),
                             Value::nat(view.cp->n)})
             : Value::tuple({Value::nat(1), view.cp->ref->digest.as_value(),
                             Value::nat(view.cp->n)});
  }
  return Value::tuple(
      {Value::nat(view.id), Value::nat(static_cast<std::uint64_t>(view.status)),
       view.task_ref.as_value(), view.d, opt_value(view.r),
       opt_value(view.c_n ? std::optional<Value>(view.c_n->as_value()) : std::nullopt),
       opt_value(view.hc ? std::optional<Value>(view.hc->hc.as_value()) : std::nullopt),
       opt_value(cp),
       opt_value(view.deadline ? std::optional<Value>(Value::nat(*view.deadline)) : std::nullopt),
       opt_value(view.s ? std::optional<Value>(view.s->s.as_value()) : std::nullopt),
       Value::nat(view.solver.id), id_set_value(view.V), id_set_value(view.L)});
}

Arbiter::Arbiter(ArbiterConfig config, const TaskRegistry& registry, const BlobStore& store)
    : config_(std::move(config)), registry_(registry), store_(store) {
  config_.hash.validate();
  if (config_.solver_share_den == 0 || config_.solver_share_num > config_.solver_share_den)
    raise(Errc::BadArgument, "solver share must be a fraction in [0, 1]");
}

void Arbiter::fund(ParticipantId id, std::int64_t amount) {
  if (id.id == 0) raise(Errc::UndefinedId, "cannot fund the undefined id");
  balances_[id.id] += amount;
  funded_ += amount;
  TxOutcome outcome{TxResult::Applied, std::nullopt, "", 0, 0};
  append_log(0, "fund", Value::tuple({Value::nat(id.id), Value::nat(static_cast<std::uint64_t>(amount))}),
             outcome);
}

void Arbiter::tick(std::uint64_t n) {
  now_ += n;
}

RequestRecord& Arbiter::request_or_fail(std::uint64_t id) {
  const auto it = requests_.find(id);
  if (it == requests_.end()) raise(Errc::UnknownRequest, "request " + std::to_string(id));
  return it->second;
}

Value Arbiter::apply_step(const TaskProgram& task, const Value& x, std::uint64_t& counter) const {
  ++counter;
  return task.step(x);
}

std::map<std::uint32_t, Projection> Arbiter::cp_entries(
    const RequestRecord& req, const std::set<std::uint32_t>& indices) const {
  const StoredCp& cp = *req.cp;
  if (cp.inline_cp) {
    std::map<std::uint32_t, Projection> out;
    for (std::uint32_t i : indices) out[i] = cp.inline_cp->at(i);
    return out;
  }
  return oracle_fetch_projection(store_, *cp.ref, indices);
}

Projection Arbiter::cp_entry(const RequestRecord& req, std::uint32_t i) const {
  return cp_entries(req, {i}).at(i);
}

void Arbiter::take_deposit(RequestRecord& req, ParticipantId id, std::int64_t amount,
                           bool refundable) {
  balances_[id.id] -= amount;
  req.escrow += amount;
  if (refundable) req.refundable[id.id] += amount;
}

// A participant can hold several live stakes at once (say an earlier
// refutation deposit plus a fresh proof deposit), so refunds and forfeits
// always move an explicit amount, never the whole tracked balance.
std::int64_t Arbiter::release_stake(RequestRecord& req, std::uint64_t id, std::int64_t amount) {
  const auto it = req.refundable.find(id);
  if (it == req.refundable.end()) return 0;
  const std::int64_t moved = std::min(it->second, amount);
  it->second -= moved;
  if (it->second == 0) req.refundable.erase(it);
  return moved;
}

void Arbiter::refund(RequestRecord& req, std::uint64_t id, std::int64_t amount) {
  const std::int64_t moved = release_stake(req, id, amount);
  req.escrow -= moved;
  balances_[id] += moved;
}

void Arbiter::forfeit(RequestRecord& req, std::uint64_t id, std::int64_t amount) {
  // The stake stays in escrow and joins the final pool.
  release_stake(req, id, amount);
}

void Arbiter::back_to_published(RequestRecord& req) {
  req.status = RequestStatus::Published;
  req.r.reset();
  req.c_n.reset();
  req.cp.reset();
  req.hc.reset();
  req.s.reset();
  req.solver = ParticipantId{0};
  req.deadline = 0;
  // The proof round is void: pending proof deposits go back, P is cleared.
  for (const auto& [id, prf] : req.P) refund(req, id, config_.deposits.proof);
  req.P.clear();
}

TxOutcome Arbiter::process(const Transaction& tx) {
  TxOutcome outcome;
  if (tx.sender.id == 0) {
    outcome = TxOutcome{TxResult::Failed, Errc::UndefinedId, "sender id 0 is reserved", 0, 0};
  } else {
    try {
      outcome = std::visit(
          [&](const auto& body) -> TxOutcome {
            using T = std::decay_t<decltype(body)>;
            if constexpr (std::is_same_v<T, PublishTask>) return handle_publish(tx.sender, body);
            else if constexpr (std::is_same_v<T, SubmitSolution>) return handle_submit(tx.sender, body);
            else if constexpr (std::is_same_v<T, Refute>) return handle_refute(tx.sender, body);
            else if constexpr (std::is_same_v<T, SubmitProof>) return handle_proof(tx.sender, body);
            else return handle_reveal(tx.sender, body);
          },
          tx.kind);
    } catch (const Error& e) {
      outcome = TxOutcome{TxResult::Failed, e.code(), e.what(), 0, 0};
    }
  }
  total_f_applications_ += outcome.f_applications;
  append_log(tx.sender.id, tx_kind_name(tx), transaction_to_value(tx), outcome);
  return outcome;
}

TxOutcome Arbiter::handle_publish(ParticipantId sender, const PublishTask& tx) {
  if (!registry_.contains(tx.task_ref))
    return {TxResult::Failed, Errc::UnknownTask, "task not in the shared registry", 0, 0};

  const std::size_t payload =
      encode(Value::tuple({tx.task_ref.as_value(), tx.d})).size();
  if (payload > config_.t_max)
    return {TxResult::Failed, Errc::PayloadTooLarge,
            "task+input is " + std::to_string(payload) + " bytes", 0, 0};
  if (balances_[sender.id] < config_.deposits.task)
    return {TxResult::Failed, Errc::InsufficientFunds, "publish deposit", 0, 0};

  RequestRecord req;
  req.id = next_request_id_++;
  req.user = sender;
  req.task_ref = tx.task_ref;
  req.d = tx.d;
  req.status = RequestStatus::Published;
  const std::uint64_t id = req.id;
  requests_[id] = std::move(req);
  take_deposit(requests_[id], sender, config_.deposits.task, /*refundable=*/false);
  return {TxResult::Applied, std::nullopt, "request published", id, 0};
}

TxOutcome Arbiter::handle_submit(ParticipantId sender, const SubmitSolution& tx) {
  RequestRecord& req = request_or_fail(tx.request);
  if (req.status != RequestStatus::Published)
    return {TxResult::Failed, Errc::WrongStatus, "request not published", req.id, 0};

  const std::size_t cp_bytes = std::holds_alternative<CpInline>(tx.cp)
                                   ? std::get<CpInline>(tx.cp).file.size()
                                   : Digest::kSize;
  const std::size_t payload = encode(tx.r_n).size() + Digest::kSize + cp_bytes + Digest::kSize;
  if (payload > config_.t_max)
    return {TxResult::Failed, Errc::PayloadTooLarge,
            "solution payload is " + std::to_string(payload) + " bytes", req.id, 0};
  if (balances_[sender.id] < config_.deposits.solution)
    return {TxResult::Failed, Errc::InsufficientFunds, "solution deposit", req.id, 0};

  const TaskProgram& task = registry_.by_id(req.task_ref);
  TxOutcome outcome;
  outcome.request = req.id;

  auto reject = [&](const std::string& why) {
    take_deposit(req, sender, config_.deposits.solution, /*refundable=*/false);
    req.L.insert(sender.id);
    outcome.result = TxResult::Rejected;
    outcome.detail = why;
    return outcome;
  };

  // Resolve the projection far enough to record its length and probe its
  // final entry; an unreachable blob declines the solution outright.
  StoredCp stored;
  std::optional<Projection> last_entry;
  if (const auto* inline_cp = std::get_if<CpInline>(&tx.cp)) {
    CertProjection parsed;
    try {
      parsed = read_projection_file(inline_cp->file);
    } catch (const Error& e) {
      return reject(std::string("malformed projection: ") + e.what());
    }
    if (parsed.p != config_.hash.p) return reject("projection width differs from protocol p");
    stored.n = parsed.length();
    if (stored.n > 0) last_entry = parsed.items.back();
    stored.inline_cp = std::move(parsed);
  } else {
    const BlobRef ref = std::get<CpByRef>(tx.cp).ref;
    try {
      stored.n = oracle_fetch_projection_length(store_, ref);
      if (stored.n > 0) last_entry = oracle_fetch_projection(store_, ref, {stored.n}).at(stored.n);
    } catch (const Error& e) {
      if (e.code() == Errc::Unavailable)
        return {TxResult::Failed, Errc::BlobUnavailable,
                "projection blob unreachable; solution declined", req.id, 0};
      return reject(std::string("malformed projection blob: ") + e.what());
    }
    stored.ref = ref;
  }

  // The one step evaluation: ⟨r_n, c_n⟩ must be a fixpoint of the lifted task.
  bool fixpoint = false;
  try {
    fixpoint = apply_step(task, tx.r_n, outcome.f_applications) == tx.r_n;
  } catch (const Error&) {
    fixpoint = false;
  }
  if (!fixpoint) return reject("submitted pair is not a fixpoint");

  if (stored.n == 0) {
    // Zero-step solution: only valid when the input itself is the fixpoint.
    if (!(tx.r_n == req.d) || tx.c_n != chain_init(req.d))
      return reject("empty certificate for a non-trivial input");
  } else {
    if (project(tx.c_n, config_.hash) != *last_entry)
      return reject("published c_n does not match the projection's final entry");
  }

  req.status = RequestStatus::Completed;
  req.solver = sender;
  req.r = tx.r_n;
  req.c_n = tx.c_n;
  req.cp = std::move(stored);
  req.hc = tx.hc;
  req.deadline = now_ + config_.verification_period;
  take_deposit(req, sender, config_.deposits.solution, /*refundable=*/true);
  outcome.result = TxResult::Applied;
  outcome.detail = "solution accepted";
  return outcome;
}

TxOutcome Arbiter::handle_refute(ParticipantId sender, const Refute& tx) {
  RequestRecord& req = request_or_fail(tx.request);
  if (req.status != RequestStatus::Completed)
    return {TxResult::Failed, Errc::WrongStatus, "request not completed", req.id, 0};

  const std::uint32_t n = req.cp->n;
  if (tx.i < 1 || tx.i > n)
    return {TxResult::Failed, Errc::IndexOutOfRange,
            "index " + std::to_string(tx.i) + " outside 1.." + std::to_string(n), req.id, 0};

  const std::size_t payload = encode(tx.r_prev).size() + 2 * Digest::kSize;
  if (payload > config_.t_max)
    return {TxResult::Failed, Errc::PayloadTooLarge,
            "refutation payload is " + std::to_string(payload) + " bytes", req.id, 0};
  if (balances_[sender.id] < config_.deposits.refute)
    return {TxResult::Failed, Errc::InsufficientFunds, "refutation deposit", req.id, 0};

  const TaskProgram& task = registry_.by_id(req.task_ref);
  TxOutcome outcome;
  outcome.request = req.id;

  // Published projection entries this check needs. An unreachable blob means
  // the solver broke the availability obligation: the refutation stands.
  bool solver_at_fault = false;
  std::map<std::uint32_t, Projection> cp;
  try {
    std::set<std::uint32_t> indices{tx.i};
    if (tx.i >= 2) indices.insert(tx.i - 1);
    cp = cp_entries(req, indices);
  } catch (const Error& e) {
    if (e.code() != Errc::Unavailable) throw;
    solver_at_fault = true;
  }

  bool accepted = solver_at_fault;
  if (!accepted) {
    try {
      const bool anchored = tx.i == 1
                                ? (tx.r_prev == req.d && tx.c_prev == chain_init(req.d))
                                : project(tx.c_prev, config_.hash) == cp.at(tx.i - 1);
      if (anchored) {
        const Value r_next = apply_step(task, tx.r_prev, outcome.f_applications);
        if (r_next == tx.r_prev) {
          // The supplied state is already a fixpoint: the published chain
          // wrongly continues past the end of the computation.
          accepted = tx.c_i == tx.c_prev;
        } else if (chain_extend(tx.r_prev, tx.c_prev) == tx.c_i) {
          if (tx.i < n) {
            accepted = project(tx.c_i, config_.hash) != cp.at(tx.i);
          } else {
            // Final index: the forced pair must contradict the published one.
            accepted = !(r_next == *req.r) || tx.c_i != *req.c_n;
          }
        }
      }
    } catch (const Error&) {
      accepted = false;
    }
  }

  if (!accepted) {
    take_deposit(req, sender, config_.deposits.refute, /*refundable=*/false);
    req.L.insert(sender.id);
    outcome.result = TxResult::Rejected;
    outcome.detail = "refutation checks failed";
    return outcome;
  }

  take_deposit(req, sender, config_.deposits.refute, /*refundable=*/true);

  // Slash the solver: their solution deposit rewards the refuter.
  const std::uint64_t solver = req.solver.id;
  req.L.insert(solver);
  req.V.insert(sender.id);
  const std::int64_t bounty = release_stake(req, solver, config_.deposits.solution);
  req.escrow -= bounty;
  balances_[sender.id] += bounty;
  req.refuted_solutions += 1;
  back_to_published(req);
  outcome.result = TxResult::Applied;
  outcome.detail = solver_at_fault ? "projection blob unavailable; solution declined"
                                   : "refutation accepted";
  return outcome;
}

TxOutcome Arbiter::handle_proof(ParticipantId sender, const SubmitProof& tx) {
  RequestRecord& req = request_or_fail(tx.request);
  if (req.status != RequestStatus::Completed)
    return {TxResult::Failed, Errc::WrongStatus, "request not completed", req.id, 0};
  if (req.P.contains(sender.id))
    return {TxResult::Failed, Errc::DuplicateProof, "one proof per id", req.id, 0};
  if (balances_[sender.id] < config_.deposits.proof)
    return {TxResult::Failed, Errc::InsufficientFunds, "proof deposit", req.id, 0};

  req.P[sender.id] = tx.prf;
  take_deposit(req, sender, config_.deposits.proof, /*refundable=*/true);
  return {TxResult::Applied, std::nullopt, "proof recorded", req.id, 0};
}

TxOutcome Arbiter::handle_reveal(ParticipantId sender, const RevealSecret& tx) {
  RequestRecord& req = request_or_fail(tx.request);
  if (req.status != RequestStatus::Completed)
    return {TxResult::Failed, Errc::WrongStatus, "request not completed", req.id, 0};
  if (sender != req.solver)
    return {TxResult::Failed, Errc::NotSolver, "only the solver reveals", req.id, 0};
  if (now_ < req.deadline)
    return {TxResult::Failed, Errc::TooEarly,
            "verification period runs until tick " + std::to_string(req.deadline), req.id, 0};

  TxOutcome outcome;
  outcome.request = req.id;

  if (hash_H(encode(tx.s.s.as_value())) != req.hc->hc) {
    req.L.insert(sender.id);
    forfeit(req, sender.id, config_.deposits.solution);
    back_to_published(req);
    outcome.result = TxResult::Rejected;
    outcome.detail = "secret does not match the fingerprint";
    return outcome;
  }

  req.status = RequestStatus::Verified;
  req.s = tx.s;
  req.proofs_at_reveal = static_cast<std::uint32_t>(req.P.size());
  for (const auto& [id, prf] : req.P) {
    if (check_verification_proof(tx.s, VerificationProof{ParticipantId{id}, prf}))
      req.V.insert(id);
    else
      req.L.insert(id);
  }
  execute_payout(req);
  outcome.result = TxResult::Applied;
  outcome.detail = "request verified";
  return outcome;
}

void Arbiter::execute_payout(RequestRecord& req) {
  PayoutRecord record;
  record.pool = req.escrow;

  // Honest parties get their live deposits back; anything staked by a member
  // of L stays in the pool.
  for (auto it = req.refundable.begin(); it != req.refundable.end();) {
    const auto current = it++;
    const std::int64_t amount = current->second;
    if (req.L.contains(current->first))
      forfeit(req, current->first, amount);
    else {
      record.refunded += amount;
      refund(req, current->first, amount);
    }
  }

  const std::int64_t rest = req.escrow;
  record.solver_share =
      config_.deposits.task * config_.solver_share_num / config_.solver_share_den;

  std::vector<std::uint64_t> eligible;
  for (std::uint64_t id : req.V)
    if (!req.L.contains(id)) eligible.push_back(id);

  const std::int64_t distributable = rest - record.solver_share;
  record.per_verifier =
      eligible.empty() ? 0 : distributable / static_cast<std::int64_t>(eligible.size());
  record.remainder_to_solver =
      distributable - record.per_verifier * static_cast<std::int64_t>(eligible.size());

  balances_[req.solver.id] += record.solver_share + record.remainder_to_solver;
  req.escrow -= record.solver_share + record.remainder_to_solver;
  for (std::uint64_t id : eligible) {
    balances_[id] += record.per_verifier;
    req.escrow -= record.per_verifier;
  }
  if (req.escrow != 0)
    throw std::logic_error("payout left " + std::to_string(req.escrow) + " units in escrow");
  req.payout_record = record;
}

std::vector<TxOutcome> Arbiter::expire_due() {
  std::vector<TxOutcome> outcomes;
  for (auto& [id, req] : requests_) {
    if (req.status != RequestStatus::Completed) continue;
    if (now_ < req.deadline + config_.reveal_window) continue;
    const std::uint64_t solver = req.solver.id;
    req.L.insert(solver);
    forfeit(req, solver, config_.deposits.solution);
    back_to_published(req);
    TxOutcome outcome{TxResult::Applied, std::nullopt, "reveal window elapsed; solver slashed",
                      id, 0};
    append_log(0, "expire", Value::tuple({Value::nat(id), Value::nat(solver)}), outcome);
    outcomes.push_back(outcome);
  }
  return outcomes;
}

RequestView Arbiter::query_request(std::uint64_t id) const {
  const auto it = requests_.find(id);
  if (it == requests_.end()) raise(Errc::UnknownRequest, "request " + std::to_string(id));
  const RequestRecord& req = it->second;

  RequestView view;
  view.id = req.id;
  view.status = req.status;
  view.task_ref = req.task_ref;
  view.d = req.d;
  if (req.status == RequestStatus::Published) return view;

  view.r = req.r;
  view.c_n = req.c_n;
  view.hc = req.hc;
  view.cp = req.cp;
  view.deadline = req.deadline;
  if (req.status == RequestStatus::Completed) return view;

  view.s = req.s;
  view.solver = req.solver;
  view.V = req.V;
  view.L = req.L;
  return view;
}

const RequestRecord& Arbiter::inspect_request(std::uint64_t id) const {
  const auto it = requests_.find(id);
  if (it == requests_.end()) raise(Errc::UnknownRequest, "request " + std::to_string(id));
  return it->second;
}

PayoutRecord Arbiter::payout(std::uint64_t id) const {
  const RequestRecord& req = inspect_request(id);
  if (req.status != RequestStatus::Verified || !req.payout_record)
    raise(Errc::WrongStatus, "payout requires a verified request");
  return *req.payout_record;
}

std::int64_t Arbiter::balance(ParticipantId id) const {
  const auto it = balances_.find(id.id);
  return it == balances_.end() ? 0 : it->second;
}

std::int64_t Arbiter::total_currency() const {
  std::int64_t total = 0;
  for (const auto& [_, amount] : balances_) total += amount;
  for (const auto& [_, req] : requests_) total += req.escrow;
  return total;
}

void Arbiter::append_log(std::uint64_t sender, std::string kind, Value payload,
                         const TxOutcome& outcome) {
  log_.push_back(LogRecord{now_, sender, std::move(kind), std::move(payload), outcome.result,
                           outcome.detail});
}

Bytes Arbiter::log_bytes() const {
  Bytes out;
  for (const LogRecord& record : log_) append_bytes(out, encode(record.to_value()));
  return out;
}

}  // namespace safecomp
