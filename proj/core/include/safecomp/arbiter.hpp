#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "safecomp/certificate.hpp"
#include "safecomp/errors.hpp"
#include "safecomp/storage.hpp"
#include "safecomp/tasks.hpp"
#include "safecomp/value.hpp"

namespace safecomp {

enum class RequestStatus : std::uint8_t { Published = 0, Completed = 1, Verified = 2 };

const char* status_name(RequestStatus status);

struct DepositSchedule {
  std::int64_t task = 100;    // D_r, staked by the user with the request
  std::int64_t solution = 10; // D_s, staked with a solution
  std::int64_t refute = 5;    // D_p, staked with a refutation
  std::int64_t proof = 1;     // D_w, staked with a proof of verification
};

struct ArbiterConfig {
  HashParams hash;
  std::uint64_t verification_period = 100;  // T: refute/proof window before the reveal
  std::uint64_t reveal_window = 100;        // reveal grace after the deadline, then expiry
  std::size_t t_max = 64 * 1024;            // T_max: largest accepted data unit
  DepositSchedule deposits;
  std::uint32_t solver_share_num = 1;  // solver's fixed fraction of D_r at payout
  std::uint32_t solver_share_den = 2;
};

// ----- transactions ---------------------------------------------------------

/// Certificate projection as carried by a solution: the SCP1 file inline, or
/// a reference into the external store when it does not fit T_max.
struct CpInline {
  Bytes file;
  bool operator==(const CpInline&) const = default;
};
struct CpByRef {
  BlobRef ref;
  bool operator==(const CpByRef&) const = default;
};
using CpPayload = std::variant<CpInline, CpByRef>;

struct PublishTask {
  Digest task_ref;
  Value d;
};
struct SubmitSolution {
  std::uint64_t request = 0;
  Value r_n;
  Digest c_n;
  CpPayload cp;
  Fingerprint hc;
};
struct Refute {
  std::uint64_t request = 0;
  std::uint32_t i = 0;  // first divergent index claimed
  Value r_prev;         // state at i-1
  Digest c_prev;        // chain digest at i-1 (c_0 when i = 1)
  Digest c_i;           // forced chain digest at i
};
struct SubmitProof {
  std::uint64_t request = 0;
  Digest prf;
};
struct RevealSecret {
  std::uint64_t request = 0;
  Secret s;
};

struct Transaction {
  ParticipantId sender;
  std::variant<PublishTask, SubmitSolution, Refute, SubmitProof, RevealSecret> kind;
};

const char* tx_kind_name(const Transaction& tx);

/// Applied: the intended transition happened. Rejected: the arbiter evaluated
/// the request and turned it down, with the protocol's slashing side effects.
/// Failed: a precondition error; no state change at all.
enum class TxResult : std::uint8_t { Applied = 0, Rejected = 1, Failed = 2 };

struct TxOutcome {
  TxResult result = TxResult::Failed;
  std::optional<Errc> error;
  std::string detail;
  std::uint64_t request = 0;
  std::uint64_t f_applications = 0;  // step evaluations spent on this transaction

  bool applied() const { return result == TxResult::Applied; }
};

struct LogRecord {
  std::uint64_t tick = 0;
  std::uint64_t sender = 0;  // 0 marks system records (funding, expiry)
  std::string kind;
  Value payload;
  TxResult result = TxResult::Applied;
  std::string detail;

  Value to_value() const;
};

// ----- per-request state ----------------------------------------------------

struct StoredCp {
  std::optional<CertProjection> inline_cp;
  std::optional<BlobRef> ref;
  std::uint32_t n = 0;  // projection length recorded at submit time
};

struct PayoutRecord {
  std::int64_t pool = 0;  // escrow at the moment the request turned Verified
  std::int64_t refunded = 0;
  std::int64_t solver_share = 0;
  std::int64_t per_verifier = 0;
  std::int64_t remainder_to_solver = 0;
};

struct RequestRecord {
  std::uint64_t id = 0;
  ParticipantId user;
  Digest task_ref;
  Value d;
  RequestStatus status = RequestStatus::Published;

  std::optional<Value> r;
  std::optional<Digest> c_n;
  std::optional<StoredCp> cp;
  std::optional<Fingerprint> hc;
  std::optional<Secret> s;
  ParticipantId solver;
  std::set<std::uint64_t> V;
  std::set<std::uint64_t> L;
  std::map<std::uint64_t, Digest> P;
  std::uint64_t deadline = 0;

  std::int64_t escrow = 0;
  std::map<std::uint64_t, std::int64_t> refundable;  // live deposits returned at payout
  std::uint32_t refuted_solutions = 0;               // m in the deposit pool formula
  std::uint32_t proofs_at_reveal = 0;                // n in the deposit pool formula
  std::optional<PayoutRecord> payout_record;
};

/// Status-dependent public view of a request.
struct RequestView {
  std::uint64_t id = 0;
  RequestStatus status = RequestStatus::Published;
  Digest task_ref;
  Value d;
  // status >= Completed
  std::optional<Value> r;
  std::optional<Digest> c_n;
  std::optional<Fingerprint> hc;
  std::optional<StoredCp> cp;
  std::optional<std::uint64_t> deadline;
  // status == Verified
  std::optional<Secret> s;
  ParticipantId solver;
  std::set<std::uint64_t> V;
  std::set<std::uint64_t> L;
};

// ----- the arbiter ----------------------------------------------------------

/// Sequential transaction processor implementing the contract rules. Work per
/// transaction is bounded by one step evaluation plus a constant number of
/// hashes; full recomputation always stays with the providers.
class Arbiter {
 public:
  Arbiter(ArbiterConfig config, const TaskRegistry& registry, const BlobStore& store);

  /// Genesis credit for a participant (system log record).
  void fund(ParticipantId id, std::int64_t amount);

  /// Advance the simulated clock. No other state changes.
  void tick(std::uint64_t n = 1);
  std::uint64_t now() const { return now_; }

  TxOutcome process(const Transaction& tx);

  /// Completed requests whose reveal grace has lapsed fall back to Published
  /// with the solver slashed. Returns one outcome per expired request.
  std::vector<TxOutcome> expire_due();

  RequestView query_request(std::uint64_t id) const;  // UnknownRequest
  const RequestRecord& inspect_request(std::uint64_t id) const;  // UnknownRequest; full state for tests/tools
  PayoutRecord payout(std::uint64_t id) const;  // WrongStatus unless Verified

  std::int64_t balance(ParticipantId id) const;
  /// Sum of all balances plus all request escrows; constant across
  /// transactions once funding stops.
  std::int64_t total_currency() const;
  std::int64_t total_funded() const { return funded_; }

  const std::vector<LogRecord>& log() const { return log_; }
  Bytes log_bytes() const;  // concatenated canonical encodings of the log

  std::uint64_t total_f_applications() const { return total_f_applications_; }
  const ArbiterConfig& config() const { return config_; }

 private:
  TxOutcome handle_publish(ParticipantId sender, const PublishTask& tx);
  TxOutcome handle_submit(ParticipantId sender, const SubmitSolution& tx);
  TxOutcome handle_refute(ParticipantId sender, const Refute& tx);
  TxOutcome handle_proof(ParticipantId sender, const SubmitProof& tx);
  TxOutcome handle_reveal(ParticipantId sender, const RevealSecret& tx);

  RequestRecord& request_or_fail(std::uint64_t id);
  Value apply_step(const TaskProgram& task, const Value& x, std::uint64_t& counter) const;
  Projection cp_entry(const RequestRecord& req, std::uint32_t i) const;
  std::map<std::uint32_t, Projection> cp_entries(const RequestRecord& req,
                                                 const std::set<std::uint32_t>& indices) const;

  void take_deposit(RequestRecord& req, ParticipantId id, std::int64_t amount, bool refundable);
  std::int64_t release_stake(RequestRecord& req, std::uint64_t id, std::int64_t amount);
  void refund(RequestRecord& req, std::uint64_t id, std::int64_t amount);
  void forfeit(RequestRecord& req, std::uint64_t id, std::int64_t amount);
  void back_to_published(RequestRecord& req);
  void execute_payout(RequestRecord& req);
  void append_log(std::uint64_t sender, std::string kind, Value payload, const TxOutcome& outcome);

  ArbiterConfig config_;
  const TaskRegistry& registry_;
  const BlobStore& store_;

  std::uint64_t now_ = 0;
  std::uint64_t next_request_id_ = 1;
  std::map<std::uint64_t, RequestRecord> requests_;
  std::map<std::uint64_t, std::int64_t> balances_;
  std::int64_t funded_ = 0;
  std::vector<LogRecord> log_;
  std::uint64_t total_f_applications_ = 0;
};

Value transaction_to_value(const Transaction& tx);

/// Inverse of transaction_to_value for a record's (sender, payload) pair.
/// UnencodableValue/BadArgument on shapes no transaction produces.
Transaction transaction_from_value(ParticipantId sender, const Value& payload);

/// Splits a concatenation of canonical log records back into records.
std::vector<LogRecord> parse_log(const Bytes& log_bytes);

/// Re-executes a parsed log against a fresh arbiter: funding and expiry
/// records replay as system events, everything else as transactions, with
/// the clock advanced to each record's tick. A faithful replay reproduces
/// the original log bytes exactly.
void replay_log(const Bytes& log_bytes, Arbiter& arbiter);

/// Canonical encoding of a query response, mirroring the log record format.
Value request_view_to_value(const RequestView& view);

}  // namespace safecomp
