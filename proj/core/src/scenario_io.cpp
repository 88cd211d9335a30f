#include "safecomp/scenario_io.hpp"

#include <json.hpp>

#include "safecomp/errors.hpp"

namespace safecomp {

namespace {

using nlohmann::json;

std::set<std::uint64_t> id_set(const json& arr) {
  std::set<std::uint64_t> out;
  for (const auto& v : arr) out.insert(v.get<std::uint64_t>());
  return out;
}

}  // namespace

ScenarioFile load_scenario(const std::string& json_text, const TaskRegistry& registry) {
  json doc;
  try {
    doc = json::parse(json_text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::exception& e) {
    raise(Errc::ScenarioError, std::string("scenario is not valid JSON: ") + e.what());
  }

  ScenarioFile file;
  Scenario& sc = file.scenario;
  try {
    sc.task_name = doc.at("task").get<std::string>();
    const TaskProgram& task = registry.by_name(sc.task_name);
    if (!task.parse_input)
      raise(Errc::ScenarioError, "task '" + sc.task_name + "' has no input parser");
    sc.input = task.parse_input(doc.at("input").get<std::string>());

    sc.seed = doc.value("seed", 0ull);
    sc.initial_balance = doc.value("initial_balance", sc.initial_balance);
    sc.max_steps = doc.value("max_steps", sc.max_steps);
    sc.horizon = doc.value("horizon", sc.horizon);
    sc.user = ParticipantId{doc.value("user", sc.user.id)};
    sc.blob_outage_after_put = doc.value("blob_outage_after_put", false);

    if (doc.contains("arbiter")) {
      const json& a = doc["arbiter"];
      sc.arbiter.verification_period = a.value("T", sc.arbiter.verification_period);
      sc.arbiter.reveal_window = a.value("reveal_window", sc.arbiter.reveal_window);
      sc.arbiter.t_max = a.value("T_max", sc.arbiter.t_max);
      sc.arbiter.hash.p = a.value("p", sc.arbiter.hash.p);
      sc.arbiter.hash.q = a.value("q", sc.arbiter.hash.q);
      sc.arbiter.solver_share_num = a.value("solver_share_num", sc.arbiter.solver_share_num);
      sc.arbiter.solver_share_den = a.value("solver_share_den", sc.arbiter.solver_share_den);
      if (a.contains("deposits")) {
        const json& dep = a["deposits"];
        sc.arbiter.deposits.task = dep.value("D_r", sc.arbiter.deposits.task);
        sc.arbiter.deposits.solution = dep.value("D_s", sc.arbiter.deposits.solution);
        sc.arbiter.deposits.refute = dep.value("D_p", sc.arbiter.deposits.refute);
        sc.arbiter.deposits.proof = dep.value("D_w", sc.arbiter.deposits.proof);
      }
    }

    for (const json& a : doc.at("agents")) {
      AgentSpec spec;
      spec.id = ParticipantId{a.at("id").get<std::uint64_t>()};
      spec.behavior = behavior_from_name(a.at("behavior").get<std::string>());
      spec.compute_delay = a.value("compute_delay", 0ull);
      spec.corrupt_step = a.value("corrupt_step", 1u);
      if (a.contains("corruption"))
        spec.corruption = corruption_from_name(a["corruption"].get<std::string>());
      spec.refutation_count = a.value("refutations", 1u);
      sc.agents.push_back(spec);
    }

    if (doc.contains("expect")) {
      const json& e = doc["expect"];
      if (e.contains("final_status"))
        file.expect.final_status = e["final_status"].get<std::string>();
      if (e.contains("result")) file.expect.result = e["result"].get<std::string>();
      if (e.contains("V")) file.expect.V = id_set(e["V"]);
      if (e.contains("L")) file.expect.L = id_set(e["L"]);
      if (e.contains("n")) file.expect.n = e["n"].get<std::uint32_t>();
    }
  } catch (const json::exception& e) {
    raise(Errc::ScenarioError, std::string("scenario field error: ") + e.what());
  }
  return file;
}

std::optional<std::string> check_expectations(const ScenarioExpectations& expect,
                                              const ScenarioReport& report) {
  if (expect.final_status && *expect.final_status != status_name(report.final_status))
    return "final_status: expected " + *expect.final_status + ", got " +
           status_name(report.final_status);
  if (expect.result && *expect.result != report.rendered_result)
    return "result: expected '" + *expect.result + "', got '" + report.rendered_result + "'";
  if (expect.V && *expect.V != report.V) return std::string("V differs from expectation");
  if (expect.L && *expect.L != report.L) return std::string("L differs from expectation");
  if (expect.n && *expect.n != report.metrics.n)
    return "n: expected " + std::to_string(*expect.n) + ", got " +
           std::to_string(report.metrics.n);
  return std::nullopt;
}

std::string report_to_json(const ScenarioReport& report) {
  json doc;
  doc["request"] = report.request_id;
  doc["final_status"] = status_name(report.final_status);
  doc["final_tick"] = report.final_tick;
  doc["result"] = report.rendered_result;
  doc["solver"] = report.solver.id;
  doc["V"] = report.V;
  doc["L"] = report.L;
  if (report.secret) doc["secret"] = report.secret->s.hex();

  json agents = json::array();
  for (const AgentReport& agent : report.agents) {
    agents.push_back({{"id", agent.id},
                      {"behavior", agent.behavior},
                      {"ledger_delta", agent.ledger_delta}});
  }
  doc["agents"] = agents;
  doc["user_ledger_delta"] = report.user_ledger_delta;

  doc["metrics"] = {{"n", report.metrics.n},
                    {"certificate_bytes", report.metrics.certificate_bytes},
                    {"d0_bytes", report.metrics.d0_bytes},
                    {"dmax_bytes", report.metrics.dmax_bytes},
                    {"transactions", report.metrics.transactions},
                    {"arbiter_f_applications", report.metrics.arbiter_f_applications}};
  doc["log_bytes"] = report.log.size();
  doc["log_digest"] = hash_H(report.log).hex();
  return doc.dump(2);
}

}  // namespace safecomp
