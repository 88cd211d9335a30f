#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "acceptance.hpp"
#include "safecomp/agents.hpp"
#include "safecomp/errors.hpp"
#include "safecomp/scenario_io.hpp"
#include "safecomp/tasks.hpp"

namespace fs = std::filesystem;
using namespace safecomp;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerdict = 1;
constexpr int kExitUsage = 2;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::BadArgument, "cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Bytes read_file_bytes(const fs::path& path) {
  const std::string text = read_file(path);
  return Bytes(text.begin(), text.end());
}

void write_file(const fs::path& path, const Bytes& data) {
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size()));
  if (!out) raise(Errc::BadArgument, "cannot write " + path.string());
}

void write_file(const fs::path& path, const std::string& text) {
  write_file(path, Bytes(text.begin(), text.end()));
}

/// Input is a path when a file of that name exists, otherwise a literal.
Value parse_task_input(const TaskProgram& task, const std::string& input) {
  if (!task.parse_input) raise(Errc::BadArgument, "task has no input parser");
  if (fs::exists(input)) return task.parse_input(read_file(input));
  return task.parse_input(input);
}

int cmd_certify(const std::string& task_name, const std::string& input,
                const fs::path& out_dir, std::uint64_t max_steps, std::uint32_t p) {
  const TaskRegistry registry = default_registry();
  const TaskProgram& task = registry.by_name(task_name);
  const HashParams params{256, p};
  params.validate();

  const Value d = parse_task_input(task, input);
  const RunResult run = run_to_fixpoint(task, d, max_steps, params);

  fs::create_directories(out_dir);
  write_file(out_dir / "chain.scc1", write_chain_file(run.chain));
  write_file(out_dir / "projection.scp1", write_projection_file(run.cp));
  write_file(out_dir / "fingerprint.txt", run.hc.hc.hex() + "\n");
  write_file(out_dir / "secret.txt", run.s.s.hex() + "\n");

  nlohmann::json result;
  result["task"] = task.name;
  result["result"] = task.render_state(run.r_n);
  result["result_encoded"] = to_hex(encode(run.r_n));
  result["c_n"] = (run.n == 0 ? run.chain.c0 : run.chain.entries.back()).hex();
  result["n"] = run.n;
  result["certificate_bytes"] = run.chain.certificate_bytes();
  result["d0_bytes"] = run.d0_bytes;
  result["dmax_bytes"] = run.dmax_bytes;
  result["p"] = p;
  write_file(out_dir / "result.json", result.dump(2) + "\n");

  std::cout << "task        " << task.name << "\n"
            << "result      " << task.render_state(run.r_n) << "\n"
            << "n           " << run.n << "\n"
            << "C_f bytes   " << run.chain.certificate_bytes() << "\n"
            << "d0 bytes    " << run.d0_bytes << "\n"
            << "dmax bytes  " << run.dmax_bytes << "\n"
            << "hc          " << run.hc.hc.hex() << "\n"
            << "artifacts   " << out_dir.string() << "\n";
  return kExitOk;
}

int cmd_audit(const std::string& task_name, const std::string& input,
              const fs::path& published_dir, std::uint64_t max_steps) {
  const TaskRegistry registry = default_registry();
  const TaskProgram& task = registry.by_name(task_name);

  const CertProjection published_cp =
      read_projection_file(read_file_bytes(published_dir / "projection.scp1"));
  std::string hc_hex = read_file(published_dir / "fingerprint.txt");
  while (!hc_hex.empty() && (hc_hex.back() == '\n' || hc_hex.back() == '\r')) hc_hex.pop_back();
  const Fingerprint published_hc{Digest::from_hex_string(hc_hex)};

  const HashParams params{256, published_cp.p};
  params.validate();
  const Value d = parse_task_input(task, input);
  const AuditOutcome outcome = audit_run(task, d, published_cp, published_hc, max_steps, params);

  const RunResult own = run_to_fixpoint(task, d, max_steps, params);

  // compare the published result when the publisher shipped one
  std::optional<bool> result_matches;
  const fs::path result_path = published_dir / "result.json";
  if (fs::exists(result_path)) {
    const auto doc = nlohmann::json::parse(read_file(result_path));
    if (doc.contains("result_encoded")) {
      const Value published_r = decode(from_hex(doc["result_encoded"].get<std::string>()));
      result_matches = published_r == own.r_n;
    }
  }

  const auto print_refutation = [&](std::uint32_t i) {
    const Value r_prev = [&] {
      Value x = d;
      for (std::uint32_t step = 0; step + 1 < i; ++step) x = task.step(x);
      return x;
    }();
    const Digest c_prev = i >= 2 ? own.chain.entries[i - 2] : own.chain.c0;
    std::cout << "refute   i=" << i << "\n"
              << "r_prev   " << task.render_state(r_prev) << "\n"
              << "r_prev_encoded " << to_hex(encode(r_prev)) << "\n"
              << "c_prev   " << c_prev.hex() << "\n"
              << "c_i      " << own.chain.entries[i - 1].hex() << "\n";
  };

  if (const auto* disagree = std::get_if<AuditDisagree>(&outcome)) {
    std::cout << "verdict  disagree\n";
    if (disagree->i >= 1 && disagree->i <= own.n) {
      print_refutation(disagree->i);
    } else {
      // published chain runs past the honest fixpoint
      std::cout << "refute   i=" << disagree->i << " (fixpoint reached at "
                << disagree->i - 1 << ")\n"
                << "r_prev   " << task.render_state(disagree->r_prev) << "\n"
                << "r_prev_encoded " << to_hex(encode(disagree->r_prev)) << "\n"
                << "c_prev   " << disagree->c_prev.hex() << "\n"
                << "c_i      " << disagree->c_i.hex() << "\n";
    }
    return kExitVerdict;
  }
  if (std::holds_alternative<AuditFingerprintOnlyMismatch>(outcome)) {
    std::cout << "verdict  fingerprint-mismatch (no divergent index; projections agree)\n";
    return kExitVerdict;
  }

  // Fingerprints agree; the artifacts must still be internally consistent.
  const auto& agree = std::get<AuditAgree>(outcome);
  if (own.cp.items != published_cp.items) {
    std::cout << "verdict  disagree (projection inconsistent with the fingerprint)\n";
    const std::uint32_t common = std::min(own.cp.length(), published_cp.length());
    for (std::uint32_t i = 1; i <= common; ++i) {
      if (own.cp.at(i) != published_cp.at(i)) {
        print_refutation(i);
        break;
      }
    }
    return kExitVerdict;
  }
  if (!result_matches.value_or(true)) {
    std::cout << "verdict  disagree (published result differs from the recomputed one)\n";
    if (own.n >= 1) print_refutation(own.n);
    return kExitVerdict;
  }
  std::cout << "verdict  agree\n"
            << "secret   " << agree.s.s.hex() << "\n";
  return kExitOk;
}

int cmd_scenario(const fs::path& file, std::optional<std::uint64_t> seed_override,
                 const std::optional<fs::path>& report_path, const std::string& blob_dir) {
  const TaskRegistry registry = default_registry();
  ScenarioFile scenario = load_scenario(read_file(file), registry);
  if (seed_override) scenario.scenario.seed = *seed_override;
  if (!blob_dir.empty()) scenario.scenario.blob_dir = blob_dir;

  const ScenarioReport report = run_scenario(scenario.scenario, registry);
  const std::string rendered = report_to_json(report);
  if (report_path)
    write_file(*report_path, rendered + "\n");
  else
    std::cout << rendered << "\n";

  if (const auto violated = check_expectations(scenario.expect, report)) {
    std::cerr << "expectation violated: " << *violated << "\n";
    return kExitVerdict;
  }
  return kExitOk;
}

int cmd_inspect(const fs::path& file) {
  const Bytes data = read_file_bytes(file);
  if (data.size() >= 4 && data[0] == 'S' && data[1] == 'C' && data[2] == 'C') {
    const CertChain chain = read_chain_file(data);
    std::cout << "format   SCC1 certificate chain\n"
              << "n        " << chain.length() << "\n"
              << "bytes    " << chain.certificate_bytes() << " (entries)\n"
              << "c_0      " << chain.c0.hex() << "\n";
    if (!chain.entries.empty()) {
      std::cout << "c_1      " << chain.entries.front().hex() << "\n"
                << "c_n      " << chain.entries.back().hex() << "\n";
    }
    return kExitOk;
  }
  if (data.size() >= 4 && data[0] == 'S' && data[1] == 'C' && data[2] == 'P') {
    const CertProjection cp = read_projection_file(data);
    std::cout << "format   SCP1 certificate projection\n"
              << "p        " << cp.p << "\n"
              << "n        " << cp.length() << "\n";
    const std::uint32_t show = std::min<std::uint32_t>(cp.length(), 8);
    for (std::uint32_t i = 1; i <= show; ++i)
      std::cout << "cp[" << i << "]    0x" << std::hex << cp.at(i).bits << std::dec << "\n";
    if (cp.length() > show) std::cout << "...      (" << cp.length() - show << " more)\n";
    return kExitOk;
  }
  std::cerr << "unrecognized file format\n";
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"certified fixpoint computations with a simulated contract arbiter"};
  app.require_subcommand(1);

  std::string task_name, input;
  std::string out_dir = "certified";
  std::string published_dir;
  std::string scenario_file;
  std::string inspect_file;
  std::string report_file;
  std::uint64_t max_steps = 1000000;
  std::uint32_t p = kDefaultHashParams.p;
  std::optional<std::uint64_t> seed_override;

  CLI::App* certify = app.add_subcommand("certify", "run a task to its fixpoint, emit artifacts");
  certify->add_option("task", task_name, "registered task name")->required();
  certify->add_option("input", input, "input literal or path")->required();
  certify->add_option("--out", out_dir, "artifact directory");
  certify->add_option("--max-steps", max_steps, "iteration budget");
  certify->add_option("--p", p, "projection width in bits");

  CLI::App* audit = app.add_subcommand("audit", "recompute and compare against a publication");
  audit->add_option("task", task_name, "registered task name")->required();
  audit->add_option("input", input, "input literal or path")->required();
  audit->add_option("--published", published_dir, "directory with projection/fingerprint/result")
      ->required();
  audit->add_option("--max-steps", max_steps, "iteration budget");

  CLI::App* scenario = app.add_subcommand("scenario", "run a multi-agent scenario file");
  scenario->add_option("file", scenario_file, "scenario JSON document")->required();
  std::uint64_t seed_opt = 0;
  CLI::Option* seed_flag = scenario->add_option("--seed", seed_opt, "override the scenario seed");
  scenario->add_option("--report", report_file, "write the report JSON here instead of stdout");
  std::string blob_dir;
  scenario->add_option("--blob-dir", blob_dir, "mirror stored blobs into this directory");

  CLI::App* inspect = app.add_subcommand("inspect", "describe a chain or projection file");
  inspect->add_option("file", inspect_file, "SCC1 or SCP1 file")->required();

  CLI::App* paper_check = app.add_subcommand("paper-check", "run the acceptance suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (certify->parsed()) return cmd_certify(task_name, input, out_dir, max_steps, p);
    if (audit->parsed()) return cmd_audit(task_name, input, published_dir, max_steps);
    if (scenario->parsed()) {
      if (*seed_flag) seed_override = seed_opt;
      return cmd_scenario(scenario_file, seed_override,
                          report_file.empty() ? std::nullopt
                                              : std::optional<fs::path>(report_file),
                          blob_dir);
    }
    if (inspect->parsed()) return cmd_inspect(inspect_file);
    if (paper_check->parsed())
      return safecomp::acceptance::run_all(std::cout) ? kExitOk : kExitVerdict;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
