#include "safecomp/dimacs.hpp"

#include <cstdlib>
#include <sstream>

#include "safecomp/errors.hpp"

namespace safecomp {

namespace {

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
  raise(Errc::ParseError, "line " + std::to_string(line) + ": " + what);
}

}  // namespace

CnfFormula parse_dimacs(std::string_view text) {
  CnfFormula f;
  bool header_seen = false;
  std::uint32_t declared_clauses = 0;
  Clause current;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    const std::string_view line =
        text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    std::istringstream in{std::string(line)};
    std::string tok;
    if (!(in >> tok)) continue;  // blank line
    if (tok == "c" || tok[0] == 'c') continue;

    if (tok == "p") {
      if (header_seen) parse_fail(line_no, "duplicate header");
      std::string fmt;
      long vars = -1, clauses = -1;
      if (!(in >> fmt >> vars >> clauses) || fmt != "cnf" || vars < 0 || clauses < 0)
        parse_fail(line_no, "malformed problem line");
      f.num_vars = static_cast<std::uint32_t>(vars);
      declared_clauses = static_cast<std::uint32_t>(clauses);
      header_seen = true;
      continue;
    }

    if (!header_seen) parse_fail(line_no, "clause before header");

    // clause tokens; the first one was already pulled
    do {
      char* end = nullptr;
      const long lit = std::strtol(tok.c_str(), &end, 10);
      if (end == tok.c_str() || *end != '\0') parse_fail(line_no, "bad literal '" + tok + "'");
      if (lit == 0) {
        f.clauses.push_back(current);
        current.clear();
      } else {
        const unsigned long var = static_cast<unsigned long>(lit < 0 ? -lit : lit);
        if (var > f.num_vars) parse_fail(line_no, "literal exceeds declared variable count");
        current.push_back(static_cast<int>(lit));
      }
    } while (in >> tok);
  }

  if (!header_seen) raise(Errc::ParseError, "line 0: missing problem line");
  if (!current.empty())
    raise(Errc::ParseError, "line " + std::to_string(line_no) + ": unterminated clause");
  if (f.clauses.size() != declared_clauses)
    raise(Errc::HeaderMismatch, "header declares " + std::to_string(declared_clauses) +
                                    " clauses, body has " + std::to_string(f.clauses.size()));
  return f;
}

std::string emit_dimacs(const CnfFormula& f) {
  std::ostringstream out;
  out << "p cnf " << f.num_vars << ' ' << f.clauses.size() << '\n';
  for (const Clause& clause : f.clauses) {
    for (int lit : clause) out << lit << ' ';
    out << "0\n";
  }
  return out.str();
}

bool satisfies(const CnfFormula& f, const std::vector<bool>& assignment) {
  for (const Clause& clause : f.clauses) {
    bool sat = false;
    for (int lit : clause) {
      const std::size_t v = static_cast<std::size_t>(lit < 0 ? -lit : lit) - 1;
      const bool val = v < assignment.size() && assignment[v];
      if (lit > 0 ? val : !val) {
        sat = true;
        break;
      }
    }
    if (!sat) return false;
  }
  return true;
}

SatVerdict brute_force_sat(const CnfFormula& f) {
  if (f.num_vars > 24) raise(Errc::TooManyVariables, std::to_string(f.num_vars) + " variables");
  const std::uint64_t total = 1ull << f.num_vars;
  std::vector<bool> assignment(f.num_vars, false);
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    for (std::uint32_t v = 0; v < f.num_vars; ++v) assignment[v] = (mask >> v) & 1;
    if (satisfies(f, assignment)) return SatVerdict{true, assignment};
  }
  return SatVerdict{false, {}};
}

}  // namespace safecomp
