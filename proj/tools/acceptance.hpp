#pragma once

#include <ostream>

namespace safecomp::acceptance {

/// Runs the full acceptance suite, printing one pass/fail line per
/// criterion. Returns true when every criterion holds.
bool run_all(std::ostream& out);

}  // namespace safecomp::acceptance
