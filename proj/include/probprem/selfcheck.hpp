#pragma once
#include <iosfwd>

namespace probprem {

/// Runs the full oracle/property acceptance suite, printing one
/// PASS/FAIL line per criterion to `out` (timing measurements go to
/// `err` so that `out` stays byte-reproducible). Returns true iff every
/// criterion passed.
bool run_acceptance(std::ostream& out, std::ostream& err);

}  // namespace probprem
