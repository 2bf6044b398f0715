#pragma once

#include <cstdint>
#include <iosfwd>

namespace edgecert {

/// Runs the library invariant suite, printing one pass/fail line per
/// check. Returns the number of failed checks.
int run_verify_suite(std::ostream& os, std::uint64_t seed);

}  // namespace edgecert
