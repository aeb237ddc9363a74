#pragma once

#include <ostream>

namespace oisac {

/// Fast built-in invariant suite (transform round trips, sequence balance,
/// noiseless exactness, sweep determinism across thread counts). Prints one
/// line per check; returns the number of failures.
int run_selftest(std::ostream& out);

} // namespace oisac
