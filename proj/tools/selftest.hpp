#pragma once

#include <cstdint>
#include <ostream>

inline int selftest_trials = 50;

// One PASS/FAIL line per suite; true when every suite passes.
bool run_selftest(std::uint64_t seed, std::ostream& out);
