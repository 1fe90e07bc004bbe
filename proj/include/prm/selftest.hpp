#pragma once

#include <iosfwd>

namespace prm {

/// Quick oracle and calibration checks. Prints one line per check and
/// returns the number of failures.
int run_selftest(std::ostream& out);

} // namespace prm
