#pragma once

#include <ostream>

namespace grampa::tools {

/// Quick invariant checks on small seeded instances; prints one line per check.
bool run_selftest(std::ostream& out);

}  // namespace grampa::tools
