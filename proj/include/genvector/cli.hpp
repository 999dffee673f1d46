#pragma once

#include <iosfwd>

namespace genvector::cli {

// Entry point shared by the genvector executable and the integration tests.
// Returns 0 on success; diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace genvector::cli
