#pragma once

#include <string>
#include <vector>

namespace tumor_dde::cli {

// Runs one subcommand: equilibria, stability, tau-critical, switching-curves,
// simulate, continue-periodic or validate.  Returns 0 on success, 1 on
// domain/hypothesis errors, 2 on usage errors.
int dispatch(int argc, const char* const* argv);
int dispatch(const std::vector<std::string>& args);  // without the program name

}  // namespace tumor_dde::cli
