#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pastent::cli {

/// Dispatches one command line (without the program name).
///
/// Exit codes: 0 success; 2 invalid input (bad flags, bad distribution
/// spec, violated preconditions); 3 numerical failure (quadrature accuracy,
/// inconsistent reconstruction). Results go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace pastent::cli
