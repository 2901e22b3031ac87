#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace bppnet {

enum ExitCode {
    ExitOk = 0,
    ExitCheckFailed = 1,
    ExitBadInput = 2,
    ExitNumerical = 3,
};

// args excludes the program name: {"coverage", "--na", "5", ...}.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Shortest round-trip form limited to 9 significant digits, '.' decimal.
std::string format_number(double v);
std::string format_fixed(double v, int decimals);

} // namespace bppnet
