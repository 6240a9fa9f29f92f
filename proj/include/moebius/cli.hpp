#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace moebius::cli {

enum ExitCode : int { success = 0, verification_failed = 1, usage_error = 2 };

/// Values the process environment supplies to a run.
struct Environment {
    std::optional<std::string> threads;  // MOEBIUS_THREADS
};

/// Parses a decimal number or a product/quotient of numbers and the literals
/// "pi" and "sqrt2", e.g. "3*pi/2", "-sqrt2". Throws UsageError on bad input.
double parse_number(std::string_view text);

/// Runs one command line (args excludes the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const Environment& env = {});

}  // namespace moebius::cli
