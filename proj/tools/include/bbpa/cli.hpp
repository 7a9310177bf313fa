#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "bbpa/bbpa.hpp"

namespace bbpa::cli {

enum ExitCode : int {
    kSuccess = 0,  // equivalent, consistent, nfc, normed
    kNegative = 1, // distinguished, inconsistent, not nfc, unnormed, suite failure
    kUnknown = 2,
    kUsage = 3,    // bad arguments or unreadable input
};

/// Runs one subcommand. Verdicts and documents go to `out`, diagnostics to
/// `err`. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Graphviz rendering: one node per state (initial state double-circled),
/// one edge per table entry labelled `A / output`.
std::string export_dot(const BpaSystem& system, const Transducer& t);

struct SuiteResult {
    std::size_t checks = 0;
    std::size_t passed = 0;
    std::vector<std::string> failures;
    std::vector<std::string> warnings;
    int exit_code = kSuccess;
};

/// Executes every `*.manifest` file of `dir`, one check per line:
///
///     norm <system> <variable> <n|omega>
///     normed <system> <true|false>
///     nfc <system> <transducer> <pass|fail>
///     consistency <system> <transducer> <consistent|inconsistent>
///     decide <system> <transducer> "<left>" "<right>" <equivalent|unknown>
///     refute <system> "<left>" "<right>" <depth> <tau-bound> <len-cap> <distinguished|unknown>
///     synth-decide <system> "<left>" "<right>" <equivalent|unknown>
///
/// Paths are relative to `dir`. Throws ParseError (with the line) for a
/// malformed entry and Error for a missing file.
SuiteResult run_suite(const std::string& dir);

} // namespace bbpa::cli
