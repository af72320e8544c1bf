#pragma once

namespace oligecon::cli {

/// Entry point of the `oligecon` tool. Exit codes: 0 success, 1 usage
/// or I/O error, 2 validation failure, 3 solver non-convergence.
int run(int argc, char** argv);

}  // namespace oligecon::cli
