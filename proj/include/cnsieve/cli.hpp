#pragma once

// Command-line front end. run() owns argument parsing, table construction,
// output formatting, and the exit-code contract:
//   0  success (including --help / --version)
//   1  usage or value errors, I/O failures
//   2  range errors (x below a formula's domain, table too small, ...)
//   3  an oracle cross-check was requested and disagreed
//
// Verification chatter goes to stderr; stdout carries only the requested
// payload so it stays machine-parseable.

namespace cnsieve::cli {

inline constexpr const char* kVersion = "1.0.0";

int run(int argc, char** argv);

}  // namespace cnsieve::cli
