#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace capk {

inline constexpr const char* kVersion = "1.0.0";

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kUsage = 2,
  kDomain = 3,
  kBound = 4,
  kInconsistent = 5,
  kUnsupported = 6,
};

struct CliResult {
  int code = kOk;
  std::string out;  // canonical document (or table)
  std::string err;  // usage text, error object, timing
};

// args excludes the program name.
CliResult run_cli(const std::vector<std::string>& args);

struct SuiteResult {
  int trials = 0;
  int exact = 0;
  long enumerated_nodes = 0;  // nodes also confirmed by listing elements
  std::vector<std::string> failures;
};

// Random integer matrices f: Z^a -> Z^b, g: Z^b -> Z^c with a, b, c <= max_size
// and entries in [-max_entry, max_entry].
SuiteResult verify_six_term(std::uint64_t seed, int trials, int max_entry = 9, int max_size = 4);
// Random finite modules of order <= max_order with an involution; the
// sequence must be exact and H^1 must match cocycle enumeration.
SuiteResult verify_cool(std::uint64_t seed, int trials, std::size_t max_order);

}  // namespace capk
