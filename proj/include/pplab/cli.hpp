#ifndef PPLAB_CLI_HPP
#define PPLAB_CLI_HPP

// Command-line front end. Kept in the library so tests can drive it
// in-process.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace pplab {

/// Exit statuses.
enum ExitCode : int {
  kExitOk = 0,
  kExitFinding = 1,  // anomaly rows, a failed identity or structure check
  kExitUsage = 2,    // bad flags, malformed digits, congruence mismatch
  kExitError = 3,    // pipeline transcription error, budget, I/O
};

struct RunConfig {
  std::string command;
  std::uint32_t p = 7;
  int h = 1;
  std::string family = "f1";
  std::string branch = "a_nonzero";
  std::string A = "0", B = "0";
  std::string curve;  // curves: empty = every applicable system
  bool all = false;
  bool bruteforce = false;
  bool probabilistic = false;
  unsigned workers = 1;
  std::uint64_t budget = 100'000'000;
  std::uint64_t seed = 0x5eed2019;
  std::string out;
  std::string format = "json";

  /// Canonical text of everything that influences artifact content (not the
  /// worker count or the output path).
  std::string canonical() const;
  /// FNV-1a 64 of canonical(), hex.
  std::string hash() const;
};

/// Parses "d0:d1:..." (or comma separated) base-p digits, low degree first.
std::vector<std::uint32_t> parse_digits(const std::string& text, std::uint32_t p, int h);

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pplab

#endif  // PPLAB_CLI_HPP
