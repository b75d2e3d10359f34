#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>

namespace ifsp {

// Parsed and defaulted CLI flags. The struct is plain data so tests can
// drive commands in-process without spawning the binary.
struct RunConfig {
  std::string command;  // build | simulate | backward | verify | staircase |
                        // mixture-demo
  std::string dist_spec;  // --dist
  std::string ifs_path;   // --ifs
  std::string builtin;    // --builtin: triangular | cantor-affine
  int n = 2;              // --n (theorem construction)
  double x0 = 0.0;        // --x0
  bool x0_set = false;
  std::uint64_t steps = 200000;  // --steps
  int depth = 0;                 // --depth, 0 = default for the system's n
  std::size_t count = 10000;     // --count
  std::uint64_t seed = 1;        // --seed
  double alpha = 0.01;           // --alpha
  std::size_t bins = 100;        // --bins
  std::size_t grid = 1000;       // --grid: verify grid size, staircase points
  double range_lo = 0.0;         // --lo
  double range_hi = 0.0;         // --hi
  bool range_set = false;        // both --lo and --hi were given
  double tol = 1e-9;             // --tol: verify invariance bound
  std::string out;               // --out (path for build/staircase/verify,
                                 // prefix for the multi-file commands)
};

// Runs one command; writes result files and a short human summary to log.
// Exit codes: 0 completed (tests passed where applicable), 1 a statistical
// check failed, 2 usage/configuration error, 3 numeric integrity error.
int dispatch_command(const RunConfig& cfg, std::ostream& log);

}  // namespace ifsp
