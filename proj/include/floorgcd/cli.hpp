#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace floorgcd {

inline constexpr const char* kVersion = "1.0.0";

// One experiment run. Every field is captured in the run manifest so a report
// can be reproduced from it byte for byte.
struct ExperimentConfig {
  std::string subcommand;  // density|sieve|divisors|weyl|discrepancy|cf|witness|omega|approx
  std::string poly;
  std::string alpha;                // cf / witness
  std::vector<std::string> alphas;  // approx
  std::int64_t xmax = 1000;
  std::vector<std::int64_t> xlist;  // density: explicit checkpoint list
  int checkpoints = 8;
  std::optional<double> z;
  double A = 2.0;
  double epsilon = 0.5;
  std::int64_t d = 1;
  std::int64_t dmax = 1;
  std::int64_t m_max = 10;
  std::int64_t T = 100;
  unsigned n = 2;          // witness exponent
  std::int64_t qmax = 1000;
  double delta = 0.5;
  int terms = 10;
  std::int64_t nmin = 3;
  std::string out;            // report path; default "<subcommand>.<format>"
  std::string format = "csv"; // csv|json
  unsigned threads = 0;       // 0 = hardware
  long precision_ceiling = 4096;
  std::uint64_t seed = 0;     // reserved for randomized point selection
};

// Executes one experiment: writes the report file and a "<out>.manifest.json"
// beside it. Returns the process exit code: 0 ok, 1 parse/config error,
// 2 floor-undecided, 3 resource guard.
int run(const ExperimentConfig& config);

// Reads a manifest written by run() and re-executes it; out overrides the
// manifest's report path when nonempty.
int rerun_from_manifest(const std::string& manifest_path, const std::string& out = "");

std::string manifest_path_for(const std::string& report_path);

}  // namespace floorgcd
