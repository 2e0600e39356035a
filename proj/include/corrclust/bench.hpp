#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "corrclust/recovery.hpp"
#include "corrclust/sdp.hpp"

namespace cc {

struct BenchRow {
  int n = 0;
  double p = 0.0;
};

struct BenchConfig {
  std::vector<BenchRow> rows = {{200, 0.25}, {400, 0.19}, {1000, 0.15}, {2000, 0.13}};
  double epsilon = 0.2;
  int k = 4;
  int runs = 4;
  std::uint64_t seed = 1;
  int threads = 0;  ///< 0 = CC_THREADS env var, else 1
  SolverOptions solver;
  RecoveryParams recovery;
};

struct BenchRunResult {
  int n = 0;
  double p = 0.0;
  double epsilon = 0.0;
  std::uint64_t seed = 0;  ///< instance seed; replayable via the generator
  int misclassified = 0;
  double error_pct = 0.0;
};

struct BenchRowSummary {
  int n = 0;
  double p = 0.0;
  double avg_misclassified = 0.0;
  double avg_error_pct = 0.0;
};

struct BenchResult {
  std::vector<BenchRunResult> runs;  ///< sorted by (n, seed)
  std::vector<BenchRowSummary> summaries;
};

/// The instance seed used for one bench run; exposed so single runs can be
/// reproduced with the generator CLI.
std::uint64_t bench_run_seed(std::uint64_t base_seed, int n, int run);

BenchResult run_bench(const BenchConfig& config);

/// CSV with header n,p,epsilon,seed,misclassified,error_pct.
std::string bench_csv(const BenchResult& result);

/// Fixed-width human-readable table with per-row averages.
std::string bench_table(const BenchResult& result);

}  // namespace cc
