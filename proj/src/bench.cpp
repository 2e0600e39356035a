#include "corrclust/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <sstream>
#include <thread>

#include "corrclust/error.hpp"
#include "corrclust/metrics.hpp"
#include "corrclust/rng.hpp"

namespace cc {

std::uint64_t bench_run_seed(std::uint64_t base_seed, int n, int run) {
  return CounterRng::derive(base_seed,
                            static_cast<std::uint64_t>(n) * 1000003ULL +
                                static_cast<std::uint64_t>(run));
}

namespace {

int worker_count(const BenchConfig& config, int tasks) {
  int threads = config.threads;
  if (threads <= 0) {
    if (const char* env = std::getenv("CC_THREADS")) threads = std::atoi(env);
  }
  if (threads <= 0) threads = 1;
  return std::max(1, std::min(threads, tasks));
}

}  // namespace

BenchResult run_bench(const BenchConfig& config) {
  if (config.runs < 1) throw InputError("runs must be positive");
  if (config.k < 1) throw InputError("k must be positive");

  struct Task {
    int n;
    double p;
    int run;
  };
  std::vector<Task> tasks;
  for (const BenchRow& row : config.rows) {
    for (int run = 0; run < config.runs; ++run) tasks.push_back({row.n, row.p, run});
  }

  BenchResult result;
  result.runs.resize(tasks.size());
  std::atomic<std::size_t> cursor{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto work = [&]() {
    for (;;) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= tasks.size()) return;
      try {
        const Task& t = tasks[i];
        const std::uint64_t run_seed = bench_run_seed(config.seed, t.n, t.run);
        auto [instance, truth] =
            generate_gnp_planted(t.n, t.p, config.k, config.epsilon, run_seed);
        SolverOptions opts = config.solver;
        opts.k_guess = std::max(opts.k_guess, config.k);
        if (opts.rank == 0) opts.rank = config.k;
        auto [clustering, solution] = recover(instance, opts, config.recovery);
        const MatchResult match = classification_error(truth.planted, clustering);
        const int miss = t.n - static_cast<int>(match.matched_overlap + 0.5);
        result.runs[i] = {t.n,  t.p,
                          config.epsilon, run_seed,
                          miss, 100.0 * static_cast<double>(miss) / t.n};
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  const int threads = worker_count(config, static_cast<int>(tasks.size()));
  if (threads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int i = 0; i < threads; ++i) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::stable_sort(result.runs.begin(), result.runs.end(),
                   [](const BenchRunResult& a, const BenchRunResult& b) {
                     if (a.n != b.n) return a.n < b.n;
                     return a.seed < b.seed;
                   });

  for (const BenchRow& row : config.rows) {
    BenchRowSummary summary{row.n, row.p, 0.0, 0.0};
    int count = 0;
    for (const BenchRunResult& r : result.runs) {
      if (r.n != row.n || r.p != row.p) continue;
      summary.avg_misclassified += r.misclassified;
      summary.avg_error_pct += r.error_pct;
      ++count;
    }
    if (count > 0) {
      summary.avg_misclassified /= count;
      summary.avg_error_pct /= count;
    }
    result.summaries.push_back(summary);
  }
  return result;
}

std::string bench_csv(const BenchResult& result) {
  std::ostringstream out;
  out << "n,p,epsilon,seed,misclassified,error_pct\n";
  char buf[160];
  for (const BenchRunResult& r : result.runs) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%llu,%d,%.6f\n", r.n, r.p, r.epsilon,
                  static_cast<unsigned long long>(r.seed), r.misclassified, r.error_pct);
    out << buf;
  }
  return out.str();
}

std::string bench_table(const BenchResult& result) {
  std::ostringstream out;
  char buf[200];
  std::snprintf(buf, sizeof(buf), "%6s %6s %8s %22s %14s %10s\n", "n", "p", "epsilon", "seed",
                "misclassified", "error%");
  out << buf;
  for (const BenchRunResult& r : result.runs) {
    std::snprintf(buf, sizeof(buf), "%6d %6.3f %8.3f %22llu %14d %10.4f\n", r.n, r.p, r.epsilon,
                  static_cast<unsigned long long>(r.seed), r.misclassified, r.error_pct);
    out << buf;
  }
  out << '\n';
  std::snprintf(buf, sizeof(buf), "%6s %6s %18s %12s\n", "n", "p", "avg misclassified",
                "avg error%");
  out << buf;
  for (const BenchRowSummary& s : result.summaries) {
    std::snprintf(buf, sizeof(buf), "%6d %6.3f %18.2f %12.4f\n", s.n, s.p, s.avg_misclassified,
                  s.avg_error_pct);
    out << buf;
  }
  return out.str();
}

}  // namespace cc
