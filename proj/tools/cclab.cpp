#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include <CLI11.hpp>

#include "corrclust/bench.hpp"
#include "corrclust/error.hpp"
#include "corrclust/game.hpp"
#include "corrclust/instance.hpp"
#include "corrclust/json.hpp"
#include "corrclust/metrics.hpp"
#include "corrclust/ptas.hpp"
#include "corrclust/recovery.hpp"
#include "corrclust/sdp.hpp"

namespace {

using nlohmann::json;

constexpr int kExitUsage = 2;
constexpr int kExitInput = 3;
constexpr int kExitInvariant = 4;
constexpr int kExitNoConvergence = 5;

int fail(int code, const std::string& type, const std::string& message) {
  const json err{{"error", {{"type", type}, {"message", message}}}};
  std::cerr << err.dump(2) << '\n';
  return code;
}

void emit(const json& j, const std::string& format, const std::string& out_path) {
  std::string text;
  if (format == "table") {
    for (const auto& [key, value] : j.items()) {
      text += key;
      text += ": ";
      text += value.is_string() ? value.get<std::string>() : value.dump();
      text += '\n';
    }
  } else {
    text = j.dump(2);
    text += '\n';
  }
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw cc::InputError("cannot open " + out_path + " for writing");
    out << text;
  }
  std::cout << text;
}

// Built-in adaptive adversary for the CLI: proposes edges touching vertices
// of earlier E_R edges first, so noise clumps spatially, then falls back to
// lexicographic pairs until the budget is spent.
class ConcentrationScript : public cc::AdversaryScript {
 public:
  ConcentrationScript(int n, int k, std::int64_t budget)
      : n_(n), planted_(cc::near_equal_clusters(n, k)) {
    const std::int64_t pairs = static_cast<std::int64_t>(n) * (n - 1) / 2;
    budget_ = std::min(budget, pairs);
  }

  int vertex_count() const override { return n_; }
  cc::Clustering planted() const override { return planted_; }

  std::optional<cc::AdaptiveStep> next(std::span<const cc::AdaptiveRecord> history) override {
    if (static_cast<std::int64_t>(history.size()) >= budget_) return std::nullopt;
    if (!history.empty()) {
      const auto& last = history.back();
      if (last.in_random_set) focus_ = last.step.u;
    }
    for (int w = 0; w < n_; ++w) {
      if (w == focus_) continue;
      const auto key = pair_key(focus_, w);
      if (!used_.count(key)) {
        used_.insert(key);
        return cc::AdaptiveStep{std::min(focus_, w), std::max(focus_, w), 1.0};
      }
    }
    while (cursor_u_ < n_) {
      if (cursor_v_ >= n_) {
        ++cursor_u_;
        cursor_v_ = cursor_u_ + 1;
        continue;
      }
      const int u = cursor_u_, v = cursor_v_++;
      const auto key = pair_key(u, v);
      if (!used_.count(key)) {
        used_.insert(key);
        return cc::AdaptiveStep{u, v, 1.0};
      }
    }
    return std::nullopt;
  }

 private:
  static std::uint64_t pair_key(int a, int b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
  }

  int n_;
  cc::Clustering planted_;
  std::int64_t budget_ = 0;
  int focus_ = 0;
  int cursor_u_ = 0;
  int cursor_v_ = 1;
  std::unordered_set<std::uint64_t> used_;
};

struct SolverFlags {
  cc::SolverOptions opts;

  void attach(CLI::App* cmd) {
    cmd->add_option("--rank", opts.rank, "Embedding rank, 0 = automatic");
    cmd->add_option("--k-guess", opts.k_guess, "Expected cluster count for the rank rule");
    cmd->add_option("--max-iters", opts.max_iters, "Iteration cap per restart");
    cmd->add_option("--restarts", opts.restarts, "Independent restarts");
    cmd->add_option("--solver-seed", opts.seed, "Solver initialization seed");
    cmd->add_option("--tol", opts.convergence_tol, "Relative objective tolerance");
  }
};

cc::GroundTruth load_truth_or_sidecar(const std::string& truth_path,
                                      const std::string& instance_path, bool* found) {
  namespace fs = std::filesystem;
  fs::path path = truth_path.empty() ? cc::truth_path_for(instance_path) : fs::path(truth_path);
  if (truth_path.empty() && !fs::exists(path)) {
    *found = false;
    return {};
  }
  *found = true;
  return cc::load_ground_truth(path);
}

std::vector<std::vector<double>> build_stakes(const std::string& spec, int m) {
  if (spec == "all-ones") return {std::vector<double>(m, 1.0)};
  if (spec == "halves") {
    std::vector<double> low(m, 0.0), high(m, 0.0);
    for (int i = 0; i < m; ++i) (i < m / 2 ? low[i] : high[i]) = 1.0;
    return {low, high};
  }
  throw cc::InputError("unknown stake family '" + spec + "' (use all-ones or halves)");
}

int run(int argc, char** argv) {
  CLI::App app{"cclab: correlation clustering laboratory"};
  app.require_subcommand(1);

  // generate ----------------------------------------------------------------
  auto* gen = app.add_subcommand("generate", "Generate a semi-random instance");
  std::string gen_model = "gnp-planted", gen_policy = "flip", gen_out;
  int gen_n = 0, gen_k = 4;
  double gen_p = 0.0, gen_eps = 0.0;
  std::uint64_t gen_seed = 0;
  gen->add_option("--model", gen_model, "gnp-planted | basic | adaptive")
      ->check(CLI::IsMember({"gnp-planted", "basic", "adaptive"}));
  gen->add_option("--n", gen_n, "Vertex count")->required();
  gen->add_option("--p", gen_p,
                  "Edge probability (gnp-planted) or pair-budget fraction (adaptive)");
  gen->add_option("--k", gen_k, "Planted cluster count");
  gen->add_option("--epsilon", gen_eps, "Noise rate in [0, 1/2)")->required();
  gen->add_option("--seed", gen_seed, "Generator seed")->required();
  gen->add_option("--policy", gen_policy, "E_R sign policy for --model basic")
      ->check(CLI::IsMember({"flip", "keep", "random"}));
  gen->add_option("--out", gen_out, "Instance file path (truth sidecar written next to it)")
      ->required();

  // solve -------------------------------------------------------------------
  auto* solve_cmd = app.add_subcommand("solve", "Solve the SDP relaxation");
  std::string solve_in, solve_out, solve_format = "json";
  SolverFlags solve_flags;
  bool solve_strict = false;
  solve_cmd->add_option("--in", solve_in, "Instance file")->required();
  solve_cmd->add_option("--out", solve_out, "Write the embedding (cc-sdp format)");
  solve_flags.attach(solve_cmd);
  solve_cmd->add_option("--format", solve_format)->check(CLI::IsMember({"json", "table"}));
  solve_cmd->add_flag("--strict", solve_strict, "Exit 5 when the solver did not converge");

  // ptas --------------------------------------------------------------------
  auto* ptas_cmd = app.add_subcommand("ptas", "Prune high-SDP-value edges, then local search");
  std::string ptas_in, ptas_truth, ptas_out, ptas_format = "json";
  cc::PtasConfig ptas_config;
  SolverFlags ptas_flags;
  bool ptas_strict = false;
  ptas_cmd->add_option("--in", ptas_in, "Instance file")->required();
  ptas_cmd->add_option("--truth", ptas_truth, "Ground truth file (default: <stem>.truth)");
  ptas_cmd->add_option("--delta", ptas_config.delta, "Prune threshold parameter in (0, 1/2)");
  ptas_cmd->add_flag("--paper-schedule", ptas_config.paper_schedule,
                     "Use delta = (n ln n / c(E))^(1/6) capped at 0.45");
  ptas_cmd->add_option("--passes", ptas_config.local_search_max_passes,
                       "Local search pass budget");
  ptas_cmd->add_option("--out", ptas_out, "Write the clustering (cc-labels format)");
  ptas_flags.attach(ptas_cmd);
  ptas_cmd->add_option("--format", ptas_format)->check(CLI::IsMember({"json", "table"}));
  ptas_cmd->add_flag("--strict", ptas_strict, "Exit 5 when the solver did not converge");

  // recover -----------------------------------------------------------------
  auto* rec_cmd = app.add_subcommand("recover", "Greedy ball-graph recovery from SDP vectors");
  std::string rec_in, rec_truth, rec_out, rec_format = "json";
  cc::RecoveryParams rec_params;
  SolverFlags rec_flags;
  bool rec_no_cleanup = false, rec_strict = false;
  rec_cmd->add_option("--in", rec_in, "Instance file")->required();
  rec_cmd->add_option("--truth", rec_truth, "Ground truth file (default: <stem>.truth)");
  rec_cmd->add_option("--rho-core", rec_params.rho_core, "Ball graph radius");
  rec_cmd->add_flag("--no-cleanup", rec_no_cleanup, "Skip the small-cluster merge step");
  rec_cmd->add_option("--cleanup-min-size", rec_params.cleanup_min_size,
                      "Merge clusters below this size (0 = max(2, 2% of n))");
  rec_cmd->add_option("--cleanup-threshold", rec_params.cleanup_merge_threshold,
                      "Average inner product needed to merge");
  rec_cmd->add_option("--out", rec_out, "Write the clustering (cc-labels format)");
  rec_flags.attach(rec_cmd);
  rec_cmd->add_option("--format", rec_format)->check(CLI::IsMember({"json", "table"}));
  rec_cmd->add_flag("--strict", rec_strict, "Exit 5 when the solver did not converge");

  // evaluate ------------------------------------------------------------------
  auto* eval_cmd = app.add_subcommand("evaluate", "Score a clustering against an instance");
  std::string eval_in, eval_labels, eval_truth, eval_format = "json";
  eval_cmd->add_option("--in", eval_in, "Instance file")->required();
  eval_cmd->add_option("--labels", eval_labels, "Clustering file (cc-labels)")->required();
  eval_cmd->add_option("--truth", eval_truth, "Ground truth file (default: <stem>.truth)");
  eval_cmd->add_option("--format", eval_format)->check(CLI::IsMember({"json", "table"}));

  // validate ------------------------------------------------------------------
  auto* val_cmd = app.add_subcommand(
      "validate", "Structural statistics, assumption checks and core geometry");
  std::string val_in, val_truth, val_format = "json";
  double val_delta = 0.0, val_rho_core = 0.1, val_rho_inter = 0.8;
  SolverFlags val_flags;
  bool val_strict = false;
  val_cmd->add_option("--in", val_in, "Instance file")->required();
  val_cmd->add_option("--truth", val_truth, "Ground truth file (default: <stem>.truth)");
  val_cmd->add_option("--delta", val_delta, "Flip threshold (0 = paper schedule)");
  val_cmd->add_option("--rho-core", val_rho_core, "Core radius");
  val_cmd->add_option("--rho-inter", val_rho_inter, "Expected center separation");
  val_flags.attach(val_cmd);
  val_cmd->add_option("--format", val_format)->check(CLI::IsMember({"json", "table"}));
  val_cmd->add_flag("--strict", val_strict, "Exit 5 when the solver did not converge");

  // game ----------------------------------------------------------------------
  auto* game_cmd = app.add_subcommand("game", "Monte Carlo betting game tail probabilities");
  cc::GameConfig game_config;
  std::string game_stakes = "all-ones", game_format = "json", game_out;
  std::uint64_t game_seed = 0;
  game_cmd->add_option("--m", game_config.m, "Coordinate count")->required();
  game_cmd->add_option("--epsilon", game_config.epsilon, "Win probability in [0, 1/2)")
      ->required();
  game_cmd->add_option("--lambda", game_config.lambda, "Stake mass threshold")->required();
  game_cmd->add_option("--trials", game_config.trials, "Number of independent games")
      ->required();
  game_cmd->add_option("--seed", game_seed, "Trial seed")->required();
  game_cmd->add_option("--strategy", game_config.strategy,
                       "all-ones | stop-at-first-loss | double-down");
  game_cmd->add_option("--stakes", game_stakes, "Stake family: all-ones | halves");
  game_cmd->add_option("--out", game_out, "Also write the report to a file");
  game_cmd->add_option("--format", game_format)->check(CLI::IsMember({"json", "table"}));

  // bench ---------------------------------------------------------------------
  auto* bench_cmd = app.add_subcommand("bench", "Planted-cluster recovery benchmark grid");
  cc::BenchConfig bench_config;
  std::vector<std::string> bench_rows;
  std::string bench_format = "csv", bench_out;
  bool bench_dry = false, bench_strict = false;
  bench_cmd->add_option("--rows", bench_rows,
                        "Grid rows as n:p (default 200:0.25 400:0.19 1000:0.15 2000:0.13)");
  bench_cmd->add_option("--epsilon", bench_config.epsilon, "Noise rate");
  bench_cmd->add_option("--k", bench_config.k, "Planted cluster count");
  bench_cmd->add_option("--runs", bench_config.runs, "Seeded trials per row");
  bench_cmd->add_option("--seed", bench_config.seed, "Base seed");
  bench_cmd->add_option("--threads", bench_config.threads,
                        "Worker threads (0 = CC_THREADS env, default 1)");
  bench_cmd->add_flag("--dry-run", bench_dry, "Print the planned grid without running");
  bench_cmd->add_option("--out", bench_out, "Also write the output to a file");
  bench_cmd->add_option("--format", bench_format)
      ->check(CLI::IsMember({"json", "csv", "table"}));
  bench_cmd->add_flag("--strict", bench_strict, "Unused; accepted for symmetry");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(kExitUsage, "usage", e.what());
  }

  try {
    if (*gen) {
      cc::Instance instance;
      cc::GroundTruth truth;
      if (gen_model == "gnp-planted") {
        std::tie(instance, truth) =
            cc::generate_gnp_planted(gen_n, gen_p, gen_k, gen_eps, gen_seed);
      } else if (gen_model == "basic") {
        cc::CostedGraph graph;
        graph.n = gen_n;
        for (int u = 0; u < gen_n; ++u) {
          for (int v = u + 1; v < gen_n; ++v) graph.edges.push_back({u, v, 1.0});
        }
        const cc::NoiseSignPolicy policy = gen_policy == "flip" ? cc::NoiseSignPolicy::flip
                                           : gen_policy == "keep"
                                               ? cc::NoiseSignPolicy::keep
                                               : cc::NoiseSignPolicy::random_sign;
        std::tie(instance, truth) = cc::generate_basic(
            graph, cc::near_equal_clusters(gen_n, gen_k), gen_eps, policy, gen_seed);
      } else {
        const std::int64_t pairs = static_cast<std::int64_t>(gen_n) * (gen_n - 1) / 2;
        const auto budget = static_cast<std::int64_t>(gen_p * static_cast<double>(pairs) + 0.5);
        ConcentrationScript script(gen_n, gen_k, budget);
        std::tie(instance, truth) = cc::generate_adaptive(script, gen_eps, gen_seed);
      }
      cc::save_instance(instance, gen_out, &truth);
      emit(json{{"path", gen_out},
                {"truth_path", cc::truth_path_for(gen_out).string()},
                {"model", gen_model},
                {"n", instance.vertex_count()},
                {"m", instance.edge_count()},
                {"epsilon", gen_eps},
                {"seed", gen_seed},
                {"random_edges", truth.random_edges.size()}},
           "json", "");
      return 0;
    }

    if (*solve_cmd) {
      const cc::Instance instance = cc::load_instance(solve_in);
      const cc::SdpSolution solution = cc::solve(instance, solve_flags.opts);
      if (!solve_out.empty()) cc::save_solution(solution, solve_out);
      emit(cc::to_json(solution), solve_format, "");
      if (solve_strict && !solution.trace.converged) {
        return fail(kExitNoConvergence, "non-convergence",
                    "solver did not converge within the iteration budget");
      }
      return 0;
    }

    if (*ptas_cmd) {
      const cc::Instance instance = cc::load_instance(ptas_in);
      bool have_truth = false;
      const cc::GroundTruth truth = load_truth_or_sidecar(ptas_truth, ptas_in, &have_truth);
      ptas_config.solver = ptas_flags.opts;
      const cc::PtasResult result =
          cc::run_ptas(instance, ptas_config, have_truth ? &truth : nullptr);
      if (!ptas_out.empty()) cc::save_labels(result.clustering, ptas_out);
      emit(cc::to_json(result.report), ptas_format, "");
      if (ptas_strict && !result.report.converged) {
        return fail(kExitNoConvergence, "non-convergence",
                    "solver did not converge within the iteration budget");
      }
      return 0;
    }

    if (*rec_cmd) {
      const cc::Instance instance = cc::load_instance(rec_in);
      bool have_truth = false;
      const cc::GroundTruth truth = load_truth_or_sidecar(rec_truth, rec_in, &have_truth);
      rec_params.cleanup_enabled = !rec_no_cleanup;
      const auto [clustering, solution] = cc::recover(instance, rec_flags.opts, rec_params);
      if (!rec_out.empty()) cc::save_labels(clustering, rec_out);
      json out{{"n", clustering.size()},
               {"cluster_count", clustering.cluster_count()},
               {"cluster_sizes", clustering.cluster_sizes()},
               {"cost", cc::clustering_cost(instance, clustering)},
               {"solver", cc::to_json(solution)}};
      if (have_truth) {
        const cc::MatchResult match = cc::classification_error(truth.planted, clustering);
        out["classification"] = cc::to_json(match);
        out["misclassified"] =
            clustering.size() - static_cast<std::int64_t>(match.matched_overlap + 0.5);
        out["planted_cost"] = cc::clustering_cost(instance, truth.planted);
      }
      emit(out, rec_format, "");
      if (rec_strict && !solution.trace.converged) {
        return fail(kExitNoConvergence, "non-convergence",
                    "solver did not converge within the iteration budget");
      }
      return 0;
    }

    if (*eval_cmd) {
      const cc::Instance instance = cc::load_instance(eval_in);
      const cc::Clustering clustering = cc::load_labels(eval_labels);
      bool have_truth = false;
      const cc::GroundTruth truth = load_truth_or_sidecar(eval_truth, eval_in, &have_truth);
      json out{{"n", clustering.size()},
               {"cluster_count", clustering.cluster_count()},
               {"cost", cc::clustering_cost(instance, clustering)}};
      if (have_truth) {
        const cc::MatchResult match = cc::classification_error(truth.planted, clustering);
        out["classification"] = cc::to_json(match);
        out["misclassified"] =
            clustering.size() - static_cast<std::int64_t>(match.matched_overlap + 0.5);
        out["planted_cost"] = cc::clustering_cost(instance, truth.planted);
      }
      emit(out, eval_format, "");
      return 0;
    }

    if (*val_cmd) {
      const cc::Instance instance = cc::load_instance(val_in);
      bool have_truth = false;
      const cc::GroundTruth truth = load_truth_or_sidecar(val_truth, val_in, &have_truth);
      if (!have_truth) {
        return fail(kExitInput, "input", "validate requires a ground truth file");
      }
      const cc::SdpSolution solution = cc::solve(instance, val_flags.opts);
      const std::optional<double> delta =
          val_delta > 0.0 ? std::optional<double>(val_delta) : std::nullopt;
      const json out{
          {"solver", cc::to_json(solution)},
          {"structural_stats",
           cc::to_json(cc::structural_stats(instance, truth, solution, delta))},
          {"assumptions", cc::to_json(cc::check_assumptions(instance, truth))},
          {"core_structure",
           cc::to_json(cc::core_structure(solution, truth, val_rho_core, val_rho_inter))}};
      emit(out, val_format, "");
      if (val_strict && !solution.trace.converged) {
        return fail(kExitNoConvergence, "non-convergence",
                    "solver did not converge within the iteration budget");
      }
      return 0;
    }

    if (*game_cmd) {
      game_config.stakes = build_stakes(game_stakes, game_config.m);
      const cc::GameOutcome outcome = cc::simulate_game(game_config, game_seed);
      emit(cc::game_json(game_config, outcome), game_format, game_out);
      return 0;
    }

    if (*bench_cmd) {
      if (!bench_rows.empty()) {
        bench_config.rows.clear();
        for (const std::string& group : bench_rows) {
          std::stringstream pieces(group);
          std::string row;
          while (std::getline(pieces, row, ',')) {
            const auto colon = row.find(':');
            std::size_t n_end = 0;
            std::size_t p_end = 0;
            int n = 0;
            double p = 0.0;
            try {
              if (colon == std::string::npos) throw std::invalid_argument("");
              n = std::stoi(row.substr(0, colon), &n_end);
              p = std::stod(row.substr(colon + 1), &p_end);
            } catch (const std::exception&) {
              throw cc::InputError("row '" + row + "' is not in n:p form");
            }
            if (n_end != colon || p_end != row.size() - colon - 1) {
              throw cc::InputError("row '" + row + "' is not in n:p form");
            }
            bench_config.rows.push_back({n, p});
          }
        }
      }
      if (bench_dry) {
        json rows = json::array();
        for (const cc::BenchRow& row : bench_config.rows) {
          json runs = json::array();
          for (int run = 0; run < bench_config.runs; ++run) {
            runs.push_back(json{
                {"run", run}, {"seed", cc::bench_run_seed(bench_config.seed, row.n, run)}});
          }
          rows.push_back(json{{"n", row.n}, {"p", row.p}, {"runs", runs}});
        }
        emit(json{{"dry_run", true},
                  {"epsilon", bench_config.epsilon},
                  {"k", bench_config.k},
                  {"rows", rows}},
             "json", bench_out);
        return 0;
      }
      const cc::BenchResult result = cc::run_bench(bench_config);
      std::string text;
      if (bench_format == "json") {
        text = cc::to_json(result).dump(2) + "\n";
      } else if (bench_format == "csv") {
        text = cc::bench_csv(result);
      } else {
        text = cc::bench_table(result);
      }
      if (!bench_out.empty()) {
        std::ofstream out(bench_out);
        if (!out) throw cc::InputError("cannot open " + bench_out + " for writing");
        out << text;
      }
      std::cout << text;
      return 0;
    }
  } catch (const cc::InputError& e) {
    return fail(kExitInput, "input", e.what());
  } catch (const cc::InvariantError& e) {
    return fail(kExitInvariant, "invariant", e.what());
  } catch (const std::exception& e) {
    return fail(kExitInvariant, "internal", e.what());
  }
  return fail(kExitUsage, "usage", "no subcommand given");
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
