#include "corrclust/json.hpp"

#include <cmath>

namespace cc {

using nlohmann::json;

json to_json(const PtasReport& report) {
  json j{{"delta", report.delta},
         {"sdp_objective", report.sdp_objective},
         {"pruned_cost", report.pruned_cost},
         {"residual_cost", report.residual_cost},
         {"total_cost", report.total_cost},
         {"converged", report.converged}};
  if (report.has_truth) {
    j["planted_cost"] = report.planted_cost;
    j["pruned_consistent_count"] = report.pruned_consistent_count;
    j["pruned_inconsistent_count"] = report.pruned_inconsistent_count;
    j["unnormalized_additive_bound"] = report.unnormalized_additive_bound;
  }
  return j;
}

json to_json(const MatchResult& result) {
  json pairs = json::array();
  for (const auto& [a, b] : result.matching) pairs.push_back(json::array({a, b}));
  return json{{"error", result.error},
              {"matched_overlap", result.matched_overlap},
              {"matching", pairs}};
}

json to_json(const AssumptionsReport& report) {
  return json{{"lambda_gap_per_cluster", report.lambda_gap_per_cluster},
              {"lambda_gap", report.lambda_gap},
              {"beta", report.beta},
              {"beta_matrix", report.beta_matrix},
              {"intercluster_density_threshold_unnormalized",
               report.intercluster_density_threshold},
              {"cluster_regularity_max_dev", report.cluster_regularity_max_dev},
              {"intercluster_regularity_max_dev", report.intercluster_regularity_max_dev},
              {"predicted_eta_unnormalized", report.predicted_eta},
              {"epsilon", report.epsilon}};
}

json to_json(const StructuralStats& stats) {
  return json{{"delta", stats.delta},
              {"gamma", stats.gamma},
              {"sigma", stats.sigma},
              {"lambda_bound_unnormalized", stats.lambda_bound},
              {"sdp_objective", stats.sdp_objective},
              {"q_cost", stats.q_cost},
              {"q_surviving_cost", stats.q_surviving_cost},
              {"e_flip_cost", stats.e_flip_cost},
              {"q_minus_flip_cost", stats.q_minus_flip_cost},
              {"flip_minus_q_cost", stats.flip_minus_q_cost},
              {"sdp_hat_cost", stats.sdp_hat_cost},
              {"q_count", stats.q_count},
              {"e_flip_count", stats.e_flip_count}};
}

json to_json(const CoreStructureReport& report) {
  json clusters = json::array();
  for (const ClusterCore& c : report.clusters) {
    clusters.push_back(json{{"cluster", c.cluster},
                            {"center", c.center},
                            {"size", c.size},
                            {"core_size", c.core_size},
                            {"core_fraction", c.core_fraction}});
  }
  json j{{"rho_core", report.rho_core},
         {"rho_inter", report.rho_inter},
         {"clusters", clusters},
         {"center_distances", report.center_distances},
         {"min_core_fraction", report.min_core_fraction}};
  if (std::isnan(report.min_center_distance)) {
    j["min_center_distance"] = nullptr;
  } else {
    j["min_center_distance"] = report.min_center_distance;
  }
  return j;
}

json to_json(const BenchResult& result) {
  json runs = json::array();
  for (const BenchRunResult& r : result.runs) {
    runs.push_back(json{{"n", r.n},
                        {"p", r.p},
                        {"epsilon", r.epsilon},
                        {"seed", r.seed},
                        {"misclassified", r.misclassified},
                        {"error_pct", r.error_pct}});
  }
  json summaries = json::array();
  for (const BenchRowSummary& s : result.summaries) {
    summaries.push_back(json{{"n", s.n},
                             {"p", s.p},
                             {"avg_misclassified", s.avg_misclassified},
                             {"avg_error_pct", s.avg_error_pct}});
  }
  return json{{"runs", runs}, {"summaries", summaries}};
}

json to_json(const SdpSolution& solution) {
  return json{{"objective", solution.objective},
              {"rank", solution.rank},
              {"n", solution.vertex_count()},
              {"iterations", solution.trace.iterations},
              {"final_gradient_norm", solution.trace.final_gradient_norm},
              {"restarts_used", solution.trace.restarts_used},
              {"best_restart", solution.trace.best_restart},
              {"converged", solution.trace.converged}};
}

json game_json(const GameConfig& config, const GameOutcome& outcome) {
  return json{{"m", config.m},
              {"epsilon", config.epsilon},
              {"lambda", config.lambda},
              {"trials", config.trials},
              {"empirical_prob", outcome.empirical_prob},
              {"theoretical_bound", outcome.theoretical_bound},
              {"std_err", outcome.std_err}};
}

}  // namespace cc
