#include <pybind11/eigen.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "corrclust/bench.hpp"
#include "corrclust/error.hpp"
#include "corrclust/game.hpp"
#include "corrclust/instance.hpp"
#include "corrclust/metrics.hpp"
#include "corrclust/ptas.hpp"
#include "corrclust/recovery.hpp"
#include "corrclust/sdp.hpp"
#include "corrclust/spectral.hpp"

namespace py = pybind11;

namespace {

// Python subclasses see the history as a list instead of a span.
class PyAdversaryScript : public cc::AdversaryScript {
 public:
  int vertex_count() const override {
    PYBIND11_OVERRIDE_PURE(int, cc::AdversaryScript, vertex_count, );
  }

  cc::Clustering planted() const override {
    PYBIND11_OVERRIDE_PURE(cc::Clustering, cc::AdversaryScript, planted, );
  }

  std::optional<cc::AdaptiveStep> next(std::span<const cc::AdaptiveRecord> history) override {
    py::gil_scoped_acquire gil;
    py::function fn = py::get_override(this, "next");
    if (!fn) throw cc::InputError("adaptive script must implement next()");
    std::vector<cc::AdaptiveRecord> hist(history.begin(), history.end());
    py::object r = fn(hist);
    if (r.is_none()) return std::nullopt;
    return r.cast<cc::AdaptiveStep>();
  }

  std::vector<std::int64_t> removals(std::span<const cc::AdaptiveRecord> history) override {
    py::gil_scoped_acquire gil;
    py::function fn = py::get_override(this, "removals");
    if (!fn) return {};
    std::vector<cc::AdaptiveRecord> hist(history.begin(), history.end());
    return fn(hist).cast<std::vector<std::int64_t>>();
  }

  cc::Sign noisy_sign(const cc::AdaptiveRecord& record,
                      const cc::Clustering& planted_partition) override {
    PYBIND11_OVERRIDE(cc::Sign, cc::AdversaryScript, noisy_sign, record, planted_partition);
  }
};

class PyGameStrategy : public cc::GameStrategy {
 public:
  void reset(int m) override { PYBIND11_OVERRIDE_PURE(void, cc::GameStrategy, reset, m); }

  std::optional<cc::GameMove> next() override {
    PYBIND11_OVERRIDE_PURE(std::optional<cc::GameMove>, cc::GameStrategy, next, );
  }

  void observe(bool win) override { PYBIND11_OVERRIDE_PURE(void, cc::GameStrategy, observe, win); }
};

}  // namespace

PYBIND11_MODULE(_corrclust, m) {
  m.doc() = "Correlation clustering on semi-random instances: generators, SDP "
            "relaxation, pruning + local search, greedy recovery, metrics, and "
            "the betting game.";
  m.attr("__version__") = "0.1.0";

  py::register_exception<cc::InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<cc::InvariantError>(m, "InvariantError", PyExc_RuntimeError);

  // --- instances and partitions ---

  py::enum_<cc::Sign>(m, "Sign")
      .value("plus", cc::Sign::plus)
      .value("minus", cc::Sign::minus);

  py::class_<cc::EdgeRecord>(m, "EdgeRecord")
      .def(py::init<>())
      .def(py::init([](int u, int v, double cost, cc::Sign sign) {
             return cc::EdgeRecord{u, v, cost, sign};
           }),
           py::arg("u"), py::arg("v"), py::arg("cost") = 1.0, py::arg("sign") = cc::Sign::plus)
      .def_readwrite("u", &cc::EdgeRecord::u)
      .def_readwrite("v", &cc::EdgeRecord::v)
      .def_readwrite("cost", &cc::EdgeRecord::cost)
      .def_readwrite("sign", &cc::EdgeRecord::sign)
      .def("__repr__", [](const cc::EdgeRecord& e) {
        return "EdgeRecord(" + std::to_string(e.u) + ", " + std::to_string(e.v) + ", " +
               std::to_string(e.cost) + (e.sign == cc::Sign::plus ? ", +)" : ", -)");
      });

  py::class_<cc::Instance>(m, "Instance")
      .def(py::init<>())
      .def(py::init<int, std::vector<cc::EdgeRecord>>(), py::arg("n"), py::arg("edges"))
      .def_property_readonly("n", &cc::Instance::vertex_count)
      .def("vertex_count", &cc::Instance::vertex_count)
      .def("edge_count", &cc::Instance::edge_count)
      .def("edges", &cc::Instance::edges)
      .def("edge", &cc::Instance::edge, py::arg("i"))
      .def("total_cost", &cc::Instance::total_cost)
      .def("find_edge", &cc::Instance::find_edge, py::arg("u"), py::arg("v"))
      .def("__repr__", [](const cc::Instance& inst) {
        return "Instance(n=" + std::to_string(inst.vertex_count()) +
               ", edges=" + std::to_string(inst.edge_count()) + ")";
      });

  py::class_<cc::Clustering>(m, "Clustering")
      .def(py::init<>())
      .def(py::init<std::vector<std::int32_t>>(), py::arg("labels"))
      .def_static("densify", &cc::Clustering::densify, py::arg("labels"))
      .def("size", &cc::Clustering::size)
      .def("cluster_count", &cc::Clustering::cluster_count)
      .def("label", &cc::Clustering::label, py::arg("u"))
      .def("labels", &cc::Clustering::labels)
      .def("clusters", &cc::Clustering::clusters)
      .def("cluster_sizes", &cc::Clustering::cluster_sizes)
      .def(py::self == py::self)
      .def("__len__", &cc::Clustering::size)
      .def("__repr__", [](const cc::Clustering& c) {
        return "Clustering(n=" + std::to_string(c.size()) +
               ", clusters=" + std::to_string(c.cluster_count()) + ")";
      });

  py::class_<cc::GroundTruth>(m, "GroundTruth")
      .def(py::init<>())
      .def_readwrite("planted", &cc::GroundTruth::planted)
      .def_readwrite("random_edges", &cc::GroundTruth::random_edges)
      .def_readwrite("epsilon", &cc::GroundTruth::epsilon);

  m.def("edge_consistent", &cc::edge_consistent, py::arg("edge"), py::arg("planted"));

  // --- generators ---

  py::class_<cc::CostedEdge>(m, "CostedEdge")
      .def(py::init([](int u, int v, double cost) {
             return cc::CostedEdge{u, v, cost};
           }),
           py::arg("u"), py::arg("v"), py::arg("cost") = 1.0)
      .def_readwrite("u", &cc::CostedEdge::u)
      .def_readwrite("v", &cc::CostedEdge::v)
      .def_readwrite("cost", &cc::CostedEdge::cost);

  py::class_<cc::CostedGraph>(m, "CostedGraph")
      .def(py::init<>())
      .def(py::init([](int n, std::vector<cc::CostedEdge> edges) {
             return cc::CostedGraph{n, std::move(edges)};
           }),
           py::arg("n"), py::arg("edges"))
      .def_readwrite("n", &cc::CostedGraph::n)
      .def_readwrite("edges", &cc::CostedGraph::edges);

  py::enum_<cc::NoiseSignPolicy>(m, "NoiseSignPolicy")
      .value("flip", cc::NoiseSignPolicy::flip)
      .value("keep", cc::NoiseSignPolicy::keep)
      .value("random_sign", cc::NoiseSignPolicy::random_sign);

  m.def("generate_basic", &cc::generate_basic, py::arg("graph"), py::arg("planted"),
        py::arg("epsilon"), py::arg("policy"), py::arg("seed"),
        "Semi-random model on an explicit costed graph; returns (instance, truth).");
  m.def("near_equal_clusters", &cc::near_equal_clusters, py::arg("n"), py::arg("k"));
  m.def("generate_gnp_planted", &cc::generate_gnp_planted, py::arg("n"), py::arg("p"),
        py::arg("k"), py::arg("epsilon"), py::arg("seed"),
        "G(n, p) with k near-equal planted clusters and flip noise; returns (instance, truth).");

  py::class_<cc::AdaptiveStep>(m, "AdaptiveStep")
      .def(py::init([](int u, int v, double cost) {
             return cc::AdaptiveStep{u, v, cost};
           }),
           py::arg("u"), py::arg("v"), py::arg("cost") = 1.0)
      .def_readwrite("u", &cc::AdaptiveStep::u)
      .def_readwrite("v", &cc::AdaptiveStep::v)
      .def_readwrite("cost", &cc::AdaptiveStep::cost);

  py::class_<cc::AdaptiveRecord>(m, "AdaptiveRecord")
      .def(py::init<>())
      .def_readwrite("step", &cc::AdaptiveRecord::step)
      .def_readwrite("in_random_set", &cc::AdaptiveRecord::in_random_set);

  py::class_<cc::AdversaryScript, PyAdversaryScript>(m, "AdversaryScript")
      .def(py::init<>())
      .def("vertex_count", &cc::AdversaryScript::vertex_count)
      .def("planted", &cc::AdversaryScript::planted)
      .def("noisy_sign", &cc::AdversaryScript::noisy_sign, py::arg("record"), py::arg("planted"));

  m.def("generate_adaptive", &cc::generate_adaptive, py::arg("script"), py::arg("epsilon"),
        py::arg("seed"), py::arg("max_steps") = 1000000,
        "Adaptive semi-random model driven by a Python AdversaryScript subclass.");

  // --- file formats ---

  m.def("save_instance",
        [](const cc::Instance& instance, const std::filesystem::path& path,
           std::optional<cc::GroundTruth> truth) {
          cc::save_instance(instance, path, truth ? &*truth : nullptr);
        },
        py::arg("instance"), py::arg("path"), py::arg("truth") = std::nullopt);
  m.def("load_instance", &cc::load_instance, py::arg("path"));
  m.def("truth_path_for", &cc::truth_path_for, py::arg("instance_path"));
  m.def("save_ground_truth", &cc::save_ground_truth, py::arg("truth"), py::arg("path"));
  m.def("load_ground_truth", &cc::load_ground_truth, py::arg("path"));
  m.def("save_labels", &cc::save_labels, py::arg("clustering"), py::arg("path"));
  m.def("load_labels", &cc::load_labels, py::arg("path"));

  // --- sdp ---

  py::class_<cc::SolverOptions>(m, "SolverOptions")
      .def(py::init<>())
      .def_readwrite("rank", &cc::SolverOptions::rank)
      .def_readwrite("k_guess", &cc::SolverOptions::k_guess)
      .def_readwrite("max_iters", &cc::SolverOptions::max_iters)
      .def_readwrite("restarts", &cc::SolverOptions::restarts)
      .def_readwrite("convergence_tol", &cc::SolverOptions::convergence_tol)
      .def_readwrite("convergence_window", &cc::SolverOptions::convergence_window)
      .def_readwrite("objective_floor", &cc::SolverOptions::objective_floor)
      .def_readwrite("initial_step", &cc::SolverOptions::initial_step)
      .def_readwrite("min_step", &cc::SolverOptions::min_step)
      .def_readwrite("max_step", &cc::SolverOptions::max_step)
      .def_readwrite("stall_ratio", &cc::SolverOptions::stall_ratio)
      .def_readwrite("stall_window", &cc::SolverOptions::stall_window)
      .def_readwrite("seed", &cc::SolverOptions::seed);

  py::class_<cc::SolverTrace>(m, "SolverTrace")
      .def(py::init<>())
      .def_readwrite("iterations", &cc::SolverTrace::iterations)
      .def_readwrite("final_gradient_norm", &cc::SolverTrace::final_gradient_norm)
      .def_readwrite("restarts_used", &cc::SolverTrace::restarts_used)
      .def_readwrite("best_restart", &cc::SolverTrace::best_restart)
      .def_readwrite("converged", &cc::SolverTrace::converged);

  py::class_<cc::SdpSolution>(m, "SdpSolution")
      .def(py::init<>())
      .def_readwrite("embedding", &cc::SdpSolution::embedding)
      .def_readwrite("rank", &cc::SdpSolution::rank)
      .def_readwrite("objective", &cc::SdpSolution::objective)
      .def_readwrite("trace", &cc::SdpSolution::trace)
      .def("vertex_count", &cc::SdpSolution::vertex_count)
      .def("inner_product", &cc::SdpSolution::inner_product, py::arg("u"), py::arg("v"));

  m.def("solve", &cc::solve, py::arg("instance"), py::arg("options") = cc::SolverOptions{},
        py::call_guard<py::gil_scoped_release>(),
        "Low-rank SDP relaxation by projected gradient descent with restarts.");
  m.def("edge_value", &cc::edge_value, py::arg("solution"), py::arg("edge"));
  m.def("sdp_cost", &cc::sdp_cost, py::arg("instance"), py::arg("solution"));
  m.def("embed_clustering",
        py::overload_cast<const cc::Clustering&, int>(&cc::embed_clustering),
        py::arg("clustering"), py::arg("rank"));
  m.def("embed_clustering",
        py::overload_cast<const cc::Instance&, const cc::Clustering&, int>(&cc::embed_clustering),
        py::arg("instance"), py::arg("clustering"), py::arg("rank"));
  m.def("objective_gradient", &cc::objective_gradient, py::arg("instance"), py::arg("embedding"));
  m.def("save_solution", &cc::save_solution, py::arg("solution"), py::arg("path"));
  m.def("load_solution", &cc::load_solution, py::arg("path"));

  // --- ptas ---

  py::class_<cc::PtasConfig>(m, "PtasConfig")
      .def(py::init<>())
      .def_readwrite("delta", &cc::PtasConfig::delta)
      .def_readwrite("paper_schedule", &cc::PtasConfig::paper_schedule)
      .def_readwrite("local_search_max_passes", &cc::PtasConfig::local_search_max_passes)
      .def_readwrite("solver", &cc::PtasConfig::solver);

  py::class_<cc::PtasReport>(m, "PtasReport")
      .def(py::init<>())
      .def_readwrite("delta", &cc::PtasReport::delta)
      .def_readwrite("sdp_objective", &cc::PtasReport::sdp_objective)
      .def_readwrite("pruned_cost", &cc::PtasReport::pruned_cost)
      .def_readwrite("residual_cost", &cc::PtasReport::residual_cost)
      .def_readwrite("total_cost", &cc::PtasReport::total_cost)
      .def_readwrite("converged", &cc::PtasReport::converged)
      .def_readwrite("unnormalized_additive_bound", &cc::PtasReport::unnormalized_additive_bound)
      .def_readwrite("has_truth", &cc::PtasReport::has_truth)
      .def_readwrite("planted_cost", &cc::PtasReport::planted_cost)
      .def_readwrite("pruned_consistent_count", &cc::PtasReport::pruned_consistent_count)
      .def_readwrite("pruned_inconsistent_count", &cc::PtasReport::pruned_inconsistent_count);

  py::class_<cc::PtasResult>(m, "PtasResult")
      .def(py::init<>())
      .def_readwrite("clustering", &cc::PtasResult::clustering)
      .def_readwrite("report", &cc::PtasResult::report)
      .def_readwrite("solution", &cc::PtasResult::solution);

  m.def("paper_delta", &cc::paper_delta, py::arg("instance"));
  m.def("prune_edges", &cc::prune_edges, py::arg("instance"), py::arg("solution"),
        py::arg("delta"),
        "Removes edges with value > 1 - delta; returns (residual, removed_indices).");
  m.def("local_search_solve",
        py::overload_cast<const cc::Instance&, const cc::Clustering&, int, std::uint64_t>(
            &cc::local_search_solve),
        py::arg("instance"), py::arg("init"), py::arg("max_passes"), py::arg("seed") = 0,
        py::call_guard<py::gil_scoped_release>());
  m.def("local_search_solve",
        py::overload_cast<const cc::Instance&, int, std::uint64_t>(&cc::local_search_solve),
        py::arg("instance"), py::arg("max_passes"), py::arg("seed") = 0,
        py::call_guard<py::gil_scoped_release>());
  m.def("run_ptas",
        [](const cc::Instance& instance, const cc::PtasConfig& config,
           std::optional<cc::GroundTruth> truth) {
          py::gil_scoped_release release;
          return cc::run_ptas(instance, config, truth ? &*truth : nullptr);
        },
        py::arg("instance"), py::arg("config") = cc::PtasConfig{},
        py::arg("truth") = std::nullopt,
        "SDP solve, prune, local search on the residual; returns a PtasResult.");

  // --- recovery ---

  py::class_<cc::RecoveryParams>(m, "RecoveryParams")
      .def(py::init<>())
      .def_readwrite("rho_core", &cc::RecoveryParams::rho_core)
      .def_readwrite("cleanup_enabled", &cc::RecoveryParams::cleanup_enabled)
      .def_readwrite("cleanup_min_size", &cc::RecoveryParams::cleanup_min_size)
      .def_readwrite("cleanup_merge_threshold", &cc::RecoveryParams::cleanup_merge_threshold);

  py::class_<cc::AuxGraph>(m, "AuxGraph")
      .def(py::init<>())
      .def_readwrite("n", &cc::AuxGraph::n)
      .def_readwrite("adj", &cc::AuxGraph::adj);

  m.def("build_aux_graph", &cc::build_aux_graph, py::arg("solution"), py::arg("rho_core"));
  m.def("greedy_cluster", &cc::greedy_cluster, py::arg("aux"));
  m.def("cleanup_merge", &cc::cleanup_merge, py::arg("clustering"), py::arg("solution"),
        py::arg("params"));
  m.def("recover", &cc::recover, py::arg("instance"),
        py::arg("options") = cc::SolverOptions{}, py::arg("params") = cc::RecoveryParams{},
        py::call_guard<py::gil_scoped_release>(),
        "SDP embedding, ball-graph greedy clustering, cleanup merge; returns "
        "(clustering, solution).");

  // --- metrics ---

  m.def("clustering_cost", &cc::clustering_cost, py::arg("instance"), py::arg("clustering"));

  py::class_<cc::MatchResult>(m, "MatchResult")
      .def(py::init<>())
      .def_readwrite("error", &cc::MatchResult::error)
      .def_readwrite("matched_overlap", &cc::MatchResult::matched_overlap)
      .def_readwrite("matching", &cc::MatchResult::matching);

  m.def("classification_error", &cc::classification_error, py::arg("planted"), py::arg("found"),
        "Fraction of vertices outside an optimal cluster matching.");

  py::class_<cc::AssumptionsReport>(m, "AssumptionsReport")
      .def(py::init<>())
      .def_readwrite("lambda_gap_per_cluster", &cc::AssumptionsReport::lambda_gap_per_cluster)
      .def_readwrite("lambda_gap", &cc::AssumptionsReport::lambda_gap)
      .def_readwrite("beta", &cc::AssumptionsReport::beta)
      .def_readwrite("beta_matrix", &cc::AssumptionsReport::beta_matrix)
      .def_readwrite("intercluster_density_threshold",
                     &cc::AssumptionsReport::intercluster_density_threshold)
      .def_readwrite("cluster_regularity_max_dev",
                     &cc::AssumptionsReport::cluster_regularity_max_dev)
      .def_readwrite("intercluster_regularity_max_dev",
                     &cc::AssumptionsReport::intercluster_regularity_max_dev)
      .def_readwrite("predicted_eta", &cc::AssumptionsReport::predicted_eta)
      .def_readwrite("epsilon", &cc::AssumptionsReport::epsilon);

  m.def("check_assumptions", &cc::check_assumptions, py::arg("instance"), py::arg("truth"));

  py::class_<cc::StructuralStats>(m, "StructuralStats")
      .def(py::init<>())
      .def_readwrite("delta", &cc::StructuralStats::delta)
      .def_readwrite("gamma", &cc::StructuralStats::gamma)
      .def_readwrite("sigma", &cc::StructuralStats::sigma)
      .def_readwrite("lambda_bound", &cc::StructuralStats::lambda_bound)
      .def_readwrite("sdp_objective", &cc::StructuralStats::sdp_objective)
      .def_readwrite("q_cost", &cc::StructuralStats::q_cost)
      .def_readwrite("q_surviving_cost", &cc::StructuralStats::q_surviving_cost)
      .def_readwrite("e_flip_cost", &cc::StructuralStats::e_flip_cost)
      .def_readwrite("q_minus_flip_cost", &cc::StructuralStats::q_minus_flip_cost)
      .def_readwrite("flip_minus_q_cost", &cc::StructuralStats::flip_minus_q_cost)
      .def_readwrite("sdp_hat_cost", &cc::StructuralStats::sdp_hat_cost)
      .def_readwrite("q_count", &cc::StructuralStats::q_count)
      .def_readwrite("e_flip_count", &cc::StructuralStats::e_flip_count)
      .def("__repr__", [](const cc::StructuralStats& st) {
        return "StructuralStats(delta=" + std::to_string(st.delta) +
               ", q_cost=" + std::to_string(st.q_cost) +
               ", e_flip_cost=" + std::to_string(st.e_flip_cost) + ")";
      });

  m.def("structural_stats", &cc::structural_stats, py::arg("instance"), py::arg("truth"),
        py::arg("solution"), py::arg("delta") = std::nullopt);

  py::class_<cc::ClusterCore>(m, "ClusterCore")
      .def(py::init<>())
      .def_readwrite("cluster", &cc::ClusterCore::cluster)
      .def_readwrite("center", &cc::ClusterCore::center)
      .def_readwrite("size", &cc::ClusterCore::size)
      .def_readwrite("core_size", &cc::ClusterCore::core_size)
      .def_readwrite("core_fraction", &cc::ClusterCore::core_fraction);

  py::class_<cc::CoreStructureReport>(m, "CoreStructureReport")
      .def(py::init<>())
      .def_readwrite("rho_core", &cc::CoreStructureReport::rho_core)
      .def_readwrite("rho_inter", &cc::CoreStructureReport::rho_inter)
      .def_readwrite("clusters", &cc::CoreStructureReport::clusters)
      .def_readwrite("center_distances", &cc::CoreStructureReport::center_distances)
      .def_readwrite("min_center_distance", &cc::CoreStructureReport::min_center_distance)
      .def_readwrite("min_core_fraction", &cc::CoreStructureReport::min_core_fraction);

  m.def("core_structure", &cc::core_structure, py::arg("solution"), py::arg("truth"),
        py::arg("rho_core") = 0.1, py::arg("rho_inter") = 0.8);

  py::class_<cc::WeightedEdge>(m, "WeightedEdge")
      .def(py::init([](int u, int v, double w) {
             return cc::WeightedEdge{u, v, w};
           }),
           py::arg("u"), py::arg("v"), py::arg("w") = 1.0)
      .def_readwrite("u", &cc::WeightedEdge::u)
      .def_readwrite("v", &cc::WeightedEdge::v)
      .def_readwrite("w", &cc::WeightedEdge::w);

  m.def("normalized_laplacian_gap", &cc::normalized_laplacian_gap, py::arg("n"),
        py::arg("edges"));

  // --- betting game ---

  py::class_<cc::GameMove>(m, "GameMove")
      .def(py::init([](int coordinate, double cost) {
             return cc::GameMove{coordinate, cost};
           }),
           py::arg("coordinate"), py::arg("cost") = 1.0)
      .def_readwrite("coordinate", &cc::GameMove::coordinate)
      .def_readwrite("cost", &cc::GameMove::cost);

  py::class_<cc::GameStrategy, PyGameStrategy>(m, "GameStrategy")
      .def(py::init<>())
      .def("reset", &cc::GameStrategy::reset, py::arg("m"))
      .def("next", &cc::GameStrategy::next)
      .def("observe", &cc::GameStrategy::observe, py::arg("win"));

  py::class_<cc::GameConfig>(m, "GameConfig")
      .def(py::init<>())
      .def_readwrite("m", &cc::GameConfig::m)
      .def_readwrite("epsilon", &cc::GameConfig::epsilon)
      .def_readwrite("strategy", &cc::GameConfig::strategy)
      .def_readwrite("stakes", &cc::GameConfig::stakes)
      .def_readwrite("trials", &cc::GameConfig::trials)
      .def_readwrite("lambda_", &cc::GameConfig::lambda);

  py::class_<cc::GameOutcome>(m, "GameOutcome")
      .def(py::init<>())
      .def_readwrite("payoffs", &cc::GameOutcome::payoffs)
      .def_readwrite("stake_masses", &cc::GameOutcome::stake_masses)
      .def_readwrite("events", &cc::GameOutcome::events)
      .def_readwrite("event_count", &cc::GameOutcome::event_count)
      .def_readwrite("empirical_prob", &cc::GameOutcome::empirical_prob)
      .def_readwrite("theoretical_bound", &cc::GameOutcome::theoretical_bound)
      .def_readwrite("std_err", &cc::GameOutcome::std_err);

  m.def("simulate_game",
        py::overload_cast<const cc::GameConfig&, std::uint64_t>(&cc::simulate_game),
        py::arg("config"), py::arg("seed"),
        "Monte Carlo estimate of the large-deviation event probability for a "
        "named strategy.");
  m.def("simulate_game",
        py::overload_cast<const cc::GameConfig&, cc::GameStrategy&, std::uint64_t>(
            &cc::simulate_game),
        py::arg("config"), py::arg("strategy"), py::arg("seed"),
        "Same, driving a caller-supplied (possibly Python) strategy.");
  m.def("make_strategy", &cc::make_strategy, py::arg("name"));
  m.def("strategy_names", &cc::strategy_names);

  // --- bench ---

  py::class_<cc::BenchRow>(m, "BenchRow")
      .def(py::init([](int n, double p) {
             return cc::BenchRow{n, p};
           }),
           py::arg("n"), py::arg("p"))
      .def_readwrite("n", &cc::BenchRow::n)
      .def_readwrite("p", &cc::BenchRow::p);

  py::class_<cc::BenchConfig>(m, "BenchConfig")
      .def(py::init<>())
      .def_readwrite("rows", &cc::BenchConfig::rows)
      .def_readwrite("epsilon", &cc::BenchConfig::epsilon)
      .def_readwrite("k", &cc::BenchConfig::k)
      .def_readwrite("runs", &cc::BenchConfig::runs)
      .def_readwrite("seed", &cc::BenchConfig::seed)
      .def_readwrite("threads", &cc::BenchConfig::threads)
      .def_readwrite("solver", &cc::BenchConfig::solver)
      .def_readwrite("recovery", &cc::BenchConfig::recovery);

  py::class_<cc::BenchRunResult>(m, "BenchRunResult")
      .def(py::init<>())
      .def_readwrite("n", &cc::BenchRunResult::n)
      .def_readwrite("p", &cc::BenchRunResult::p)
      .def_readwrite("epsilon", &cc::BenchRunResult::epsilon)
      .def_readwrite("seed", &cc::BenchRunResult::seed)
      .def_readwrite("misclassified", &cc::BenchRunResult::misclassified)
      .def_readwrite("error_pct", &cc::BenchRunResult::error_pct);

  py::class_<cc::BenchRowSummary>(m, "BenchRowSummary")
      .def(py::init<>())
      .def_readwrite("n", &cc::BenchRowSummary::n)
      .def_readwrite("p", &cc::BenchRowSummary::p)
      .def_readwrite("avg_misclassified", &cc::BenchRowSummary::avg_misclassified)
      .def_readwrite("avg_error_pct", &cc::BenchRowSummary::avg_error_pct);

  py::class_<cc::BenchResult>(m, "BenchResult")
      .def(py::init<>())
      .def_readwrite("runs", &cc::BenchResult::runs)
      .def_readwrite("summaries", &cc::BenchResult::summaries);

  m.def("bench_run_seed", &cc::bench_run_seed, py::arg("base_seed"), py::arg("n"),
        py::arg("run"));
  m.def("run_bench", &cc::run_bench, py::arg("config"),
        py::call_guard<py::gil_scoped_release>());
  m.def("bench_csv", &cc::bench_csv, py::arg("result"));
  m.def("bench_table", &cc::bench_table, py::arg("result"));
}
