#pragma once

#include <json.hpp>

#include "corrclust/bench.hpp"
#include "corrclust/game.hpp"
#include "corrclust/metrics.hpp"
#include "corrclust/ptas.hpp"
#include "corrclust/sdp.hpp"

namespace cc {

nlohmann::json to_json(const PtasReport& report);
nlohmann::json to_json(const MatchResult& result);
nlohmann::json to_json(const AssumptionsReport& report);
nlohmann::json to_json(const StructuralStats& stats);
nlohmann::json to_json(const CoreStructureReport& report);
nlohmann::json to_json(const BenchResult& result);

/// Solve summary: objective, rank and the solver trace.
nlohmann::json to_json(const SdpSolution& solution);

/// The CLI-facing game summary; the config supplies m, epsilon and lambda.
nlohmann::json game_json(const GameConfig& config, const GameOutcome& outcome);

}  // namespace cc
