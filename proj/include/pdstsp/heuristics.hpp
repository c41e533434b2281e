#ifndef PDSTSP_HEURISTICS_HPP
#define PDSTSP_HEURISTICS_HPP

#include "pdstsp/core.hpp"
#include "pdstsp/report.hpp"
#include "pdstsp/split.hpp"
#include "pdstsp/tsp.hpp"

#include <cstdint>
#include <optional>

namespace pdstsp {

/// Node budget of one offload solve when a run must replay exactly.
inline constexpr std::uint64_t kDeterministicOffloadNodes = 2'000'000;

struct HeuristicResult {
  Solution solution;
  double alpha = 0.0;
  RunReport report;
  /// Wall-clock time, always measured (the report may omit it).
  double seconds = 0.0;
};

struct FastOptions {
  /// Cap on offload solves; also switches the run to deterministic mode
  /// (node-limited solves, no elapsed time in the report).
  std::optional<std::uint64_t> max_evaluations;
  std::optional<double> time_limit_s;
  /// Evaluate only neighbours whose plain tour is shorter than the current
  /// reference sequence.
  bool tour_improving_only = false;
  /// Per-solve limits; the node limit defaults to kDeterministicOffloadNodes
  /// in deterministic mode.
  SolveLimits offload;
  const TourOptimizer* optimizer = nullptr;  // default engine when null
};

/// Giant tour over all customers, then one order-only offload solve.
HeuristicResult fast(const Instance& instance, const FastOptions& options = {});

/// Fast followed by first-improvement descent over 2-opt neighbours of the
/// reference sequence, each neighbour scored by an offload solve. Scanning
/// continues in place after an improvement and stops once a whole cycle of
/// moves brings nothing.
HeuristicResult fast2(const Instance& instance, const FastOptions& options = {});

/// As fast2 over three_opt_moves.
HeuristicResult fast3(const Instance& instance, const FastOptions& options = {});

struct RRLSParams {
  double time_limit_s = 60.0;
  double beta_s = 10.0;
  int delta = 20;
  double gamma_pct = 80.0;
  int large_threshold = 20;
  std::uint64_t seed = 0;
  /// Outer iterations; replaces the wall clock and makes the run replayable.
  std::optional<std::uint64_t> deterministic_budget;
  const TourOptimizer* optimizer = nullptr;
};

/// Random restart local search. Sequences are re-optimised with the tour
/// engine and scored by offload solves; restarts draw random customer sets
/// (small instances) or perturbed-matrix tours (large instances).
HeuristicResult rrls(const Instance& instance, const RRLSParams& params);

}  // namespace pdstsp

#endif  // PDSTSP_HEURISTICS_HPP
