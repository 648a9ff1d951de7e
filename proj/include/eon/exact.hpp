#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "eon/spectrum.hpp"
#include "eon/topology.hpp"
#include "eon/traffic.hpp"

namespace eon {

enum class SolveStatus {
  kOptimal,        // objective proven equal to lower_bound
  kFeasibleBound,  // incumbent found, optimality not proven
  kInfeasible,     // proven: no assignment fits the grid
  kTimedOut,       // limits hit (or path space truncated) before any incumbent
};

std::string_view to_string(SolveStatus s);

struct SolverLimits {
  double time_limit_s = 60.0;
  std::int64_t node_limit = 50'000'000;
  std::size_t path_cap = 10'000;
};

struct SolveStats {
  std::int64_t nodes = 0;
  double wall_time_s = 0.0;
  std::size_t path_space = 0;
  bool truncated = false;
  bool limit_hit = false;
};

struct SolveOutcome {
  SolveStatus status = SolveStatus::kTimedOut;
  std::optional<int> objective;
  int lower_bound = 0;
  std::optional<SpectrumAssignment> solution;
  SolveStats stats;
};

// Minimum number of network-wide used slots (sum of delta_s) over all
// routings on simple paths with contiguous, continuous, non-overlapping
// channels.
//
// Depth-first branch and bound. Demands are branched in MSF order, each over
// (start, path) pairs with ascending start and then canonical path rank. The
// incumbent starts from msf_solve. Any assignment can be compacted so that
// its highest used slot equals its used-slot count, so improving on an
// incumbent of value U only requires searching channels ending at or below
// U-1. Pruning uses per-demand forward checks, residual link and node
// capacity, spectrum mirror symmetry at the root and a fixed order among
// identical demands.
//
// `warm_start`, when given, must be a valid assignment for tm on grid; the
// better of it and MSF seeds the incumbent.
SolveOutcome solve_rsa_exact(const Topology& topo, const TrafficMatrix& tm,
                             const SpectrumGrid& grid, const SolverLimits& limits = {},
                             const SpectrumAssignment* warm_start = nullptr);

// Same engine with every demand at width 1 on the 50 GHz grid.
SolveOutcome solve_rwa_exact(const Topology& topo, const TrafficMatrix& tm,
                             const SolverLimits& limits = {},
                             const SpectrumGrid& grid = SpectrumGrid::rwa(),
                             const SpectrumAssignment* warm_start = nullptr);

// Exhaustive enumeration of every (path, channel) combination. Returns the
// minimum used-slot count, or nullopt when nothing fits. Throws TooLargeError
// when the product of per-demand choice counts exceeds `cap`.
inline constexpr double kOracleDefaultCap = 1e10;
std::optional<int> brute_force_oracle(const Topology& topo, const TrafficMatrix& tm,
                                      const SpectrumGrid& grid,
                                      double cap = kOracleDefaultCap);

// max(max_d n_d, max_v ceil(out-load(v) / outdeg(v)), ceil(in-load(v) / indeg(v))).
int lower_bound(const Topology& topo, const TrafficMatrix& tm);

// ceil(sum_d n_d * minhops(d) / |E|): every used slot index is available at
// most once per link. Throws NoPathError when a demand is disconnected.
int load_bound(const Topology& topo, const TrafficMatrix& tm);

// max over node subsets X (all subsets up to 20 nodes, singletons beyond) of
// ceil(load leaving X / links leaving X) and the same for entering load.
// Each cut link offers at most one copy of every used slot index.
int cut_bound(const Topology& topo, const TrafficMatrix& tm);

// The arc-channel MILP in CPLEX LP format.
std::string emit_lp(const Topology& topo, const TrafficMatrix& tm, const SpectrumGrid& grid);

std::string save_outcome(const SolveOutcome& outcome);

}  // namespace eon
