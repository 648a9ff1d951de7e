#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "eon/spectrum.hpp"
#include "eon/topology.hpp"
#include "eon/traffic.hpp"

namespace eon {

struct MsfConfig {
  int k_paths = 3;
  SpectrumGrid grid = SpectrumGrid::rsa();
};

struct GaConfig {
  int k_paths = 10;
  int population = 50;
  int generations = 200;
  int tournament_size = 3;
  double crossover_rate = 0.9;
  double mutation_rate = 0.1;
  int elitism = 2;
  std::uint64_t seed = 1;
  SpectrumGrid grid = SpectrumGrid::rwa();
  // Evaluation workers. Results do not depend on it.
  int threads = 1;

  void validate() const;
};

// Demand ids in service order.
using Ordering = std::vector<int>;

// Candidate paths per demand id, best first.
using CandidatePaths = std::vector<std::vector<Path>>;

CandidatePaths k_shortest_candidates(const Topology& topo, const TrafficMatrix& tm, int k);

// Serves demands in `order`; each takes the (path, start) with the lowest
// first-fit start over its candidates, ties going to the better-ranked path.
SpectrumAssignment first_fit_serve(const Topology& topo, const TrafficMatrix& tm,
                                   const Ordering& order, const CandidatePaths& candidates,
                                   const SpectrumGrid& grid);

// Most Slices First: largest n_d first, ascending id among equals.
Ordering msf_order(const TrafficMatrix& tm);
SpectrumAssignment msf_solve(const Topology& topo, const TrafficMatrix& tm,
                             const MsfConfig& cfg = {});

SpectrumAssignment first_fit_rwa(const Topology& topo, const TrafficMatrix& tm,
                                 const Ordering& order, int k_paths, const SpectrumGrid& grid);

struct GaResult {
  SpectrumAssignment assignment;
  Ordering best_order;
  int best_fitness = 0;
  // Best fitness found up to and including generation g (index 0 is the
  // initial population).
  std::vector<int> log;
};

GaResult ga_rwa_solve(const Topology& topo, const TrafficMatrix& tm, const GaConfig& cfg);

std::string ga_log_csv(const std::vector<int>& log);

// Order crossover (OX1): keeps a[lo..hi] in place and fills the remaining
// positions, starting after hi and wrapping, with b's genes in b's order.
Ordering order_crossover(const Ordering& a, const Ordering& b, std::size_t lo, std::size_t hi);

}  // namespace eon
