#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "eon/topology.hpp"

namespace eon {

// Gbps carried per 12.5 GHz slice with QPSK.
inline constexpr double kGbpsPerSlice = 25.0;

struct Demand {
  int id = 0;
  NodeIndex src = 0;
  NodeIndex dst = 0;
  int slices = 1;
  double rate_gbps = kGbpsPerSlice;

  friend bool operator==(const Demand&, const Demand&) = default;
};

struct TrafficMatrix {
  std::vector<Demand> demands;
  std::uint64_t seed = 0;
  std::string label;

  int size() const { return static_cast<int>(demands.size()); }
  int total_slices() const;
  int max_slices() const;

  friend bool operator==(const TrafficMatrix&, const TrafficMatrix&) = default;
};

// Each demand draws an ordered pair of distinct nodes, then its slice count,
// from one Rng(seed) stream:
//   pair  = uniform(|V| * (|V|-1)); src = pair / (|V|-1);
//           dst = pair % (|V|-1), shifted up by one when >= src
//   slices = uniform_int(slice_min, slice_max)
TrafficMatrix generate_traffic(const Topology& topo, int n_demands, int slice_min,
                               int slice_max, std::uint64_t seed);

int rate_to_slices(double rate_gbps);

// One wavelength per demand on the fixed grid, whatever the requested rate.
TrafficMatrix to_rwa_demands(const TrafficMatrix& tm);

// CSV with header "id,src,dst,slices,rate_gbps"; endpoints by node name.
TrafficMatrix load_traffic(std::string_view text, const Topology& topo);
std::string save_traffic(const TrafficMatrix& tm, const Topology& topo);

// Checks id density, endpoints and slice counts against the topology.
void validate_traffic(const TrafficMatrix& tm, const Topology& topo);

}  // namespace eon
