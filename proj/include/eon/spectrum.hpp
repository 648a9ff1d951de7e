#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eon/topology.hpp"
#include "eon/traffic.hpp"

namespace eon {

inline constexpr double kSliceWidthGhz = 12.5;
inline constexpr double kWavelengthWidthGhz = 50.0;

// Slots are indexed 1..slot_count.
struct SpectrumGrid {
  int slot_count = 80;
  double slot_width_ghz = kSliceWidthGhz;

  static SpectrumGrid rsa(int slots = 80) { return {slots, kSliceWidthGhz}; }
  static SpectrumGrid rwa(int slots = 40) { return {slots, kWavelengthWidthGhz}; }

  friend bool operator==(const SpectrumGrid&, const SpectrumGrid&) = default;
};

// `width` contiguous slots beginning at `start`.
struct Channel {
  int start = 1;
  int width = 1;

  int end() const { return start + width - 1; }
  bool contains(int slot) const { return start <= slot && slot <= end(); }
  bool fits(const SpectrumGrid& g) const { return start >= 1 && end() <= g.slot_count; }

  friend bool operator==(const Channel&, const Channel&) = default;
};

// Per-link slot availability: bit i is 1 when slot i is free.
class AvailabilityVector {
 public:
  AvailabilityVector() = default;
  explicit AvailabilityVector(int slot_count, bool all_free = true);
  static AvailabilityVector from_bits(const std::vector<int>& bits);

  int size() const { return size_; }
  bool is_free(int slot) const;
  void set_free(int slot, bool free);
  // Marks every in-range slot of the channel occupied.
  void occupy(const Channel& c);

  AvailabilityVector& operator&=(const AvailabilityVector& other);
  friend AvailabilityVector operator&(AvailabilityVector a, const AvailabilityVector& b) {
    a &= b;
    return a;
  }

  // Highest occupied slot index, 0 when everything is free.
  int last_used() const;
  std::vector<int> bits() const;

  friend bool operator==(const AvailabilityVector&, const AvailabilityVector&) = default;

 private:
  int size_ = 0;
  std::vector<std::uint64_t> words_;
};

// Smallest start s with slots s..s+width-1 all free, if any.
std::optional<int> first_fit_channel(const AvailabilityVector& avail, int width);

struct Route {
  Path path;
  Channel channel;

  friend bool operator==(const Route&, const Route&) = default;
};

// Demand id -> (path, channel), with the per-link occupancy kept as the fold
// of all routes. Routes are stored as given; feasibility is the validator's
// job, so mutated or broken assignments stay representable.
class SpectrumAssignment {
 public:
  SpectrumAssignment(SpectrumGrid grid, int link_count);

  const SpectrumGrid& grid() const { return grid_; }
  int link_count() const { return static_cast<int>(occupancy_.size()); }
  const std::map<int, Route>& routes() const { return routes_; }
  const Route* route(int demand) const;

  void assign(int demand, Path path, Channel channel);
  void unassign(int demand);

  const AvailabilityVector& link_availability(LinkId id) const;

  friend bool operator==(const SpectrumAssignment& a, const SpectrumAssignment& b) {
    return a.grid_ == b.grid_ && a.routes_ == b.routes_ && a.occupancy_ == b.occupancy_;
  }

 private:
  void rebuild();

  SpectrumGrid grid_;
  std::map<int, Route> routes_;
  std::vector<AvailabilityVector> occupancy_;
};

// Elementwise AND of the link vectors along the path.
AvailabilityVector path_availability(const SpectrumAssignment& a, const Path& p);

// Highest occupied slot index over all links (0 if nothing is placed).
int fitness(const SpectrumAssignment& a);

// Number of distinct slot indices used on at least one link.
int used_slice_count(const SpectrumAssignment& a);

// Renumbers used slot indices to 1..used_slice_count, preserving their
// order. Contiguity and non-overlap survive, so fitness drops to the used
// count.
SpectrumAssignment compact_spectrum(const SpectrumAssignment& a);

enum class ViolationKind {
  kUnservedDemand,
  kUnknownDemand,
  kWrongWidth,
  kBrokenPath,
  kEndpointMismatch,
  kSliceCollision,
  kOutsideGrid,
};

std::string_view to_string(ViolationKind k);

struct Violation {
  ViolationKind kind;
  int demand = -1;
  LinkId link = -1;
  int slot = -1;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(ViolationKind k) const;
};

ValidationReport validate_assignment(const Topology& topo, const TrafficMatrix& tm,
                                     const SpectrumAssignment& a);

// {"grid": {"slot_count", "slot_width_ghz"},
//  "routes": [{"demand", "links", "start", "width"}]}
std::string save_assignment(const SpectrumAssignment& a);
SpectrumAssignment load_assignment(std::string_view text, const Topology& topo,
                                   const TrafficMatrix& tm);

}  // namespace eon
