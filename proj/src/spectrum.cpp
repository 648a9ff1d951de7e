#include "eon/spectrum.hpp"

#include <algorithm>
#include <bit>

#include "eon/error.hpp"
#include "json.hpp"

namespace eon {

using nlohmann::json;

AvailabilityVector::AvailabilityVector(int slot_count, bool all_free)
    : size_(slot_count), words_((slot_count + 63) / 64, 0) {
  if (slot_count < 0) throw InvalidArgumentError("availability: negative size");
  if (all_free)
    for (int s = 1; s <= size_; ++s) set_free(s, true);
}

AvailabilityVector AvailabilityVector::from_bits(const std::vector<int>& bits) {
  AvailabilityVector v(static_cast<int>(bits.size()), false);
  for (std::size_t i = 0; i < bits.size(); ++i) v.set_free(static_cast<int>(i) + 1, bits[i] != 0);
  return v;
}

bool AvailabilityVector::is_free(int slot) const {
  if (slot < 1 || slot > size_) return false;
  const int i = slot - 1;
  return (words_[i / 64] >> (i % 64)) & 1U;
}

void AvailabilityVector::set_free(int slot, bool free) {
  if (slot < 1 || slot > size_) throw InvalidArgumentError("availability: slot out of range");
  const int i = slot - 1;
  const std::uint64_t mask = std::uint64_t{1} << (i % 64);
  if (free)
    words_[i / 64] |= mask;
  else
    words_[i / 64] &= ~mask;
}

void AvailabilityVector::occupy(const Channel& c) {
  const int lo = std::max(c.start, 1);
  const int hi = std::min(c.end(), size_);
  for (int s = lo; s <= hi; ++s) set_free(s, false);
}

AvailabilityVector& AvailabilityVector::operator&=(const AvailabilityVector& other) {
  if (other.size_ != size_) throw InvalidArgumentError("availability: size mismatch");
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= other.words_[w];
  return *this;
}

int AvailabilityVector::last_used() const {
  for (int s = size_; s >= 1; --s)
    if (!is_free(s)) return s;
  return 0;
}

std::vector<int> AvailabilityVector::bits() const {
  std::vector<int> out(size_);
  for (int s = 1; s <= size_; ++s) out[s - 1] = is_free(s) ? 1 : 0;
  return out;
}

std::optional<int> first_fit_channel(const AvailabilityVector& avail, int width) {
  if (width < 1) throw InvalidArgumentError("first fit: width must be positive");
  int run = 0;
  for (int s = 1; s <= avail.size(); ++s) {
    run = avail.is_free(s) ? run + 1 : 0;
    if (run == width) return s - width + 1;
  }
  return std::nullopt;
}

SpectrumAssignment::SpectrumAssignment(SpectrumGrid grid, int link_count)
    : grid_(grid), occupancy_(link_count, AvailabilityVector(grid.slot_count)) {
  if (grid.slot_count < 1) throw InvalidArgumentError("grid: slot_count must be >= 1");
}

const Route* SpectrumAssignment::route(int demand) const {
  auto it = routes_.find(demand);
  return it == routes_.end() ? nullptr : &it->second;
}

void SpectrumAssignment::assign(int demand, Path path, Channel channel) {
  for (LinkId id : path.links)
    if (id < 0 || id >= link_count())
      throw ValidationError("assignment: unknown link " + std::to_string(id));
  const bool replacing = routes_.count(demand) > 0;
  routes_[demand] = Route{std::move(path), channel};
  if (replacing) {
    rebuild();
  } else {
    for (LinkId id : routes_[demand].path.links) occupancy_[id].occupy(channel);
  }
}

void SpectrumAssignment::unassign(int demand) {
  if (routes_.erase(demand)) rebuild();
}

void SpectrumAssignment::rebuild() {
  for (auto& v : occupancy_) v = AvailabilityVector(grid_.slot_count);
  for (const auto& [d, r] : routes_)
    for (LinkId id : r.path.links) occupancy_[id].occupy(r.channel);
}

const AvailabilityVector& SpectrumAssignment::link_availability(LinkId id) const {
  if (id < 0 || id >= link_count())
    throw ValidationError("assignment: unknown link " + std::to_string(id));
  return occupancy_[id];
}

AvailabilityVector path_availability(const SpectrumAssignment& a, const Path& p) {
  AvailabilityVector out(a.grid().slot_count);
  for (LinkId id : p.links) out &= a.link_availability(id);
  return out;
}

int fitness(const SpectrumAssignment& a) {
  int best = 0;
  for (int e = 0; e < a.link_count(); ++e)
    best = std::max(best, a.link_availability(e).last_used());
  return best;
}

namespace {

std::vector<char> used_slots(const SpectrumAssignment& a) {
  std::vector<char> used(a.grid().slot_count + 1, 0);
  for (int e = 0; e < a.link_count(); ++e) {
    const auto& v = a.link_availability(e);
    for (int s = 1; s <= v.size(); ++s)
      if (!v.is_free(s)) used[s] = 1;
  }
  return used;
}

}  // namespace

int used_slice_count(const SpectrumAssignment& a) {
  const auto used = used_slots(a);
  return static_cast<int>(std::count(used.begin(), used.end(), 1));
}

SpectrumAssignment compact_spectrum(const SpectrumAssignment& a) {
  const auto used = used_slots(a);
  std::vector<int> remap(used.size(), 0);
  int next = 0;
  for (std::size_t s = 1; s < used.size(); ++s)
    if (used[s]) remap[s] = ++next;
  SpectrumAssignment out(a.grid(), a.link_count());
  for (const auto& [d, r] : a.routes()) {
    Channel c = r.channel;
    if (c.fits(a.grid()) && !r.path.links.empty()) c.start = remap[c.start];
    out.assign(d, r.path, c);
  }
  return out;
}

std::string_view to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::kUnservedDemand: return "unserved-demand";
    case ViolationKind::kUnknownDemand: return "unknown-demand";
    case ViolationKind::kWrongWidth: return "wrong-width";
    case ViolationKind::kBrokenPath: return "broken-path";
    case ViolationKind::kEndpointMismatch: return "endpoint-mismatch";
    case ViolationKind::kSliceCollision: return "slice-collision";
    case ViolationKind::kOutsideGrid: return "outside-grid";
  }
  return "unknown";
}

bool ValidationReport::has(ViolationKind k) const {
  return std::any_of(violations.begin(), violations.end(),
                     [k](const Violation& v) { return v.kind == k; });
}

ValidationReport validate_assignment(const Topology& topo, const TrafficMatrix& tm,
                                     const SpectrumAssignment& a) {
  ValidationReport report;
  auto add = [&](ViolationKind kind, int demand, LinkId link, int slot, std::string msg) {
    report.violations.push_back({kind, demand, link, slot, std::move(msg)});
  };
  const SpectrumGrid& grid = a.grid();
  const std::string dtag = "demand ";

  for (const auto& d : tm.demands)
    if (!a.route(d.id)) add(ViolationKind::kUnservedDemand, d.id, -1, -1, dtag + std::to_string(d.id) + " has no route");

  // owner[e][s] = first demand seen on slot s of link e.
  std::vector<std::vector<int>> owner(topo.link_count(), std::vector<int>(grid.slot_count + 1, -1));
  for (const auto& [id, r] : a.routes()) {
    const std::string who = dtag + std::to_string(id);
    const Demand* d = nullptr;
    for (const auto& cand : tm.demands)
      if (cand.id == id) d = &cand;
    if (!d) {
      add(ViolationKind::kUnknownDemand, id, -1, -1, who + " is not in the traffic matrix");
      continue;
    }
    if (r.channel.width != d->slices)
      add(ViolationKind::kWrongWidth, id, -1, -1,
          who + ": channel width " + std::to_string(r.channel.width) + " != requested " +
              std::to_string(d->slices));
    if (!r.channel.fits(grid) || r.channel.width < 1)
      add(ViolationKind::kOutsideGrid, id, -1, -1,
          who + ": channel [" + std::to_string(r.channel.start) + "," +
              std::to_string(r.channel.end()) + "] outside 1.." + std::to_string(grid.slot_count));

    const Path& p = r.path;
    if (p.src != d->src || p.dst != d->dst || p.links.empty() ||
        (topo.has_link(p.links.front()) && topo.link(p.links.front()).src != d->src) ||
        (topo.has_link(p.links.back()) && topo.link(p.links.back()).dst != d->dst))
      add(ViolationKind::kEndpointMismatch, id, -1, -1, who + ": path does not join its endpoints");
    bool links_known = true;
    for (LinkId e : p.links) links_known = links_known && topo.has_link(e);
    if (!links_known || !is_simple_path(topo, Path{d->src, d->dst, p.links}))
      add(ViolationKind::kBrokenPath, id, -1, -1, who + ": path is not a simple chained path");
    if (!links_known) continue;

    std::vector<LinkId> seen;
    for (LinkId e : p.links) {
      if (std::find(seen.begin(), seen.end(), e) != seen.end()) continue;
      seen.push_back(e);
      for (int s = std::max(1, r.channel.start); s <= std::min(r.channel.end(), grid.slot_count); ++s) {
        int& o = owner[e][s];
        if (o >= 0 && o != id)
          add(ViolationKind::kSliceCollision, id, e, s,
              who + " and demand " + std::to_string(o) + " share slot " + std::to_string(s) +
                  " on link " + std::to_string(e));
        else
          o = id;
      }
    }
  }
  return report;
}

std::string save_assignment(const SpectrumAssignment& a) {
  json doc;
  doc["grid"] = {{"slot_count", a.grid().slot_count}, {"slot_width_ghz", a.grid().slot_width_ghz}};
  json routes = json::array();
  for (const auto& [d, r] : a.routes())
    routes.push_back({{"demand", d}, {"links", r.path.links}, {"start", r.channel.start},
                      {"width", r.channel.width}});
  doc["routes"] = std::move(routes);
  return doc.dump(2) + "\n";
}

SpectrumAssignment load_assignment(std::string_view text, const Topology& topo,
                                   const TrafficMatrix& tm) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("assignment: ") + e.what());
  }
  try {
    SpectrumGrid grid{doc.at("grid").at("slot_count").get<int>(),
                      doc.at("grid").value("slot_width_ghz", kSliceWidthGhz)};
    SpectrumAssignment a(grid, topo.link_count());
    for (const auto& r : doc.at("routes")) {
      const int id = r.at("demand").get<int>();
      Path p;
      p.links = r.at("links").get<std::vector<LinkId>>();
      if (id >= 0 && id < tm.size()) {
        p.src = tm.demands[id].src;
        p.dst = tm.demands[id].dst;
      } else if (!p.links.empty() && topo.has_link(p.links.front()) && topo.has_link(p.links.back())) {
        p.src = topo.link(p.links.front()).src;
        p.dst = topo.link(p.links.back()).dst;
      }
      a.assign(id, std::move(p), Channel{r.at("start").get<int>(), r.at("width").get<int>()});
    }
    return a;
  } catch (const json::exception& e) {
    throw ParseError(std::string("assignment: ") + e.what());
  }
}

}  // namespace eon
