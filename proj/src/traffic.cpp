#include "eon/traffic.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "eon/error.hpp"
#include "eon/rng.hpp"

namespace eon {

int TrafficMatrix::total_slices() const {
  int total = 0;
  for (const auto& d : demands) total += d.slices;
  return total;
}

int TrafficMatrix::max_slices() const {
  int best = 0;
  for (const auto& d : demands) best = std::max(best, d.slices);
  return best;
}

TrafficMatrix generate_traffic(const Topology& topo, int n_demands, int slice_min,
                               int slice_max, std::uint64_t seed) {
  if (n_demands < 1) throw InvalidArgumentError("traffic: need at least one demand");
  if (slice_min < 1 || slice_min > slice_max)
    throw InvalidArgumentError("traffic: invalid slice range " + std::to_string(slice_min) +
                               ":" + std::to_string(slice_max));
  const auto n = static_cast<std::uint64_t>(topo.node_count());
  if (n < 2) throw InvalidArgumentError("traffic: topology needs at least two nodes");

  Rng rng(seed);
  TrafficMatrix tm;
  tm.seed = seed;
  tm.label = topo.name() + "-s" + std::to_string(seed);
  tm.demands.reserve(n_demands);
  for (int i = 0; i < n_demands; ++i) {
    const std::uint64_t pair = rng.uniform(n * (n - 1));
    const auto src = static_cast<NodeIndex>(pair / (n - 1));
    auto dst = static_cast<NodeIndex>(pair % (n - 1));
    if (dst >= src) ++dst;
    const int slices = static_cast<int>(rng.uniform_int(slice_min, slice_max));
    tm.demands.push_back({i, src, dst, slices, kGbpsPerSlice * slices});
  }
  return tm;
}

int rate_to_slices(double rate_gbps) {
  const double units = rate_gbps / kGbpsPerSlice;
  const double rounded = std::round(units);
  if (!(rate_gbps > 0.0) || std::abs(rate_gbps - rounded * kGbpsPerSlice) > 1e-9)
    throw InvalidArgumentError("rate " + std::to_string(rate_gbps) +
                               " Gbps is not a positive multiple of 25");
  return static_cast<int>(rounded);
}

TrafficMatrix to_rwa_demands(const TrafficMatrix& tm) {
  TrafficMatrix out = tm;
  for (auto& d : out.demands) d.slices = 1;
  return out;
}

void validate_traffic(const TrafficMatrix& tm, const Topology& topo) {
  for (std::size_t i = 0; i < tm.demands.size(); ++i) {
    const Demand& d = tm.demands[i];
    const std::string where = "traffic: demand " + std::to_string(d.id);
    if (d.id != static_cast<int>(i)) throw ValidationError(where + ": ids must be dense 0..|D|-1");
    if (d.src < 0 || d.src >= topo.node_count() || d.dst < 0 || d.dst >= topo.node_count())
      throw ValidationError(where + ": unknown endpoint");
    if (d.src == d.dst) throw ValidationError(where + ": src equals dst");
    if (d.slices < 1) throw ValidationError(where + ": slices must be >= 1");
    if (!(d.rate_gbps > 0.0)) throw ValidationError(where + ": rate must be positive");
  }
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  for (auto& f : fields) {
    const auto b = f.find_first_not_of(" \t");
    const auto e = f.find_last_not_of(" \t");
    f = b == std::string::npos ? std::string{} : f.substr(b, e - b + 1);
  }
  return fields;
}

template <typename T>
T parse_number(const std::string& s, const std::string& what) {
  T value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw ParseError("traffic: bad " + what + " '" + s + "'");
  return value;
}

std::string format_rate(double r) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, r);
  return std::string(buf, ptr);
}

}  // namespace

TrafficMatrix load_traffic(std::string_view text, const Topology& topo) {
  std::istringstream in{std::string(text)};
  std::string line;
  TrafficMatrix tm;
  bool header_seen = false;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto fields = split_csv(line);
    if (!header_seen && fields.size() == 5 && fields[0] == "id") {
      header_seen = true;
      continue;
    }
    header_seen = true;
    if (fields.size() != 5)
      throw ParseError("traffic: line " + std::to_string(line_no) + " needs 5 fields");
    Demand d;
    d.id = parse_number<int>(fields[0], "id");
    auto src = topo.find_node(fields[1]);
    auto dst = topo.find_node(fields[2]);
    if (!src || !dst)
      throw ValidationError("traffic: unknown node '" + (src ? fields[2] : fields[1]) + "'");
    d.src = *src;
    d.dst = *dst;
    d.slices = parse_number<int>(fields[3], "slices");
    d.rate_gbps = parse_number<double>(fields[4], "rate_gbps");
    tm.demands.push_back(d);
  }
  validate_traffic(tm, topo);
  return tm;
}

std::string save_traffic(const TrafficMatrix& tm, const Topology& topo) {
  std::string out = "id,src,dst,slices,rate_gbps\n";
  for (const auto& d : tm.demands) {
    out += std::to_string(d.id) + ',' + topo.node_name(d.src) + ',' + topo.node_name(d.dst) +
           ',' + std::to_string(d.slices) + ',' + format_rate(d.rate_gbps) + '\n';
  }
  return out;
}

}  // namespace eon
