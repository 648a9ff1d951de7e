#include "eon/topology.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include "eon/error.hpp"
#include "json.hpp"

#include "builtin_topologies.inc"

namespace eon {

using nlohmann::json;

Topology::Topology(std::string name, std::vector<std::string> nodes,
                   std::vector<Link> links)
    : name_(std::move(name)), nodes_(std::move(nodes)), links_(std::move(links)) {
  std::set<std::string> seen;
  for (const auto& n : nodes_) {
    if (n.empty()) throw ValidationError("topology: empty node name");
    if (!seen.insert(n).second)
      throw ValidationError("topology: duplicate node '" + n + "'");
  }
  const int n = node_count();
  out_.assign(n, {});
  in_.assign(n, {});
  std::set<std::pair<int, int>> pairs;
  for (std::size_t i = 0; i < links_.size(); ++i) {
    const Link& l = links_[i];
    if (l.id != static_cast<int>(i))
      throw ValidationError("topology: link ids must be dense and ordered");
    if (l.src < 0 || l.src >= n || l.dst < 0 || l.dst >= n)
      throw ValidationError("topology: link " + std::to_string(l.id) +
                            " has a dangling endpoint");
    if (l.src == l.dst)
      throw ValidationError("topology: link " + std::to_string(l.id) +
                            " is a self-loop");
    if (!(l.length_km >= 0.0))
      throw ValidationError("topology: negative length on link " +
                            std::to_string(l.id));
    if (!pairs.insert({l.src, l.dst}).second && !l.parallel)
      throw ValidationError("topology: duplicate link " + nodes_[l.src] +
                            "->" + nodes_[l.dst] + " not flagged parallel");
    out_[l.src].push_back(l.id);
    in_[l.dst].push_back(l.id);
  }
}

const Link& Topology::link(LinkId id) const {
  if (!has_link(id))
    throw ValidationError("topology: unknown link " + std::to_string(id));
  return links_[id];
}

const std::string& Topology::node_name(NodeIndex v) const {
  if (v < 0 || v >= node_count())
    throw ValidationError("topology: unknown node index " + std::to_string(v));
  return nodes_[v];
}

std::optional<NodeIndex> Topology::find_node(std::string_view name) const {
  auto it = std::find(nodes_.begin(), nodes_.end(), name);
  if (it == nodes_.end()) return std::nullopt;
  return static_cast<NodeIndex>(it - nodes_.begin());
}

NodeIndex Topology::node_index(std::string_view name) const {
  if (auto v = find_node(name)) return *v;
  throw ValidationError("topology: unknown node '" + std::string(name) + "'");
}

Topology load_topology(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("topology: ") + e.what());
  }
  try {
    std::string name = doc.value("name", std::string{});
    std::vector<std::string> nodes = doc.at("nodes").get<std::vector<std::string>>();
    std::map<std::string, int> index;
    for (std::size_t i = 0; i < nodes.size(); ++i) index[nodes[i]] = static_cast<int>(i);

    std::vector<Link> links;
    for (const auto& entry : doc.at("links")) {
      const auto a = entry.at("a").get<std::string>();
      const auto b = entry.at("b").get<std::string>();
      auto ia = index.find(a);
      auto ib = index.find(b);
      if (ia == index.end() || ib == index.end())
        throw ValidationError("topology: link references unknown node '" +
                              (ia == index.end() ? a : b) + "'");
      const double len = entry.value("length_km", 0.0);
      const bool directed = entry.value("directed", false);
      const bool parallel = entry.value("parallel", false);
      const int id = static_cast<int>(links.size());
      links.push_back({id, ia->second, ib->second, len, parallel});
      if (!directed) links.push_back({id + 1, ib->second, ia->second, len, parallel});
    }
    return Topology(std::move(name), std::move(nodes), std::move(links));
  } catch (const json::exception& e) {
    throw ParseError(std::string("topology: ") + e.what());
  }
}

std::string save_topology(const Topology& topo) {
  json doc;
  doc["name"] = topo.name();
  doc["nodes"] = topo.nodes();
  json links = json::array();
  for (const auto& l : topo.links()) {
    json entry = {{"a", topo.node_name(l.src)},
                  {"b", topo.node_name(l.dst)},
                  {"length_km", l.length_km},
                  {"directed", true}};
    if (l.parallel) entry["parallel"] = true;
    links.push_back(std::move(entry));
  }
  doc["links"] = std::move(links);
  return doc.dump(2) + "\n";
}

Topology builtin_topology(BuiltinTopology which) {
  switch (which) {
    case BuiltinTopology::kSixNode:
      return load_topology(kSixNodeJson);
    case BuiltinTopology::kCost239:
      return load_topology(kCost239Json);
  }
  throw UnknownNameError("unknown builtin topology");
}

Topology builtin_topology(std::string_view name) {
  if (name == "six_node") return builtin_topology(BuiltinTopology::kSixNode);
  if (name == "cost239") return builtin_topology(BuiltinTopology::kCost239);
  throw UnknownNameError("unknown builtin topology '" + std::string(name) + "'");
}

std::vector<std::string> builtin_topology_names() { return {"six_node", "cost239"}; }

Topology resolve_topology(const std::string& name_or_path) {
  for (const auto& n : builtin_topology_names())
    if (n == name_or_path) return builtin_topology(n);
  std::ifstream in(name_or_path);
  if (!in) throw Error("cannot open topology file '" + name_or_path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return load_topology(ss.str());
}

double path_length_km(const Topology& topo, const Path& p) {
  double total = 0.0;
  for (LinkId id : p.links) total += topo.link(id).length_km;
  return total;
}

bool path_less(const Topology& topo, const Path& a, const Path& b) {
  if (a.hops() != b.hops()) return a.hops() < b.hops();
  const double la = path_length_km(topo, a);
  const double lb = path_length_km(topo, b);
  if (la != lb) return la < lb;
  return a.links < b.links;
}

bool is_simple_path(const Topology& topo, const Path& p) {
  if (p.links.empty() || p.src == p.dst) return false;
  std::vector<char> visited(topo.node_count(), 0);
  NodeIndex at = p.src;
  if (at < 0 || at >= topo.node_count()) return false;
  visited[at] = 1;
  for (LinkId id : p.links) {
    if (!topo.has_link(id)) return false;
    const Link& l = topo.link(id);
    if (l.src != at || visited[l.dst]) return false;
    at = l.dst;
    visited[at] = 1;
  }
  return at == p.dst;
}

namespace {

std::vector<int> hop_distances_to(const Topology& topo, NodeIndex dst) {
  std::vector<int> dist(topo.node_count(), -1);
  std::deque<NodeIndex> queue{dst};
  dist[dst] = 0;
  while (!queue.empty()) {
    NodeIndex v = queue.front();
    queue.pop_front();
    for (LinkId id : topo.in_links(v)) {
      NodeIndex u = topo.link(id).src;
      if (dist[u] < 0) {
        dist[u] = dist[v] + 1;
        queue.push_back(u);
      }
    }
  }
  return dist;
}

void check_pair(const Topology& topo, NodeIndex src, NodeIndex dst) {
  if (src < 0 || src >= topo.node_count() || dst < 0 || dst >= topo.node_count())
    throw InvalidArgumentError("path query: node index out of range");
  if (src == dst) throw InvalidArgumentError("path query: src equals dst");
}

// Best spur path from `from` to `dst` under the canonical order, avoiding the
// blocked nodes and links. Label-setting works because the order is
// preserved under common suffix extension.
std::optional<Path> best_path(const Topology& topo, NodeIndex from, NodeIndex dst,
                              const std::vector<char>& node_blocked,
                              const std::vector<char>& link_blocked) {
  const int n = topo.node_count();
  std::vector<std::optional<Path>> label(n);
  std::vector<char> settled(n, 0);
  label[from] = Path{from, from, {}};
  for (;;) {
    int pick = -1;
    for (int v = 0; v < n; ++v) {
      if (settled[v] || !label[v]) continue;
      if (pick < 0 || path_less(topo, *label[v], *label[pick])) pick = v;
    }
    if (pick < 0) return std::nullopt;
    if (pick == dst) return label[pick];
    settled[pick] = 1;
    for (LinkId id : topo.out_links(pick)) {
      if (link_blocked[id]) continue;
      const Link& l = topo.link(id);
      if (node_blocked[l.dst] || settled[l.dst]) continue;
      Path cand = *label[pick];
      cand.dst = l.dst;
      cand.links.push_back(id);
      if (!label[l.dst] || path_less(topo, cand, *label[l.dst])) label[l.dst] = std::move(cand);
    }
  }
}

}  // namespace

std::optional<int> hop_distance(const Topology& topo, NodeIndex src, NodeIndex dst) {
  const auto dist = hop_distances_to(topo, dst);
  if (dist[src] < 0) return std::nullopt;
  return dist[src];
}

std::vector<Path> yen_k_shortest_paths(const Topology& topo, NodeIndex src,
                                       NodeIndex dst, int k) {
  check_pair(topo, src, dst);
  if (k < 1) throw InvalidArgumentError("yen: k must be positive");

  std::vector<char> no_nodes(topo.node_count(), 0);
  std::vector<char> no_links(topo.link_count(), 0);
  auto first = best_path(topo, src, dst, no_nodes, no_links);
  if (!first)
    throw NoPathError("no path from " + topo.node_name(src) + " to " +
                      topo.node_name(dst));
  first->src = src;

  std::vector<Path> accepted{*first};
  std::vector<Path> candidates;
  auto seen = [&](const Path& p) {
    return std::find(accepted.begin(), accepted.end(), p) != accepted.end() ||
           std::find(candidates.begin(), candidates.end(), p) != candidates.end();
  };

  while (static_cast<int>(accepted.size()) < k) {
    const Path& last = accepted.back();
    NodeIndex spur = src;
    std::vector<LinkId> root;
    for (std::size_t i = 0; i < last.links.size(); ++i) {
      std::vector<char> node_blocked(topo.node_count(), 0);
      std::vector<char> link_blocked(topo.link_count(), 0);
      for (const Path& p : accepted) {
        if (p.links.size() > i && std::equal(root.begin(), root.end(), p.links.begin()))
          link_blocked[p.links[i]] = 1;
      }
      NodeIndex walk = src;
      for (LinkId id : root) {
        node_blocked[walk] = 1;
        walk = topo.link(id).dst;
      }
      if (auto tail = best_path(topo, spur, dst, node_blocked, link_blocked)) {
        Path total{src, dst, root};
        total.links.insert(total.links.end(), tail->links.begin(), tail->links.end());
        if (!seen(total)) candidates.push_back(std::move(total));
      }
      root.push_back(last.links[i]);
      spur = topo.link(last.links[i]).dst;
    }
    if (candidates.empty()) break;
    auto best = std::min_element(candidates.begin(), candidates.end(),
                                 [&](const Path& a, const Path& b) {
                                   return path_less(topo, a, b);
                                 });
    accepted.push_back(std::move(*best));
    candidates.erase(best);
  }
  return accepted;
}

namespace {

// Collects every simple path of exactly `hops` links. `dist` holds hop
// distances to dst and prunes branches that cannot arrive in time.
void paths_of_length(const Topology& topo, NodeIndex at, NodeIndex dst, int hops,
                     const std::vector<int>& dist, std::vector<char>& visited,
                     std::vector<LinkId>& stack, std::vector<Path>& out,
                     std::size_t stop_after) {
  if (out.size() >= stop_after) return;
  if (at == dst) {
    if (static_cast<int>(stack.size()) == hops)
      out.push_back(Path{-1, dst, stack});
    return;
  }
  const int remaining = hops - static_cast<int>(stack.size());
  if (dist[at] < 0 || dist[at] > remaining) return;
  for (LinkId id : topo.out_links(at)) {
    const NodeIndex next = topo.link(id).dst;
    if (visited[next]) continue;
    visited[next] = 1;
    stack.push_back(id);
    paths_of_length(topo, next, dst, hops, dist, visited, stack, out, stop_after);
    stack.pop_back();
    visited[next] = 0;
  }
}

}  // namespace

PathSet enumerate_simple_paths(const Topology& topo, NodeIndex src, NodeIndex dst,
                               std::size_t cap) {
  check_pair(topo, src, dst);
  PathSet result;
  if (cap == 0) throw InvalidArgumentError("enumerate: cap must be positive");
  const auto dist = hop_distances_to(topo, dst);
  if (dist[src] < 0) return result;

  const int max_hops = topo.node_count() - 1;
  std::vector<char> visited(topo.node_count(), 0);
  std::vector<LinkId> stack;
  const auto unlimited = std::numeric_limits<std::size_t>::max();
  for (int h = dist[src]; h <= max_hops; ++h) {
    if (result.paths.size() >= cap) {
      // Only need to learn whether anything longer exists.
      std::vector<Path> probe;
      visited.assign(topo.node_count(), 0);
      visited[src] = 1;
      for (int g = h; g <= max_hops && probe.empty(); ++g)
        paths_of_length(topo, src, dst, g, dist, visited, stack, probe, 1);
      result.truncated = result.truncated || !probe.empty();
      break;
    }
    std::vector<Path> level;
    visited.assign(topo.node_count(), 0);
    visited[src] = 1;
    paths_of_length(topo, src, dst, h, dist, visited, stack, level, unlimited);
    for (auto& p : level) p.src = src;
    std::sort(level.begin(), level.end(),
              [&](const Path& a, const Path& b) { return path_less(topo, a, b); });
    for (auto& p : level) {
      if (result.paths.size() >= cap) {
        result.truncated = true;
        break;
      }
      result.paths.push_back(std::move(p));
    }
  }
  return result;
}

}  // namespace eon
