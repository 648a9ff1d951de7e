#pragma once

#include <functional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "eon/spectrum.hpp"
#include "eon/topology.hpp"
#include "eon/traffic.hpp"

namespace fixtures {

// A, B, C with undirected A-B (100), B-C (100), A-C (150).
inline eon::Topology triangle() {
  return eon::load_topology(R"({"name": "triangle", "nodes": ["A", "B", "C"],
    "links": [{"a": "A", "b": "B", "length_km": 100},
              {"a": "B", "b": "C", "length_km": 100},
              {"a": "A", "b": "C", "length_km": 150}]})");
}

// A - B - C - D, undirected.
inline eon::Topology chain(int n = 4) {
  std::string nodes, links;
  for (int i = 0; i < n; ++i) {
    nodes += (i ? ", \"" : "\"") + std::string(1, char('A' + i)) + "\"";
    if (i + 1 < n)
      links += std::string(i ? ", " : "") + "{\"a\": \"" + char('A' + i) + "\", \"b\": \"" +
               char('A' + i + 1) + "\", \"length_km\": 50}";
  }
  return eon::load_topology("{\"name\": \"chain\", \"nodes\": [" + nodes + "], \"links\": [" + links + "]}");
}

inline eon::TrafficMatrix demands(std::vector<std::tuple<int, int, int>> v) {
  eon::TrafficMatrix tm;
  int id = 0;
  for (auto [s, d, n] : v) tm.demands.push_back({id++, s, d, n, 25.0 * n});
  return tm;
}

// Plain recursive DFS over simple paths; returns node sequences.
inline std::vector<std::vector<int>> dfs_paths(const eon::Topology& t, int src, int dst) {
  std::vector<std::vector<int>> out;
  std::vector<int> stack{src};
  std::vector<char> seen(t.node_count(), 0);
  seen[src] = 1;
  std::function<void(int)> go = [&](int v) {
    if (v == dst) {
      out.push_back(stack);
      return;
    }
    for (const auto& l : t.links()) {
      if (l.src != v || seen[l.dst]) continue;
      seen[l.dst] = 1;
      stack.push_back(l.dst);
      go(l.dst);
      stack.pop_back();
      seen[l.dst] = 0;
    }
  };
  go(src);
  return out;
}

// Direct re-evaluation of the feasibility conditions, written against the
// raw routes rather than the validator's data structures.
inline bool feasible(const eon::Topology& t, const eon::TrafficMatrix& tm, const eon::SpectrumAssignment& a) {
  const auto& routes = a.routes();
  if (routes.size() != tm.demands.size()) return false;
  std::set<std::pair<int, int>> used;  // (link, slot)
  for (const auto& d : tm.demands) {
    auto it = routes.find(d.id);
    if (it == routes.end()) return false;
    const auto& [path, ch] = it->second;
    if (ch.width != d.slices || ch.start < 1 || ch.end() > a.grid().slot_count) return false;
    if (path.links.empty() || path.src != d.src || path.dst != d.dst) return false;
    int at = d.src;
    std::set<int> visited{at};
    for (int id : path.links) {
      if (id < 0 || id >= t.link_count()) return false;
      const auto& l = t.link(id);
      if (l.src != at) return false;
      at = l.dst;
      if (!visited.insert(at).second) return false;
      for (int s = ch.start; s <= ch.end(); ++s)
        if (!used.insert({id, s}).second) return false;
    }
    if (at != d.dst) return false;
  }
  return true;
}

}  // namespace fixtures
