#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace eon {

using NodeIndex = int;
using LinkId = int;

// A directed fiber link. Slot availability is tracked per link, so an
// undirected fiber in an input file becomes two of these.
struct Link {
  LinkId id = 0;
  NodeIndex src = 0;
  NodeIndex dst = 0;
  double length_km = 0.0;
  bool parallel = false;

  friend bool operator==(const Link&, const Link&) = default;
};

// A simple directed path, stored as the ordered list of link ids it traverses.
struct Path {
  NodeIndex src = 0;
  NodeIndex dst = 0;
  std::vector<LinkId> links;

  std::size_t hops() const { return links.size(); }
  friend bool operator==(const Path&, const Path&) = default;
};

// Immutable directed multigraph. Construction validates every invariant, so
// holding a Topology means holding a well-formed one.
class Topology {
 public:
  Topology(std::string name, std::vector<std::string> nodes,
           std::vector<Link> links);

  const std::string& name() const { return name_; }
  int node_count() const { return static_cast<int>(nodes_.size()); }
  int link_count() const { return static_cast<int>(links_.size()); }
  const std::vector<std::string>& nodes() const { return nodes_; }
  const std::vector<Link>& links() const { return links_; }
  const Link& link(LinkId id) const;
  bool has_link(LinkId id) const {
    return id >= 0 && id < link_count();
  }

  const std::string& node_name(NodeIndex v) const;
  std::optional<NodeIndex> find_node(std::string_view name) const;
  NodeIndex node_index(std::string_view name) const;  // throws

  const std::vector<LinkId>& out_links(NodeIndex v) const { return out_[v]; }
  const std::vector<LinkId>& in_links(NodeIndex v) const { return in_[v]; }
  int out_degree(NodeIndex v) const { return static_cast<int>(out_[v].size()); }
  int in_degree(NodeIndex v) const { return static_cast<int>(in_[v].size()); }

  friend bool operator==(const Topology& a, const Topology& b) {
    return a.name_ == b.name_ && a.nodes_ == b.nodes_ && a.links_ == b.links_;
  }

 private:
  std::string name_;
  std::vector<std::string> nodes_;
  std::vector<Link> links_;
  std::vector<std::vector<LinkId>> out_;
  std::vector<std::vector<LinkId>> in_;
};

enum class BuiltinTopology { kSixNode, kCost239 };

// JSON topology document: {"name", "nodes": [...], "links": [{"a", "b",
// "length_km", "directed", "parallel"}]}. Undirected entries expand to the
// pair a->b, b->a with consecutive link ids.
Topology load_topology(std::string_view text);
std::string save_topology(const Topology& topo);

Topology builtin_topology(BuiltinTopology which);
Topology builtin_topology(std::string_view name);
std::vector<std::string> builtin_topology_names();

// Loads a builtin by name, otherwise treats the argument as a file path.
Topology resolve_topology(const std::string& name_or_path);

// Canonical path order: hop count, then total length, then the link-id
// sequence compared lexicographically. Every solver ranks candidates by it.
bool path_less(const Topology& topo, const Path& a, const Path& b);
double path_length_km(const Topology& topo, const Path& p);

// True when the links chain from p.src to p.dst without revisiting a node.
bool is_simple_path(const Topology& topo, const Path& p);

// Hop distance from src to dst, or nullopt when unreachable.
std::optional<int> hop_distance(const Topology& topo, NodeIndex src,
                                NodeIndex dst);

// Yen's algorithm under the canonical path order. Returns at most k paths;
// the result is always a prefix of enumerate_simple_paths for the same pair.
std::vector<Path> yen_k_shortest_paths(const Topology& topo, NodeIndex src,
                                       NodeIndex dst, int k);

struct PathSet {
  std::vector<Path> paths;
  bool truncated = false;
};

// All simple src->dst paths in canonical order, cut at `cap`.
PathSet enumerate_simple_paths(const Topology& topo, NodeIndex src,
                               NodeIndex dst, std::size_t cap);

}  // namespace eon
