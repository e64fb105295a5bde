#ifndef BWR_GRAPH_H
#define BWR_GRAPH_H

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bwr {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;

struct DirectedEdge {
  EdgeId id = 0;
  NodeId tail = 0;
  NodeId head = 0;
  // Volume-units per time-unit, strictly positive.
  double capacity = 1.0;
  // False when the topology document left this direction's capacity unset.
  bool declared = true;
};

// Simple directed graph over dense node ids [0, node_count). Edge ids are
// dense too and follow insertion order. Out-edge lists are kept sorted by
// head node so traversals visit neighbors in ascending id order.
class NetworkGraph {
 public:
  NetworkGraph() = default;
  explicit NetworkGraph(std::size_t node_count);
  explicit NetworkGraph(std::vector<std::string> node_names);

  // Throws TopologyError on self-loops, unknown nodes, duplicate ordered
  // pairs and non-positive or non-finite capacities.
  EdgeId add_edge(NodeId tail, NodeId head, double capacity,
                  bool declared = true);
  // Adds tail->head and head->tail; returns the id of tail->head.
  EdgeId add_link(NodeId a, NodeId b, double cap_ab, double cap_ba);

  void set_capacity(EdgeId edge, double capacity);

  std::size_t node_count() const { return names_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  bool has_node(NodeId node) const { return node < names_.size(); }
  bool has_edge(EdgeId edge) const { return edge < edges_.size(); }

  const DirectedEdge& edge(EdgeId edge) const;
  std::span<const DirectedEdge> edges() const { return edges_; }
  std::span<const EdgeId> out_edges(NodeId node) const;
  std::optional<EdgeId> find_edge(NodeId tail, NodeId head) const;

  const std::string& name(NodeId node) const;
  std::optional<NodeId> find_node(std::string_view name) const;

 private:
  std::vector<std::string> names_;
  std::vector<DirectedEdge> edges_;
  std::vector<std::vector<EdgeId>> out_;
};

// A non-empty, contiguous, cycle-free edge sequence. Instances are only
// produced through the validating factories, so every Path in circulation
// satisfies those invariants for the graph it was built against.
class Path {
 public:
  static Path from_edges(const NetworkGraph& graph, std::vector<EdgeId> edges);
  static Path from_nodes(const NetworkGraph& graph,
                         std::span<const NodeId> nodes);

  std::span<const EdgeId> edges() const { return edges_; }
  std::span<const NodeId> nodes() const { return nodes_; }
  std::size_t hop_count() const { return edges_.size(); }
  NodeId source() const { return nodes_.front(); }
  NodeId destination() const { return nodes_.back(); }
  bool contains(EdgeId edge) const;

  // Checks this path against a graph (edge ids exist and match the stored
  // node sequence). Used when a path crosses graph boundaries.
  bool valid_in(const NetworkGraph& graph) const;

  std::string to_string(const NetworkGraph& graph) const;

  friend bool operator==(const Path& a, const Path& b) {
    return a.edges_ == b.edges_;
  }

 private:
  Path(std::vector<EdgeId> edges, std::vector<NodeId> nodes)
      : edges_(std::move(edges)), nodes_(std::move(nodes)) {}

  std::vector<EdgeId> edges_;
  std::vector<NodeId> nodes_;
};

// Deterministic tie-break order shared by every router: fewer hops first,
// then lexicographic node sequence.
bool shorter_then_lexicographic(const Path& a, const Path& b);

// Breadth-first hop distance. Throws NoPathError when t is unreachable.
std::size_t min_hop_count(const NetworkGraph& graph, NodeId s, NodeId t);

// All simple s->t paths with at most max_hops edges, in lexicographic order of
// their node sequences.
std::vector<Path> enumerate_paths(const NetworkGraph& graph, NodeId s,
                                  NodeId t, std::size_t max_hops);

}  // namespace bwr

#endif  // BWR_GRAPH_H
