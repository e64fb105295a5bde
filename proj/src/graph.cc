#include "bwr/graph.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>

#include "bwr/error.h"

namespace bwr {

NetworkGraph::NetworkGraph(std::size_t node_count) : out_(node_count) {
  names_.reserve(node_count);
  for (std::size_t i = 0; i < node_count; ++i) {
    names_.push_back(std::to_string(i));
  }
}

NetworkGraph::NetworkGraph(std::vector<std::string> node_names)
    : names_(std::move(node_names)), out_(names_.size()) {}

EdgeId NetworkGraph::add_edge(NodeId tail, NodeId head, double capacity,
                              bool declared) {
  if (!has_node(tail) || !has_node(head)) {
    throw TopologyError("unknown node in edge " + std::to_string(tail) +
                        "->" + std::to_string(head));
  }
  if (tail == head) {
    throw TopologyError("self-loop at node " + names_[tail]);
  }
  if (!(capacity > 0.0) || !std::isfinite(capacity)) {
    throw TopologyError("non-positive capacity on edge " + names_[tail] +
                        "->" + names_[head]);
  }
  if (find_edge(tail, head)) {
    throw TopologyError("duplicate edge " + names_[tail] + "->" +
                        names_[head]);
  }
  const auto id = static_cast<EdgeId>(edges_.size());
  edges_.push_back({id, tail, head, capacity, declared});
  auto& out = out_[tail];
  auto pos = std::lower_bound(out.begin(), out.end(), head,
                              [this](EdgeId e, NodeId h) {
                                return edges_[e].head < h;
                              });
  out.insert(pos, id);
  return id;
}

EdgeId NetworkGraph::add_link(NodeId a, NodeId b, double cap_ab,
                              double cap_ba) {
  EdgeId forward = add_edge(a, b, cap_ab);
  add_edge(b, a, cap_ba);
  return forward;
}

void NetworkGraph::set_capacity(EdgeId edge, double capacity) {
  if (!has_edge(edge)) {
    throw TopologyError("unknown edge id " + std::to_string(edge));
  }
  if (!(capacity > 0.0) || !std::isfinite(capacity)) {
    throw TopologyError("non-positive capacity for edge " +
                        std::to_string(edge));
  }
  edges_[edge].capacity = capacity;
}

const DirectedEdge& NetworkGraph::edge(EdgeId edge) const {
  if (!has_edge(edge)) {
    throw TopologyError("unknown edge id " + std::to_string(edge));
  }
  return edges_[edge];
}

std::span<const EdgeId> NetworkGraph::out_edges(NodeId node) const {
  if (!has_node(node)) {
    throw TopologyError("unknown node id " + std::to_string(node));
  }
  return out_[node];
}

std::optional<EdgeId> NetworkGraph::find_edge(NodeId tail, NodeId head) const {
  if (!has_node(tail)) return std::nullopt;
  for (EdgeId e : out_[tail]) {
    if (edges_[e].head == head) return e;
  }
  return std::nullopt;
}

const std::string& NetworkGraph::name(NodeId node) const {
  if (!has_node(node)) {
    throw TopologyError("unknown node id " + std::to_string(node));
  }
  return names_[node];
}

std::optional<NodeId> NetworkGraph::find_node(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return static_cast<NodeId>(i);
  }
  return std::nullopt;
}

Path Path::from_edges(const NetworkGraph& graph, std::vector<EdgeId> edges) {
  if (edges.empty()) throw TopologyError("empty path");
  std::vector<NodeId> nodes;
  nodes.reserve(edges.size() + 1);
  nodes.push_back(graph.edge(edges.front()).tail);
  for (EdgeId e : edges) {
    const DirectedEdge& de = graph.edge(e);
    if (de.tail != nodes.back()) {
      throw TopologyError("path edges are not contiguous at edge " +
                          std::to_string(e));
    }
    nodes.push_back(de.head);
  }
  std::vector<NodeId> sorted = nodes;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw TopologyError("path revisits a node");
  }
  return Path(std::move(edges), std::move(nodes));
}

Path Path::from_nodes(const NetworkGraph& graph,
                      std::span<const NodeId> nodes) {
  if (nodes.size() < 2) throw TopologyError("path needs at least two nodes");
  std::vector<EdgeId> edges;
  edges.reserve(nodes.size() - 1);
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    auto e = graph.find_edge(nodes[i], nodes[i + 1]);
    if (!e) {
      throw TopologyError("no edge " + std::to_string(nodes[i]) + "->" +
                          std::to_string(nodes[i + 1]));
    }
    edges.push_back(*e);
  }
  return from_edges(graph, std::move(edges));
}

bool Path::contains(EdgeId edge) const {
  return std::find(edges_.begin(), edges_.end(), edge) != edges_.end();
}

bool Path::valid_in(const NetworkGraph& graph) const {
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    if (!graph.has_edge(edges_[i])) return false;
    const DirectedEdge& e = graph.edge(edges_[i]);
    if (e.tail != nodes_[i] || e.head != nodes_[i + 1]) return false;
  }
  return true;
}

std::string Path::to_string(const NetworkGraph& graph) const {
  std::ostringstream out;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (i) out << "->";
    out << graph.name(nodes_[i]);
  }
  return out.str();
}

bool shorter_then_lexicographic(const Path& a, const Path& b) {
  if (a.hop_count() != b.hop_count()) return a.hop_count() < b.hop_count();
  return std::lexicographical_compare(a.nodes().begin(), a.nodes().end(),
                                      b.nodes().begin(), b.nodes().end());
}

std::size_t min_hop_count(const NetworkGraph& graph, NodeId s, NodeId t) {
  if (!graph.has_node(s) || !graph.has_node(t)) {
    throw TopologyError("unknown endpoint");
  }
  constexpr auto kUnseen = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> dist(graph.node_count(), kUnseen);
  std::deque<NodeId> queue{s};
  dist[s] = 0;
  while (!queue.empty()) {
    NodeId u = queue.front();
    queue.pop_front();
    if (u == t) return dist[u];
    for (EdgeId e : graph.out_edges(u)) {
      NodeId v = graph.edge(e).head;
      if (dist[v] == kUnseen) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  throw NoPathError("no path from " + graph.name(s) + " to " + graph.name(t));
}

namespace {

struct PathSearch {
  const NetworkGraph& graph;
  NodeId target;
  std::size_t max_hops;
  // Hop distance to target, used to prune branches that cannot finish.
  std::vector<std::size_t> to_target;
  std::vector<bool> on_stack;
  std::vector<EdgeId> stack;
  std::vector<Path> out;

  void visit(NodeId u) {
    if (u == target) {
      out.push_back(Path::from_edges(graph, stack));
      return;
    }
    if (stack.size() >= max_hops) return;
    for (EdgeId e : graph.out_edges(u)) {
      NodeId v = graph.edge(e).head;
      if (on_stack[v]) continue;
      if (stack.size() + 1 + to_target[v] > max_hops) continue;
      on_stack[v] = true;
      stack.push_back(e);
      visit(v);
      stack.pop_back();
      on_stack[v] = false;
    }
  }
};

// Reverse BFS distances to t; unreachable nodes get a large sentinel.
std::vector<std::size_t> distances_to(const NetworkGraph& graph, NodeId t) {
  const std::size_t far = graph.node_count() + 1;
  std::vector<std::vector<NodeId>> in(graph.node_count());
  for (const DirectedEdge& e : graph.edges()) in[e.head].push_back(e.tail);
  std::vector<std::size_t> dist(graph.node_count(), far);
  std::deque<NodeId> queue{t};
  dist[t] = 0;
  while (!queue.empty()) {
    NodeId v = queue.front();
    queue.pop_front();
    for (NodeId u : in[v]) {
      if (dist[u] == far) {
        dist[u] = dist[v] + 1;
        queue.push_back(u);
      }
    }
  }
  return dist;
}

}  // namespace

std::vector<Path> enumerate_paths(const NetworkGraph& graph, NodeId s,
                                  NodeId t, std::size_t max_hops) {
  if (!graph.has_node(s) || !graph.has_node(t)) {
    throw TopologyError("unknown endpoint");
  }
  if (s == t || max_hops == 0) return {};
  PathSearch search{graph, t, max_hops, distances_to(graph, t),
                    std::vector<bool>(graph.node_count(), false), {}, {}};
  search.on_stack[s] = true;
  search.visit(s);
  return std::move(search.out);
}

}  // namespace bwr
