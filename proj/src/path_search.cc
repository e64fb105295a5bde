#include "path_search.h"

#include <algorithm>
#include <deque>
#include <queue>
#include <vector>

namespace bwr::detail {
namespace {

struct Label {
  double dist = 0.0;
  std::vector<NodeId> nodes;  // hops == nodes.size() - 1
  std::vector<EdgeId> edges;
};

bool better(const Label& a, const Label& b) {
  if (a.dist != b.dist) return a.dist < b.dist;
  if (a.nodes.size() != b.nodes.size()) return a.nodes.size() < b.nodes.size();
  return a.nodes < b.nodes;
}

}  // namespace

std::optional<Path> shortest_path(const NetworkGraph& graph, NodeId s,
                                  NodeId t, std::span<const double> weights) {
  const std::size_t n = graph.node_count();
  std::vector<std::optional<Label>> best(n);
  std::vector<bool> done(n, false);

  // Heap of node ids keyed by their current best label. Stale entries are
  // skipped on pop via the done flag and a label comparison.
  struct Entry {
    Label label;
    NodeId node;
  };
  auto worse = [](const Entry& a, const Entry& b) {
    return better(b.label, a.label);
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> heap(worse);

  best[s] = Label{0.0, {s}, {}};
  heap.push({*best[s], s});
  while (!heap.empty()) {
    Entry top = heap.top();
    heap.pop();
    const NodeId u = top.node;
    if (done[u]) continue;
    done[u] = true;
    if (u == t) break;
    for (EdgeId e : graph.out_edges(u)) {
      const NodeId v = graph.edge(e).head;
      if (done[v]) continue;
      Label next{top.label.dist + weights[e], top.label.nodes,
                 top.label.edges};
      next.nodes.push_back(v);
      next.edges.push_back(e);
      if (!best[v] || better(next, *best[v])) {
        best[v] = next;
        heap.push({std::move(next), v});
      }
    }
  }
  if (!best[t] || s == t) return std::nullopt;
  return Path::from_edges(graph, best[t]->edges);
}

std::optional<Path> min_hop_path(const NetworkGraph& graph, NodeId s,
                                 NodeId t,
                                 const std::function<bool(EdgeId)>& allowed) {
  const std::size_t n = graph.node_count();
  const std::size_t far = n + 1;
  std::vector<std::vector<EdgeId>> in(n);
  for (const DirectedEdge& e : graph.edges()) {
    if (allowed(e.id)) in[e.head].push_back(e.id);
  }
  std::vector<std::size_t> dist(n, far);
  std::deque<NodeId> queue{t};
  dist[t] = 0;
  while (!queue.empty()) {
    NodeId v = queue.front();
    queue.pop_front();
    for (EdgeId e : in[v]) {
      NodeId u = graph.edge(e).tail;
      if (dist[u] == far) {
        dist[u] = dist[v] + 1;
        queue.push_back(u);
      }
    }
  }
  if (s == t || dist[s] == far) return std::nullopt;

  // Walk forward taking the smallest-id neighbor one step closer to t.
  std::vector<EdgeId> edges;
  NodeId u = s;
  while (u != t) {
    for (EdgeId e : graph.out_edges(u)) {
      NodeId v = graph.edge(e).head;
      if (allowed(e) && dist[v] + 1 == dist[u]) {
        edges.push_back(e);
        u = v;
        break;
      }
    }
  }
  return Path::from_edges(graph, std::move(edges));
}

}  // namespace bwr::detail
