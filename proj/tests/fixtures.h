#ifndef BWR_TESTS_FIXTURES_H
#define BWR_TESTS_FIXTURES_H

// Hand-built instances with known answers.

#include <memory>
#include <vector>

#include "bwr/flow.h"
#include "bwr/graph.h"

namespace bwr::testing {

inline Flow routed_flow(const NetworkGraph& g, FlowId id,
                        std::vector<NodeId> nodes, double remaining) {
  Flow f;
  f.id = id;
  f.path = Path::from_nodes(g, nodes);
  f.source = nodes.front();
  f.destination = nodes.back();
  f.total_volume = remaining;
  f.remaining_volume = remaining;
  return f;
}

// s -> a -> b -> t with capacities 1, 2, 0.5. F1 (10 left) uses s-a-b,
// F2 (5 left) uses a-b-t. The new flow carries 8 units from s to t.
struct TwoFlowLine {
  enum : NodeId { s, a, b, t, x };
  NetworkGraph graph;
  std::unique_ptr<NetworkState> state;
  Path candidate;
  static constexpr double kNewVolume = 8.0;

  // With `detour`, adds s -> x -> t with capacities 0.5 and 1.
  explicit TwoFlowLine(bool detour = false)
      : graph(detour ? 5 : 4),
        candidate(build(graph, detour)) {
    state = std::make_unique<NetworkState>(graph);
    state->add(routed_flow(graph, 1, {s, a, b}, 10.0));
    state->add(routed_flow(graph, 2, {a, b, t}, 5.0));
  }

 private:
  static Path build(NetworkGraph& g, bool detour) {
    g.add_edge(s, a, 1.0);
    g.add_edge(a, b, 2.0);
    g.add_edge(b, t, 0.5);
    if (detour) {
      g.add_edge(s, x, 0.5);
      g.add_edge(x, t, 1.0);
    }
    return Path::from_nodes(g, std::vector<NodeId>{s, a, b, t});
  }
};

// Four current flows around a candidate path S-a-b-c-D, all capacities 1
// and every remaining volume X. f1 covers S-a-b-c, f2 enters through S-a,
// f3 leaves through b-c, and f4 shares S-a and b-c-D but detours via y.
// Under any priority order the new flow waits for f1, for f4, and for the
// pair {f2, f3}, which can run together.
struct SerialConflicts {
  enum : NodeId { S, a, b, c, D, y, z, w };
  NetworkGraph graph{8};
  std::unique_ptr<NetworkState> state;
  std::vector<EdgeId> candidate_edges;

  explicit SerialConflicts(double x = 1.0) {
    for (auto [u, v] : std::vector<std::pair<NodeId, NodeId>>{
             {S, a}, {a, b}, {b, c}, {c, D}, {a, y}, {y, b}, {z, S}, {c, w}}) {
      graph.add_edge(u, v, 1.0);
    }
    state = std::make_unique<NetworkState>(graph);
    state->add(routed_flow(graph, 1, {S, a, b, c}, x));
    state->add(routed_flow(graph, 2, {z, S, a}, x));
    state->add(routed_flow(graph, 3, {b, c, w}, x));
    state->add(routed_flow(graph, 4, {S, a, y, b, c, D}, x));
  }

  Path candidate() const {
    return Path::from_nodes(graph, std::vector<NodeId>{S, a, b, c, D});
  }
};

}  // namespace bwr::testing

#endif  // BWR_TESTS_FIXTURES_H
