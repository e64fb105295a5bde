#ifndef BWR_FLOW_H
#define BWR_FLOW_H

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "bwr/graph.h"

namespace bwr {

using FlowId = std::uint32_t;

struct Flow {
  FlowId id = 0;
  NodeId source = 0;
  NodeId destination = 0;
  double arrival_time = 0.0;
  double total_volume = 0.0;
  double remaining_volume = 0.0;
  std::optional<Path> path;
};

// Throws Error when the flow's own invariants do not hold (source equals
// destination, volumes out of range, path endpoints mismatched).
void validate_flow(const Flow& flow);

// Active flows routed over a graph. The graph is borrowed; it must outlive
// the state. Flows are kept in insertion order.
class NetworkState {
 public:
  explicit NetworkState(const NetworkGraph& graph) : graph_(&graph) {}

  const NetworkGraph& graph() const { return *graph_; }
  std::span<const Flow> flows() const { return flows_; }
  std::span<Flow> mutable_flows() { return flows_; }
  bool empty() const { return flows_.empty(); }
  std::size_t size() const { return flows_.size(); }

  // Requires a path valid in graph() and remaining_volume > 0.
  void add(Flow flow);
  const Flow* find(FlowId id) const;
  // Removes every flow for which pred returns true; returns them in state
  // order.
  template <typename Pred>
  std::vector<Flow> extract_if(Pred pred);

 private:
  const NetworkGraph* graph_;
  std::vector<Flow> flows_;
};

template <typename Pred>
std::vector<Flow> NetworkState::extract_if(Pred pred) {
  std::vector<Flow> removed;
  std::vector<Flow> kept;
  kept.reserve(flows_.size());
  for (Flow& f : flows_) {
    if (pred(f)) {
      removed.push_back(std::move(f));
    } else {
      kept.push_back(std::move(f));
    }
  }
  flows_ = std::move(kept);
  return removed;
}

// Ids of the active flows whose path contains `edge`, in state order.
// Throws TopologyError for unknown edge ids.
std::vector<FlowId> flows_on_edge(const NetworkState& state, EdgeId edge);

// Per-edge incidence lists: for each edge, the indices into state.flows() of
// the flows crossing it.
class EdgeFlowIndex {
 public:
  explicit EdgeFlowIndex(const NetworkState& state);

  std::span<const std::uint32_t> on(EdgeId edge) const {
    return per_edge_[edge];
  }
  // Sum of remaining volumes of flows crossing `edge`.
  double remaining_load(EdgeId edge) const { return load_[edge]; }

 private:
  std::vector<std::vector<std::uint32_t>> per_edge_;
  std::vector<double> load_;
};

}  // namespace bwr

#endif  // BWR_FLOW_H
