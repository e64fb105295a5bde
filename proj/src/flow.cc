#include "bwr/flow.h"

#include <cmath>
#include <string>

#include "bwr/error.h"

namespace bwr {

void validate_flow(const Flow& flow) {
  const std::string who = "flow " + std::to_string(flow.id);
  if (flow.source == flow.destination) {
    throw Error(who + ": source equals destination");
  }
  if (!(flow.total_volume > 0.0) || !std::isfinite(flow.total_volume)) {
    throw Error(who + ": total volume must be positive");
  }
  if (flow.remaining_volume < 0.0 ||
      flow.remaining_volume > flow.total_volume) {
    throw Error(who + ": remaining volume outside [0, total]");
  }
  if (!(flow.arrival_time >= 0.0)) {
    throw Error(who + ": negative arrival time");
  }
  if (flow.path && (flow.path->source() != flow.source ||
                    flow.path->destination() != flow.destination)) {
    throw Error(who + ": path does not connect source to destination");
  }
}

void NetworkState::add(Flow flow) {
  validate_flow(flow);
  if (!flow.path) {
    throw Error("flow " + std::to_string(flow.id) + " has no path");
  }
  if (!flow.path->valid_in(*graph_)) {
    throw Error("flow " + std::to_string(flow.id) +
                " path is not part of the graph");
  }
  if (!(flow.remaining_volume > 0.0)) {
    throw Error("flow " + std::to_string(flow.id) + " has nothing left");
  }
  if (find(flow.id)) {
    throw Error("duplicate flow id " + std::to_string(flow.id));
  }
  flows_.push_back(std::move(flow));
}

const Flow* NetworkState::find(FlowId id) const {
  for (const Flow& f : flows_) {
    if (f.id == id) return &f;
  }
  return nullptr;
}

std::vector<FlowId> flows_on_edge(const NetworkState& state, EdgeId edge) {
  if (!state.graph().has_edge(edge)) {
    throw TopologyError("unknown edge id " + std::to_string(edge));
  }
  std::vector<FlowId> out;
  for (const Flow& f : state.flows()) {
    if (f.path && f.path->contains(edge)) out.push_back(f.id);
  }
  return out;
}

EdgeFlowIndex::EdgeFlowIndex(const NetworkState& state)
    : per_edge_(state.graph().edge_count()),
      load_(state.graph().edge_count(), 0.0) {
  auto flows = state.flows();
  for (std::uint32_t i = 0; i < flows.size(); ++i) {
    for (EdgeId e : flows[i].path->edges()) {
      per_edge_[e].push_back(i);
      load_[e] += flows[i].remaining_volume;
    }
  }
}

}  // namespace bwr
