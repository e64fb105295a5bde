#include "bwr/worst_case.h"

#include <algorithm>
#include <string>

#include "bwr/error.h"
#include "bwr/routing.h"
#include "bwr/scheduling.h"

namespace bwr {
namespace {

bool share_edge(const Path& a, const Path& b) {
  for (EdgeId e : a.edges()) {
    if (b.contains(e)) return true;
  }
  return false;
}

}  // namespace

bool DependencyGraph::adjacent(FlowId a, FlowId b) const {
  return edges.contains(std::minmax(a, b));
}

bool DependencyGraph::independent(std::span<const FlowId> flows) const {
  for (std::size_t i = 0; i < flows.size(); ++i) {
    for (std::size_t j = i + 1; j < flows.size(); ++j) {
      if (adjacent(flows[i], flows[j])) return false;
    }
  }
  return true;
}

std::vector<FlowId> conflicting_flows(const NetworkState& state,
                                      const Path& candidate) {
  std::vector<FlowId> out;
  for (const Flow& f : state.flows()) {
    if (share_edge(*f.path, candidate)) out.push_back(f.id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

DependencyGraph build_dependency_graph(const NetworkState& state,
                                       const Path& candidate) {
  DependencyGraph g;
  g.vertices = conflicting_flows(state, candidate);
  for (std::size_t i = 0; i < g.vertices.size(); ++i) {
    const Path& pi = *state.find(g.vertices[i])->path;
    for (std::size_t j = i + 1; j < g.vertices.size(); ++j) {
      if (share_edge(pi, *state.find(g.vertices[j])->path)) {
        g.edges.emplace(g.vertices[i], g.vertices[j]);
      }
    }
  }
  return g;
}

FlowId probe_flow_id(const NetworkState& state) {
  FlowId next = 0;
  for (const Flow& f : state.flows()) next = std::max(next, f.id + 1);
  return next;
}

namespace {

// State holding only the conflicting flows plus the probe flow on the
// candidate path.
NetworkState conflict_state(const NetworkState& state,
                            std::span<const FlowId> conflicts,
                            const Path& candidate, double new_volume,
                            FlowId probe) {
  NetworkState out(state.graph());
  for (FlowId id : conflicts) out.add(*state.find(id));
  Flow f;
  f.id = probe;
  f.source = candidate.source();
  f.destination = candidate.destination();
  f.total_volume = new_volume;
  f.remaining_volume = new_volume;
  f.path = candidate;
  out.add(std::move(f));
  return out;
}

}  // namespace

double priority_completion_time(const NetworkState& state,
                                const Path& candidate, double new_volume,
                                std::span<const FlowId> order,
                                const AllocationObserver& observer) {
  if (!(new_volume > 0.0)) throw Error("new volume must be positive");
  const FlowId probe = probe_flow_id(state);
  NetworkState sub =
      conflict_state(state, conflicting_flows(state, candidate), candidate,
                     new_volume, probe);
  std::vector<FlowId> full(order.begin(), order.end());
  full.push_back(probe);
  auto finish = drain(
      std::move(sub), 0.0,
      [&full](const NetworkState& s) {
        // Keep only flows still active, in the fixed priority order.
        std::vector<FlowId> live;
        for (FlowId id : full) {
          if (s.find(id)) live.push_back(id);
        }
        return allocate_priority(s, live);
      },
      observer);
  return finish.at(probe);
}

WorstCaseResult worst_case_exact(const NetworkState& state,
                                 const Path& candidate, double new_volume,
                                 const WorstCaseOptions& options) {
  if (!candidate.valid_in(state.graph())) {
    throw Error("candidate path is not part of the graph");
  }
  std::vector<FlowId> order = conflicting_flows(state, candidate);
  if (order.size() > options.max_conflicts) {
    throw InstanceTooLargeError(
        "instance too large for exact oracle: " +
        std::to_string(order.size()) + " conflicting flows (cap " +
        std::to_string(options.max_conflicts) + ")");
  }

  WorstCaseResult result;
  result.bwrh_bound = bwrh_cost(candidate, state, new_volume);
  result.bwrhf_bound = bwrhf_cost(candidate, state, new_volume);
  result.worst_time = -1.0;
  do {
    const double t =
        priority_completion_time(state, candidate, new_volume, order);
    ++result.permutations;
    if (options.keep_all) result.per_permutation.push_back(t);
    if (t > result.worst_time) {
      result.worst_time = t;
      result.witness_order = order;
    }
  } while (std::next_permutation(order.begin(), order.end()));
  return result;
}

}  // namespace bwr
