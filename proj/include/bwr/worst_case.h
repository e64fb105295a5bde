#ifndef BWR_WORST_CASE_H
#define BWR_WORST_CASE_H

#include <cstddef>
#include <set>
#include <utility>
#include <vector>

#include "bwr/flow.h"
#include "bwr/graph.h"
#include "bwr/simulator.h"

namespace bwr {

// Conflict graph over the active flows that share at least one edge with a
// candidate path. Two vertices are adjacent iff their paths share an edge;
// independent sets are the groups that may transmit concurrently.
struct DependencyGraph {
  std::vector<FlowId> vertices;  // ascending
  std::set<std::pair<FlowId, FlowId>> edges;  // (low id, high id)

  bool adjacent(FlowId a, FlowId b) const;
  bool independent(std::span<const FlowId> flows) const;
};

DependencyGraph build_dependency_graph(const NetworkState& state,
                                       const Path& candidate);

// Flows of `state` sharing at least one edge with `candidate`, ascending id.
std::vector<FlowId> conflicting_flows(const NetworkState& state,
                                      const Path& candidate);

struct WorstCaseOptions {
  std::size_t max_conflicts = 8;
  // Keep the new flow's completion time for every permutation, in
  // lexicographic permutation order.
  bool keep_all = false;
};

struct WorstCaseResult {
  double worst_time = 0.0;
  // Priority order of the conflicting flows (highest first) that produced
  // worst_time; the lexicographically smallest one among ties.
  std::vector<FlowId> witness_order;
  double bwrh_bound = 0.0;  // bwrh_cost
  double bwrhf_bound = 0.0;  // bwrhf_cost
  std::size_t permutations = 0;
  std::vector<double> per_permutation;
};

// Adversary model: the conflicting flows drain under strict static priority
// (greedy work-conserving fluid allocation) in some order, with the new
// flow last. Enumerates every order and returns the largest completion time
// of the new flow. Flows that do not touch the candidate are left out.
// Throws InstanceTooLargeError past options.max_conflicts.
WorstCaseResult worst_case_exact(const NetworkState& state,
                                 const Path& candidate, double new_volume,
                                 const WorstCaseOptions& options = {});

// Completion time of a new flow on `candidate` when the conflicting flows
// drain in `order` (highest priority first) ahead of it. `observer` sees
// every rate recomputation.
double priority_completion_time(const NetworkState& state,
                                const Path& candidate, double new_volume,
                                std::span<const FlowId> order,
                                const AllocationObserver& observer = {});

// Id one past the largest active flow id; used for the probe flow.
FlowId probe_flow_id(const NetworkState& state);

}  // namespace bwr

#endif  // BWR_WORST_CASE_H
