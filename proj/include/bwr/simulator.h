#ifndef BWR_SIMULATOR_H
#define BWR_SIMULATOR_H

#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "bwr/flow.h"
#include "bwr/graph.h"
#include "bwr/rate_allocation.h"
#include "bwr/routing.h"
#include "bwr/scheduling.h"

namespace bwr {

struct FlowRecord {
  FlowId flow_id = 0;
  NodeId source = 0;
  NodeId destination = 0;
  double total_volume = 0.0;
  double arrival_time = 0.0;
  double finish_time = 0.0;
  // finish_time - arrival_time.
  double completion_time = 0.0;
  std::size_t hop_count = 0;
  // Wall-clock time spent in the router; not part of simulated time.
  double router_elapsed_micros = 0.0;
  std::vector<NodeId> route;
};

// Remaining volume at or below this counts as complete.
inline constexpr double kCompletionThreshold = 1e-9;

using Allocator = std::function<RateAllocation(const NetworkState&)>;

// Called after every rate recomputation with the state the rates apply to.
// allocation.snapshot_time is the simulated time the rates take effect.
using AllocationObserver =
    std::function<void(const NetworkState&, const RateAllocation&)>;

struct SimulationOptions {
  AllocationObserver observer;
  // Record wall-clock router time. Disabled runs write 0.
  bool record_router_time = true;
};

// Event-driven fluid simulation. Each arrival is routed against the active
// state and the rates in force at that instant; rates are recomputed at
// every arrival and completion. At equal timestamps completions go before
// arrivals. Returns one record per flow, ordered by flow id.
//
// Throws SimulationError for unsorted arrivals or duplicate ids, and lets
// NoPathError from the router propagate.
std::vector<FlowRecord> simulate(const NetworkGraph& graph,
                                 std::span<const Flow> arrivals,
                                 RouterKind router, SchedulingPolicy policy,
                                 const SimulationOptions& options = {});

// Runs already-routed flows to completion with no further arrivals, starting
// at `start_time`. Returns finish times keyed by flow id.
std::map<FlowId, double> drain(NetworkState state, double start_time,
                               const Allocator& allocator,
                               const AllocationObserver& observer = {});

}  // namespace bwr

#endif  // BWR_SIMULATOR_H
