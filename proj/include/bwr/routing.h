#ifndef BWR_ROUTING_H
#define BWR_ROUTING_H

#include <chrono>
#include <cstddef>
#include <string_view>
#include <vector>

#include "bwr/flow.h"
#include "bwr/graph.h"
#include "bwr/rate_allocation.h"

namespace bwr {

enum class RouterKind {
  kBwrh,
  kBwrhf,
  kInverseCapacity,
  kMinMaxUtilization,
  kShortestWidest,
};

// "bwrh", "bwrhf", "inv-cap", "min-max-util", "shortest-widest".
std::string_view router_name(RouterKind kind);
// Throws ConfigError for unknown names.
RouterKind parse_router(std::string_view name);
std::vector<RouterKind> all_routers();

struct RouteRequest {
  // Unrouted flow; remaining_volume must equal total_volume.
  Flow new_flow;
  const NetworkState& state;
  // Rates in force at the arrival instant. Required by the utilization and
  // width based baselines.
  const RateAllocation* rate_view = nullptr;
};

struct RouteResult {
  Path path;
  // Router objective of `path`: the bound value for the BWR routers, the sum
  // of inverse capacities, the maximum utilization, or the path width.
  double cost = 0.0;
  std::size_t paths_examined = 0;
  std::chrono::nanoseconds elapsed{0};
  // BWRH: hop limit of the terminating round. Others: hop count of `path`.
  std::size_t hop_limit = 0;
};

// Serialized-conflict bound: every current flow that shares an edge with
// `path` drains first at the smallest shared capacity, one after another,
// then the new flow drains at the path bottleneck.
double bwrh_cost(const Path& path, const NetworkState& state,
                 double new_volume);

// Edge-decomposable bound: sum over path edges of
// (remaining volume on the edge + new_volume) / capacity.
// Always >= bwrh_cost for the same inputs.
double bwrhf_cost(const Path& path, const NetworkState& state,
                  double new_volume);

// All routers throw NoPathError when the destination is unreachable.
// Ties break on hop count, then on lexicographic node sequence.

// Scans all simple paths of at most K hops, starting at the minimum hop
// count and growing K while the best bound strictly improves. K never
// exceeds node_count - 1.
RouteResult route_bwrh(const RouteRequest& request);
// Shortest path under the per-edge bwrhf weights.
RouteResult route_bwrhf(const RouteRequest& request);
// Shortest path under 1 / capacity; ignores current flows.
RouteResult route_inverse_capacity(const RouteRequest& request);
// Minimizes (max edge utilization, hops). Throws std::invalid_argument
// without a rate view.
RouteResult route_min_max_utilization(const RouteRequest& request);
// Maximizes width (min available bandwidth), then minimizes hops. Throws
// std::invalid_argument without a rate view.
RouteResult route_shortest_widest(const RouteRequest& request);

RouteResult route(RouterKind kind, const RouteRequest& request);

// Per-edge weights used by route_bwrhf, indexed by edge id.
std::vector<double> bwrhf_edge_weights(const NetworkState& state,
                                       double new_volume);

}  // namespace bwr

#endif  // BWR_ROUTING_H
