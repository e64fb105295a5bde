#include "bwr/routing.h"

#include <algorithm>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

#include "bwr/error.h"
#include "path_search.h"

namespace bwr {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Clock = std::chrono::steady_clock;

void check_request(const RouteRequest& request) {
  const Flow& f = request.new_flow;
  const NetworkGraph& graph = request.state.graph();
  if (!graph.has_node(f.source) || !graph.has_node(f.destination)) {
    throw TopologyError("flow " + std::to_string(f.id) +
                        " has an endpoint outside the graph");
  }
  if (f.source == f.destination) {
    throw Error("flow " + std::to_string(f.id) +
                ": source equals destination");
  }
  if (!(f.total_volume > 0.0)) {
    throw Error("flow " + std::to_string(f.id) + ": volume must be positive");
  }
}

[[noreturn]] void no_path(const RouteRequest& request) {
  const NetworkGraph& graph = request.state.graph();
  throw NoPathError("no path from " + graph.name(request.new_flow.source) +
                    " to " + graph.name(request.new_flow.destination));
}

// Evaluates bwrh_cost for many paths against one state.
//
// Each conflicting flow's volume is charged to the first path edge holding
// its minimum shared capacity, and the new flow's volume to the path's
// first bottleneck edge. Summing per edge and dividing once per edge gives
// the same value as the per-flow form, and because every per-edge numerator
// is a sub-sum (same order) of the bwrhf_cost numerator, the rounded result
// never exceeds bwrhf_cost.
class BwrhEvaluator {
 public:
  BwrhEvaluator(const NetworkState& state, double new_volume)
      : state_(state),
        index_(state),
        new_volume_(new_volume),
        slot_(state.size(), kUnset) {}

  double operator()(const Path& path) {
    const NetworkGraph& graph = state_.graph();
    const auto edges = path.edges();
    caps_.resize(edges.size());
    touched_.clear();
    std::size_t bottleneck = 0;
    for (std::size_t k = 0; k < edges.size(); ++k) {
      caps_[k] = graph.edge(edges[k]).capacity;
      if (caps_[k] < caps_[bottleneck]) bottleneck = k;
      for (std::uint32_t i : index_.on(edges[k])) {
        if (slot_[i] == kUnset) {
          touched_.push_back(i);
          slot_[i] = k;
        } else if (caps_[k] < caps_[slot_[i]]) {
          slot_[i] = k;
        }
      }
    }
    // Accumulate in state order, matching EdgeFlowIndex::remaining_load.
    std::sort(touched_.begin(), touched_.end());
    auto flows = state_.flows();
    numerators_.assign(edges.size(), 0.0);
    for (std::uint32_t i : touched_) {
      numerators_[slot_[i]] += flows[i].remaining_volume;
      slot_[i] = kUnset;
    }
    numerators_[bottleneck] += new_volume_;
    double total = 0.0;
    for (std::size_t k = 0; k < edges.size(); ++k) {
      total += numerators_[k] / caps_[k];
    }
    return total;
  }

 private:
  static constexpr std::size_t kUnset = static_cast<std::size_t>(-1);

  const NetworkState& state_;
  EdgeFlowIndex index_;
  double new_volume_;
  std::vector<std::size_t> slot_;
  std::vector<std::uint32_t> touched_;
  std::vector<double> caps_;
  std::vector<double> numerators_;
};

struct Candidate {
  std::optional<std::size_t> index;
  double cost = kInf;
};

// Best of `paths` by (cost, hops, node sequence).
template <typename CostFn>
Candidate best_of(const std::vector<Path>& paths, CostFn& cost_of) {
  Candidate best;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const double c = cost_of(paths[i]);
    if (!best.index || c < best.cost ||
        (c == best.cost &&
         shorter_then_lexicographic(paths[i], paths[*best.index]))) {
      best = {i, c};
    }
  }
  return best;
}

}  // namespace

std::string_view router_name(RouterKind kind) {
  switch (kind) {
    case RouterKind::kBwrh:
      return "bwrh";
    case RouterKind::kBwrhf:
      return "bwrhf";
    case RouterKind::kInverseCapacity:
      return "inv-cap";
    case RouterKind::kMinMaxUtilization:
      return "min-max-util";
    case RouterKind::kShortestWidest:
      return "shortest-widest";
  }
  return "?";
}

RouterKind parse_router(std::string_view name) {
  for (RouterKind kind : all_routers()) {
    if (router_name(kind) == name) return kind;
  }
  throw ConfigError("unknown router \"" + std::string(name) + "\"");
}

std::vector<RouterKind> all_routers() {
  return {RouterKind::kBwrh, RouterKind::kBwrhf, RouterKind::kInverseCapacity,
          RouterKind::kMinMaxUtilization, RouterKind::kShortestWidest};
}

double bwrh_cost(const Path& path, const NetworkState& state,
                 double new_volume) {
  return BwrhEvaluator(state, new_volume)(path);
}

std::vector<double> bwrhf_edge_weights(const NetworkState& state,
                                       double new_volume) {
  const NetworkGraph& graph = state.graph();
  EdgeFlowIndex index(state);
  std::vector<double> weights(graph.edge_count());
  for (const DirectedEdge& e : graph.edges()) {
    weights[e.id] = (index.remaining_load(e.id) + new_volume) / e.capacity;
  }
  return weights;
}

double bwrhf_cost(const Path& path, const NetworkState& state,
                  double new_volume) {
  const auto weights = bwrhf_edge_weights(state, new_volume);
  double total = 0.0;
  for (EdgeId e : path.edges()) total += weights[e];
  return total;
}

RouteResult route_bwrh(const RouteRequest& request) {
  const auto start = Clock::now();
  check_request(request);
  const NetworkGraph& graph = request.state.graph();
  const Flow& flow = request.new_flow;

  const std::size_t first_limit =
      min_hop_count(graph, flow.source, flow.destination);
  const std::size_t max_limit = graph.node_count() - 1;

  BwrhEvaluator cost_of(request.state, flow.total_volume);
  std::size_t limit = first_limit;
  std::vector<Path> paths =
      enumerate_paths(graph, flow.source, flow.destination, limit);
  std::size_t examined = paths.size();
  Candidate best = best_of(paths, cost_of);
  while (limit < max_limit) {
    ++limit;
    std::vector<Path> wider =
        enumerate_paths(graph, flow.source, flow.destination, limit);
    examined += wider.size();
    Candidate next = best_of(wider, cost_of);
    if (!(next.cost < best.cost)) break;
    paths = std::move(wider);
    best = next;
  }
  if (!best.index) no_path(request);

  RouteResult result{paths[*best.index], best.cost, examined, {}, limit};
  result.elapsed = Clock::now() - start;
  return result;
}

RouteResult route_bwrhf(const RouteRequest& request) {
  const auto start = Clock::now();
  check_request(request);
  const NetworkGraph& graph = request.state.graph();
  const Flow& flow = request.new_flow;
  const auto weights = bwrhf_edge_weights(request.state, flow.total_volume);
  auto path =
      detail::shortest_path(graph, flow.source, flow.destination, weights);
  if (!path) no_path(request);
  double cost = 0.0;
  for (EdgeId e : path->edges()) cost += weights[e];
  RouteResult result{*path, cost, 1, {}, path->hop_count()};
  result.elapsed = Clock::now() - start;
  return result;
}

RouteResult route_inverse_capacity(const RouteRequest& request) {
  const auto start = Clock::now();
  check_request(request);
  const NetworkGraph& graph = request.state.graph();
  const Flow& flow = request.new_flow;
  std::vector<double> weights(graph.edge_count());
  for (const DirectedEdge& e : graph.edges()) {
    weights[e.id] = 1.0 / e.capacity;
  }
  auto path =
      detail::shortest_path(graph, flow.source, flow.destination, weights);
  if (!path) no_path(request);
  double cost = 0.0;
  for (EdgeId e : path->edges()) cost += weights[e];
  RouteResult result{*path, cost, 1, {}, path->hop_count()};
  result.elapsed = Clock::now() - start;
  return result;
}

namespace {

// Smallest threshold in `values` such that t is reachable from s over edges
// whose value passes `admits(value, threshold)`. `values` must be sorted so
// admission is monotone in the index.
template <typename Admits>
std::optional<double> best_threshold(const NetworkGraph& graph, NodeId s,
                                     NodeId t,
                                     const std::vector<double>& edge_values,
                                     std::vector<double> candidates,
                                     Admits admits) {
  auto reachable = [&](double threshold) {
    return detail::min_hop_path(graph, s, t, [&](EdgeId e) {
             return admits(edge_values[e], threshold);
           }).has_value();
  };
  std::size_t lo = 0;
  std::size_t hi = candidates.size();
  if (hi == 0 || !reachable(candidates.back())) return std::nullopt;
  hi -= 1;
  while (lo < hi) {
    std::size_t mid = lo + (hi - lo) / 2;
    if (reachable(candidates[mid])) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return candidates[lo];
}

const RateAllocation& require_rates(const RouteRequest& request,
                                    std::string_view router) {
  if (!request.rate_view) {
    throw std::invalid_argument(std::string(router) + " needs a rate view");
  }
  return *request.rate_view;
}

}  // namespace

RouteResult route_min_max_utilization(const RouteRequest& request) {
  const auto start = Clock::now();
  check_request(request);
  const auto& rates = require_rates(request, "min-max-util");
  const NetworkGraph& graph = request.state.graph();
  const Flow& flow = request.new_flow;

  const auto totals = edge_rate_totals(request.state, rates);
  std::vector<double> utilization(graph.edge_count());
  for (const DirectedEdge& e : graph.edges()) {
    utilization[e.id] = totals[e.id] / e.capacity;
  }
  std::vector<double> levels = utilization;
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  auto level = best_threshold(graph, flow.source, flow.destination,
                              utilization, levels,
                              [](double v, double bound) { return v <= bound; });
  if (!level) no_path(request);
  auto path = detail::min_hop_path(
      graph, flow.source, flow.destination,
      [&](EdgeId e) { return utilization[e] <= *level; });
  RouteResult result{*path, *level, 1, {}, path->hop_count()};
  result.elapsed = Clock::now() - start;
  return result;
}

RouteResult route_shortest_widest(const RouteRequest& request) {
  const auto start = Clock::now();
  check_request(request);
  const auto& rates = require_rates(request, "shortest-widest");
  const NetworkGraph& graph = request.state.graph();
  const Flow& flow = request.new_flow;

  const auto totals = edge_rate_totals(request.state, rates);
  std::vector<double> available(graph.edge_count());
  for (const DirectedEdge& e : graph.edges()) {
    available[e.id] = std::max(0.0, e.capacity - totals[e.id]);
  }
  // Widths in descending order: the first admissible threshold is the widest.
  std::vector<double> levels = available;
  std::sort(levels.begin(), levels.end(), std::greater<>());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  auto width = best_threshold(graph, flow.source, flow.destination, available,
                              levels,
                              [](double v, double bound) { return v >= bound; });
  if (!width) no_path(request);
  auto path = detail::min_hop_path(
      graph, flow.source, flow.destination,
      [&](EdgeId e) { return available[e] >= *width; });
  RouteResult result{*path, *width, 1, {}, path->hop_count()};
  result.elapsed = Clock::now() - start;
  return result;
}

RouteResult route(RouterKind kind, const RouteRequest& request) {
  switch (kind) {
    case RouterKind::kBwrh:
      return route_bwrh(request);
    case RouterKind::kBwrhf:
      return route_bwrhf(request);
    case RouterKind::kInverseCapacity:
      return route_inverse_capacity(request);
    case RouterKind::kMinMaxUtilization:
      return route_min_max_utilization(request);
    case RouterKind::kShortestWidest:
      return route_shortest_widest(request);
  }
  throw ConfigError("unhandled router kind");
}

}  // namespace bwr
