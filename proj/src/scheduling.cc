#include "bwr/scheduling.h"

#include <algorithm>
#include <limits>
#include <string>
#include <unordered_map>

#include "bwr/error.h"

namespace bwr {
namespace {

void require_paths(const NetworkState& state) {
  for (const Flow& f : state.flows()) {
    if (!f.path) {
      throw Error("flow " + std::to_string(f.id) + " has no path");
    }
  }
}

}  // namespace

std::string_view policy_name(SchedulingPolicy policy) {
  switch (policy) {
    case SchedulingPolicy::kFcfs:
      return "fcfs";
    case SchedulingPolicy::kSrpt:
      return "srpt";
    case SchedulingPolicy::kMaxMinFair:
      return "fair";
  }
  return "?";
}

SchedulingPolicy parse_policy(std::string_view name) {
  if (name == "fcfs") return SchedulingPolicy::kFcfs;
  if (name == "srpt") return SchedulingPolicy::kSrpt;
  if (name == "fair" || name == "max-min") return SchedulingPolicy::kMaxMinFair;
  throw ConfigError("unknown policy \"" + std::string(name) + "\"");
}

RateAllocation allocate_priority(const NetworkState& state,
                                 std::span<const FlowId> order) {
  require_paths(state);
  std::unordered_map<FlowId, const Flow*> by_id;
  for (const Flow& f : state.flows()) by_id[f.id] = &f;
  if (order.size() != by_id.size()) {
    throw Error("priority order does not cover the active flows");
  }

  std::vector<double> residual(state.graph().edge_count());
  for (const DirectedEdge& e : state.graph().edges()) {
    residual[e.id] = e.capacity;
  }
  RateAllocation out;
  for (FlowId id : order) {
    auto it = by_id.find(id);
    if (it == by_id.end() || out.rates.contains(id)) {
      throw Error("priority order lists flow " + std::to_string(id) +
                  " twice or it is not active");
    }
    double rate = std::numeric_limits<double>::infinity();
    for (EdgeId e : it->second->path->edges()) {
      rate = std::min(rate, residual[e]);
    }
    rate = std::max(rate, 0.0);
    for (EdgeId e : it->second->path->edges()) {
      residual[e] = std::max(0.0, residual[e] - rate);
    }
    out.rates[id] = rate;
  }
  return out;
}

RateAllocation allocate_max_min(const NetworkState& state) {
  require_paths(state);
  const NetworkGraph& graph = state.graph();
  auto flows = state.flows();
  EdgeFlowIndex index(state);

  std::vector<double> residual(graph.edge_count());
  std::vector<std::size_t> unfrozen_on(graph.edge_count(), 0);
  for (const DirectedEdge& e : graph.edges()) {
    residual[e.id] = e.capacity;
    unfrozen_on[e.id] = index.on(e.id).size();
  }
  std::vector<double> rate(flows.size(), 0.0);
  std::vector<bool> frozen(flows.size(), false);
  std::size_t remaining = flows.size();

  while (remaining > 0) {
    double step = std::numeric_limits<double>::infinity();
    for (EdgeId e = 0; e < graph.edge_count(); ++e) {
      if (unfrozen_on[e] > 0) {
        step = std::min(step, residual[e] / unfrozen_on[e]);
      }
    }
    step = std::max(step, 0.0);

    // Edges whose fair share equals the step saturate in this round.
    std::vector<EdgeId> saturated;
    for (EdgeId e = 0; e < graph.edge_count(); ++e) {
      if (unfrozen_on[e] == 0) continue;
      const double share = residual[e] / unfrozen_on[e];
      if (share <= step * (1.0 + 1e-12)) {
        saturated.push_back(e);
        residual[e] = 0.0;
      } else {
        residual[e] -= step * unfrozen_on[e];
      }
    }
    for (std::size_t i = 0; i < flows.size(); ++i) {
      if (!frozen[i]) rate[i] += step;
    }
    for (EdgeId e : saturated) {
      for (std::uint32_t i : index.on(e)) {
        if (frozen[i]) continue;
        frozen[i] = true;
        --remaining;
        for (EdgeId other : flows[i].path->edges()) --unfrozen_on[other];
      }
    }
  }

  RateAllocation out;
  for (std::size_t i = 0; i < flows.size(); ++i) {
    out.rates[flows[i].id] = rate[i];
  }
  return out;
}

std::vector<FlowId> fcfs_order(const NetworkState& state) {
  std::vector<const Flow*> sorted;
  for (const Flow& f : state.flows()) sorted.push_back(&f);
  std::sort(sorted.begin(), sorted.end(), [](const Flow* a, const Flow* b) {
    if (a->arrival_time != b->arrival_time) {
      return a->arrival_time < b->arrival_time;
    }
    return a->id < b->id;
  });
  std::vector<FlowId> out;
  for (const Flow* f : sorted) out.push_back(f->id);
  return out;
}

std::vector<FlowId> srpt_order(const NetworkState& state) {
  std::vector<const Flow*> sorted;
  for (const Flow& f : state.flows()) sorted.push_back(&f);
  std::sort(sorted.begin(), sorted.end(), [](const Flow* a, const Flow* b) {
    if (a->remaining_volume != b->remaining_volume) {
      return a->remaining_volume < b->remaining_volume;
    }
    return a->id < b->id;
  });
  std::vector<FlowId> out;
  for (const Flow* f : sorted) out.push_back(f->id);
  return out;
}

RateAllocation allocate(SchedulingPolicy policy, const NetworkState& state) {
  switch (policy) {
    case SchedulingPolicy::kFcfs:
      return allocate_priority(state, fcfs_order(state));
    case SchedulingPolicy::kSrpt:
      return allocate_priority(state, srpt_order(state));
    case SchedulingPolicy::kMaxMinFair:
      return allocate_max_min(state);
  }
  throw ConfigError("unhandled policy");
}

bool is_feasible(const NetworkState& state, const RateAllocation& allocation) {
  const auto totals = edge_rate_totals(state, allocation);
  for (const DirectedEdge& e : state.graph().edges()) {
    if (totals[e.id] > e.capacity + kRateTolerance) return false;
  }
  for (const auto& [id, r] : allocation.rates) {
    if (r < 0.0) return false;
  }
  return true;
}

}  // namespace bwr
