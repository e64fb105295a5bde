#include "bwr/rate_allocation.h"

namespace bwr {

double RateAllocation::rate(FlowId flow) const {
  auto it = rates.find(flow);
  return it == rates.end() ? 0.0 : it->second;
}

std::vector<double> edge_rate_totals(const NetworkState& state,
                                     const RateAllocation& allocation) {
  std::vector<double> totals(state.graph().edge_count(), 0.0);
  for (const Flow& f : state.flows()) {
    const double r = allocation.rate(f.id);
    if (r == 0.0) continue;
    for (EdgeId e : f.path->edges()) totals[e] += r;
  }
  return totals;
}

}  // namespace bwr
