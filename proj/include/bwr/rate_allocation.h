#ifndef BWR_RATE_ALLOCATION_H
#define BWR_RATE_ALLOCATION_H

#include <map>
#include <vector>

#include "bwr/flow.h"

namespace bwr {

// Per-flow transmission rates, valid from snapshot_time until the next
// simulator event.
struct RateAllocation {
  double snapshot_time = 0.0;
  std::map<FlowId, double> rates;

  // 0 for flows missing from the map.
  double rate(FlowId flow) const;
};

// Sum of allocated rates per edge, indexed by edge id.
std::vector<double> edge_rate_totals(const NetworkState& state,
                                     const RateAllocation& allocation);

}  // namespace bwr

#endif  // BWR_RATE_ALLOCATION_H
