#ifndef BWR_SCHEDULING_H
#define BWR_SCHEDULING_H

#include <span>
#include <string_view>
#include <vector>

#include "bwr/flow.h"
#include "bwr/rate_allocation.h"

namespace bwr {

enum class SchedulingPolicy {
  kFcfs,
  kSrpt,
  kMaxMinFair,
};

// "fcfs", "srpt", "fair". parse_policy also accepts "max-min".
std::string_view policy_name(SchedulingPolicy policy);
SchedulingPolicy parse_policy(std::string_view name);

// Strict-priority greedy fill: flows in `order` each take the minimum
// residual capacity along their path. `order` must list every active flow
// exactly once.
RateAllocation allocate_priority(const NetworkState& state,
                                 std::span<const FlowId> order);

// Progressive filling: raise all unfrozen flows together until an edge
// saturates, freeze the flows crossing it, repeat.
RateAllocation allocate_max_min(const NetworkState& state);

// Arrival time then id.
std::vector<FlowId> fcfs_order(const NetworkState& state);
// Remaining volume then id.
std::vector<FlowId> srpt_order(const NetworkState& state);

RateAllocation allocate(SchedulingPolicy policy, const NetworkState& state);

// Tolerance used for capacity feasibility and saturation checks.
inline constexpr double kRateTolerance = 1e-9;

// True when no edge carries more than its capacity (+ tolerance).
bool is_feasible(const NetworkState& state, const RateAllocation& allocation);

}  // namespace bwr

#endif  // BWR_SCHEDULING_H
