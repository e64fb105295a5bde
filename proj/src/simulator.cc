#include "bwr/simulator.h"

#include <algorithm>
#include <limits>
#include <set>
#include <string>

#include "bwr/error.h"

namespace bwr {
namespace {

constexpr double kNever = std::numeric_limits<double>::infinity();

// Active flows plus the piecewise-constant rates in force since `now`.
class FluidNetwork {
 public:
  FluidNetwork(const NetworkGraph& graph, double start, Allocator allocator,
               const AllocationObserver& observer)
      : state_(graph),
        now_(start),
        allocator_(std::move(allocator)),
        observer_(observer) {}

  NetworkState& state() { return state_; }
  const RateAllocation& rates() const { return rates_; }
  double now() const { return now_; }

  void reallocate() {
    rates_ = allocator_(state_);
    rates_.snapshot_time = now_;
    if (observer_) observer_(state_, rates_);
  }

  // Earliest completion under current rates, kNever if nothing is moving.
  double next_completion() const {
    double best = kNever;
    for (const Flow& f : state_.flows()) {
      const double r = rates_.rate(f.id);
      if (r > 0.0) best = std::min(best, now_ + f.remaining_volume / r);
    }
    return best;
  }

  // Drains volume up to `time` and removes flows that finished. When
  // `completion` is set, flows whose own finish time is exactly `time` are
  // forced complete so rounding cannot leave a sliver behind.
  std::vector<Flow> advance_to(double time, bool completion) {
    const double dt = time - now_;
    for (Flow& f : state_.mutable_flows()) {
      const double r = rates_.rate(f.id);
      if (r <= 0.0) continue;
      if (completion && now_ + f.remaining_volume / r == time) {
        f.remaining_volume = 0.0;
      } else {
        f.remaining_volume = std::max(0.0, f.remaining_volume - r * dt);
      }
    }
    now_ = time;
    auto done = state_.extract_if([](const Flow& f) {
      return f.remaining_volume <= kCompletionThreshold;
    });
    std::sort(done.begin(), done.end(),
              [](const Flow& a, const Flow& b) { return a.id < b.id; });
    return done;
  }

 private:
  NetworkState state_;
  double now_;
  RateAllocation rates_;
  Allocator allocator_;
  const AllocationObserver& observer_;
};

void check_arrivals(const NetworkGraph& graph, std::span<const Flow> arrivals) {
  std::set<FlowId> ids;
  double last = 0.0;
  for (const Flow& f : arrivals) {
    validate_flow(f);
    if (!graph.has_node(f.source) || !graph.has_node(f.destination)) {
      throw SimulationError("flow " + std::to_string(f.id) +
                            " has an endpoint outside the graph");
    }
    if (f.arrival_time < last) {
      throw SimulationError("arrivals are not sorted by arrival time (flow " +
                            std::to_string(f.id) + ")");
    }
    if (!ids.insert(f.id).second) {
      throw SimulationError("duplicate flow id " + std::to_string(f.id));
    }
    last = f.arrival_time;
  }
}

}  // namespace

std::vector<FlowRecord> simulate(const NetworkGraph& graph,
                                 std::span<const Flow> arrivals,
                                 RouterKind router, SchedulingPolicy policy,
                                 const SimulationOptions& options) {
  check_arrivals(graph, arrivals);
  FluidNetwork net(
      graph, 0.0,
      [policy](const NetworkState& s) { return allocate(policy, s); },
      options.observer);
  net.reallocate();

  std::map<FlowId, FlowRecord> pending;
  std::vector<FlowRecord> records;
  records.reserve(arrivals.size());

  auto finish = [&](const std::vector<Flow>& done) {
    for (const Flow& f : done) {
      auto node = pending.extract(f.id);
      FlowRecord& rec = node.mapped();
      rec.finish_time = net.now();
      rec.completion_time = rec.finish_time - rec.arrival_time;
      records.push_back(std::move(rec));
    }
  };

  std::size_t next = 0;
  while (next < arrivals.size() || !net.state().empty()) {
    const double t_done = net.next_completion();
    const double t_arrive =
        next < arrivals.size() ? arrivals[next].arrival_time : kNever;
    if (t_done == kNever && t_arrive == kNever) {
      throw SimulationError("no flow can make progress");
    }
    if (t_done <= t_arrive) {
      finish(net.advance_to(t_done, true));
      net.reallocate();
      continue;
    }

    finish(net.advance_to(t_arrive, false));
    Flow flow = arrivals[next++];
    flow.remaining_volume = flow.total_volume;
    flow.path.reset();
    RouteRequest request{flow, net.state(), &net.rates()};
    RouteResult routed = route(router, request);
    flow.path = routed.path;

    FlowRecord rec;
    rec.flow_id = flow.id;
    rec.source = flow.source;
    rec.destination = flow.destination;
    rec.total_volume = flow.total_volume;
    rec.arrival_time = flow.arrival_time;
    rec.hop_count = routed.path.hop_count();
    rec.route.assign(routed.path.nodes().begin(), routed.path.nodes().end());
    if (options.record_router_time) {
      rec.router_elapsed_micros =
          std::chrono::duration<double, std::micro>(routed.elapsed).count();
    }
    pending.emplace(flow.id, std::move(rec));
    net.state().add(std::move(flow));
    net.reallocate();
  }

  std::sort(records.begin(), records.end(),
            [](const FlowRecord& a, const FlowRecord& b) {
              return a.flow_id < b.flow_id;
            });
  return records;
}

std::map<FlowId, double> drain(NetworkState state, double start_time,
                               const Allocator& allocator,
                               const AllocationObserver& observer) {
  FluidNetwork net(state.graph(), start_time, allocator, observer);
  for (Flow& f : state.mutable_flows()) net.state().add(std::move(f));
  net.reallocate();

  std::map<FlowId, double> finish;
  while (!net.state().empty()) {
    const double t = net.next_completion();
    if (t == kNever) throw SimulationError("no flow can make progress");
    for (const Flow& f : net.advance_to(t, true)) finish[f.id] = net.now();
    net.reallocate();
  }
  return finish;
}

}  // namespace bwr
