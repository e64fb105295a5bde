#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <vector>

#include "bwr/error.h"
#include "bwr/routing.h"
#include "bwr/scheduling.h"
#include "fixtures.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace bwr {
namespace {

using testing::TwoFlowLine;

constexpr double kInf = std::numeric_limits<double>::infinity();

// Straight transcription of the serialized-conflict sum: for every active
// flow, intersect its edge set with the path's and divide its remaining
// volume by the smallest shared capacity.
double literal_bwrh(const Path& path, const NetworkState& state, double v) {
  const NetworkGraph& g = state.graph();
  std::set<EdgeId> mine(path.edges().begin(), path.edges().end());
  double sum = 0.0;
  for (const Flow& f : state.flows()) {
    double shared_min = kInf;
    for (EdgeId e : f.path->edges()) {
      if (mine.contains(e)) shared_min = std::min(shared_min, g.edge(e).capacity);
    }
    if (shared_min < kInf) sum += f.remaining_volume / shared_min;
  }
  double bottleneck = kInf;
  for (EdgeId e : mine) bottleneck = std::min(bottleneck, g.edge(e).capacity);
  return sum + v / bottleneck;
}

// Per-edge (load + v) / C summed along the path; loads accumulate in state
// order.
double literal_bwrhf(const Path& path, const NetworkState& state, double v) {
  const NetworkGraph& g = state.graph();
  double total = 0.0;
  for (EdgeId e : path.edges()) {
    double load = 0.0;
    for (const Flow& f : state.flows()) {
      if (f.path->contains(e)) load += f.remaining_volume;
    }
    total += (load + v) / g.edge(e).capacity;
  }
  return total;
}

std::vector<double> rate_totals(const NetworkState& state,
                                const RateAllocation& rates) {
  std::vector<double> on(state.graph().edge_count(), 0.0);
  for (const Flow& f : state.flows()) {
    for (EdgeId e : f.path->edges()) on[e] += rates.rate(f.id);
  }
  return on;
}

TEST(BwrhCost, WorkedExample) {
  TwoFlowLine fx;
  EXPECT_NEAR(bwrh_cost(fx.candidate, *fx.state, TwoFlowLine::kNewVolume), 36.0,
              1e-9);
}

TEST(BwrhfCost, WorkedExample) {
  TwoFlowLine fx;
  EXPECT_NEAR(bwrhf_cost(fx.candidate, *fx.state, TwoFlowLine::kNewVolume), 55.5,
              1e-9);
}

TEST(Costs, EmptyStateSingleEdge) {
  NetworkGraph g(2);
  g.add_edge(0, 1, 0.25);
  NetworkState state(g);
  Path p = Path::from_nodes(g, std::vector<NodeId>{0, 1});
  EXPECT_DOUBLE_EQ(bwrh_cost(p, state, 3.0), 12.0);
  EXPECT_DOUBLE_EQ(bwrhf_cost(p, state, 3.0), 12.0);
}

TEST(Costs, MatchLiteralTranscriptions) {
  Rng rng(2024);
  for (int trial = 0; trial < 500; ++trial) {
    NetworkGraph g = testing::random_graph(rng, {3, 7, 0.4});
    NetworkState state = testing::random_state(rng, g, 8);
    auto [s, t] = testing::random_pair(rng, g.node_count());
    const double v = testing::uniform(rng, 0.5, 20.0);
    for (const Path& p : testing::all_simple_paths(g, s, t)) {
      EXPECT_NEAR(bwrh_cost(p, state, v), literal_bwrh(p, state, v),
                  1e-9 * literal_bwrh(p, state, v));
      EXPECT_DOUBLE_EQ(bwrhf_cost(p, state, v), literal_bwrhf(p, state, v));
    }
  }
}

TEST(Costs, LooseBoundNeverBelowTightBound) {
  Rng rng(77);
  for (int trial = 0; trial < 500; ++trial) {
    NetworkGraph g = testing::random_graph(rng, {3, 8, 0.35});
    NetworkState state = testing::random_state(rng, g, 8);
    auto [s, t] = testing::random_pair(rng, g.node_count());
    const double v = testing::uniform(rng, 0.5, 20.0);
    for (const Path& p : testing::all_simple_paths(g, s, t)) {
      EXPECT_GE(bwrhf_cost(p, state, v), bwrh_cost(p, state, v));
    }
  }
}

TEST(Costs, MonotoneInAddedFlows) {
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    NetworkGraph g = testing::random_graph(rng, {3, 7, 0.4});
    NetworkState state = testing::random_state(rng, g, 6);
    auto [s, t] = testing::random_pair(rng, g.node_count());
    auto paths = testing::all_simple_paths(g, s, t);
    std::vector<double> before_h, before_f;
    for (const Path& p : paths) {
      before_h.push_back(bwrh_cost(p, state, 5.0));
      before_f.push_back(bwrhf_cost(p, state, 5.0));
    }
    auto [fs, ft] = testing::random_pair(rng, g.node_count());
    Flow extra = testing::new_flow(state, fs, ft, 3.0);
    extra.path = testing::random_path(rng, g, fs, ft);
    state.add(extra);
    for (std::size_t i = 0; i < paths.size(); ++i) {
      EXPECT_GE(bwrh_cost(paths[i], state, 5.0), before_h[i]);
      EXPECT_GE(bwrhf_cost(paths[i], state, 5.0), before_f[i]);
    }
  }
}

TEST(RouteBwrh, PrefersWiderRoute) {
  // Two otherwise identical two-hop routes, bottlenecks 1 and 2.
  NetworkGraph g(4);
  g.add_edge(0, 1, 1.0);
  g.add_edge(1, 3, 1.0);
  g.add_edge(0, 2, 2.0);
  g.add_edge(2, 3, 2.0);
  NetworkState state(g);
  RouteResult r = route_bwrh({testing::new_flow(state, 0, 3, 8.0), state});
  EXPECT_EQ(r.path, Path::from_nodes(g, std::vector<NodeId>{0, 2, 3}));
  EXPECT_DOUBLE_EQ(r.cost, 4.0);
}

TEST(RouteBwrh, TakesEmptyDetour) {
  TwoFlowLine fx(/*detour=*/true);
  Flow f = testing::new_flow(*fx.state, TwoFlowLine::s, TwoFlowLine::t, TwoFlowLine::kNewVolume);
  RouteResult r = route_bwrh({f, *fx.state});
  Path detour =
      Path::from_nodes(fx.graph, std::vector<NodeId>{TwoFlowLine::s, TwoFlowLine::x, TwoFlowLine::t});
  EXPECT_EQ(r.path, detour);
  EXPECT_DOUBLE_EQ(r.cost, 16.0);
  // Oracle: every simple path's cost.
  for (const Path& p : testing::all_simple_paths(fx.graph, TwoFlowLine::s, TwoFlowLine::t)) {
    EXPECT_LE(r.cost, literal_bwrh(p, *fx.state, TwoFlowLine::kNewVolume));
  }
}

TEST(RouteBwrh, OptimalWithinTerminatingHopLimit) {
  Rng rng(4242);
  int reached_global = 0;
  for (int trial = 0; trial < 300; ++trial) {
    NetworkGraph g = testing::random_graph(rng, {3, 8, 0.3});
    NetworkState state = testing::random_state(rng, g, 8);
    auto [s, t] = testing::random_pair(rng, g.node_count());
    const double v = testing::uniform(rng, 0.5, 20.0);
    RouteResult r = route_bwrh({testing::new_flow(state, s, t, v), state});
    ASSERT_TRUE(r.path.valid_in(g));
    EXPECT_EQ(r.path.source(), s);
    EXPECT_EQ(r.path.destination(), t);
    EXPECT_LE(r.path.hop_count(), r.hop_limit);
    EXPECT_DOUBLE_EQ(r.cost, bwrh_cost(r.path, state, v));

    double global = kInf;
    std::size_t global_hops = 0;
    for (const Path& p : testing::all_simple_paths(g, s, t)) {
      const double c = literal_bwrh(p, state, v);
      if (p.hop_count() <= r.hop_limit) {
        EXPECT_LE(r.cost, c * (1 + 1e-12));
      }
      if (c < global || (c == global && p.hop_count() < global_hops)) {
        global = c;
        global_hops = p.hop_count();
      }
    }
    if (global_hops <= r.hop_limit) {
      EXPECT_NEAR(r.cost, global, 1e-9 * global);
      ++reached_global;
    }
  }
  EXPECT_GT(reached_global, 0);
}

TEST(RouteBwrh, BestCostNonIncreasingInHopLimit) {
  Rng rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    NetworkGraph g = testing::random_graph(rng, {3, 8, 0.3});
    NetworkState state = testing::random_state(rng, g, 6);
    auto [s, t] = testing::random_pair(rng, g.node_count());
    double previous = kInf;
    for (std::size_t k = min_hop_count(g, s, t); k < g.node_count(); ++k) {
      double best = kInf;
      for (const Path& p : enumerate_paths(g, s, t, k)) {
        best = std::min(best, bwrh_cost(p, state, 4.0));
      }
      EXPECT_LE(best, previous);
      previous = best;
    }
  }
}

TEST(RouteBwrhf, LineGraph) {
  NetworkGraph g(3);
  g.add_edge(0, 1, 0.5);
  g.add_edge(1, 2, 0.25);
  NetworkState state(g);
  RouteResult r = route_bwrhf({testing::new_flow(state, 0, 2, 1.0), state});
  EXPECT_EQ(r.path.hop_count(), 2u);
  EXPECT_DOUBLE_EQ(r.cost, bwrhf_cost(r.path, state, 1.0));
  EXPECT_DOUBLE_EQ(r.cost, 6.0);
}

TEST(RouteBwrhf, WorkedExample) {
  TwoFlowLine fx;
  Flow f = testing::new_flow(*fx.state, TwoFlowLine::s, TwoFlowLine::t, TwoFlowLine::kNewVolume);
  RouteResult r = route_bwrhf({f, *fx.state});
  EXPECT_EQ(r.path, fx.candidate);
  EXPECT_NEAR(r.cost, 55.5, 1e-9);
}

TEST(RouteBwrhf, EqualsExhaustiveMinimum) {
  Rng rng(99);
  for (int trial = 0; trial < 500; ++trial) {
    NetworkGraph g = testing::random_graph(rng, {3, 10, 0.25});
    NetworkState state = testing::random_state(rng, g, 8);
    auto [s, t] = testing::random_pair(rng, g.node_count());
    const double v = testing::uniform(rng, 0.5, 20.0);
    RouteResult r = route_bwrhf({testing::new_flow(state, s, t, v), state});
    double best = kInf;
    std::size_t best_hops = 0;
    for (const Path& p : testing::all_simple_paths(g, s, t)) {
      const double c = literal_bwrhf(p, state, v);
      if (c < best || (c == best && p.hop_count() < best_hops)) {
        best = c;
        best_hops = p.hop_count();
      }
    }
    EXPECT_EQ(r.cost, best);
    EXPECT_EQ(r.cost, literal_bwrhf(r.path, state, v));
    EXPECT_EQ(r.path.hop_count(), best_hops);
  }
}

TEST(RouteInverseCapacity, Examples) {
  NetworkGraph g(4);
  g.add_edge(0, 1, 1.0);
  g.add_edge(1, 3, 1.0);
  g.add_edge(0, 2, 2.0);
  g.add_edge(2, 3, 2.0);
  g.add_edge(0, 3, 0.1);
  NetworkState state(g);
  RouteResult r =
      route_inverse_capacity({testing::new_flow(state, 0, 3, 1.0), state});
  EXPECT_EQ(r.path, Path::from_nodes(g, std::vector<NodeId>{0, 2, 3}));
  EXPECT_DOUBLE_EQ(r.cost, 1.0);

  // Uniform capacities: a minimum-hop path.
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    NetworkGraph u = testing::random_graph(rng, {3, 9, 0.3, 1.0, 1.0, true});
    NetworkState empty(u);
    auto [s, t] = testing::random_pair(rng, u.node_count());
    RouteResult ru =
        route_inverse_capacity({testing::new_flow(empty, s, t, 1.0), empty});
    EXPECT_EQ(ru.path.hop_count(), min_hop_count(u, s, t));
  }
}

TEST(RouteInverseCapacity, EqualsExhaustiveMinimum) {
  Rng rng(13);
  for (int trial = 0; trial < 300; ++trial) {
    NetworkGraph g = testing::random_graph(rng, {3, 9, 0.3});
    NetworkState state = testing::random_state(rng, g, 4);
    auto [s, t] = testing::random_pair(rng, g.node_count());
    RouteResult r =
        route_inverse_capacity({testing::new_flow(state, s, t, 1.0), state});
    double best = kInf;
    for (const Path& p : testing::all_simple_paths(g, s, t)) {
      double c = 0.0;
      for (EdgeId e : p.edges()) c += 1.0 / g.edge(e).capacity;
      best = std::min(best, c);
    }
    EXPECT_NEAR(r.cost, best, 1e-12 * best);
  }
}

TEST(RouteMinMaxUtilization, Examples) {
  NetworkGraph g(3);
  g.add_edge(0, 2, 1.0);
  g.add_edge(0, 1, 1.0);
  g.add_edge(1, 2, 1.0);
  NetworkState idle(g);
  RateAllocation none;
  RouteResult r = route_min_max_utilization(
      {testing::new_flow(idle, 0, 2, 1.0), idle, &none});
  EXPECT_EQ(r.path.hop_count(), 1u);
  EXPECT_EQ(r.cost, 0.0);

  // Saturate the direct edge; the idle detour wins.
  NetworkState busy(g);
  busy.add(testing::routed_flow(g, 0, {0, 2}, 5.0));
  RateAllocation rates = allocate_max_min(busy);
  RouteResult rb = route_min_max_utilization(
      {testing::new_flow(busy, 0, 2, 1.0), busy, &rates});
  EXPECT_EQ(rb.path, Path::from_nodes(g, std::vector<NodeId>{0, 1, 2}));
  EXPECT_THROW(route_min_max_utilization({testing::new_flow(busy, 0, 2, 1.0),
                                          busy, nullptr}),
               std::invalid_argument);
}

TEST(RouteMinMaxUtilization, EqualsExhaustiveOptimum) {
  Rng rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    NetworkGraph g = testing::random_graph(rng, {3, 9, 0.3});
    NetworkState state = testing::random_state(rng, g, 8);
    RateAllocation rates = allocate_max_min(state);
    auto on = rate_totals(state, rates);
    auto [s, t] = testing::random_pair(rng, g.node_count());
    RouteResult r = route_min_max_utilization(
        {testing::new_flow(state, s, t, 1.0), state, &rates});
    std::pair<double, std::size_t> best{kInf, 0};
    for (const Path& p : testing::all_simple_paths(g, s, t)) {
      double util = 0.0;
      for (EdgeId e : p.edges()) {
        util = std::max(util, on[e] / g.edge(e).capacity);
      }
      best = std::min(best, std::make_pair(util, p.hop_count()));
    }
    double got = 0.0;
    for (EdgeId e : r.path.edges()) {
      got = std::max(got, on[e] / g.edge(e).capacity);
    }
    EXPECT_EQ(std::make_pair(got, r.path.hop_count()), best);
    EXPECT_EQ(r.cost, got);
  }
}

TEST(RouteShortestWidest, Examples) {
  NetworkGraph g(4);
  g.add_edge(0, 1, 1.0);
  g.add_edge(1, 3, 1.0);
  g.add_edge(0, 2, 2.0);
  g.add_edge(2, 3, 2.0);
  NetworkState idle(g);
  RateAllocation none;
  RouteResult r = route_shortest_widest(
      {testing::new_flow(idle, 0, 3, 1.0), idle, &none});
  EXPECT_EQ(r.path, Path::from_nodes(g, std::vector<NodeId>{0, 2, 3}));
  EXPECT_DOUBLE_EQ(r.cost, 2.0);

  // Equal widths over 2 and 3 hops.
  NetworkGraph h(5);
  h.add_edge(0, 1, 1.0);
  h.add_edge(1, 4, 1.0);
  h.add_edge(0, 2, 1.0);
  h.add_edge(2, 3, 1.0);
  h.add_edge(3, 4, 1.0);
  NetworkState idle_h(h);
  RouteResult rh = route_shortest_widest(
      {testing::new_flow(idle_h, 0, 4, 1.0), idle_h, &none});
  EXPECT_EQ(rh.path.hop_count(), 2u);
  EXPECT_THROW(route_shortest_widest(
                   {testing::new_flow(idle_h, 0, 4, 1.0), idle_h, nullptr}),
               std::invalid_argument);
}

TEST(RouteShortestWidest, EqualsExhaustiveOptimum) {
  Rng rng(19);
  for (int trial = 0; trial < 300; ++trial) {
    NetworkGraph g = testing::random_graph(rng, {3, 9, 0.3});
    NetworkState state = testing::random_state(rng, g, 8);
    RateAllocation rates = allocate(SchedulingPolicy::kFcfs, state);
    auto on = rate_totals(state, rates);
    auto [s, t] = testing::random_pair(rng, g.node_count());
    RouteResult r = route_shortest_widest(
        {testing::new_flow(state, s, t, 1.0), state, &rates});
    auto width = [&](const Path& p) {
      double w = kInf;
      for (EdgeId e : p.edges()) {
        w = std::min(w, std::max(0.0, g.edge(e).capacity - on[e]));
      }
      return w;
    };
    std::pair<double, std::size_t> best{-1.0, 0};
    for (const Path& p : testing::all_simple_paths(g, s, t)) {
      const double w = width(p);
      if (w > best.first || (w == best.first && p.hop_count() < best.second)) {
        best = {w, p.hop_count()};
      }
    }
    EXPECT_EQ(std::make_pair(width(r.path), r.path.hop_count()), best);
  }
}

TEST(Routers, DeterministicAndReportNoPath) {
  Rng rng(61);
  for (int trial = 0; trial < 50; ++trial) {
    NetworkGraph g = testing::random_graph(rng, {4, 8, 0.3});
    NetworkState state = testing::random_state(rng, g, 6);
    RateAllocation rates = allocate_max_min(state);
    auto [s, t] = testing::random_pair(rng, g.node_count());
    Flow f = testing::new_flow(state, s, t, 7.0);
    for (RouterKind kind : all_routers()) {
      RouteResult a = route(kind, {f, state, &rates});
      RouteResult b = route(kind, {f, state, &rates});
      EXPECT_EQ(a.path, b.path) << router_name(kind);
      EXPECT_EQ(a.cost, b.cost) << router_name(kind);
    }
  }
  NetworkGraph split(3);
  split.add_edge(0, 1, 1.0);
  NetworkState state(split);
  RateAllocation rates;
  for (RouterKind kind : all_routers()) {
    EXPECT_THROW(route(kind, {testing::new_flow(state, 0, 2, 1.0), state,
                              &rates}),
                 NoPathError);
  }
}

TEST(Routers, NamesRoundTrip) {
  for (RouterKind kind : all_routers()) {
    EXPECT_EQ(parse_router(router_name(kind)), kind);
  }
  EXPECT_THROW(parse_router("ospf"), ConfigError);
}

}  // namespace
}  // namespace bwr
