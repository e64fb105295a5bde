#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bwr/error.h"
#include "bwr/experiment.h"
#include "bwr/snapshot.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace bwr {
namespace {

using nlohmann::json;

RunMetrics run_with(RouterKind router, double mean, double p99) {
  RunMetrics m;
  m.router = router;
  m.pattern = "heavy-tailed";
  m.topology = "gscale";
  m.mean_fct = mean;
  m.p99_fct = p99;
  m.max_fct = p99;
  return m;
}

// Smallest value whose count of values at or below it reaches q * n,
// compared in integers to keep rounding out of it.
double percentile_by_counting(const std::vector<double>& xs, int percent) {
  const std::size_t n = xs.size();
  double best = 0.0;
  bool found = false;
  for (double x : xs) {
    std::size_t at_or_below = 0;
    for (double y : xs) at_or_below += y <= x;
    if (100 * at_or_below >= static_cast<std::size_t>(percent) * n &&
        (!found || x < best)) {
      best = x;
      found = true;
    }
  }
  return best;
}

ScenarioConfig small_config() {
  ScenarioConfig c;
  c.topology = "diamond";
  c.pattern.sizes = LightTailed{5.0, 500.0};
  c.pattern.flow_count = 30;
  c.routers = all_routers();
  c.policies = {SchedulingPolicy::kFcfs, SchedulingPolicy::kSrpt,
                SchedulingPolicy::kMaxMinFair};
  c.repetitions = 3;
  c.base_seed = 11;
  c.record_router_time = false;
  return c;
}

std::string csv_bytes(const ExperimentResult& r) {
  std::ostringstream out;
  write_flows_csv(out, r.flows);
  write_runs_csv(out, r.runs);
  auto summary = aggregate(r.runs);
  write_summary_csv(out, summary);
  return out.str();
}

TEST(Aggregate, MeanAndSampleStd) {
  std::vector<RunMetrics> runs{run_with(RouterKind::kBwrhf, 10, 20),
                               run_with(RouterKind::kBwrhf, 14, 30)};
  auto rows = aggregate(runs);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].runs, 2u);
  EXPECT_DOUBLE_EQ(rows[0].mean_fct_avg, 12.0);
  EXPECT_NEAR(rows[0].mean_fct_std, std::sqrt(8.0), 1e-12);
  EXPECT_DOUBLE_EQ(rows[0].p99_fct_avg, 25.0);
  EXPECT_DOUBLE_EQ(rows[0].mean_ratio_to_reference, 1.0);
}

TEST(Aggregate, SingleRunHasZeroStd) {
  std::vector<RunMetrics> runs{run_with(RouterKind::kBwrh, 7, 9)};
  auto rows = aggregate(runs);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].mean_fct_std, 0.0);
  EXPECT_EQ(rows[0].reference, RouterKind::kBwrh);
}

TEST(Aggregate, RatiosAgainstBwrhf) {
  std::vector<RunMetrics> runs{run_with(RouterKind::kInverseCapacity, 15, 40),
                               run_with(RouterKind::kBwrhf, 10, 20),
                               run_with(RouterKind::kInverseCapacity, 25, 60),
                               run_with(RouterKind::kBwrhf, 10, 30)};
  auto rows = aggregate(runs);
  ASSERT_EQ(rows.size(), 2u);
  // Groups keep first-appearance order.
  EXPECT_EQ(rows[0].router, RouterKind::kInverseCapacity);
  EXPECT_EQ(rows[0].reference, RouterKind::kBwrhf);
  EXPECT_DOUBLE_EQ(rows[0].mean_ratio_to_reference, 2.0);
  EXPECT_DOUBLE_EQ(rows[0].p99_ratio_to_reference, 2.0);
  EXPECT_DOUBLE_EQ(rows[1].mean_ratio_to_reference, 1.0);
}

TEST(Aggregate, SeparatesPolicies) {
  RunMetrics a = run_with(RouterKind::kBwrhf, 1, 1);
  RunMetrics b = a;
  b.policy = SchedulingPolicy::kSrpt;
  std::vector<RunMetrics> runs{a, b, a};
  auto rows = aggregate(runs);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].runs, 2u);
  EXPECT_EQ(rows[1].runs, 1u);
}

TEST(RelativeDifference, Basics) {
  EXPECT_EQ(relative_difference(12.5, 12.5), 0.0);
  EXPECT_DOUBLE_EQ(relative_difference(10.0, 8.0), 0.2);
  EXPECT_DOUBLE_EQ(relative_difference(10.0, 11.0), -0.1);
}

TEST(NearestRank, MatchesCounting) {
  Rng rng(5);
  for (std::size_t n = 1; n <= 250; ++n) {
    std::vector<double> xs;
    for (std::size_t i = 0; i < n; ++i) {
      // Coarse grid so ties occur.
      xs.push_back(std::floor(testing::uniform(rng, 0.0, 20.0)));
    }
    std::vector<double> sorted = xs;
    std::sort(sorted.begin(), sorted.end());
    EXPECT_EQ(nearest_rank(sorted, 0.99), percentile_by_counting(xs, 99))
        << "n = " << n;
    EXPECT_EQ(nearest_rank(sorted, 0.5), percentile_by_counting(xs, 50));
    EXPECT_EQ(nearest_rank(sorted, 1.0), sorted.back());
  }
}

TEST(SummarizeRun, Basics) {
  std::vector<FlowRecord> records(100);
  for (std::size_t i = 0; i < records.size(); ++i) {
    records[i].completion_time = static_cast<double>(100 - i);
    records[i].router_elapsed_micros = static_cast<double>(i);
  }
  RunMetrics m = summarize_run(records);
  EXPECT_EQ(m.flow_count, 100u);
  EXPECT_DOUBLE_EQ(m.mean_fct, 50.5);
  EXPECT_EQ(m.p99_fct, 99.0);
  EXPECT_EQ(m.max_fct, 100.0);
  EXPECT_EQ(m.max_router_elapsed_micros, 99.0);
  EXPECT_DOUBLE_EQ(m.mean_router_elapsed_micros, 49.5);
}

TEST(RunExperiment, SingleFlowMetricsCoincide) {
  ScenarioConfig c;
  c.topology = "line2";
  c.pattern.flow_count = 1;
  c.record_router_time = false;
  ExperimentResult r = run_experiment(c);
  ASSERT_EQ(r.runs.size(), 1u);
  const RunMetrics& m = r.runs[0];
  EXPECT_EQ(m.flow_count, 1u);
  EXPECT_EQ(m.mean_fct, m.p99_fct);
  EXPECT_EQ(m.p99_fct, m.max_fct);
  ASSERT_EQ(r.flows.size(), 1u);
  const FlowRecord& f = r.flows[0].record;
  EXPECT_EQ(f.hop_count, 1u);
  EXPECT_EQ(f.router_elapsed_micros, 0.0);
  EXPECT_NEAR(f.completion_time, m.mean_fct, 0.0);
}

TEST(RunExperiment, CellsArePairedAndComplete) {
  ScenarioConfig c = small_config();
  ExperimentResult r = run_experiment(c);
  const std::size_t cells = c.routers.size() * c.policies.size();
  EXPECT_EQ(r.runs.size(), c.repetitions * cells);
  EXPECT_EQ(r.flows.size(), c.repetitions * cells * c.pattern.flow_count);

  std::map<std::size_t, std::set<std::uint64_t>> hashes;
  std::map<std::size_t, std::set<std::uint64_t>> seeds;
  for (const RunMetrics& m : r.runs) {
    hashes[m.run_id].insert(m.input_hash);
    seeds[m.run_id].insert(m.seed);
    EXPECT_EQ(m.flow_count, c.pattern.flow_count);
    EXPECT_EQ(m.topology, "diamond");
    EXPECT_EQ(m.pattern, "light-tailed");
    EXPECT_EQ(m.seed, repetition_seed(c.base_seed, m.run_id));
  }
  ASSERT_EQ(hashes.size(), c.repetitions);
  std::set<std::uint64_t> distinct;
  for (const auto& [run, set] : hashes) {
    EXPECT_EQ(set.size(), 1u) << "run " << run;
    EXPECT_EQ(seeds[run].size(), 1u);
    distinct.insert(*set.begin());
  }
  EXPECT_EQ(distinct.size(), c.repetitions);

  // Every cell of a repetition saw the same arrivals.
  std::map<std::pair<std::size_t, FlowId>, std::pair<double, double>> seen;
  for (const FlowRow& row : r.flows) {
    const auto key = std::make_pair(row.run_id, row.record.flow_id);
    const auto value = std::make_pair(row.record.arrival_time,
                                      row.record.total_volume);
    auto [it, inserted] = seen.emplace(key, value);
    if (!inserted) EXPECT_EQ(it->second, value);
    EXPECT_GE(row.record.completion_time, 0.0);
    EXPECT_NEAR(row.record.finish_time - row.record.arrival_time,
                row.record.completion_time, 1e-9);
  }
}

TEST(RunExperiment, ByteIdenticalAcrossRunsAndThreadCounts) {
  ScenarioConfig c = small_config();
  c.threads = 1;
  const std::string one = csv_bytes(run_experiment(c));
  EXPECT_EQ(one, csv_bytes(run_experiment(c)));
  c.threads = 4;
  EXPECT_EQ(one, csv_bytes(run_experiment(c)));
  c.base_seed = 12;
  EXPECT_NE(one, csv_bytes(run_experiment(c)));
}

TEST(RepetitionSeed, Distinct) {
  std::set<std::uint64_t> seeds;
  for (std::size_t r = 0; r < 1000; ++r) seeds.insert(repetition_seed(1, r));
  EXPECT_EQ(seeds.size(), 1000u);
  EXPECT_EQ(repetition_seed(9, 3), repetition_seed(9, 3));
}

TEST(Csv, Headers) {
  ExperimentResult r = run_experiment(small_config());
  std::ostringstream flows, runs, summary;
  write_flows_csv(flows, r.flows);
  write_runs_csv(runs, r.runs);
  auto rows = aggregate(r.runs);
  write_summary_csv(summary, rows);
  auto first_line = [](const std::string& s) { return s.substr(0, s.find('\n')); };
  EXPECT_EQ(first_line(flows.str()),
            "run_id,flow_id,source,destination,total_volume,arrival_time,"
            "finish_time,completion_time,hop_count,router,policy,"
            "router_elapsed_micros");
  EXPECT_EQ(first_line(runs.str()),
            "run_id,router,policy,pattern,topology,seed,flow_count,mean_fct,"
            "p99_fct,max_fct,mean_router_elapsed,max_router_elapsed,"
            "input_hash");
  EXPECT_EQ(first_line(summary.str()),
            "router,policy,pattern,topology,runs,mean_fct_avg,mean_fct_std,"
            "p99_fct_avg,p99_fct_std,max_fct_avg,max_fct_std,"
            "reference_router,mean_ratio_to_reference,"
            "p99_ratio_to_reference");
  EXPECT_EQ(rows.size(), 15u);
}

TEST(FormatDouble, RoundTrips) {
  Rng rng(8);
  for (int i = 0; i < 1000; ++i) {
    const double x = testing::uniform(rng, -1e6, 1e6);
    EXPECT_EQ(std::stod(format_double(x)), x);
  }
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(format_double(36.0), "36");
}

TEST(Config, ParsesFullDocument) {
  json doc = json::parse(R"({
    "topology": "diamond",
    "capacity": {"mode": "declared", "low": 0.5, "high": 2},
    "traffic": {"pattern": "heavy-tailed", "mean": 40, "arrival_rate": 2,
                "flows": 77},
    "routers": ["bwrh", "inv-cap"],
    "policies": ["srpt"],
    "repetitions": 4, "seed": 99, "record_router_time": false, "threads": 2
  })");
  ScenarioConfig c = parse_config(doc);
  EXPECT_EQ(c.topology, "diamond");
  EXPECT_EQ(c.capacity_mode, CapacityMode::kDeclared);
  EXPECT_EQ(c.capacity_low, 0.5);
  EXPECT_EQ(c.capacity_high, 2.0);
  ASSERT_TRUE(std::holds_alternative<HeavyTailed>(c.pattern.sizes));
  EXPECT_EQ(std::get<HeavyTailed>(c.pattern.sizes).mean, 40.0);
  EXPECT_EQ(c.pattern.arrival_rate, 2.0);
  EXPECT_EQ(c.pattern.flow_count, 77u);
  EXPECT_EQ(c.routers, (std::vector<RouterKind>{
                           RouterKind::kBwrh, RouterKind::kInverseCapacity}));
  EXPECT_EQ(c.policies,
            (std::vector<SchedulingPolicy>{SchedulingPolicy::kSrpt}));
  EXPECT_EQ(c.repetitions, 4u);
  EXPECT_EQ(c.base_seed, 99u);
  EXPECT_FALSE(c.record_router_time);
  EXPECT_EQ(c.threads, 2u);
}

TEST(Config, RejectsBadDocuments) {
  const char* bad[] = {
      R"([1, 2])",
      R"({"routers": ["dijkstra"]})",
      R"({"routers": []})",
      R"({"policies": ["lifo"]})",
      R"({"repetitions": 0})",
      R"({"repetitions": "many"})",
      R"({"capacity": {"mode": "random", "low": 2, "high": 1}})",
      R"({"capacity": {"mode": "odd"}})",
      R"({"traffic": {"pattern": "bursty"}})",
      R"({"traffic": {"pattern": "empirical"}})",
      R"({"traffic": {"pattern": "heavy-tailed", "mean": 1}})",
      R"({"traffic": {"flows": 0}})",
      R"({"traffic": {"arrival_rate": -1}})",
  };
  for (const char* text : bad) {
    EXPECT_THROW(parse_config(json::parse(text)), ConfigError) << text;
  }
}

TEST(Config, ShippedFilesResolveRelativePaths) {
  for (const char* name :
       {"quick.json", "gscale_heavy.json", "gscale_light.json",
        "gscale_empirical.json"}) {
    ScenarioConfig c =
        load_config_file(std::string(BWR_DATA_DIR "/configs/") + name);
    EXPECT_GE(c.repetitions, 1u) << name;
  }
  ScenarioConfig c = load_config_file(BWR_DATA_DIR "/configs/gscale_empirical.json");
  ASSERT_TRUE(std::holds_alternative<Empirical>(c.pattern.sizes));
  EXPECT_TRUE(std::filesystem::exists(c.topology));
  EXPECT_THROW(load_config_file(BWR_DATA_DIR "/configs/missing.json"),
               ConfigError);
}

TEST(Snapshot, LoadsWorkedExample) {
  Snapshot s = load_snapshot_file(BWR_DATA_DIR "/snapshots/two_flow_line.json");
  EXPECT_EQ(s.graph.node_count(), 4u);
  ASSERT_EQ(s.flows.size(), 2u);
  EXPECT_EQ(s.flows[0].id, 1u);
  EXPECT_EQ(s.flows[0].remaining_volume, 10.0);
  EXPECT_EQ(s.flows[1].path->hop_count(), 2u);
  EXPECT_EQ(s.new_flow.total_volume, 8.0);
  ASSERT_TRUE(s.candidate.has_value());
  EXPECT_EQ(s.candidate->hop_count(), 3u);
  NetworkState state = s.state();
  EXPECT_EQ(state.size(), 2u);
  EXPECT_EQ(path_to_json(s.graph, *s.candidate),
            json::parse(R"(["s", "a", "b", "t"])"));
}

TEST(Snapshot, RejectsBadDocuments) {
  const std::string topo =
      R"("topology": {"nodes": ["s", "a", "t"], "links": [
           {"a": "s", "b": "a"}, {"a": "a", "b": "t"}]})";
  const std::string flow = R"("new_flow": {"source": "s", "destination": "t",
                                            "volume": 1})";
  const std::string bad[] = {
      "{" + flow + "}",
      "{" + topo + "}",
      "{" + topo + R"(, "new_flow": {"source": "s", "destination": "s",
                                      "volume": 1}})",
      "{" + topo + R"(, "new_flow": {"source": "s", "destination": "t",
                                      "volume": 0}})",
      "{" + topo + ", " + flow + R"(, "flows": [{"path": ["s", "t"],
                                                 "remaining": 1}]})",
      "{" + topo + ", " + flow + R"(, "flows": [{"path": ["s", "q"],
                                                 "remaining": 1}]})",
      "{" + topo + ", " + flow + R"(, "flows": [{"path": ["s", "a"]}]})",
      "{" + topo + ", " + flow + R"(, "candidate": ["s", "a"]})",
  };
  for (const std::string& text : bad) {
    EXPECT_THROW(parse_snapshot(json::parse(text)), Error) << text;
  }
  Snapshot ok = parse_snapshot(json::parse("{" + topo + ", " + flow + "}"));
  EXPECT_FALSE(ok.candidate.has_value());
}

}  // namespace
}  // namespace bwr
