// Command-line front end: route, simulate, experiment, oracle, validate.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "bwr/error.h"
#include "bwr/experiment.h"
#include "bwr/routing.h"
#include "bwr/scheduling.h"
#include "bwr/snapshot.h"
#include "bwr/topology.h"
#include "bwr/traffic.h"
#include "bwr/worst_case.h"
#include "json.hpp"

namespace {

using nlohmann::json;

struct Options {
  std::string config;
  std::string snapshot;
  std::string out;
  std::string router;
  std::string policy;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
  std::optional<std::size_t> repetitions;
  std::size_t max_conflicts = 8;
  std::string histogram;
  bool no_timing = false;
  std::string topology_file;
  std::string cdf_file;
};

bwr::ScenarioConfig scenario(const Options& opt) {
  bwr::ScenarioConfig config;
  if (!opt.config.empty()) config = bwr::load_config_file(opt.config);
  if (!opt.router.empty()) config.routers = {bwr::parse_router(opt.router)};
  if (!opt.policy.empty()) config.policies = {bwr::parse_policy(opt.policy)};
  if (opt.seed) config.base_seed = *opt.seed;
  if (opt.threads) config.threads = *opt.threads;
  if (opt.repetitions) config.repetitions = *opt.repetitions;
  if (opt.no_timing) config.record_router_time = false;
  bwr::validate_config(config);
  return config;
}

int run_route(const Options& opt) {
  const bwr::Snapshot snap = bwr::load_snapshot_file(opt.snapshot);
  const bwr::NetworkState state = snap.state();
  const auto kind = bwr::parse_router(opt.router.empty() ? "bwrhf" : opt.router);
  const auto policy =
      bwr::parse_policy(opt.policy.empty() ? "fair" : opt.policy);
  const bwr::RateAllocation rates = bwr::allocate(policy, state);
  const bwr::RouteResult r =
      bwr::route(kind, bwr::RouteRequest{snap.new_flow, state, &rates});
  json out{
      {"router", bwr::router_name(kind)},
      {"path", bwr::path_to_json(snap.graph, r.path)},
      {"hops", r.path.hop_count()},
      {"cost", r.cost},
      {"paths_examined", r.paths_examined},
      {"elapsed_micros", r.elapsed.count() / 1000.0},
      {"bwrh_cost", bwr::bwrh_cost(r.path, state, snap.new_flow.total_volume)},
      {"bwrhf_cost",
       bwr::bwrhf_cost(r.path, state, snap.new_flow.total_volume)},
  };
  std::cout << out.dump(2) << "\n";
  return 0;
}

int run_simulate(Options opt) {
  opt.repetitions = 1;
  const bwr::ScenarioConfig config = scenario(opt);
  if (config.routers.size() != 1 || config.policies.size() != 1) {
    throw bwr::ConfigError(
        "simulate runs one router and one policy; pass --router and --policy");
  }
  const bwr::ExperimentResult result = bwr::run_experiment(config);
  if (opt.out.empty()) {
    bwr::write_flows_csv(std::cout, result.flows);
  } else {
    bwr::write_experiment(opt.out, result);
  }
  const bwr::RunMetrics& m = result.runs.front();
  std::cerr << bwr::router_name(m.router) << "/" << bwr::policy_name(m.policy)
            << ": " << m.flow_count << " flows, mean fct "
            << bwr::format_double(m.mean_fct) << ", p99 "
            << bwr::format_double(m.p99_fct) << "\n";
  return 0;
}

int run_experiment_cmd(const Options& opt) {
  const bwr::ScenarioConfig config = scenario(opt);
  const bwr::ExperimentResult result = bwr::run_experiment(config);
  const std::string dir = opt.out.empty() ? "results" : opt.out;
  bwr::write_experiment(dir, result);
  std::cerr << result.runs.size() << " runs, " << result.flows.size()
            << " flow rows written to " << dir << "\n";
  return 0;
}

int run_oracle(const Options& opt) {
  const bwr::Snapshot snap = bwr::load_snapshot_file(opt.snapshot);
  const bwr::NetworkState state = snap.state();
  std::optional<bwr::Path> candidate = snap.candidate;
  if (!candidate) {
    // No candidate given: judge the path BWRH would pick.
    candidate = bwr::route_bwrh({snap.new_flow, state, nullptr}).path;
  }
  bwr::WorstCaseOptions wc;
  wc.max_conflicts = opt.max_conflicts;
  wc.keep_all = !opt.histogram.empty();
  const bwr::WorstCaseResult r = bwr::worst_case_exact(
      state, *candidate, snap.new_flow.total_volume, wc);

  json witness = json::array();
  for (bwr::FlowId id : r.witness_order) witness.push_back(id);
  json out{
      {"candidate", bwr::path_to_json(snap.graph, *candidate)},
      {"worst_time", r.worst_time},
      {"witness_order", witness},
      {"bwrh_bound", r.bwrh_bound},
      {"bwrhf_bound", r.bwrhf_bound},
      {"permutations", r.permutations},
  };
  std::cout << out.dump(2) << "\n";

  if (!opt.histogram.empty()) {
    std::ofstream h(opt.histogram, std::ios::binary);
    if (!h) throw bwr::Error("cannot write " + opt.histogram);
    h << "permutation,completion_time\n";
    for (std::size_t i = 0; i < r.per_permutation.size(); ++i) {
      h << i << ',' << bwr::format_double(r.per_permutation[i]) << '\n';
    }
  }
  return 0;
}

int run_validate(const Options& opt) {
  int checked = 0;
  if (!opt.topology_file.empty()) {
    const bwr::NetworkGraph g = bwr::resolve_topology(opt.topology_file);
    std::cout << opt.topology_file << ": " << g.node_count() << " nodes, "
              << g.edge_count() << " directed edges\n";
    ++checked;
  }
  if (!opt.cdf_file.empty()) {
    const bwr::CdfTable t = bwr::load_cdf_csv(opt.cdf_file);
    std::cout << opt.cdf_file << ": " << t.rows().size() << " rows\n";
    ++checked;
  }
  if (!opt.config.empty()) {
    const bwr::ScenarioConfig c = bwr::load_config_file(opt.config);
    bwr::resolve_topology(c.topology);
    std::cout << opt.config << ": " << c.repetitions << " repetitions x "
              << c.routers.size() << " routers x " << c.policies.size()
              << " policies\n";
    ++checked;
  }
  if (!opt.snapshot.empty()) {
    const bwr::Snapshot s = bwr::load_snapshot_file(opt.snapshot);
    std::cout << opt.snapshot << ": " << s.flows.size() << " active flows\n";
    ++checked;
  }
  if (checked == 0) {
    throw bwr::ConfigError(
        "nothing to validate; pass --topology, --cdf, --config or --snapshot");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Flow routing heuristics and fluid simulator for WAN transfers"};
  app.require_subcommand(1);
  Options opt;

  auto* route = app.add_subcommand("route", "Route one flow on a snapshot");
  route->add_option("--snapshot", opt.snapshot, "State snapshot (JSON)")
      ->required();
  route->add_option("--router", opt.router, "bwrh, bwrhf, inv-cap, "
                                            "min-max-util, shortest-widest");
  route->add_option("--policy", opt.policy,
                    "Policy for the rate view: fcfs, srpt, fair");

  auto* sim = app.add_subcommand("simulate", "Run a single simulation");
  sim->add_option("--config", opt.config, "Scenario config (JSON)");
  sim->add_option("--router", opt.router, "Router name");
  sim->add_option("--policy", opt.policy, "Scheduling policy");
  sim->add_option("--seed", opt.seed, "Base seed override");
  sim->add_option("--out", opt.out, "Output directory (default: stdout)");
  sim->add_flag("--no-timing", opt.no_timing, "Write 0 for router time");

  auto* exp = app.add_subcommand("experiment", "Run a full config sweep");
  exp->add_option("--config", opt.config, "Scenario config (JSON)")
      ->required();
  exp->add_option("--seed", opt.seed, "Base seed override");
  exp->add_option("--out", opt.out, "Output directory (default: results)");
  exp->add_option("--router", opt.router, "Restrict to one router");
  exp->add_option("--policy", opt.policy, "Restrict to one policy");
  exp->add_option("--threads", opt.threads, "Worker threads (0 = all cores)");
  exp->add_option("--repetitions", opt.repetitions, "Repetition override");
  exp->add_flag("--no-timing", opt.no_timing, "Write 0 for router time");

  auto* oracle = app.add_subcommand("oracle", "Exact worst-case check");
  oracle->add_option("--snapshot", opt.snapshot, "State snapshot (JSON)")
      ->required();
  oracle->add_option("--max-conflicts", opt.max_conflicts,
                     "Largest conflict set to enumerate");
  oracle->add_option("--histogram", opt.histogram,
                     "Write per-permutation completion times to this CSV");

  auto* validate = app.add_subcommand("validate", "Lint input files");
  validate->add_option("--topology", opt.topology_file, "Topology document");
  validate->add_option("--cdf", opt.cdf_file, "Flow-size CDF table");
  validate->add_option("--config", opt.config, "Scenario config");
  validate->add_option("--snapshot", opt.snapshot, "State snapshot");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*route) return run_route(opt);
    if (*sim) return run_simulate(opt);
    if (*exp) return run_experiment_cmd(opt);
    if (*oracle) return run_oracle(opt);
    if (*validate) return run_validate(opt);
  } catch (const bwr::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
