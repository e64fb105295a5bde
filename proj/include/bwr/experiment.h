#ifndef BWR_EXPERIMENT_H
#define BWR_EXPERIMENT_H

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bwr/routing.h"
#include "bwr/scheduling.h"
#include "bwr/simulator.h"
#include "bwr/traffic.h"
#include "json.hpp"

namespace bwr {

enum class CapacityMode {
  // Every edge drawn from U[low, high] per repetition.
  kRandom,
  // Capacities from the topology document; undeclared ones drawn.
  kDeclared,
};

struct ScenarioConfig {
  // Built-in sample name or topology file path.
  std::string topology = "gscale";
  CapacityMode capacity_mode = CapacityMode::kRandom;
  double capacity_low = 0.2;
  double capacity_high = 1.0;
  TrafficPattern pattern;
  std::vector<RouterKind> routers{RouterKind::kBwrhf};
  std::vector<SchedulingPolicy> policies{SchedulingPolicy::kMaxMinFair};
  std::size_t repetitions = 1;
  std::uint64_t base_seed = 1;
  bool record_router_time = true;
  // Worker threads for independent cells; 0 picks the hardware count.
  std::size_t threads = 0;
};

// Throws ConfigError. Relative file references (topology, CDF table) are
// resolved against `base_dir`.
ScenarioConfig parse_config(const nlohmann::json& document,
                            const std::filesystem::path& base_dir = {});
ScenarioConfig load_config_file(const std::filesystem::path& file);
void validate_config(const ScenarioConfig& config);

// Seed of repetition `r`: derive_seed(base_seed, r).
std::uint64_t repetition_seed(std::uint64_t base_seed, std::size_t repetition);

struct FlowRow {
  std::size_t run_id = 0;
  RouterKind router = RouterKind::kBwrhf;
  SchedulingPolicy policy = SchedulingPolicy::kMaxMinFair;
  FlowRecord record;
};

struct RunMetrics {
  std::size_t run_id = 0;  // repetition index
  RouterKind router = RouterKind::kBwrhf;
  SchedulingPolicy policy = SchedulingPolicy::kMaxMinFair;
  std::string pattern;
  std::string topology;
  std::uint64_t seed = 0;
  std::size_t flow_count = 0;
  double mean_fct = 0.0;
  double p99_fct = 0.0;
  double max_fct = 0.0;
  double mean_router_elapsed_micros = 0.0;
  double max_router_elapsed_micros = 0.0;
  // Digest of the capacities and arrivals this cell consumed.
  std::uint64_t input_hash = 0;
};

// Mean, nearest-rank p99 and max of the completion times in `records`.
RunMetrics summarize_run(std::span<const FlowRecord> records);

// Nearest-rank percentile of an ascending-sorted sample, q in (0, 1].
double nearest_rank(std::span<const double> sorted, double q);

struct ExperimentResult {
  std::vector<FlowRow> flows;
  std::vector<RunMetrics> runs;
};

// For every repetition: derive the seed, draw capacities and arrivals once,
// then simulate every (router, policy) cell on those identical inputs.
ExperimentResult run_experiment(const ScenarioConfig& config);

// Fingerprint of a cell's inputs (capacities and arrival list).
std::uint64_t input_digest(const NetworkGraph& graph,
                           std::span<const Flow> arrivals);

struct SummaryRow {
  RouterKind router = RouterKind::kBwrhf;
  SchedulingPolicy policy = SchedulingPolicy::kMaxMinFair;
  std::string pattern;
  std::string topology;
  std::size_t runs = 0;
  double mean_fct_avg = 0.0;
  double mean_fct_std = 0.0;
  double p99_fct_avg = 0.0;
  double p99_fct_std = 0.0;
  double max_fct_avg = 0.0;
  double max_fct_std = 0.0;
  RouterKind reference = RouterKind::kBwrhf;
  // This row's average over the reference router's average, same group.
  double mean_ratio_to_reference = 1.0;
  double p99_ratio_to_reference = 1.0;
};

// Groups by (router, policy, pattern, topology) in order of first
// appearance. Standard deviations are sample (n - 1) deviations, 0 for a
// single run. The reference router is BWRHF when present, else the first
// router seen.
std::vector<SummaryRow> aggregate(std::span<const RunMetrics> metrics);

// (s_bwrhf - s_bwrh) / s_bwrhf. Positive when BWRH did better.
double relative_difference(double s_bwrhf, double s_bwrh);

double sample_mean(std::span<const double> values);
double sample_stddev(std::span<const double> values);

void write_flows_csv(std::ostream& out, std::span<const FlowRow> rows);
void write_runs_csv(std::ostream& out, std::span<const RunMetrics> runs);
void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows);

// Writes flows.csv, runs.csv and summary.csv into `dir` (created if needed).
void write_experiment(const std::filesystem::path& dir,
                      const ExperimentResult& result);

// Shortest decimal that round-trips to the same double.
std::string format_double(double value);

}  // namespace bwr

#endif  // BWR_EXPERIMENT_H
