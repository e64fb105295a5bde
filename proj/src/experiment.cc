#include "bwr/experiment.h"

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <ostream>
#include <thread>

#include "bwr/error.h"
#include "bwr/random.h"
#include "bwr/topology.h"

namespace bwr {

std::uint64_t repetition_seed(std::uint64_t base_seed, std::size_t repetition) {
  return derive_seed(base_seed, repetition);
}

double nearest_rank(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw Error("percentile of an empty sample");
  auto rank = static_cast<std::size_t>(std::ceil(q * sorted.size() - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

RunMetrics summarize_run(std::span<const FlowRecord> records) {
  RunMetrics m;
  m.flow_count = records.size();
  if (records.empty()) return m;
  std::vector<double> fct;
  fct.reserve(records.size());
  double elapsed_sum = 0.0;
  for (const FlowRecord& r : records) {
    fct.push_back(r.completion_time);
    elapsed_sum += r.router_elapsed_micros;
    m.max_router_elapsed_micros =
        std::max(m.max_router_elapsed_micros, r.router_elapsed_micros);
  }
  m.mean_fct = sample_mean(fct);
  std::sort(fct.begin(), fct.end());
  m.p99_fct = nearest_rank(fct, 0.99);
  m.max_fct = fct.back();
  m.mean_router_elapsed_micros = elapsed_sum / records.size();
  return m;
}

std::uint64_t input_digest(const NetworkGraph& graph,
                           std::span<const Flow> arrivals) {
  // FNV-1a over the bit patterns of every input value.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xff;
      h *= 0x100000001b3ULL;
    }
  };
  for (const DirectedEdge& e : graph.edges()) {
    feed(e.tail);
    feed(e.head);
    feed(std::bit_cast<std::uint64_t>(e.capacity));
  }
  for (const Flow& f : arrivals) {
    feed(f.id);
    feed(f.source);
    feed(f.destination);
    feed(std::bit_cast<std::uint64_t>(f.arrival_time));
    feed(std::bit_cast<std::uint64_t>(f.total_volume));
  }
  return h;
}

namespace {

struct Repetition {
  NetworkGraph graph;
  std::vector<Flow> arrivals;
  std::uint64_t seed = 0;
  std::uint64_t digest = 0;
};

struct Cell {
  std::size_t repetition = 0;
  std::size_t router_index = 0;
  std::size_t policy_index = 0;
};

struct CellOutput {
  std::vector<FlowRecord> records;
  RunMetrics metrics;
};

// Runs job(i) for i in [0, count) on up to `threads` workers. The first
// exception is rethrown after all workers stop.
template <typename Job>
void parallel_for(std::size_t count, std::size_t threads, Job job) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  std::vector<std::thread> workers;
  for (std::size_t w = 0; w < threads; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          job(i);
        } catch (...) {
          std::lock_guard lock(failure_mu);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

ExperimentResult run_experiment(const ScenarioConfig& config) {
  validate_config(config);
  const NetworkGraph base = resolve_topology(config.topology);
  const std::string pattern = pattern_name(config.pattern);
  const std::string topology =
      is_builtin_topology(config.topology)
          ? config.topology
          : std::filesystem::path(config.topology).stem().string();

  std::vector<Repetition> reps(config.repetitions);
  for (std::size_t r = 0; r < config.repetitions; ++r) {
    Repetition& rep = reps[r];
    rep.seed = repetition_seed(config.base_seed, r);
    rep.graph = randomize_capacities(
        base, config.capacity_low, config.capacity_high,
        derive_seed(rep.seed, 0x636170),  // capacity stream
        config.capacity_mode == CapacityMode::kRandom
            ? CapacityFill::kAll
            : CapacityFill::kUndeclaredOnly);
    rep.arrivals = generate_arrivals(config.pattern, rep.graph,
                                     derive_seed(rep.seed, 0x747266));
    rep.digest = input_digest(rep.graph, rep.arrivals);
  }

  std::vector<Cell> cells;
  for (std::size_t r = 0; r < config.repetitions; ++r) {
    for (std::size_t ri = 0; ri < config.routers.size(); ++ri) {
      for (std::size_t pi = 0; pi < config.policies.size(); ++pi) {
        cells.push_back({r, ri, pi});
      }
    }
  }

  std::vector<CellOutput> outputs(cells.size());
  parallel_for(cells.size(), config.threads, [&](std::size_t i) {
    const Cell& cell = cells[i];
    const Repetition& rep = reps[cell.repetition];
    SimulationOptions options;
    options.record_router_time = config.record_router_time;
    CellOutput& out = outputs[i];
    out.records =
        simulate(rep.graph, rep.arrivals, config.routers[cell.router_index],
                 config.policies[cell.policy_index], options);
    out.metrics = summarize_run(out.records);
    out.metrics.run_id = cell.repetition;
    out.metrics.router = config.routers[cell.router_index];
    out.metrics.policy = config.policies[cell.policy_index];
    out.metrics.pattern = pattern;
    out.metrics.topology = topology;
    out.metrics.seed = rep.seed;
    out.metrics.input_hash = rep.digest;
  });

  // Cells were laid out in (repetition, router, policy) order, so the
  // output order is already deterministic.
  ExperimentResult result;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    for (FlowRecord& rec : outputs[i].records) {
      result.flows.push_back({cells[i].repetition, outputs[i].metrics.router,
                              outputs[i].metrics.policy, std::move(rec)});
    }
    result.runs.push_back(std::move(outputs[i].metrics));
  }
  return result;
}

double sample_mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) / values.size();
}

double sample_stddev(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  const double mean = sample_mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / (values.size() - 1));
}

double relative_difference(double s_bwrhf, double s_bwrh) {
  return (s_bwrhf - s_bwrh) / s_bwrhf;
}

std::vector<SummaryRow> aggregate(std::span<const RunMetrics> metrics) {
  if (metrics.empty()) return {};

  struct Group {
    SummaryRow row;
    std::vector<double> mean, p99, max;
  };
  std::vector<Group> groups;
  auto find_group = [&](const RunMetrics& m) -> Group& {
    for (Group& g : groups) {
      if (g.row.router == m.router && g.row.policy == m.policy &&
          g.row.pattern == m.pattern && g.row.topology == m.topology) {
        return g;
      }
    }
    Group g;
    g.row.router = m.router;
    g.row.policy = m.policy;
    g.row.pattern = m.pattern;
    g.row.topology = m.topology;
    groups.push_back(std::move(g));
    return groups.back();
  };
  for (const RunMetrics& m : metrics) {
    Group& g = find_group(m);
    g.mean.push_back(m.mean_fct);
    g.p99.push_back(m.p99_fct);
    g.max.push_back(m.max_fct);
  }

  RouterKind reference = metrics.front().router;
  for (const RunMetrics& m : metrics) {
    if (m.router == RouterKind::kBwrhf) reference = RouterKind::kBwrhf;
  }

  for (Group& g : groups) {
    SummaryRow& row = g.row;
    row.runs = g.mean.size();
    row.mean_fct_avg = sample_mean(g.mean);
    row.mean_fct_std = sample_stddev(g.mean);
    row.p99_fct_avg = sample_mean(g.p99);
    row.p99_fct_std = sample_stddev(g.p99);
    row.max_fct_avg = sample_mean(g.max);
    row.max_fct_std = sample_stddev(g.max);
    row.reference = reference;
  }
  for (Group& g : groups) {
    for (const Group& ref : groups) {
      if (ref.row.router == reference && ref.row.policy == g.row.policy &&
          ref.row.pattern == g.row.pattern &&
          ref.row.topology == g.row.topology) {
        g.row.mean_ratio_to_reference = g.row.mean_fct_avg / ref.row.mean_fct_avg;
        g.row.p99_ratio_to_reference = g.row.p99_fct_avg / ref.row.p99_fct_avg;
      }
    }
  }

  std::vector<SummaryRow> out;
  for (Group& g : groups) out.push_back(std::move(g.row));
  return out;
}

std::string format_double(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, end);
}

void write_flows_csv(std::ostream& out, std::span<const FlowRow> rows) {
  out << "run_id,flow_id,source,destination,total_volume,arrival_time,"
         "finish_time,completion_time,hop_count,router,policy,"
         "router_elapsed_micros\n";
  for (const FlowRow& row : rows) {
    const FlowRecord& r = row.record;
    out << row.run_id << ',' << r.flow_id << ',' << r.source << ','
        << r.destination << ',' << format_double(r.total_volume) << ','
        << format_double(r.arrival_time) << ','
        << format_double(r.finish_time) << ','
        << format_double(r.completion_time) << ',' << r.hop_count << ','
        << router_name(row.router) << ',' << policy_name(row.policy) << ','
        << format_double(r.router_elapsed_micros) << '\n';
  }
}

void write_runs_csv(std::ostream& out, std::span<const RunMetrics> runs) {
  out << "run_id,router,policy,pattern,topology,seed,flow_count,mean_fct,"
         "p99_fct,max_fct,mean_router_elapsed,max_router_elapsed,"
         "input_hash\n";
  for (const RunMetrics& m : runs) {
    char hash[17];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(m.input_hash));
    out << m.run_id << ',' << router_name(m.router) << ','
        << policy_name(m.policy) << ',' << m.pattern << ',' << m.topology
        << ',' << m.seed << ',' << m.flow_count << ','
        << format_double(m.mean_fct) << ',' << format_double(m.p99_fct) << ','
        << format_double(m.max_fct) << ','
        << format_double(m.mean_router_elapsed_micros) << ','
        << format_double(m.max_router_elapsed_micros) << ',' << hash << '\n';
  }
}

void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows) {
  out << "router,policy,pattern,topology,runs,mean_fct_avg,mean_fct_std,"
         "p99_fct_avg,p99_fct_std,max_fct_avg,max_fct_std,reference_router,"
         "mean_ratio_to_reference,p99_ratio_to_reference\n";
  for (const SummaryRow& r : rows) {
    out << router_name(r.router) << ',' << policy_name(r.policy) << ','
        << r.pattern << ',' << r.topology << ',' << r.runs << ','
        << format_double(r.mean_fct_avg) << ','
        << format_double(r.mean_fct_std) << ','
        << format_double(r.p99_fct_avg) << ','
        << format_double(r.p99_fct_std) << ','
        << format_double(r.max_fct_avg) << ','
        << format_double(r.max_fct_std) << ',' << router_name(r.reference)
        << ',' << format_double(r.mean_ratio_to_reference) << ','
        << format_double(r.p99_ratio_to_reference) << '\n';
  }
}

void write_experiment(const std::filesystem::path& dir,
                      const ExperimentResult& result) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw Error("cannot write " + (dir / name).string());
    return out;
  };
  {
    auto out = open("flows.csv");
    write_flows_csv(out, result.flows);
  }
  {
    auto out = open("runs.csv");
    write_runs_csv(out, result.runs);
  }
  {
    auto out = open("summary.csv");
    write_summary_csv(out, aggregate(result.runs));
  }
}

}  // namespace bwr
