#ifndef BWR_TRAFFIC_H
#define BWR_TRAFFIC_H

#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <string>
#include <variant>
#include <vector>

#include "bwr/flow.h"
#include "bwr/graph.h"
#include "bwr/random.h"

namespace bwr {

struct CdfRow {
  double size = 0.0;
  double cumulative_probability = 0.0;
};

// Empirical flow-size distribution: sizes strictly increasing, probabilities
// non-decreasing in [0, 1], last probability exactly 1.
class CdfTable {
 public:
  // Throws ConfigError when the rows break the invariants above.
  explicit CdfTable(std::vector<CdfRow> rows);

  std::span<const CdfRow> rows() const { return rows_; }

  // Inverse transform for u in [0, 1]: the first row's size for u at or
  // below its probability, otherwise linear interpolation between the
  // bracketing rows.
  double quantile(double u) const;
  // Interpolated CDF; 0 below the first size.
  double cdf(double x) const;

 private:
  std::vector<CdfRow> rows_;
};

// Two-column CSV (size, cumulative_probability) with a header row.
CdfTable load_cdf_csv(const std::filesystem::path& file);
CdfTable parse_cdf_csv(std::string_view text);

// Pareto truncated to [min, max] with its shape chosen so the mean matches.
class BoundedPareto {
 public:
  // Bisection on the shape over (0.05, 20). Throws ConfigError when the mean
  // lies outside (min, max) or is unreachable within that shape range.
  static BoundedPareto with_mean(double mean, double min = 2.0,
                                 double max = 500.0);

  double shape() const { return shape_; }
  double min() const { return min_; }
  double max() const { return max_; }

  // Closed-form mean for a given shape.
  static double mean_for_shape(double shape, double min, double max);
  double sample(Rng& rng) const;

 private:
  BoundedPareto(double shape, double min, double max)
      : shape_(shape), min_(min), max_(max) {}

  double shape_;
  double min_;
  double max_;
};

struct LightTailed {
  double mean = 50.0;
  // Draws above this are redrawn.
  double max = 500.0;
};

struct HeavyTailed {
  double mean = 50.0;
  double min = 2.0;
  double max = 500.0;
};

struct Empirical {
  CdfTable table;
  std::string source;  // label used in reports
};

struct TrafficPattern {
  std::variant<LightTailed, HeavyTailed, Empirical> sizes = LightTailed{};
  double arrival_rate = 1.0;
  std::size_t flow_count = 500;
};

// "light-tailed", "heavy-tailed", "empirical".
std::string pattern_name(const TrafficPattern& pattern);

// Throws ConfigError for non-positive rates, means or counts.
void validate_pattern(const TrafficPattern& pattern);

double sample_bounded_pareto(double mean, double min, double max, Rng& rng);
double sample_empirical(const CdfTable& table, Rng& rng);
// Exponential with the given mean, redrawn until it lies in (0, max].
double sample_light_tailed(double mean, double max, Rng& rng);

// Poisson arrivals (exponential gaps of mean 1/arrival_rate, first arrival
// one gap after 0), sizes per pattern, and uniformly random ordered
// (source, destination) pairs with source != destination. Flow ids are
// 0..flow_count-1 in arrival order.
std::vector<Flow> generate_arrivals(const TrafficPattern& pattern,
                                    const NetworkGraph& graph,
                                    std::uint64_t seed);

}  // namespace bwr

#endif  // BWR_TRAFFIC_H
