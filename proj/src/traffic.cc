#include "bwr/traffic.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include "bwr/error.h"

namespace bwr {

CdfTable::CdfTable(std::vector<CdfRow> rows) : rows_(std::move(rows)) {
  if (rows_.empty()) throw ConfigError("CDF table is empty");
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const CdfRow& r = rows_[i];
    if (!std::isfinite(r.size) || !std::isfinite(r.cumulative_probability)) {
      throw ConfigError("CDF row " + std::to_string(i) + " is not finite");
    }
    if (r.cumulative_probability < 0.0 || r.cumulative_probability > 1.0) {
      throw ConfigError("CDF row " + std::to_string(i) +
                        ": probability outside [0, 1]");
    }
    if (i > 0 && !(r.size > rows_[i - 1].size)) {
      throw ConfigError("CDF row " + std::to_string(i) +
                        ": sizes must be strictly increasing");
    }
    if (i > 0 && r.cumulative_probability < rows_[i - 1].cumulative_probability) {
      throw ConfigError("CDF row " + std::to_string(i) +
                        ": probabilities must be non-decreasing");
    }
  }
  if (rows_.back().cumulative_probability != 1.0) {
    throw ConfigError("CDF table must end at probability 1");
  }
}

double CdfTable::quantile(double u) const {
  if (u <= rows_.front().cumulative_probability) return rows_.front().size;
  auto it = std::lower_bound(
      rows_.begin(), rows_.end(), u,
      [](const CdfRow& r, double p) { return r.cumulative_probability < p; });
  if (it == rows_.end()) return rows_.back().size;
  const CdfRow& hi = *it;
  const CdfRow& lo = *(it - 1);
  const double span = hi.cumulative_probability - lo.cumulative_probability;
  if (span <= 0.0) return hi.size;
  const double w = (u - lo.cumulative_probability) / span;
  return lo.size + w * (hi.size - lo.size);
}

double CdfTable::cdf(double x) const {
  if (x < rows_.front().size) return 0.0;
  if (x >= rows_.back().size) return 1.0;
  auto it = std::upper_bound(
      rows_.begin(), rows_.end(), x,
      [](double v, const CdfRow& r) { return v < r.size; });
  const CdfRow& hi = *it;
  const CdfRow& lo = *(it - 1);
  const double w = (x - lo.size) / (hi.size - lo.size);
  return lo.cumulative_probability +
         w * (hi.cumulative_probability - lo.cumulative_probability);
}

namespace {

double parse_number(std::string_view field, std::size_t line) {
  while (!field.empty() && std::isspace(static_cast<unsigned char>(field.front()))) {
    field.remove_prefix(1);
  }
  while (!field.empty() && std::isspace(static_cast<unsigned char>(field.back()))) {
    field.remove_suffix(1);
  }
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(),
                                   value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw ConfigError("CDF line " + std::to_string(line) + ": bad number \"" +
                      std::string(field) + "\"");
  }
  return value;
}

}  // namespace

CdfTable parse_cdf_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t number = 0;
  bool header = true;
  std::vector<CdfRow> rows;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (header) {
      header = false;
      continue;
    }
    auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      throw ConfigError("CDF line " + std::to_string(number) +
                        ": expected two columns");
    }
    std::string_view view(line);
    rows.push_back({parse_number(view.substr(0, comma), number),
                    parse_number(view.substr(comma + 1), number)});
  }
  if (header) throw ConfigError("CDF file has no header row");
  return CdfTable(std::move(rows));
}

CdfTable load_cdf_csv(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open " + file.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_cdf_csv(text.str());
}

double BoundedPareto::mean_for_shape(double shape, double min, double max) {
  if (std::abs(shape - 1.0) < 1e-12) {
    return max * min / (max - min) * std::log(max / min);
  }
  const double norm = 1.0 - std::pow(min / max, shape);
  return std::pow(min, shape) / norm * (shape / (shape - 1.0)) *
         (std::pow(min, 1.0 - shape) - std::pow(max, 1.0 - shape));
}

BoundedPareto BoundedPareto::with_mean(double mean, double min, double max) {
  if (!(min > 0.0) || !(min < max)) {
    throw ConfigError("bounded Pareto needs 0 < min < max");
  }
  if (!(mean > min) || !(mean < max)) {
    throw ConfigError("bounded Pareto mean must lie strictly between min and "
                      "max");
  }
  // The mean decreases monotonically with the shape.
  double lo = 0.05;
  double hi = 20.0;
  if (mean_for_shape(lo, min, max) < mean || mean_for_shape(hi, min, max) > mean) {
    throw ConfigError("no bounded Pareto shape in (0.05, 20) has mean " +
                      std::to_string(mean));
  }
  double shape = 0.5 * (lo + hi);
  for (int i = 0; i < 200; ++i) {
    shape = 0.5 * (lo + hi);
    const double m = mean_for_shape(shape, min, max);
    if (std::abs(m - mean) <= 1e-9) break;
    if (m > mean) {
      lo = shape;
    } else {
      hi = shape;
    }
  }
  return BoundedPareto(shape, min, max);
}

double BoundedPareto::sample(Rng& rng) const {
  const double u = uniform01(rng);
  const double tail = 1.0 - std::pow(min_ / max_, shape_);
  const double x = min_ * std::pow(1.0 - u * tail, -1.0 / shape_);
  return std::clamp(x, min_, max_);
}

double sample_bounded_pareto(double mean, double min, double max, Rng& rng) {
  return BoundedPareto::with_mean(mean, min, max).sample(rng);
}

double sample_empirical(const CdfTable& table, Rng& rng) {
  return table.quantile(uniform01(rng));
}

double sample_light_tailed(double mean, double max, Rng& rng) {
  for (;;) {
    const double x = -mean * std::log1p(-uniform01(rng));
    if (x > 0.0 && x <= max) return x;
  }
}

std::string pattern_name(const TrafficPattern& pattern) {
  struct Name {
    std::string operator()(const LightTailed&) const { return "light-tailed"; }
    std::string operator()(const HeavyTailed&) const { return "heavy-tailed"; }
    std::string operator()(const Empirical&) const { return "empirical"; }
  };
  return std::visit(Name{}, pattern.sizes);
}

void validate_pattern(const TrafficPattern& pattern) {
  if (!(pattern.arrival_rate > 0.0) || !std::isfinite(pattern.arrival_rate)) {
    throw ConfigError("arrival rate must be positive");
  }
  if (pattern.flow_count == 0) throw ConfigError("flow count must be positive");
  if (const auto* light = std::get_if<LightTailed>(&pattern.sizes)) {
    if (!(light->mean > 0.0) || !(light->max > 0.0)) {
      throw ConfigError("light-tailed mean and max must be positive");
    }
  } else if (const auto* heavy = std::get_if<HeavyTailed>(&pattern.sizes)) {
    BoundedPareto::with_mean(heavy->mean, heavy->min, heavy->max);
  } else {
    const auto& empirical = std::get<Empirical>(pattern.sizes);
    if (!(empirical.table.rows().back().size > 0.0)) {
      throw ConfigError("empirical table has no positive sizes");
    }
  }
}

std::vector<Flow> generate_arrivals(const TrafficPattern& pattern,
                                    const NetworkGraph& graph,
                                    std::uint64_t seed) {
  validate_pattern(pattern);
  const std::size_t n = graph.node_count();
  if (n < 2) throw ConfigError("traffic needs a graph with >= 2 nodes");

  // Separate streams keep sizes identical when only the rate changes.
  Rng gaps(derive_seed(seed, 1));
  Rng sizes(derive_seed(seed, 2));
  Rng pairs(derive_seed(seed, 3));

  std::optional<BoundedPareto> pareto;
  if (const auto* heavy = std::get_if<HeavyTailed>(&pattern.sizes)) {
    pareto = BoundedPareto::with_mean(heavy->mean, heavy->min, heavy->max);
  }
  auto draw_size = [&]() -> double {
    if (const auto* light = std::get_if<LightTailed>(&pattern.sizes)) {
      return sample_light_tailed(light->mean, light->max, sizes);
    }
    if (pareto) return pareto->sample(sizes);
    const auto& table = std::get<Empirical>(pattern.sizes).table;
    for (;;) {
      const double x = sample_empirical(table, sizes);
      if (x > 0.0) return x;
    }
  };

  std::vector<Flow> out;
  out.reserve(pattern.flow_count);
  double t = 0.0;
  for (std::size_t i = 0; i < pattern.flow_count; ++i) {
    double gap = 0.0;
    while (!(gap > 0.0)) {
      gap = -std::log1p(-uniform01(gaps)) / pattern.arrival_rate;
    }
    t += gap;
    Flow f;
    f.id = static_cast<FlowId>(i);
    f.arrival_time = t;
    f.total_volume = draw_size();
    f.remaining_volume = f.total_volume;
    f.source = static_cast<NodeId>(uniform_index(pairs, n));
    auto d = static_cast<NodeId>(uniform_index(pairs, n - 1));
    f.destination = d >= f.source ? d + 1 : d;
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace bwr
