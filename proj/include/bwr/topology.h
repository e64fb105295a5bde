#ifndef BWR_TOPOLOGY_H
#define BWR_TOPOLOGY_H

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "bwr/graph.h"
#include "json.hpp"

namespace bwr {

// Builds a graph from a topology document:
//
//   {"nodes": ["a", "b", ...],
//    "links": [{"a": "a", "b": "b", "cap_ab": 1.0, "cap_ba": 0.5}, ...]}
//
// Node ids are assigned in sorted-name order. Every link yields two directed
// edges (a->b, then b->a). Capacities left out of the document default to
// 1.0 and the edge is flagged undeclared so randomize_capacities can fill it.
// Throws TopologyError naming the offending entity.
NetworkGraph load_topology(const nlohmann::json& document);
NetworkGraph load_topology_file(const std::filesystem::path& file);

// Resolves `reference` as a built-in sample name first, then as a file path.
NetworkGraph resolve_topology(const std::string& reference);

// Inverse of load_topology for graphs whose edges come in reverse pairs.
nlohmann::json topology_to_json(const NetworkGraph& graph);

enum class CapacityFill {
  kAll,
  kUndeclaredOnly,
};

// Draws each directed edge's capacity independently from U[low, high] in
// edge-id order. Requires 0 < low <= high; throws ConfigError otherwise.
NetworkGraph randomize_capacities(const NetworkGraph& graph, double low,
                                  double high, std::uint64_t seed,
                                  CapacityFill fill = CapacityFill::kAll);

// Connected random topology: a random spanning tree plus extra distinct
// links up to `links` total, every link bidirectional with U[low, high]
// capacities per direction.
NetworkGraph random_topology(std::size_t nodes, std::size_t links,
                             std::uint64_t seed, double low = 0.2,
                             double high = 1.0);

// Built-in sample documents ("gscale", "line2", "diamond").
std::vector<std::string> builtin_topology_names();
bool is_builtin_topology(std::string_view name);
nlohmann::json builtin_topology(std::string_view name);

}  // namespace bwr

#endif  // BWR_TOPOLOGY_H
