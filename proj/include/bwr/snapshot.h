#ifndef BWR_SNAPSHOT_H
#define BWR_SNAPSHOT_H

#include <filesystem>
#include <optional>
#include <vector>

#include "bwr/flow.h"
#include "bwr/graph.h"
#include "json.hpp"

namespace bwr {

// A frozen network state for one-shot route and oracle queries:
//
//   {
//     "topology": <topology document or built-in name or file path>,
//     "flows": [{"id": 1, "path": ["s", "a"], "remaining": 10}, ...],
//     "new_flow": {"source": "s", "destination": "t", "volume": 8},
//     "candidate": ["s", "a", "t"]        (optional)
//   }
//
// Flow ids default to their position in the list. Missing capacities in an
// inline topology default to 1.
struct Snapshot {
  NetworkGraph graph;
  std::vector<Flow> flows;
  Flow new_flow;
  std::optional<Path> candidate;

  // The returned state refers to `graph`; keep the snapshot alive and
  // unmoved while it is in use.
  NetworkState state() const;
};

// Throws TopologyError or ConfigError naming the offending entry.
Snapshot parse_snapshot(const nlohmann::json& document,
                        const std::filesystem::path& base_dir = {});
Snapshot load_snapshot_file(const std::filesystem::path& file);

// Node names of a path, in order.
nlohmann::json path_to_json(const NetworkGraph& graph, const Path& path);

}  // namespace bwr

#endif  // BWR_SNAPSHOT_H
