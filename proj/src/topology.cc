#include "bwr/topology.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <utility>

#include "bwr/error.h"
#include "bwr/random.h"

namespace bwr {
namespace {

using nlohmann::json;

std::optional<double> read_capacity(const json& link, const char* key,
                                    const std::string& label) {
  if (!link.contains(key) || link[key].is_null()) return std::nullopt;
  if (!link[key].is_number()) {
    throw TopologyError("link " + label + ": " + key + " is not a number");
  }
  double value = link[key].get<double>();
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw TopologyError("link " + label + ": non-positive capacity " + key);
  }
  return value;
}

// Node references may be strings or non-negative integers.
std::optional<std::string> node_label(const json& value) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_number_unsigned()) return std::to_string(value.get<std::uint64_t>());
  return std::nullopt;
}

struct Sample {
  std::string_view name;
  std::string_view document;
};

// Twelve sites and nineteen links, shaped after the published GScale
// backbone size. Capacities are left for randomize_capacities.
constexpr std::string_view kGScaleLike = R"({
  "nodes": ["gs01", "gs02", "gs03", "gs04", "gs05", "gs06",
            "gs07", "gs08", "gs09", "gs10", "gs11", "gs12"],
  "links": [
    {"a": "gs01", "b": "gs02"}, {"a": "gs01", "b": "gs03"},
    {"a": "gs02", "b": "gs03"}, {"a": "gs02", "b": "gs04"},
    {"a": "gs03", "b": "gs05"}, {"a": "gs04", "b": "gs05"},
    {"a": "gs04", "b": "gs06"}, {"a": "gs05", "b": "gs07"},
    {"a": "gs05", "b": "gs09"}, {"a": "gs06", "b": "gs07"},
    {"a": "gs06", "b": "gs08"}, {"a": "gs07", "b": "gs08"},
    {"a": "gs07", "b": "gs09"}, {"a": "gs08", "b": "gs10"},
    {"a": "gs08", "b": "gs11"}, {"a": "gs09", "b": "gs10"},
    {"a": "gs09", "b": "gs11"}, {"a": "gs10", "b": "gs12"},
    {"a": "gs11", "b": "gs12"}
  ]
})";

constexpr std::string_view kLine2 = R"({
  "nodes": ["a", "b"],
  "links": [{"a": "a", "b": "b", "cap_ab": 1.0, "cap_ba": 1.0}]
})";

constexpr std::string_view kDiamond = R"({
  "nodes": ["s", "x", "y", "t"],
  "links": [
    {"a": "s", "b": "x", "cap_ab": 1.0, "cap_ba": 1.0},
    {"a": "s", "b": "y", "cap_ab": 0.5, "cap_ba": 0.5},
    {"a": "x", "b": "t", "cap_ab": 1.0, "cap_ba": 1.0},
    {"a": "y", "b": "t", "cap_ab": 0.5, "cap_ba": 0.5}
  ]
})";

constexpr std::array<Sample, 3> kSamples{{
    {"gscale", kGScaleLike},
    {"line2", kLine2},
    {"diamond", kDiamond},
}};

}  // namespace

NetworkGraph load_topology(const json& document) {
  if (!document.is_object()) {
    throw TopologyError("topology document must be an object");
  }
  if (!document.contains("nodes") || !document["nodes"].is_array()) {
    throw TopologyError("topology document needs a \"nodes\" array");
  }
  if (!document.contains("links") || !document["links"].is_array()) {
    throw TopologyError("topology document needs a \"links\" array");
  }

  std::vector<std::string> names;
  for (const json& n : document["nodes"]) {
    auto label = node_label(n);
    if (!label) throw TopologyError("node names must be strings or ids");
    names.push_back(std::move(*label));
  }
  std::sort(names.begin(), names.end());
  if (auto dup = std::adjacent_find(names.begin(), names.end());
      dup != names.end()) {
    throw TopologyError("duplicate node \"" + *dup + "\"");
  }
  std::map<std::string, NodeId> ids;
  for (std::size_t i = 0; i < names.size(); ++i) {
    ids[names[i]] = static_cast<NodeId>(i);
  }

  NetworkGraph graph(names);
  std::set<std::pair<NodeId, NodeId>> seen;
  for (const json& link : document["links"]) {
    std::optional<std::string> ea, eb;
    if (link.is_object() && link.contains("a") && link.contains("b")) {
      ea = node_label(link["a"]);
      eb = node_label(link["b"]);
    }
    if (!ea || !eb) {
      throw TopologyError("link entries need node fields \"a\" and \"b\"");
    }
    const std::string a = *ea;
    const std::string b = *eb;
    const std::string label = a + "-" + b;
    for (const auto* end : {&a, &b}) {
      if (!ids.contains(*end)) {
        throw TopologyError("link " + label + ": unknown node \"" + *end +
                            "\"");
      }
    }
    if (a == b) throw TopologyError("link " + label + ": self-loop");
    const NodeId ia = ids[a];
    const NodeId ib = ids[b];
    if (!seen.insert(std::minmax(ia, ib)).second) {
      throw TopologyError("duplicate link " + label);
    }
    auto cap_ab = read_capacity(link, "cap_ab", label);
    auto cap_ba = read_capacity(link, "cap_ba", label);
    graph.add_edge(ia, ib, cap_ab.value_or(1.0), cap_ab.has_value());
    graph.add_edge(ib, ia, cap_ba.value_or(1.0), cap_ba.has_value());
  }
  return graph;
}

NetworkGraph load_topology_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw TopologyError("cannot open " + file.string());
  json document;
  try {
    in >> document;
  } catch (const json::parse_error& e) {
    throw TopologyError(file.string() + ": " + e.what());
  }
  return load_topology(document);
}

NetworkGraph resolve_topology(const std::string& reference) {
  if (is_builtin_topology(reference)) {
    return load_topology(builtin_topology(reference));
  }
  return load_topology_file(reference);
}

json topology_to_json(const NetworkGraph& graph) {
  json doc;
  doc["nodes"] = json::array();
  for (NodeId n = 0; n < graph.node_count(); ++n) {
    doc["nodes"].push_back(graph.name(n));
  }
  doc["links"] = json::array();
  for (const DirectedEdge& e : graph.edges()) {
    if (e.tail > e.head) continue;
    json link{{"a", graph.name(e.tail)}, {"b", graph.name(e.head)}};
    if (e.declared) link["cap_ab"] = e.capacity;
    if (auto back = graph.find_edge(e.head, e.tail)) {
      if (graph.edge(*back).declared) {
        link["cap_ba"] = graph.edge(*back).capacity;
      }
    }
    doc["links"].push_back(std::move(link));
  }
  return doc;
}

NetworkGraph randomize_capacities(const NetworkGraph& graph, double low,
                                  double high, std::uint64_t seed,
                                  CapacityFill fill) {
  if (!(low > 0.0) || !(high >= low) || !std::isfinite(high)) {
    throw ConfigError("capacity range needs 0 < low <= high");
  }
  NetworkGraph out = graph;
  Rng rng(seed);
  for (const DirectedEdge& e : graph.edges()) {
    // Draw for every edge so the sequence does not depend on which edges
    // are declared.
    double cap = low + (high - low) * uniform01(rng);
    if (fill == CapacityFill::kAll || !e.declared) {
      out.set_capacity(e.id, std::clamp(cap, low, high));
    }
  }
  return out;
}

NetworkGraph random_topology(std::size_t nodes, std::size_t links,
                             std::uint64_t seed, double low, double high) {
  if (nodes < 2) throw ConfigError("random topology needs >= 2 nodes");
  const std::size_t max_links = nodes * (nodes - 1) / 2;
  if (links < nodes - 1 || links > max_links) {
    throw ConfigError("link count must lie in [nodes - 1, nodes*(nodes-1)/2]");
  }
  Rng rng(seed);
  NetworkGraph graph(nodes);
  std::set<std::pair<NodeId, NodeId>> used;
  auto link = [&](NodeId a, NodeId b) {
    double ab = low + (high - low) * uniform01(rng);
    double ba = low + (high - low) * uniform01(rng);
    graph.add_link(a, b, ab, ba);
    used.insert(std::minmax(a, b));
  };
  // Random spanning tree: attach each node to a uniformly chosen earlier one
  // in a shuffled order.
  std::vector<NodeId> order(nodes);
  for (std::size_t i = 0; i < nodes; ++i) order[i] = static_cast<NodeId>(i);
  for (std::size_t i = nodes - 1; i > 0; --i) {
    std::swap(order[i], order[uniform_index(rng, i + 1)]);
  }
  for (std::size_t i = 1; i < nodes; ++i) {
    link(order[i], order[uniform_index(rng, i)]);
  }
  while (used.size() < links) {
    auto a = static_cast<NodeId>(uniform_index(rng, nodes));
    auto b = static_cast<NodeId>(uniform_index(rng, nodes));
    if (a == b || used.contains(std::minmax(a, b))) continue;
    link(a, b);
  }
  return graph;
}

std::vector<std::string> builtin_topology_names() {
  std::vector<std::string> out;
  for (const Sample& s : kSamples) out.emplace_back(s.name);
  return out;
}

bool is_builtin_topology(std::string_view name) {
  return std::any_of(kSamples.begin(), kSamples.end(),
                     [&](const Sample& s) { return s.name == name; });
}

json builtin_topology(std::string_view name) {
  for (const Sample& s : kSamples) {
    if (s.name == name) return json::parse(s.document);
  }
  throw TopologyError("no built-in topology named \"" + std::string(name) +
                      "\"");
}

}  // namespace bwr
