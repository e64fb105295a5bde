#include "bwr/snapshot.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

#include "bwr/error.h"
#include "bwr/topology.h"

namespace bwr {
namespace {

using nlohmann::json;

NodeId node_ref(const NetworkGraph& graph, const json& value,
                const std::string& where) {
  std::string name;
  if (value.is_string()) {
    name = value.get<std::string>();
  } else if (value.is_number_unsigned()) {
    name = std::to_string(value.get<std::uint64_t>());
  } else {
    throw ConfigError(where + ": node reference must be a name");
  }
  auto id = graph.find_node(name);
  if (!id) throw ConfigError(where + ": unknown node \"" + name + "\"");
  return *id;
}

Path path_ref(const NetworkGraph& graph, const json& value,
              const std::string& where) {
  if (!value.is_array() || value.size() < 2) {
    throw ConfigError(where + ": path must list at least two nodes");
  }
  std::vector<NodeId> nodes;
  for (const json& n : value) nodes.push_back(node_ref(graph, n, where));
  try {
    return Path::from_nodes(graph, nodes);
  } catch (const Error& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

double positive(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key) || !obj[key].is_number()) {
    throw ConfigError(where + ": missing number \"" + key + "\"");
  }
  double v = obj[key].get<double>();
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ConfigError(where + ": \"" + key + "\" must be positive");
  }
  return v;
}

}  // namespace

NetworkState Snapshot::state() const {
  NetworkState s(graph);
  for (const Flow& f : flows) s.add(f);
  return s;
}

Snapshot parse_snapshot(const json& doc,
                        const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw ConfigError("snapshot must be a JSON object");
  if (!doc.contains("topology")) {
    throw ConfigError("snapshot needs a \"topology\"");
  }
  Snapshot snap;
  const json& topo = doc["topology"];
  if (topo.is_string()) {
    std::string ref = topo.get<std::string>();
    if (!is_builtin_topology(ref)) {
      std::filesystem::path p(ref);
      if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
      ref = p.string();
    }
    snap.graph = resolve_topology(ref);
  } else {
    snap.graph = load_topology(topo);
  }

  if (doc.contains("flows")) {
    if (!doc["flows"].is_array()) {
      throw ConfigError("snapshot \"flows\" must be an array");
    }
    FlowId position = 0;
    for (const json& f : doc["flows"]) {
      const std::string where = "flow " + std::to_string(position);
      if (!f.is_object()) throw ConfigError(where + ": not an object");
      Flow flow;
      flow.id = f.contains("id") ? f["id"].get<FlowId>() : position;
      Path path = path_ref(snap.graph, f.value("path", json()), where);
      flow.source = path.source();
      flow.destination = path.destination();
      flow.remaining_volume = positive(f, "remaining", where);
      flow.total_volume = f.contains("total") ? positive(f, "total", where)
                                              : flow.remaining_volume;
      flow.arrival_time = f.value("arrival", 0.0);
      flow.path = std::move(path);
      snap.flows.push_back(std::move(flow));
      ++position;
    }
  }

  if (!doc.contains("new_flow") || !doc["new_flow"].is_object()) {
    throw ConfigError("snapshot needs a \"new_flow\" object");
  }
  const json& nf = doc["new_flow"];
  snap.new_flow.source = node_ref(snap.graph, nf.value("source", json()),
                                  "new_flow source");
  snap.new_flow.destination = node_ref(
      snap.graph, nf.value("destination", json()), "new_flow destination");
  snap.new_flow.total_volume = positive(nf, "volume", "new_flow");
  snap.new_flow.remaining_volume = snap.new_flow.total_volume;
  snap.new_flow.arrival_time = nf.value("arrival", 0.0);
  FlowId next = 0;
  for (const Flow& f : snap.flows) next = std::max<FlowId>(next, f.id + 1);
  snap.new_flow.id = next;
  if (snap.new_flow.source == snap.new_flow.destination) {
    throw ConfigError("new_flow source equals destination");
  }

  if (doc.contains("candidate")) {
    snap.candidate = path_ref(snap.graph, doc["candidate"], "candidate");
    if (snap.candidate->source() != snap.new_flow.source ||
        snap.candidate->destination() != snap.new_flow.destination) {
      throw ConfigError("candidate does not connect the new flow's endpoints");
    }
  }
  // Validates ids and paths once up front.
  snap.state();
  return snap;
}

Snapshot load_snapshot_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open " + file.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ConfigError(file.string() + ": " + e.what());
  }
  return parse_snapshot(doc, file.parent_path());
}

json path_to_json(const NetworkGraph& graph, const Path& path) {
  json out = json::array();
  for (NodeId n : path.nodes()) out.push_back(graph.name(n));
  return out;
}

}  // namespace bwr
