#ifndef BWR_SRC_PATH_SEARCH_H
#define BWR_SRC_PATH_SEARCH_H

#include <functional>
#include <optional>
#include <span>

#include "bwr/graph.h"

namespace bwr::detail {

// Dijkstra over strictly positive additive edge weights with labels ordered
// by (distance, hops, node sequence). The composite order is preserved by
// path extension, so the label-setting search returns the tie-break winner.
// Returns nullopt when t is unreachable.
std::optional<Path> shortest_path(const NetworkGraph& graph, NodeId s,
                                  NodeId t, std::span<const double> weights);

// Minimum-hop path using only edges where allowed(e) is true; among
// minimum-hop paths the lexicographically smallest node sequence.
std::optional<Path> min_hop_path(const NetworkGraph& graph, NodeId s,
                                 NodeId t,
                                 const std::function<bool(EdgeId)>& allowed);

}  // namespace bwr::detail

#endif  // BWR_SRC_PATH_SEARCH_H
