#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>

#include "torograph/graph.hpp"

namespace torograph {

enum class GraphFormat { json, dot };

/// Optional per-edge annotations carried into the serialized graph.
/// Keys are (i, j) with i < j for undirected graphs, (parent, child) for DAGs.
struct EdgeAttr {
  std::optional<double> weight;
  std::optional<double> p_value;
  std::optional<double> stability;
};
using EdgeAttrMap = std::map<std::pair<int, int>, EdgeAttr>;

/// Deterministic serialization: vertices and edges in sorted order. The
/// JSON document follows the fixed schema
///   {"p": int, "labels": [...], "directed": bool,
///    "edges": [{"i", "j", "weight", "p_value", "stability"}]}
/// with 1-based indices; DOT uses numeric node ids with quoted labels.
std::string emit_graph(const UndirectedGraph& g, GraphFormat format,
                       const EdgeAttrMap& attrs = {});
std::string emit_graph(const Dag& g, GraphFormat format,
                       const EdgeAttrMap& attrs = {});

/// Inverse of the JSON emitter. A directed document yields a Dag whose
/// ordering is the topological order induced by the edge set (ties by
/// vertex index); edge sets and labels always round-trip exactly.
std::variant<UndirectedGraph, Dag> parse_graph_json(const std::string& text);

}  // namespace torograph
