#include "torograph/graph_io.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace torograph {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json edge_to_json(int i, int j, const EdgeAttrMap& attrs) {
  ordered_json e;
  e["i"] = i + 1;
  e["j"] = j + 1;
  const auto it = attrs.find({i, j});
  auto put = [&](const char* key, const std::optional<double>& v) {
    if (v.has_value()) {
      e[key] = *v;
    } else {
      e[key] = nullptr;
    }
  };
  const EdgeAttr empty;
  const EdgeAttr& a = it == attrs.end() ? empty : it->second;
  put("weight", a.weight);
  put("p_value", a.p_value);
  put("stability", a.stability);
  return e;
}

std::string emit_json(int p, const std::vector<std::string>& labels, bool directed,
                      const std::vector<std::pair<int, int>>& edges,
                      const EdgeAttrMap& attrs) {
  ordered_json doc;
  doc["p"] = p;
  doc["labels"] = labels;
  doc["directed"] = directed;
  doc["edges"] = ordered_json::array();
  for (const auto& [i, j] : edges) {
    doc["edges"].push_back(edge_to_json(i, j, attrs));
  }
  return doc.dump(2) + "\n";
}

std::string emit_dot(int p, const std::vector<std::string>& labels, bool directed,
                     const std::vector<std::pair<int, int>>& edges) {
  std::ostringstream out;
  out << (directed ? "digraph" : "graph") << " G {\n";
  for (int v = 0; v < p; ++v) {
    out << "  " << (v + 1) << " [label=\"" << labels[v] << "\"];\n";
  }
  const char* arrow = directed ? " -> " : " -- ";
  for (const auto& [i, j] : edges) {
    out << "  " << (i + 1) << arrow << (j + 1) << ";\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace

std::string emit_graph(const UndirectedGraph& g, GraphFormat format,
                       const EdgeAttrMap& attrs) {
  if (format == GraphFormat::json) {
    return emit_json(g.p(), g.labels(), false, g.edges(), attrs);
  }
  return emit_dot(g.p(), g.labels(), false, g.edges());
}

std::string emit_graph(const Dag& g, GraphFormat format, const EdgeAttrMap& attrs) {
  if (format == GraphFormat::json) {
    return emit_json(g.p(), g.labels(), true, g.edges(), attrs);
  }
  return emit_dot(g.p(), g.labels(), true, g.edges());
}

std::variant<UndirectedGraph, Dag> parse_graph_json(const std::string& text) {
  const auto doc = nlohmann::json::parse(text);
  const int p = doc.at("p").get<int>();
  std::vector<std::string> labels = doc.at("labels").get<std::vector<std::string>>();
  const bool directed = doc.at("directed").get<bool>();
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : doc.at("edges")) {
    edges.emplace_back(e.at("i").get<int>() - 1, e.at("j").get<int>() - 1);
  }

  if (!directed) {
    UndirectedGraph g(p, labels);
    for (const auto& [i, j] : edges) g.add_edge(i, j);
    return g;
  }

  std::vector<std::vector<int>> parents(p);
  std::vector<int> in_degree(p, 0);
  for (const auto& [i, j] : edges) {
    if (i < 0 || j < 0 || i >= p || j >= p) {
      throw std::invalid_argument("parse_graph_json: edge index out of range");
    }
    parents[j].push_back(i);
    ++in_degree[j];
  }
  // Kahn topological order with smallest-index tie break.
  std::vector<int> ordering;
  std::vector<int> remaining = in_degree;
  std::vector<bool> placed(p, false);
  for (int step = 0; step < p; ++step) {
    int pick = -1;
    for (int v = 0; v < p; ++v) {
      if (!placed[v] && remaining[v] == 0) {
        pick = v;
        break;
      }
    }
    if (pick < 0) {
      throw std::invalid_argument("parse_graph_json: directed edge set has a cycle");
    }
    placed[pick] = true;
    ordering.push_back(pick);
    for (int j = 0; j < p; ++j) {
      for (int i : parents[j]) {
        if (i == pick && !placed[j]) --remaining[j];
      }
    }
  }
  return Dag(std::move(ordering), std::move(parents), std::move(labels));
}

}  // namespace torograph
