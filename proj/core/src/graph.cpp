#include "torograph/graph.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

#include "torograph/errors.hpp"

namespace torograph {

namespace {

std::vector<std::string> default_labels(int p, const std::vector<std::string>& given) {
  if (!given.empty()) {
    if (static_cast<int>(given.size()) != p) {
      throw std::invalid_argument("graph: label count must equal vertex count");
    }
    return given;
  }
  std::vector<std::string> labels;
  labels.reserve(p);
  for (int v = 0; v < p; ++v) labels.push_back("v" + std::to_string(v + 1));
  return labels;
}

}  // namespace

UndirectedGraph::UndirectedGraph(int p, std::vector<std::string> labels)
    : p_(p), labels_(default_labels(p, labels)) {
  if (p < 0) throw std::invalid_argument("UndirectedGraph: negative vertex count");
}

void UndirectedGraph::check_vertex(int v) const {
  if (v < 0 || v >= p_) {
    throw std::invalid_argument("UndirectedGraph: vertex out of range");
  }
}

void UndirectedGraph::add_edge(int i, int j) {
  check_vertex(i);
  check_vertex(j);
  if (i == j) throw std::invalid_argument("UndirectedGraph: no self-loops");
  edges_.insert({std::min(i, j), std::max(i, j)});
}

bool UndirectedGraph::has_edge(int i, int j) const {
  if (i == j) return false;
  return edges_.count({std::min(i, j), std::max(i, j)}) > 0;
}

std::vector<std::pair<int, int>> UndirectedGraph::edges() const {
  return {edges_.begin(), edges_.end()};
}

std::vector<int> UndirectedGraph::neighbors(int j) const {
  check_vertex(j);
  std::vector<int> out;
  for (const auto& [a, b] : edges_) {
    if (a == j) out.push_back(b);
    if (b == j) out.push_back(a);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Dag::Dag(std::vector<int> ordering, std::vector<std::vector<int>> parents,
         std::vector<std::string> labels)
    : ordering_(std::move(ordering)), parents_(std::move(parents)) {
  const int p = static_cast<int>(ordering_.size());
  labels_ = default_labels(p, labels);
  std::vector<bool> seen(p, false);
  for (int v : ordering_) {
    if (v < 0 || v >= p || seen[v]) {
      throw std::invalid_argument("Dag: ordering must be a permutation of 0..p-1");
    }
    seen[v] = true;
  }
  if (static_cast<int>(parents_.size()) != p) {
    throw std::invalid_argument("Dag: one parent set per vertex required");
  }
  position_.assign(p, 0);
  for (int rank = 0; rank < p; ++rank) position_[ordering_[rank]] = rank;
  for (int j = 0; j < p; ++j) {
    auto& pa = parents_[j];
    std::sort(pa.begin(), pa.end());
    if (std::adjacent_find(pa.begin(), pa.end()) != pa.end()) {
      throw std::invalid_argument("Dag: duplicate parent");
    }
    for (int i : pa) {
      if (i < 0 || i >= p) throw std::invalid_argument("Dag: parent out of range");
      if (position_[i] >= position_[j]) {
        throw acyclicity_error("Dag: parent " + std::to_string(i + 1) +
                               " does not precede child " + std::to_string(j + 1));
      }
    }
  }
}

std::vector<std::pair<int, int>> Dag::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int j = 0; j < p(); ++j) {
    for (int i : parents_[j]) out.emplace_back(i, j);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Dag dag_validate(std::vector<int> ordering, std::vector<std::vector<int>> parents,
                 std::vector<std::string> labels) {
  return Dag(std::move(ordering), std::move(parents), std::move(labels));
}

bool separates(const UndirectedGraph& g, const std::vector<int>& A,
               const std::vector<int>& C, const std::vector<int>& S) {
  if (A.empty() || C.empty()) {
    throw std::invalid_argument("separates: A and C must be non-empty");
  }
  std::vector<int> membership(g.p(), 0);  // 1 = A, 2 = C, 3 = S
  auto mark = [&](const std::vector<int>& set, int tag) {
    for (int v : set) {
      if (v < 0 || v >= g.p()) {
        throw std::invalid_argument("separates: vertex out of range");
      }
      if (membership[v] != 0) {
        throw std::invalid_argument("separates: A, C, S must be pairwise disjoint");
      }
      membership[v] = tag;
    }
  };
  mark(A, 1);
  mark(C, 2);
  mark(S, 3);

  std::vector<bool> visited(g.p(), false);
  std::deque<int> queue;
  for (int v : A) {
    visited[v] = true;
    queue.push_back(v);
  }
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (int w : g.neighbors(v)) {
      if (membership[w] == 3 || visited[w]) continue;
      if (membership[w] == 2) return false;
      visited[w] = true;
      queue.push_back(w);
    }
  }
  return true;
}

std::vector<int> markov_blanket(const UndirectedGraph& g, int j) {
  return g.neighbors(j);
}

}  // namespace torograph
