#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace torograph {

/// Undirected graph on vertices 0..p-1 (positional identity matching
/// AngleMatrix columns; labels are metadata only).
class UndirectedGraph {
 public:
  explicit UndirectedGraph(int p, std::vector<std::string> labels = {});

  int p() const { return p_; }
  const std::vector<std::string>& labels() const { return labels_; }

  void add_edge(int i, int j);
  bool has_edge(int i, int j) const;

  /// Edges as (i, j) with i < j, sorted lexicographically.
  std::vector<std::pair<int, int>> edges() const;
  std::size_t edge_count() const { return edges_.size(); }

  std::vector<int> neighbors(int j) const;

  friend bool operator==(const UndirectedGraph& a, const UndirectedGraph& b) {
    return a.p_ == b.p_ && a.edges_ == b.edges_ && a.labels_ == b.labels_;
  }

 private:
  void check_vertex(int v) const;

  int p_;
  std::set<std::pair<int, int>> edges_;
  std::vector<std::string> labels_;
};

/// Directed acyclic graph with a fixed vertex ordering; every parent
/// precedes its child in the ordering, so acyclicity holds by construction.
class Dag {
 public:
  /// ordering: permutation of 0..p-1 (ordering[k] = vertex at rank k).
  /// parents[j]: parent set of vertex j. Throws acyclicity_error when a
  /// parent does not precede its child.
  Dag(std::vector<int> ordering, std::vector<std::vector<int>> parents,
      std::vector<std::string> labels = {});

  int p() const { return static_cast<int>(ordering_.size()); }
  const std::vector<int>& ordering() const { return ordering_; }
  const std::vector<int>& parents(int j) const { return parents_[j]; }
  const std::vector<std::string>& labels() const { return labels_; }

  /// Rank of vertex v in the ordering.
  int position(int v) const { return position_[v]; }

  /// Directed edges (parent, child), sorted lexicographically.
  std::vector<std::pair<int, int>> edges() const;

  friend bool operator==(const Dag& a, const Dag& b) {
    return a.ordering_ == b.ordering_ && a.parents_ == b.parents_ &&
           a.labels_ == b.labels_;
  }

 private:
  std::vector<int> ordering_;
  std::vector<int> position_;
  std::vector<std::vector<int>> parents_;
  std::vector<std::string> labels_;
};

/// Validated construction mirroring the Dag constructor.
Dag dag_validate(std::vector<int> ordering, std::vector<std::vector<int>> parents,
                 std::vector<std::string> labels = {});

/// True iff every path between A and C passes through S (breadth-first
/// search on the graph with S removed). A, C, S must be pairwise disjoint
/// and A, C non-empty.
bool separates(const UndirectedGraph& g, const std::vector<int>& A,
               const std::vector<int>& C, const std::vector<int>& S);

/// Neighbour set of j, the Markov blanket in an undirected model.
std::vector<int> markov_blanket(const UndirectedGraph& g, int j);

/// One row of a structure-learning report. Indices are 0-based vertex ids;
/// fields that a given learner does not produce stay empty.
struct EdgeRecord {
  int i = 0;
  int j = 0;
  std::optional<double> statistic;
  std::optional<double> p_value;
  std::optional<double> adjusted_p;
  bool selected = false;
  std::optional<double> stability;
  std::optional<double> weight;
};

using EdgeReport = std::vector<EdgeRecord>;

}  // namespace torograph
