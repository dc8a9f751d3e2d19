#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace qtopo {

using Vertex = std::size_t;
using Weight = std::int64_t;

/// Distance of an unreachable vertex in hop-count vectors.
inline constexpr std::size_t kUnreachable = std::numeric_limits<std::size_t>::max();

struct Edge {
  Vertex u;
  Vertex v;
  Weight weight = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Undirected simple graph with non-negative integer edge weights.
///
/// Serves both as circuit coupling graph (weights are two-qubit block
/// counts) and as physical coupling graph (weights ignored). Edges are kept
/// canonically as (min, max); adjacency lists are sorted.
class CouplingGraph {
 public:
  CouplingGraph() = default;
  explicit CouplingGraph(std::size_t num_vertexes);

  std::size_t size() const { return adjacency_.size(); }
  std::size_t edge_count() const { return weights_.size(); }

  Vertex add_vertex(std::string label = {});

  /// Inserts {u, v}; throws on self-loops, out-of-range vertexes and
  /// duplicates.
  void add_edge(Vertex u, Vertex v, Weight weight = 0);
  void remove_edge(Vertex u, Vertex v);
  bool has_edge(Vertex u, Vertex v) const;
  Weight weight(Vertex u, Vertex v) const;
  void set_weight(Vertex u, Vertex v, Weight weight);

  std::span<const Vertex> neighbors(Vertex v) const { return adjacency_.at(v); }
  std::size_t degree(Vertex v) const { return adjacency_.at(v).size(); }
  std::size_t max_degree() const;
  Weight total_weight() const;

  /// All edges in canonical (u < v) lexicographic order.
  std::vector<Edge> edges() const;

  const std::vector<std::string>& labels() const { return labels_; }
  void set_label(Vertex v, std::string label);

  /// Weighted adjacency matrix.
  Eigen::Matrix<Weight, Eigen::Dynamic, Eigen::Dynamic> adjacency_matrix() const;
  static CouplingGraph from_adjacency_matrix(
      const Eigen::Ref<const Eigen::Matrix<Weight, Eigen::Dynamic, Eigen::Dynamic>>& m);

  friend bool operator==(const CouplingGraph& a, const CouplingGraph& b) {
    return a.adjacency_.size() == b.adjacency_.size() && a.weights_ == b.weights_ &&
           a.labels_ == b.labels_;
  }

 private:
  void check_vertex(Vertex v) const;

  std::vector<std::vector<Vertex>> adjacency_;
  std::map<std::pair<Vertex, Vertex>, Weight> weights_;
  std::vector<std::string> labels_;
};

/// Hardware limits for a legitimate physical coupling graph.
struct ConstraintSet {
  std::size_t max_degree = 6;
  bool require_planar = true;
};

struct DegreeViolation {
  Vertex vertex;
  std::size_t degree;

  friend bool operator==(const DegreeViolation&, const DegreeViolation&) = default;
};

struct ViolationReport {
  std::vector<DegreeViolation> over_degree;
  bool planar = true;
  bool planarity_checked = true;

  /// True when the graph is a legitimate coupling graph.
  bool ok() const { return over_degree.empty() && (planar || !planarity_checked); }
};

/// Validates `c` and throws std::invalid_argument if max_degree < 2.
void validate(const ConstraintSet& c);

ViolationReport check_constraints(const CouplingGraph& g, const ConstraintSet& c);

/// Whether adding {u, v} to `g` keeps it within `c`. `g` must already satisfy
/// the degree bound at u and v.
bool edge_fits(const CouplingGraph& g, Vertex u, Vertex v, const ConstraintSet& c);

/// Hop-count breadth-first distances; unreachable vertexes get kUnreachable.
std::vector<std::size_t> shortest_paths(const CouplingGraph& g, Vertex from);

/// All-pairs hop counts as a dense matrix (kUnreachable for disconnected pairs).
Eigen::Matrix<std::size_t, Eigen::Dynamic, Eigen::Dynamic> distance_matrix(
    const CouplingGraph& g);

/// Connected components, each sorted, ordered by smallest member.
std::vector<std::vector<Vertex>> connected_components(const CouplingGraph& g);

bool is_connected(const CouplingGraph& g);

}  // namespace qtopo
