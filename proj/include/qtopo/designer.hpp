#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "qtopo/circuit.hpp"
#include "qtopo/graph.hpp"
#include "qtopo/profiler.hpp"

namespace qtopo {

enum class Dispersion { StdDev, Variance, Range };

struct VertexStats {
  std::size_t degree = 0;
  Weight total_weight = 0;
  double dispersion = 0.0;

  friend bool operator==(const VertexStats&, const VertexStats&) = default;
};

/// Importance ranking of CCG vertexes: degree desc, total weight desc,
/// dispersion asc, index asc.
struct VertexRank {
  std::vector<VertexStats> stats;
  std::vector<Vertex> order;
};

VertexRank rank_vertexes(const CouplingGraph& ccg, Dispersion dispersion = Dispersion::StdDev);

struct PruneResult {
  CouplingGraph pruned;
  std::vector<Vertex> media;
  std::vector<Edge> recover_set;
};

/// Keeps exactly the edges touching a media vertex.
PruneResult prune(const CouplingGraph& ccg, std::span<const Vertex> media);

/// Largest neighbor count a media structure within kSmallGraphCap vertexes
/// can absorb under `c`.
std::size_t split_capacity(const ConstraintSet& c);

/// Candidate media structures for a vertex with k neighbors: every
/// non-isomorphic connected graph on the smallest feasible vertex count n
/// with k <= D n - e and enough free degree (D n - 2 e >= k) to attach all
/// neighbors. Throws std::invalid_argument when k <= D, and
/// std::domain_error when no n within kSmallGraphCap works.
std::vector<CouplingGraph> search_media_structures(std::size_t k, const ConstraintSet& c);

/// Allocation of neighbor vertexes onto the vertexes of a structure.
struct MediaStructure {
  CouplingGraph graph;
  /// alloc[i] = neighbors attached to structure vertex i, in pick order.
  std::vector<std::vector<Vertex>> alloc;
  /// Neighbors in the order the greedy allocation picked them.
  std::vector<Vertex> picks;
};

/// Greedy weight allocation. `neighbors` index rows and columns of
/// `interaction`.
MediaStructure allocate(const Eigen::MatrixXd& interaction, const CouplingGraph& structure,
                        std::span<const Vertex> neighbors, std::size_t max_degree);

/// F = sum over ordered structure-vertex pairs (i, j), i != j, of
/// C_ij * I_pq for p in alloc[i], q in alloc[j].
double score_allocation(const MediaStructure& ms, const Eigen::MatrixXd& interaction);

struct SplitRecord {
  Vertex origin = 0;
  /// Structure in local indices, and the graph vertex each local index became.
  CouplingGraph structure;
  std::vector<Vertex> placed;
  /// Graph vertexes attached to each local structure vertex.
  std::vector<std::vector<Vertex>> alloc;
  std::size_t home = 0;
  double score = 0.0;
  /// Lowest-weight edges detached first because the degree exceeded
  /// split_capacity.
  std::vector<Edge> trimmed;
};

/// Replaces over-degree vertex v of `graph` by the best media structure. The
/// home structure vertex keeps index v, ancillas are appended. `owner` maps
/// every graph vertex to the logical qubit whose row of `interaction` it
/// uses, and is extended for the new ancillas.
SplitRecord split_media_vertex(CouplingGraph& graph, Vertex v, const Eigen::MatrixXd& interaction,
                               std::vector<Vertex>& owner, const ConstraintSet& c);

struct RecoverResult {
  CouplingGraph graph;
  std::vector<Edge> kept;
  std::vector<Edge> rejected;
};

/// Re-inserts edges by weight desc (ties in canonical order) while the
/// constraints hold.
RecoverResult recover(CouplingGraph graph, std::span<const Edge> recover_set,
                      const ConstraintSet& c);

/// Sum of M_ml * d(m, l) over logical pairs, with unreachable pairs charged
/// pcg.size() * max(M).
Weight placement_score(const CountMatrix& m, const CouplingGraph& pcg,
                       std::span<const Vertex> placement);

/// Interaction matrix used to split media vertex v.
using InteractionSource = std::function<Eigen::MatrixXd(Vertex v)>;

/// Interaction source backed by a circuit; S is computed lazily per vertex.
InteractionSource circuit_interactions(const Circuit& c, double alpha);

/// Interaction source for a bare CCG, where S is unknown: I = M for every v.
InteractionSource ccg_interactions(const CouplingGraph& ccg);

struct PipelineRun {
  std::size_t media_count = 0;
  PruneResult prune;
  std::vector<SplitRecord> splits;
  /// Edges removed to restore the constraints after splitting.
  std::vector<Edge> dropped;
  std::vector<Edge> recovered;
  std::vector<Edge> rejected;
  /// Edges added to join components.
  std::vector<Edge> bridges;
  CouplingGraph pcg;
  Weight score = 0;
};

/// prune -> split -> legalize -> recover -> bridge for one media count.
PipelineRun run_pipeline(const CouplingGraph& ccg, const VertexRank& rank, std::size_t media_count,
                         const InteractionSource& interactions, const ConstraintSet& c);

struct DesignOptions {
  ConstraintSet constraints;
  double alpha = 0.5;
  Dispersion dispersion = Dispersion::StdDev;
  /// Fixes N instead of searching 1..n.
  std::optional<std::size_t> media_count;
};

struct DesignAudit {
  VertexRank rank;
  std::vector<PipelineRun> candidates;
  std::size_t chosen = 0;  // index into candidates
};

struct DesignResult {
  CouplingGraph pcg;
  /// Logical qubit -> physical vertex.
  std::vector<Vertex> placement;
  std::size_t ancilla_count = 0;
  DesignAudit audit;
};

/// Runs every candidate N and returns the audit with the lowest score (ties to
/// the smaller N).
DesignAudit select_media_count(const CouplingGraph& ccg, const InteractionSource& interactions,
                               const DesignOptions& options);

DesignResult design(const CouplingGraph& ccg, const InteractionSource& interactions,
                    const DesignOptions& options = {});
DesignResult design(const Circuit& circuit, const DesignOptions& options = {});

}  // namespace qtopo
