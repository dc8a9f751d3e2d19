#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "qtopo/graph.hpp"

namespace qtopo {

/// Largest vertex count accepted by enumeration and isomorphism.
inline constexpr std::size_t kSmallGraphCap = 8;

/// Isomorphism-invariant code of a graph with at most kSmallGraphCap
/// vertexes: the minimum upper-triangle adjacency bitstring over all vertex
/// orders compatible with its color-refinement partition.
struct CanonicalCode {
  std::size_t n = 0;
  std::uint32_t bits = 0;

  friend auto operator<=>(const CanonicalCode&, const CanonicalCode&) = default;
};

/// Throws std::invalid_argument when g exceeds kSmallGraphCap vertexes.
CanonicalCode canonical_code(const CouplingGraph& g);

/// Vertex order realizing canonical_code: position i holds the original
/// vertex placed at canonical index i.
std::vector<Vertex> canonical_order(const CouplingGraph& g);

/// Exact isomorphism test (weights ignored).
bool are_isomorphic(const CouplingGraph& a, const CouplingGraph& b);

/// All connected graphs on n unlabeled vertexes that satisfy `constraints`
/// and have at most `max_edges` edges, one canonically labeled
/// representative per isomorphism class, ordered by (edge count, code).
std::vector<CouplingGraph> enumerate_connected_graphs(
    std::size_t n, const ConstraintSet& constraints,
    std::size_t max_edges = std::numeric_limits<std::size_t>::max());

}  // namespace qtopo
