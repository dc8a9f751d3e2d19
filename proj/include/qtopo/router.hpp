#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "qtopo/circuit.hpp"
#include "qtopo/graph.hpp"

namespace qtopo {

/// Logical qubit -> physical vertex; injective.
using QubitMap = std::vector<Vertex>;

struct RouterOptions {
  std::size_t extended_size = 20;
  double extended_weight = 0.5;
  double decay = 0.001;
  /// Decay values reset after this many consecutive swaps.
  std::size_t decay_reset = 5;
  std::uint64_t seed = 0;
};

struct RoutedCircuit {
  /// Gates on physical vertexes; num_qubits equals the PCG size.
  Circuit circuit{1};
  /// inserted[i] is true when gate i is a routing swap.
  std::vector<bool> inserted;
  std::size_t g_ori = 0;
  std::size_t g_add = 0;
  QubitMap initial_map;
  QubitMap final_map;
};

/// g_add / g_ori, or nullopt when the input had no two-qubit gates.
std::optional<double> g_ap(const RoutedCircuit& r);

/// Swap insertion with a front layer and lookahead (SABRE style). Throws
/// std::invalid_argument when the map is not an injection into the PCG or
/// the mapped vertexes are not in one component.
RoutedCircuit route(const Circuit& c, const CouplingGraph& pcg, const QubitMap& initial,
                    const RouterOptions& options = {});

enum class MapPolicy { Identity, ReverseTraversal };

std::string_view to_string(MapPolicy policy);
/// Accepts "identity" and "reverse_traversal".
MapPolicy parse_map_policy(std::string_view name);

/// Logical qubit i -> i-th vertex of a breadth-first order from the PCG
/// center (smallest eccentricity, lowest index on ties).
QubitMap identity_map(const Circuit& c, const CouplingGraph& pcg);

/// Refines `start` with forward and backward routing passes over the
/// circuit's two-qubit gates.
QubitMap reverse_traversal_map(const Circuit& c, const CouplingGraph& pcg, const QubitMap& start,
                               const RouterOptions& options = {}, std::size_t iterations = 3);

QubitMap initial_map(const Circuit& c, const CouplingGraph& pcg, MapPolicy policy,
                     const RouterOptions& options = {});

}  // namespace qtopo
