#pragma once

#include <span>
#include <utility>

#include "qtopo/graph.hpp"

namespace qtopo {

/// Left-right planarity test (de Fraysseix-Rosenstiehl criterion, in the
/// formulation of Brandes' linear-time algorithm). Edge weights are ignored.
bool is_planar(const CouplingGraph& g);

/// Planarity of `g` with the extra edges in `extra` inserted; the graph
/// itself is not copied.
bool is_planar_with(const CouplingGraph& g, std::span<const std::pair<Vertex, Vertex>> extra);

}  // namespace qtopo
