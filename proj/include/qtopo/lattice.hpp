#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "qtopo/graph.hpp"

namespace qtopo {

enum class LatticeKind { Triangular, CrossSquare, Square };

/// Which faces of a cross-square lattice get both diagonals.
enum class CrossFaces { Checkerboard, All };

struct LatticeSpec {
  LatticeKind kind = LatticeKind::Triangular;
  std::size_t rows = 1;
  std::size_t cols = 1;
  CrossFaces cross_faces = CrossFaces::Checkerboard;
};

std::string_view to_string(LatticeKind kind);
/// Accepts "triangular", "cross_square" and "square".
LatticeKind parse_lattice_kind(std::string_view name);

/// Row-major lattice; vertex r * cols + c is labeled "r<r>c<c>".
///  - square: grid edges
///  - triangular: grid edges plus the (r, c)-(r+1, c+1) diagonal of every face
///  - cross_square: grid edges plus both diagonals of the faces with r + c
///    even (or of every face with CrossFaces::All)
CouplingGraph make_lattice(const LatticeSpec& spec);

/// Smallest near-square spec holding `qubits` vertexes: rows = ceil(sqrt(q)),
/// cols = ceil(q / rows).
LatticeSpec lattice_for_qubits(LatticeKind kind, std::size_t qubits);

/// Constraints a lattice of this kind is held to. Cross-square diagonals
/// cross inside their face, so planarity is not required there.
ConstraintSet lattice_constraints(LatticeKind kind, std::size_t max_degree = 6);

}  // namespace qtopo
