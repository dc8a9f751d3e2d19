#include "qtopo/lattice.hpp"

#include <cmath>
#include <stdexcept>

namespace qtopo {

std::string_view to_string(LatticeKind kind) {
  switch (kind) {
    case LatticeKind::Triangular:
      return "triangular";
    case LatticeKind::CrossSquare:
      return "cross_square";
    case LatticeKind::Square:
      return "square";
  }
  return "unknown";
}

LatticeKind parse_lattice_kind(std::string_view name) {
  if (name == "triangular") return LatticeKind::Triangular;
  if (name == "cross_square") return LatticeKind::CrossSquare;
  if (name == "square") return LatticeKind::Square;
  throw std::invalid_argument("unknown lattice kind '" + std::string(name) + "'");
}

CouplingGraph make_lattice(const LatticeSpec& spec) {
  if (spec.rows == 0 || spec.cols == 0) throw std::invalid_argument("lattice needs at least one row and column");
  const std::size_t rows = spec.rows, cols = spec.cols;
  CouplingGraph g(rows * cols);
  auto at = [cols](std::size_t r, std::size_t c) { return r * cols + c; };
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      g.set_label(at(r, c), "r" + std::to_string(r) + "c" + std::to_string(c));
      if (c + 1 < cols) g.add_edge(at(r, c), at(r, c + 1));
      if (r + 1 < rows) g.add_edge(at(r, c), at(r + 1, c));
    }
  }
  for (std::size_t r = 0; r + 1 < rows; ++r) {
    for (std::size_t c = 0; c + 1 < cols; ++c) {
      switch (spec.kind) {
        case LatticeKind::Square:
          break;
        case LatticeKind::Triangular:
          g.add_edge(at(r, c), at(r + 1, c + 1));
          break;
        case LatticeKind::CrossSquare:
          if (spec.cross_faces == CrossFaces::All || (r + c) % 2 == 0) {
            g.add_edge(at(r, c), at(r + 1, c + 1));
            g.add_edge(at(r, c + 1), at(r + 1, c));
          }
          break;
      }
    }
  }
  return g;
}

LatticeSpec lattice_for_qubits(LatticeKind kind, std::size_t qubits) {
  if (qubits == 0) throw std::invalid_argument("lattice needs at least one qubit");
  auto rows = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(qubits))));
  while (rows * rows < qubits) ++rows;
  while ((rows - 1) * (rows - 1) >= qubits) --rows;
  const std::size_t cols = (qubits + rows - 1) / rows;
  return {kind, rows, cols, CrossFaces::Checkerboard};
}

ConstraintSet lattice_constraints(LatticeKind kind, std::size_t max_degree) {
  return {max_degree, kind != LatticeKind::CrossSquare};
}

}  // namespace qtopo
