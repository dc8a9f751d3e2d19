#pragma once

#include <stdexcept>

#include <Eigen/Core>

#include "qtopo/circuit.hpp"
#include "qtopo/graph.hpp"

namespace qtopo {

using CountMatrix = Eigen::Matrix<Weight, Eigen::Dynamic, Eigen::Dynamic>;

/// Two-qubit block counts M. A block is a maximal run of two-qubit gates on
/// one pair; it is broken only by an intervening two-qubit gate sharing
/// exactly one qubit with the pair.
CountMatrix block_matrix(const Circuit& c);

/// Circuit coupling graph: M as a weighted graph with vertex labels "q<i>".
CouplingGraph profile(const Circuit& c);

/// Blocks on {m, v} plus blocks on {l, v}, each counted after restricting
/// the circuit to two-qubit gates inside {m, l, v}. Zero when either pair has
/// no gate, and on row and column v.
CountMatrix compute_s(const Circuit& c, Qubit v);

/// I = a M + (1 - a) S, keeping the constituents for audit output.
template <typename Scalar>
struct InteractionMatrix {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Matrix values;
  Scalar alpha;
  CountMatrix m;
  CountMatrix s;

  Scalar operator()(Eigen::Index i, Eigen::Index j) const { return values(i, j); }
};

template <typename Scalar = double, typename DerivedM, typename DerivedS>
InteractionMatrix<Scalar> interaction_matrix(const Eigen::MatrixBase<DerivedM>& m,
                                             const Eigen::MatrixBase<DerivedS>& s,
                                             Scalar alpha) {
  if (m.rows() != s.rows() || m.cols() != s.cols() || m.rows() != m.cols()) {
    throw std::invalid_argument("interaction matrix needs square M and S of equal shape");
  }
  if (!(alpha >= Scalar(0) && alpha <= Scalar(1))) {
    throw std::invalid_argument("combination coefficient must lie in [0, 1]");
  }
  InteractionMatrix<Scalar> out;
  out.alpha = alpha;
  out.m = m.template cast<Weight>();
  out.s = s.template cast<Weight>();
  out.values = alpha * m.template cast<Scalar>() + (Scalar(1) - alpha) * s.template cast<Scalar>();
  out.values.diagonal().setZero();
  return out;
}

}  // namespace qtopo
