#pragma once

// Dense real eigenproblem through Eigen's real Schur solver.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <complex>

#include "qrt/error.hpp"

namespace qrt::detail {

struct EigResult {
  Eigen::VectorXcd values;
  Eigen::MatrixXcd vectors;  // right eigenvectors, empty unless requested
};

inline EigResult eig(const Eigen::MatrixXd& M, bool want_vectors = false) {
  if (M.rows() != M.cols()) throw ShapeError("eig: matrix must be square");
  Eigen::EigenSolver<Eigen::MatrixXd> es(M, want_vectors);
  if (es.info() != Eigen::Success) throw NumericalFailure("real Schur iteration did not converge");
  EigResult out;
  out.values = es.eigenvalues();
  if (want_vectors) out.vectors = es.eigenvectors();
  return out;
}

}  // namespace qrt::detail
