#pragma once

// Thin LAPACK layer. Everything takes and returns Eigen column-major storage.

#include <Eigen/Dense>
#include <complex>

namespace acu::dense {

using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using Vector = Eigen::VectorXcd;

struct HermitianEig {
  RealVector values;  // ascending
  Matrix vectors;
};

// Only the lower triangle of h is referenced.
HermitianEig hermitian_eig(const Matrix& h);
RealVector hermitian_eigenvalues(const Matrix& h);

struct Svd {
  Matrix u;  // m x k
  RealVector s;  // descending
  Matrix v;  // n x k
};

Svd svd(const Matrix& a);
RealVector singular_values(const Matrix& a);

struct Schur {
  Matrix t;
  Matrix z;
};

Schur schur(const Matrix& a);

}  // namespace acu::dense
