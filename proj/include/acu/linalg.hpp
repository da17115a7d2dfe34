#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <vector>

#include "acu/errors.hpp"

namespace acu {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

struct Tolerances {
  double unitary = 1e-10;
  double hermitian = 1e-12;
  double projection = 1e-10;
  double trace = 1e-8;
  double cluster = 1e-8;
  double boundary = 1e-9;
  double singular_floor = 1e-12;
  double reconstruction = 1e-8;
  double commute = 1e-10;
};
inline constexpr Tolerances kTol{};

// 8192 unless ACU_MAX_DIM is set.
Index max_dimension();
void check_dimension(Index n, const char* what);

void require_square(const Matrix& a, const char* what);
void require_same_size(const Matrix& a, const Matrix& b, const char* what);

// [0, 2pi)
double wrap_angle(double theta);
// circular distance, in [0, pi]
double angle_distance(double a, double b);

double op_norm(const Matrix& a);
// Cheap when the Frobenius norm already settles it.
bool op_norm_at_most(const Matrix& a, double bound);
Matrix commutator(const Matrix& a, const Matrix& b);
double commutator_norm(const Matrix& a, const Matrix& b);

class UnitaryMatrix {
 public:
  explicit UnitaryMatrix(Matrix m, double tol = kTol.unitary);
  static UnitaryMatrix identity(Index n);
  // No check; for matrices unitary by construction.
  static UnitaryMatrix trusted(Matrix m);

  const Matrix& matrix() const { return m_; }
  Index size() const { return m_.rows(); }
  UnitaryMatrix adjoint() const;
  UnitaryMatrix operator*(const UnitaryMatrix& other) const;

 private:
  struct Trusted {};
  UnitaryMatrix(Matrix m, Trusted) : m_(std::move(m)) {}
  Matrix m_;
};

class HermitianMatrix {
 public:
  explicit HermitianMatrix(const Matrix& m, double tol = kTol.hermitian);
  // Symmetrizes without checking.
  static HermitianMatrix trusted(const Matrix& m);

  const Matrix& matrix() const { return m_; }
  Index size() const { return m_.rows(); }

 private:
  struct Trusted {};
  HermitianMatrix(Matrix m, Trusted) : m_(std::move(m)) {}
  Matrix m_;
};

// Orthogonal projection, kept together with an orthonormal basis of its range.
class Projection {
 public:
  static Projection from_basis(Matrix basis, double tol = kTol.projection);
  static Projection from_matrix(const Matrix& p, double tol = kTol.projection);
  static Projection zero(Index n);
  static Projection identity(Index n);

  const Matrix& matrix() const { return m_; }
  const Matrix& basis() const { return basis_; }
  Index rank() const { return basis_.cols(); }
  Index size() const { return m_.rows(); }
  Projection complement() const;

 private:
  Projection(Matrix m, Matrix basis) : m_(std::move(m)), basis_(std::move(basis)) {}
  Matrix m_;
  Matrix basis_;
};

// Orthonormal basis of the orthogonal complement of ran(basis) in C^n.
Matrix complement_basis(const Matrix& basis);
// Re-orthonormalizes columns (Householder QR), keeping the span.
Matrix orthonormalize(const Matrix& a);

// Counterclockwise arc of the unit circle, described by angles.
class Arc {
 public:
  Arc(double start, double length, bool closed_start = true, bool closed_end = true);
  static Arc between(double from, double to, bool closed_start = true, bool closed_end = true);
  static Arc full();

  double start() const { return start_; }
  double length() const { return length_; }
  double end() const { return wrap_angle(start_ + length_); }
  bool closed_start() const { return closed_start_; }
  bool closed_end() const { return closed_end_; }
  bool is_full() const { return length_ >= kTwoPi; }

  bool contains(double angle) const;
  Arc complement() const;
  Arc rotated(double by) const;
  Arc with_boundaries(double start, double end) const;
  // Infinity for the full circle.
  double boundary_distance(double angle) const;

 private:
  double start_;
  double length_;
  bool closed_start_;
  bool closed_end_;
};

struct EigenCluster {
  double angle;
  Index offset;
  Index size;
};

// Eigenvectors are stored as one unitary matrix whose columns are grouped by cluster.
class SpectralDecomposition {
 public:
  SpectralDecomposition(Matrix vectors, std::vector<EigenCluster> clusters, double cluster_tol);

  Index dim() const { return vectors_.rows(); }
  const Matrix& vectors() const { return vectors_; }
  const std::vector<EigenCluster>& clusters() const { return clusters_; }
  double cluster_tol() const { return cluster_tol_; }

  Matrix cluster_basis(std::size_t i) const;
  Projection projector(std::size_t i) const;
  Matrix basis_for(const Arc& arc, double boundary_tol = kTol.boundary) const;
  Projection projection(const Arc& arc, double boundary_tol = kTol.boundary) const;
  Index count_in(const Arc& arc) const;
  Matrix apply(const std::function<Complex(double)>& f) const;
  Matrix reconstruct() const;
  // One entry per eigenvector, ascending.
  std::vector<double> angles() const;
  double min_boundary_distance(const Arc& arc) const;
  // min |lambda - z| over the spectrum
  double distance_to(Complex z) const;

 private:
  Matrix vectors_;
  std::vector<EigenCluster> clusters_;
  double cluster_tol_;
};

SpectralDecomposition eig_unitary(const UnitaryMatrix& u, double cluster_tol = kTol.cluster);
Projection spectral_projection(const UnitaryMatrix& u, const Arc& arc, double boundary_tol = kTol.boundary);
// f receives the eigen-angle theta of e^{i theta}.
Matrix apply_circle_function(const UnitaryMatrix& u, const std::function<Complex(double)>& f);
// Moves boundaries sitting on eigenvalues to the middle of the larger neighbouring gap.
Arc nudge_arc(const Arc& arc, const SpectralDecomposition& spec, double boundary_tol = kTol.boundary);

UnitaryMatrix polar_unitary(const Matrix& a, double singular_floor = kTol.singular_floor);

struct NearestUnitary {
  UnitaryMatrix u;
  double defect;  // ||w - u||
  double rho;     // ||w*w - 1||
};
NearestUnitary nearest_unitary(const Matrix& w);

// u compressed to ran p, in the coordinates of `basis`.
struct Compression {
  UnitaryMatrix w;
  Matrix basis;
  double defect;  // ||p u|_p - w||
  double kappa;   // ||[p, u]||
};
Compression compress_unitary(const UnitaryMatrix& u, const Projection& p);
Compression compress_unitary(const UnitaryMatrix& u, const Matrix& basis);

Matrix direct_sum(const Matrix& a, const Matrix& b);
Matrix embed(const Matrix& a, Index total, Index offset);

// Eigendecomposition of a Hermitian matrix, reused for exp(i t h).
class HermitianSpectrum {
 public:
  explicit HermitianSpectrum(const Matrix& h);
  Matrix exp_i(double t) const;
  double norm() const;
  const RealVector& values() const { return values_; }
  const Matrix& vectors() const { return vectors_; }

 private:
  RealVector values_;
  Matrix vectors_;
};

// Hermitian h with exp(i h) = u, spectrum in (-pi, pi]; ||h|| <= pi.
Matrix unitary_log(const UnitaryMatrix& u);

}  // namespace acu
