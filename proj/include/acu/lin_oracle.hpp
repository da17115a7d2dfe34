#pragma once

#include <memory>
#include <vector>

#include "acu/errors.hpp"
#include "acu/linalg.hpp"

namespace acu {

// Orthonormal basis in which two Hermitian matrices are as diagonal as possible.
class CommonBasisSolver {
 public:
  virtual ~CommonBasisSolver() = default;
  struct Result {
    Matrix basis;
    int iterations;
    bool converged;
    double off_diagonal;  // sqrt of the summed squared off-diagonal mass left over
  };
  virtual Result solve(const Matrix& t, const Matrix& s) const = 0;
};

// Jacobi-type joint diagonalization with complex Givens rotations.
class JadSolver : public CommonBasisSolver {
 public:
  explicit JadSolver(int max_sweeps = 100, double rotation_tol = 1e-10)
      : max_sweeps_(max_sweeps), rotation_tol_(rotation_tol) {}
  Result solve(const Matrix& t, const Matrix& s) const override;

 private:
  int max_sweeps_;
  double rotation_tol_;
};

struct OracleConfig {
  int max_sweeps = 100;
  double commute_tol = kTol.commute;
  bool accept_unconverged = false;  // keep the last basis instead of throwing
  std::shared_ptr<const CommonBasisSolver> solver;  // null: JadSolver(max_sweeps)
};

struct OracleResult {
  Matrix first;   // t', b, or u' depending on the case
  Matrix second;  // s', b*, or v'
  Matrix basis;   // common eigenbasis (columns); empty on short-circuit
  std::vector<Complex> values;  // eigenvalues of the normal matrix in `basis`, when there is one
  double dist = 0.0;
  double input_commutator = 0.0;
  double commutator_residual = 0.0;
  int iterations = 0;
  double scaling_ratio = 0.0;  // dist / ||[., .]||^{1/2}
  bool short_circuit = false;
};

class OracleDidNotConverge : public Error {
 public:
  OracleDidNotConverge(const std::string& what, OracleResult best, double measured)
      : Error(ErrorCode::OracleDidNotConverge, what, measured), best_(std::move(best)) {}
  const OracleResult& best() const { return best_; }

 private:
  OracleResult best_;
};

OracleResult commuting_hermitian_pair(const Matrix& t, const Matrix& s, const OracleConfig& cfg = {});
OracleResult normal_approximant(const Matrix& a, const OracleConfig& cfg = {});
// Spectrum clamped into 1 <= |z| <= 3.
OracleResult normal_approximant_annulus(const Matrix& a, const OracleConfig& cfg = {});
// ||t|| <= 1, s unitary; output t' Hermitian with ||t'|| <= 1, s' unitary.
OracleResult commuting_hermitian_unitary(const Matrix& t, const UnitaryMatrix& s, const OracleConfig& cfg = {});

struct GappedResult {
  OracleResult result;  // first = u', second = v'
  double gap_measured;  // min |lambda - e^{i c}| over sigma(u)
  double bound_ratio;   // dist / (rho^{-1/2} ||[u,v]||^{1/2})
  // eigenvalues of u', v' on result.basis; empty on short-circuit
  Vector u_values;
  Vector v_values;
};
// sigma(u) must avoid the disc of radius rho around e^{i gap_center}.
GappedResult commuting_gapped_unitaries(const UnitaryMatrix& u, const UnitaryMatrix& v, double gap_center, double rho,
                                        const OracleConfig& cfg = {});

}  // namespace acu
