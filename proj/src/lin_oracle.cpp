#include "acu/lin_oracle.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "dense.hpp"

namespace acu {

namespace {

double off_mass(const Matrix& a) {
  double s = 0;
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i)
      if (i != j) s += std::norm(a(i, j));
  return s;
}

// a <- R* a R on the (p, q) plane, R = [[c, -conj(s)], [s, c]]
void rotate_both_sides(Matrix& a, Index p, Index q, double c, Complex s) {
  const Index n = a.rows();
  for (Index k = 0; k < n; ++k) {  // columns: a R
    const Complex ap = a(k, p);
    const Complex aq = a(k, q);
    a(k, p) = c * ap + s * aq;
    a(k, q) = -std::conj(s) * ap + c * aq;
  }
  for (Index k = 0; k < n; ++k) {  // rows: R* a
    const Complex ap = a(p, k);
    const Complex aq = a(q, k);
    a(p, k) = c * ap + std::conj(s) * aq;
    a(q, k) = -s * ap + c * aq;
  }
}

void rotate_columns(Matrix& v, Index p, Index q, double c, Complex s) {
  for (Index k = 0; k < v.rows(); ++k) {
    const Complex vp = v(k, p);
    const Complex vq = v(k, q);
    v(k, p) = c * vp + s * vq;
    v(k, q) = -std::conj(s) * vp + c * vq;
  }
}

double safe_sqrt_ratio(double dist, double comm) {
  if (dist == 0.0) return 0.0;
  if (comm <= 0.0) return std::numeric_limits<double>::infinity();
  return dist / std::sqrt(comm);
}

std::shared_ptr<const CommonBasisSolver> solver_for(const OracleConfig& cfg) {
  if (cfg.solver) return cfg.solver;
  return std::make_shared<JadSolver>(cfg.max_sweeps);
}

Matrix hermitian_part(const Matrix& a) { return 0.5 * (a + a.adjoint()); }

}  // namespace

namespace {

// Jacobi sweeps on already-rotated Hermitian matrices a_m (weights w_m); v collects the rotations.
CommonBasisSolver::Result jad_sweeps(std::vector<Matrix> a, const std::vector<double>& w, Matrix v, int max_sweeps,
                                     double rotation_tol) {
  const Index n = v.cols();
  int sweep = 0;
  bool converged = false;
  double prev = std::numeric_limits<double>::infinity();
  for (; sweep < max_sweeps; ++sweep) {
    double largest = 0.0;
    for (Index p = 0; p + 1 < n; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        Eigen::Matrix3d g = Eigen::Matrix3d::Zero();
        for (std::size_t m = 0; m < a.size(); ++m) {
          const Matrix& x = a[m];
          Eigen::Vector3d h(w[m] * (x(p, p).real() - x(q, q).real()), w[m] * (x(p, q).real() + x(q, p).real()),
                            w[m] * (x(p, q).imag() - x(q, p).imag()));
          g += h * h.transpose();
        }
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(g);
        Eigen::Vector3d e = es.eigenvectors().col(2);
        if (e(0) < 0) e = -e;
        const double r = e.norm();
        if (r == 0) continue;
        const double c = std::sqrt((e(0) + r) / (2 * r));
        const Complex sn = Complex(e(1), -e(2)) / std::sqrt(2 * r * (e(0) + r));
        const double mag = std::abs(sn);
        if (mag < rotation_tol) continue;
        largest = std::max(largest, mag);
        for (Matrix& x : a) rotate_both_sides(x, p, q, c, sn);
        rotate_columns(v, p, q, c, sn);
      }
    }
    double obj = 0;
    for (std::size_t m = 0; m < a.size(); ++m) obj += w[m] * w[m] * off_mass(a[m]);
    if (largest < rotation_tol || (std::isfinite(prev) && prev - obj <= 1e-15 * std::max(prev, 1e-300))) {
      converged = true;
      ++sweep;
      break;
    }
    prev = obj;
  }
  double off = 0;
  for (const Matrix& x : a) off += off_mass(x);
  return {orthonormalize(v), sweep, converged, std::sqrt(off)};
}

}  // namespace

CommonBasisSolver::Result JadSolver::solve(const Matrix& t, const Matrix& s) const {
  const Index n = t.rows();
  if (n == 0) return {Matrix(0, 0), 0, true, 0.0};
  const double scale = std::max(op_norm(t), op_norm(s));
  const Matrix v = dense::hermitian_eig(hermitian_part(t + 0.6180339887498949 * s)).vectors;
  // one common weight: a small s must not be blown up to the size of t
  const double wa = scale > 0 ? 1.0 / scale : 1.0;
  const double wb = wa;
  return jad_sweeps({v.adjoint() * t * v, v.adjoint() * s * v}, {wa, wb}, v, max_sweeps_, rotation_tol_);
}

OracleResult commuting_hermitian_pair(const Matrix& t_in, const Matrix& s_in, const OracleConfig& cfg) {
  require_square(t_in, "commuting_hermitian_pair");
  require_same_size(t_in, s_in, "commuting_hermitian_pair");
  const Matrix t = HermitianMatrix(t_in, 1e-9).matrix();
  const Matrix s = HermitianMatrix(s_in, 1e-9).matrix();
  OracleResult res;
  res.input_commutator = commutator_norm(t, s);
  if (res.input_commutator <= cfg.commute_tol) {
    res.first = t;
    res.second = s;
    res.commutator_residual = res.input_commutator;
    res.short_circuit = true;
    return res;
  }

  const CommonBasisSolver::Result jb = solver_for(cfg)->solve(t, s);
  const Index n = t.rows();
  Matrix v = jb.basis;
  const Matrix a = v.adjoint() * t * v;
  const Matrix b = v.adjoint() * s * v;
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&](Index i, Index j) {
    const double ti = a(i, i).real(), tj = a(j, j).real();
    if (ti != tj) return ti < tj;
    return b(i, i).real() < b(j, j).real();
  });
  Matrix basis(n, n);
  RealVector dt(n), ds(n);
  for (Index k = 0; k < n; ++k) {
    const Index i = order[static_cast<std::size_t>(k)];
    basis.col(k) = v.col(i);
    dt(k) = a(i, i).real();
    ds(k) = b(i, i).real();
  }
  res.basis = basis;
  res.first = basis * dt.cast<Complex>().asDiagonal() * basis.adjoint();
  res.second = basis * ds.cast<Complex>().asDiagonal() * basis.adjoint();
  res.first = hermitian_part(res.first);
  res.second = hermitian_part(res.second);
  res.values.resize(static_cast<std::size_t>(n));
  for (Index k = 0; k < n; ++k) res.values[static_cast<std::size_t>(k)] = Complex(dt(k), ds(k));
  res.dist = op_norm(t - res.first) + op_norm(s - res.second);
  res.commutator_residual = commutator_norm(res.first, res.second);
  res.iterations = jb.iterations;
  res.scaling_ratio = safe_sqrt_ratio(res.dist, res.input_commutator);
  if (!jb.converged && !cfg.accept_unconverged)
    throw OracleDidNotConverge("joint diagonalization did not converge", res, jb.off_diagonal);
  return res;
}

OracleResult normal_approximant(const Matrix& a, const OracleConfig& cfg) {
  require_square(a, "normal_approximant");
  const Matrix x = hermitian_part(a);
  const Matrix y = (a - a.adjoint()) / Complex(0, 2);
  OracleResult h = commuting_hermitian_pair(x, y, cfg);
  OracleResult res;
  res.input_commutator = commutator_norm(a, a.adjoint());
  res.iterations = h.iterations;
  if (h.short_circuit) {
    res.first = a;
    res.second = a.adjoint();
    res.short_circuit = true;
    res.commutator_residual = res.input_commutator;
    return res;
  }
  res.basis = h.basis;
  res.values = h.values;
  Vector lam(static_cast<Index>(h.values.size()));
  for (Index k = 0; k < lam.size(); ++k) lam(k) = h.values[static_cast<std::size_t>(k)];
  res.first = h.basis * lam.asDiagonal() * h.basis.adjoint();
  res.second = res.first.adjoint();
  res.dist = op_norm(a - res.first);
  res.commutator_residual = commutator_norm(res.first, res.second);
  res.scaling_ratio = safe_sqrt_ratio(res.dist, res.input_commutator);
  return res;
}

OracleResult normal_approximant_annulus(const Matrix& a, const OracleConfig& cfg) {
  require_square(a, "normal_approximant_annulus");
  if (a.rows() == 0) return {};
  const RealVector sv = dense::singular_values(a);
  const double smax = sv(0), smin = sv(sv.size() - 1);
  if (smin < 1.0 - 0.2 || smax > 3.0 + 0.2)
    throw Error(ErrorCode::OutOfAnnulus, "singular values must lie in [1, 3] up to slack 0.2",
                smin < 0.8 ? smin : smax);

  OracleResult res = normal_approximant(a, cfg);
  if (res.short_circuit) {
    // normal already; clamp exactly through an eigenbasis
    const dense::Schur sch = dense::schur(a);
    res.basis = orthonormalize(sch.z);
    res.values.clear();
    for (Index k = 0; k < a.rows(); ++k) res.values.push_back(sch.t(k, k));
  }
  bool moved = false;
  Vector lam(a.rows());
  for (Index k = 0; k < lam.size(); ++k) {
    Complex z = res.values[static_cast<std::size_t>(k)];
    const double r = std::abs(z);
    if (r < 1.0) {
      z = r > 0 ? z / r : Complex(1.0);
      moved = true;
    } else if (r > 3.0) {
      z *= 3.0 / r;
      moved = true;
    }
    lam(k) = z;
    res.values[static_cast<std::size_t>(k)] = z;
  }
  if (!res.short_circuit || moved) {
    res.first = res.basis * lam.asDiagonal() * res.basis.adjoint();
    res.second = res.first.adjoint();
    res.short_circuit = res.short_circuit && !moved;
    res.dist = op_norm(a - res.first);
    res.commutator_residual = commutator_norm(res.first, res.second);
    res.scaling_ratio = safe_sqrt_ratio(res.dist, res.input_commutator);
  }
  return res;
}

OracleResult commuting_hermitian_unitary(const Matrix& t_in, const UnitaryMatrix& s, const OracleConfig& cfg) {
  require_same_size(t_in, s.matrix(), "commuting_hermitian_unitary");
  const Matrix t = HermitianMatrix(t_in, 1e-9).matrix();
  const double tn = op_norm(t);
  if (tn > 1.0 + 1e-9) throw Error(ErrorCode::InvalidInput, "commuting_hermitian_unitary: ||t|| > 1", tn);
  OracleResult res;
  res.input_commutator = commutator_norm(t, s.matrix());
  if (res.input_commutator <= cfg.commute_tol) {
    res.first = t;
    res.second = s.matrix();
    res.commutator_residual = res.input_commutator;
    res.short_circuit = true;
    return res;
  }
  const Index n = t.rows();
  const Matrix a = s.matrix() * (t + 2.0 * Matrix::Identity(n, n));
  OracleResult b = normal_approximant_annulus(a, cfg);
  Vector mod(n), ph(n);
  for (Index k = 0; k < n; ++k) {
    const Complex z = b.values[static_cast<std::size_t>(k)];
    const double r = std::abs(z);
    mod(k) = std::clamp(r - 2.0, -1.0, 1.0);
    ph(k) = z / r;
  }
  res.basis = b.basis;
  res.values = b.values;
  res.first = hermitian_part(b.basis * mod.asDiagonal() * b.basis.adjoint());
  res.second = b.basis * ph.asDiagonal() * b.basis.adjoint();
  res.dist = op_norm(t - res.first) + op_norm(s.matrix() - res.second);
  res.commutator_residual = commutator_norm(res.first, res.second);
  res.iterations = b.iterations;
  res.scaling_ratio = safe_sqrt_ratio(res.dist, res.input_commutator);
  return res;
}

GappedResult commuting_gapped_unitaries(const UnitaryMatrix& u, const UnitaryMatrix& v, double gap_center, double rho,
                                        const OracleConfig& cfg) {
  require_same_size(u.matrix(), v.matrix(), "commuting_gapped_unitaries");
  if (!(rho > 0)) throw Error(ErrorCode::InvalidInput, "gap radius must be positive", rho);
  const Complex centre = std::polar(1.0, gap_center);
  const SpectralDecomposition spec = eig_unitary(u);
  const double gap = spec.distance_to(centre);
  if (gap < rho) throw Error(ErrorCode::NoSpectralGap, "spectrum meets the gap disc", gap);

  GappedResult out;
  out.gap_measured = gap;
  OracleResult& res = out.result;
  res.input_commutator = commutator_norm(u.matrix(), v.matrix());
  if (res.input_commutator <= cfg.commute_tol) {
    res.first = u.matrix();
    res.second = v.matrix();
    res.commutator_residual = res.input_commutator;
    res.short_circuit = true;
    out.bound_ratio = 0.0;
    return out;
  }
  // rotate the gap to -1 and take arguments in (-pi, pi)
  const double shift = kPi - gap_center;
  const Matrix x = spec.apply([&](double theta) {
    return Complex(std::arg(std::polar(1.0, theta + shift)) / kTwoPi, 0.0);
  });
  OracleResult c = commuting_hermitian_unitary(x, v, cfg);
  const Index n = u.size();
  Matrix up, vp;
  if (c.short_circuit) {
    up = u.matrix();
    vp = v.matrix();
  } else {
    Vector eu(n);
    for (Index k = 0; k < n; ++k) {
      const double xk = std::clamp(std::abs(c.values[static_cast<std::size_t>(k)]) - 2.0, -1.0, 1.0);
      eu(k) = std::polar(1.0, kTwoPi * xk - shift);
    }
    up = c.basis * eu.asDiagonal() * c.basis.adjoint();
    vp = c.second;
    out.u_values = eu;
    out.v_values.resize(n);
    for (Index k = 0; k < n; ++k) {
      const Complex z = c.values[static_cast<std::size_t>(k)];
      out.v_values(k) = z / std::abs(z);
    }
  }
  res.first = up;
  res.second = vp;
  res.basis = c.basis;
  res.iterations = c.iterations;
  res.dist = op_norm(u.matrix() - up) + op_norm(v.matrix() - vp);
  res.commutator_residual = commutator_norm(up, vp);
  res.scaling_ratio = safe_sqrt_ratio(res.dist, res.input_commutator);
  out.bound_ratio = res.dist == 0 ? 0.0 : res.dist / (std::sqrt(res.input_commutator / rho));
  return out;
}

}  // namespace acu

