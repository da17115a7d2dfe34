#include "acu/projections.hpp"

#include <algorithm>
#include <cmath>

#include "dense.hpp"

namespace acu {

namespace {

constexpr double kSharpenLimit = 0.1;
constexpr double kDisjoinLimit = 0.01;
constexpr double kAlignedSine = 1e-10;

}  // namespace

AlmostProjection almost_projection(const Matrix& t0) {
  HermitianMatrix h(t0);
  const RealVector w = dense::hermitian_eigenvalues(h.matrix());
  double defect = 0;
  for (Index i = 0; i < w.size(); ++i) defect = std::max(defect, std::abs(w(i) * w(i) - w(i)));
  return {std::move(h), defect};
}

Sharpened sharpen_projection(const Matrix& t0, Checks checks) {
  require_square(t0, "sharpen_projection");
  const HermitianMatrix h(t0, 1e-10);
  const dense::HermitianEig eig = dense::hermitian_eig(h.matrix());
  double defect = 0;
  double dist = 0;
  Index k = 0;
  for (Index i = 0; i < eig.values.size(); ++i) {
    const double l = eig.values(i);
    defect = std::max(defect, std::abs(l * l - l));
    if (l > 0.5) {
      ++k;
      dist = std::max(dist, std::abs(l - 1.0));
    } else {
      dist = std::max(dist, std::abs(l));
    }
  }
  if (checks == Checks::Strict && defect >= kSharpenLimit)
    throw Error(ErrorCode::NotAlmostProjection, "||t0^2 - t0|| must be below 1/10", defect);
  return {Projection::from_basis(eig.vectors.rightCols(k)), dist, defect};
}

Matrix sharpen_by_polar(const Matrix& t0) {
  const Index n = t0.rows();
  const Matrix id = Matrix::Identity(n, n);
  return 0.5 * (id + polar_unitary(2.0 * t0 - id).matrix());
}

Index rank_plus(const Matrix& t0, Checks checks) {
  require_square(t0, "rank_plus");
  const Matrix h = 0.5 * (t0 + t0.adjoint());
  return sharpen_projection(h, checks).t.rank();
}

Intertwiner intertwine_projections(const Projection& p, const Projection& q) {
  require_same_size(p.matrix(), q.matrix(), "intertwine_projections");
  const Index n = p.size();
  const Matrix diff = p.matrix() - q.matrix();
  const double gap = op_norm(diff);
  if (gap >= 1.0) throw Error(ErrorCode::ProjectionsTooFar, "||p - q|| must be below 1", gap);
  const Matrix id = Matrix::Identity(n, n);
  const Matrix a = q.matrix() * p.matrix() + (id - q.matrix()) * (id - p.matrix());
  const dense::HermitianEig e = dense::hermitian_eig(id - diff * diff);
  RealVector inv_sqrt(n);
  for (Index i = 0; i < n; ++i) {
    if (e.values(i) <= 1e-14) throw Error(ErrorCode::ProjectionsTooFar, "1 - (p-q)^2 is singular", gap);
    inv_sqrt(i) = 1.0 / std::sqrt(e.values(i));
  }
  const Matrix r = (e.vectors * inv_sqrt.asDiagonal()) * e.vectors.adjoint();
  Matrix sigma = a * r;
  const double dist = op_norm(sigma - id);
  return {UnitaryMatrix::trusted(std::move(sigma)), dist};
}

Disjoiner disjoin_projections(const Projection& p, const Projection& q, Checks checks) {
  require_same_size(p.matrix(), q.matrix(), "disjoin_projections");
  const Index n = p.size();
  const double overlap = p.rank() && q.rank() ? op_norm(p.basis().adjoint() * q.basis()) : 0.0;
  if (checks == Checks::Strict && overlap >= kDisjoinLimit)
    throw Error(ErrorCode::NotAlmostOrthogonal, "||p q|| must be below 1/100", overlap);
  if (overlap == 0.0) return {UnitaryMatrix::identity(n), p, 0.0, 0.0};

  // eigenvectors of (1-q) p (1-q) above 1/2 come from the singular vectors of (1-q) P
  const Matrix qc = q.complement().basis();
  const Matrix c = qc.adjoint() * p.basis();
  const dense::Svd s = dense::svd(c);
  Index k = 0;
  for (Index i = 0; i < s.s.size(); ++i)
    if (s.s(i) * s.s(i) > 0.5) ++k;
  if (k != p.rank())
    throw Error(ErrorCode::NotAlmostOrthogonal, "range of p is not preserved by cutting away q", overlap);
  Projection image = Projection::from_basis(orthonormalize(qc * s.u.leftCols(k)));
  Intertwiner kato = intertwine_projections(p, image);
  return {std::move(kato.sigma), std::move(image), kato.dist, overlap};
}

LowRankRotation rotation_between(const Matrix& x, const Matrix& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols())
    throw Error(ErrorCode::RankMismatch, "rotation_between: ranges of different dimension");
  const Index n = x.rows();
  const Index k = x.cols();
  if (k == 0) return {Matrix(n, 0), Matrix(n, 0), 0.0};
  const dense::Svd s = dense::svd(x.adjoint() * y);
  const Matrix x1 = x * s.u;
  const Matrix y1 = y * s.v;
  double max_angle = 0;
  std::vector<Index> planes;
  RealVector cosines(k), sines(k);
  for (Index i = 0; i < k; ++i) {
    const double c = std::min(1.0, s.s(i));
    if (c <= 1e-12) throw Error(ErrorCode::ProjectionsTooFar, "ranges contain orthogonal directions", c);
    cosines(i) = c;
    sines(i) = std::sqrt(std::max(0.0, 1.0 - c * c));
    max_angle = std::max(max_angle, std::acos(c));
    if (sines(i) > kAlignedSine) planes.push_back(i);
  }
  const Index m = static_cast<Index>(planes.size());
  Matrix a(n, k + m), b(n, k + m);
  a.leftCols(k) = y1 - x1;
  b.leftCols(k) = x1;
  for (Index j = 0; j < m; ++j) {
    const Index i = planes[static_cast<std::size_t>(j)];
    const Vector xt = (y1.col(i) - cosines(i) * x1.col(i)) / sines(i);
    a.col(k + j) = (cosines(i) - 1.0) * xt - sines(i) * x1.col(i);
    b.col(k + j) = xt;
  }
  return {std::move(a), std::move(b), max_angle};
}

Matrix apply_rotation(const LowRankRotation& r, const Matrix& v) { return v + r.a * (r.b.adjoint() * v); }

Matrix apply_rotation_adjoint(const LowRankRotation& r, const Matrix& v) { return v + r.b * (r.a.adjoint() * v); }

}  // namespace acu
