#include "acu/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <string>

#include "dense.hpp"

namespace acu {

namespace {

constexpr Index kDefaultMaxDim = 8192;
constexpr Index kSvdNormLimit = 1024;
// Rotation of the Hermitian part used to split the unitary spectrum.
constexpr double kSplitPhase = 0.6180339887498949;
// Hermitian eigenvalues closer than this are resolved together by a small Schur step.
constexpr double kGroupGap = 1e-4;

void require_finite(const Matrix& a, const char* what) {
  if (!a.allFinite()) throw Error(ErrorCode::InvalidInput, std::string(what) + ": non-finite entries");
}

}  // namespace

Index max_dimension() {
  if (const char* env = std::getenv("ACU_MAX_DIM")) {
    char* end = nullptr;
    const long long v = std::strtoll(env, &end, 10);
    if (end != env && v > 0) return static_cast<Index>(v);
  }
  return kDefaultMaxDim;
}

void check_dimension(Index n, const char* what) {
  const Index cap = max_dimension();
  if (n > cap)
    throw Error(ErrorCode::DimensionCap,
                std::string(what) + ": dimension " + std::to_string(n) + " exceeds cap " + std::to_string(cap),
                static_cast<double>(n));
}

void require_square(const Matrix& a, const char* what) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::InvalidInput, std::string(what) + ": matrix is not square");
}

void require_same_size(const Matrix& a, const Matrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(ErrorCode::InvalidInput, std::string(what) + ": size mismatch");
}

double wrap_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0) t += kTwoPi;
  if (t >= kTwoPi) t -= kTwoPi;
  return t;
}

double angle_distance(double a, double b) {
  const double d = wrap_angle(a - b);
  return std::min(d, kTwoPi - d);
}

double op_norm(const Matrix& a) {
  require_finite(a, "op_norm");
  if (a.size() == 0) return 0.0;
  if (std::max(a.rows(), a.cols()) <= kSvdNormLimit) return dense::singular_values(a)(0);
  // Large inputs: top eigenvalue of the smaller Gram matrix.
  const Matrix gram = a.rows() >= a.cols() ? Matrix(a.adjoint() * a) : Matrix(a * a.adjoint());
  const RealVector w = dense::hermitian_eigenvalues(gram);
  return std::sqrt(std::max(0.0, w(w.size() - 1)));
}

bool op_norm_at_most(const Matrix& a, double bound) {
  if (a.norm() <= bound) return true;
  return op_norm(a) <= bound;
}

Matrix commutator(const Matrix& a, const Matrix& b) {
  require_square(a, "commutator");
  require_same_size(a, b, "commutator");
  return a * b - b * a;
}

double commutator_norm(const Matrix& a, const Matrix& b) { return op_norm(commutator(a, b)); }

// ---------------------------------------------------------------------------

UnitaryMatrix::UnitaryMatrix(Matrix m, double tol) : m_(std::move(m)) {
  require_square(m_, "UnitaryMatrix");
  require_finite(m_, "UnitaryMatrix");
  const Matrix defect = m_.adjoint() * m_ - Matrix::Identity(m_.rows(), m_.cols());
  if (!op_norm_at_most(defect, tol))
    throw Error(ErrorCode::NotAlmostUnitary, "matrix is not unitary within tolerance", op_norm(defect));
}

UnitaryMatrix UnitaryMatrix::identity(Index n) { return UnitaryMatrix(Matrix::Identity(n, n), Trusted{}); }

UnitaryMatrix UnitaryMatrix::trusted(Matrix m) { return UnitaryMatrix(std::move(m), Trusted{}); }

UnitaryMatrix UnitaryMatrix::adjoint() const { return UnitaryMatrix(m_.adjoint(), Trusted{}); }

UnitaryMatrix UnitaryMatrix::operator*(const UnitaryMatrix& other) const {
  require_same_size(m_, other.m_, "UnitaryMatrix product");
  return UnitaryMatrix(m_ * other.m_, Trusted{});
}

HermitianMatrix::HermitianMatrix(const Matrix& m, double tol) {
  require_square(m, "HermitianMatrix");
  require_finite(m, "HermitianMatrix");
  const Matrix skew = m - m.adjoint();
  if (!op_norm_at_most(skew, tol))
    throw Error(ErrorCode::InvalidInput, "matrix is not Hermitian within tolerance", op_norm(skew));
  m_ = 0.5 * (m + m.adjoint());
}

HermitianMatrix HermitianMatrix::trusted(const Matrix& m) {
  require_square(m, "HermitianMatrix");
  return HermitianMatrix(Matrix(0.5 * (m + m.adjoint())), Trusted{});
}

// ---------------------------------------------------------------------------

Projection Projection::from_basis(Matrix basis, double tol) {
  require_finite(basis, "Projection");
  const Matrix gram = basis.adjoint() * basis - Matrix::Identity(basis.cols(), basis.cols());
  if (!op_norm_at_most(gram, tol))
    throw Error(ErrorCode::NotAlmostProjection, "basis is not orthonormal", op_norm(gram));
  Matrix m = basis * basis.adjoint();
  return Projection(std::move(m), std::move(basis));
}

Projection Projection::from_matrix(const Matrix& p, double tol) {
  require_square(p, "Projection");
  require_finite(p, "Projection");
  const Matrix skew = p - p.adjoint();
  if (!op_norm_at_most(skew, kTol.hermitian))
    throw Error(ErrorCode::NotAlmostProjection, "matrix is not Hermitian", op_norm(skew));
  const Matrix h = 0.5 * (p + p.adjoint());
  const Matrix idem = h * h - h;
  if (!op_norm_at_most(idem, tol))
    throw Error(ErrorCode::NotAlmostProjection, "matrix is not idempotent", op_norm(idem));
  const double trace = h.trace().real();
  const double rank = std::round(trace);
  if (std::abs(trace - rank) > kTol.trace)
    throw Error(ErrorCode::NotAlmostProjection, "trace is not an integer", std::abs(trace - rank));
  const dense::HermitianEig eig = dense::hermitian_eig(h);
  Index k = 0;
  for (Index i = 0; i < eig.values.size(); ++i)
    if (eig.values(i) > 0.5) ++k;
  Matrix basis = eig.vectors.rightCols(k);
  Matrix m = basis * basis.adjoint();
  return Projection(std::move(m), std::move(basis));
}

Projection Projection::zero(Index n) { return Projection(Matrix::Zero(n, n), Matrix(n, 0)); }

Projection Projection::identity(Index n) { return Projection(Matrix::Identity(n, n), Matrix::Identity(n, n)); }

Projection Projection::complement() const {
  Matrix b = complement_basis(basis_);
  Matrix m = Matrix::Identity(size(), size()) - m_;
  m = 0.5 * (m + m.adjoint());
  return Projection(std::move(m), std::move(b));
}

Matrix complement_basis(const Matrix& basis) {
  const Index n = basis.rows();
  const Index k = basis.cols();
  if (k == 0) return Matrix::Identity(n, n);
  if (k == n) return Matrix(n, 0);
  Eigen::HouseholderQR<Matrix> qr(basis);
  Matrix q = qr.householderQ();
  return q.rightCols(n - k);
}

Matrix orthonormalize(const Matrix& a) {
  if (a.cols() == 0) return a;
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ() * Matrix::Identity(a.rows(), a.cols());
  // keep orientation close to the input
  const Matrix r = qr.matrixQR().topRows(a.cols()).triangularView<Eigen::Upper>();
  for (Index j = 0; j < a.cols(); ++j) {
    const Complex d = r(j, j);
    if (std::abs(d) > 0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

// ---------------------------------------------------------------------------

Arc::Arc(double start, double length, bool closed_start, bool closed_end)
    : start_(wrap_angle(start)), length_(length), closed_start_(closed_start), closed_end_(closed_end) {
  if (!std::isfinite(start) || !std::isfinite(length) || length <= 0 || length > kTwoPi + 1e-15)
    throw Error(ErrorCode::InvalidInput, "arc length must lie in (0, 2pi]", length);
  if (length_ >= kTwoPi) {
    length_ = kTwoPi;
    closed_start_ = closed_end_ = true;
  }
}

Arc Arc::between(double from, double to, bool closed_start, bool closed_end) {
  double len = wrap_angle(to - from);
  if (len == 0) len = kTwoPi;
  return Arc(from, len, closed_start, closed_end);
}

Arc Arc::full() { return Arc(0.0, kTwoPi); }

bool Arc::contains(double angle) const {
  if (is_full()) return true;
  const double off = wrap_angle(angle - start_);
  if (off == 0) return closed_start_;
  if (off < length_) return true;
  if (off == length_) return closed_end_;
  return false;
}

Arc Arc::complement() const {
  if (is_full()) throw Error(ErrorCode::InvalidInput, "complement of the full circle is empty");
  return Arc(start_ + length_, kTwoPi - length_, !closed_end_, !closed_start_);
}

Arc Arc::rotated(double by) const { return Arc(start_ + by, length_, closed_start_, closed_end_); }

Arc Arc::with_boundaries(double start, double end) const { return between(start, end, closed_start_, closed_end_); }

double Arc::boundary_distance(double angle) const {
  if (is_full()) return std::numeric_limits<double>::infinity();
  return std::min(angle_distance(angle, start_), angle_distance(angle, start_ + length_));
}

// ---------------------------------------------------------------------------

SpectralDecomposition::SpectralDecomposition(Matrix vectors, std::vector<EigenCluster> clusters, double cluster_tol)
    : vectors_(std::move(vectors)), clusters_(std::move(clusters)), cluster_tol_(cluster_tol) {}

Matrix SpectralDecomposition::cluster_basis(std::size_t i) const {
  const EigenCluster& c = clusters_.at(i);
  return vectors_.middleCols(c.offset, c.size);
}

Projection SpectralDecomposition::projector(std::size_t i) const {
  return Projection::from_basis(cluster_basis(i));
}

Matrix SpectralDecomposition::basis_for(const Arc& arc, double boundary_tol) const {
  Index k = 0;
  for (const EigenCluster& c : clusters_) {
    const double d = arc.boundary_distance(c.angle);
    if (d < boundary_tol) throw Error(ErrorCode::BoundaryEigenvalue, "eigenvalue on arc boundary", d);
    if (arc.contains(c.angle)) k += c.size;
  }
  Matrix b(dim(), k);
  Index col = 0;
  for (const EigenCluster& c : clusters_) {
    if (!arc.contains(c.angle)) continue;
    b.middleCols(col, c.size) = vectors_.middleCols(c.offset, c.size);
    col += c.size;
  }
  return b;
}

Projection SpectralDecomposition::projection(const Arc& arc, double boundary_tol) const {
  return Projection::from_basis(basis_for(arc, boundary_tol));
}

Index SpectralDecomposition::count_in(const Arc& arc) const {
  Index k = 0;
  for (const EigenCluster& c : clusters_)
    if (arc.contains(c.angle)) k += c.size;
  return k;
}

Matrix SpectralDecomposition::apply(const std::function<Complex(double)>& f) const {
  Vector values(dim());
  for (const EigenCluster& c : clusters_) values.segment(c.offset, c.size).setConstant(f(c.angle));
  return (vectors_ * values.asDiagonal()) * vectors_.adjoint();
}

Matrix SpectralDecomposition::reconstruct() const {
  return apply([](double t) { return std::polar(1.0, t); });
}

std::vector<double> SpectralDecomposition::angles() const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(dim()));
  for (const EigenCluster& c : clusters_)
    for (Index i = 0; i < c.size; ++i) out.push_back(c.angle);
  std::sort(out.begin(), out.end());
  return out;
}

double SpectralDecomposition::min_boundary_distance(const Arc& arc) const {
  double d = std::numeric_limits<double>::infinity();
  for (const EigenCluster& c : clusters_) d = std::min(d, arc.boundary_distance(c.angle));
  return d;
}

double SpectralDecomposition::distance_to(Complex z) const {
  double d = std::numeric_limits<double>::infinity();
  for (const EigenCluster& c : clusters_) d = std::min(d, std::abs(std::polar(1.0, c.angle) - z));
  return d;
}

namespace {

struct Eigenpair {
  double angle;
  Index column;
};

double circular_mean(const std::vector<double>& angles) {
  Complex s = 0;
  for (double a : angles) s += std::polar(1.0, a);
  return wrap_angle(std::arg(s));
}

}  // namespace

SpectralDecomposition eig_unitary(const UnitaryMatrix& u, double cluster_tol) {
  const Matrix& m = u.matrix();
  const Index n = m.rows();
  if (n == 0) return SpectralDecomposition(Matrix(0, 0), {}, cluster_tol);

  // The Hermitian part of a rotated copy commutes with u; its eigenspaces are sums of
  // eigenspaces of u. Near-degenerate groups are resolved by a Schur step on the group.
  const Complex phase = std::polar(1.0, -kSplitPhase);
  const Matrix rotated = phase * m;
  const Matrix h = 0.5 * (rotated + rotated.adjoint());
  const dense::HermitianEig eig = dense::hermitian_eig(h);

  Matrix raw(n, n);
  std::vector<double> raw_angles(static_cast<std::size_t>(n));
  Index start = 0;
  while (start < n) {
    Index stop = start + 1;
    while (stop < n && eig.values(stop) - eig.values(stop - 1) < kGroupGap) ++stop;
    const Index k = stop - start;
    const Matrix block = eig.vectors.middleCols(start, k);
    if (k == 1) {
      raw.col(start) = block.col(0);
      const Complex lambda = (block.adjoint() * (m * block))(0, 0);
      raw_angles[static_cast<std::size_t>(start)] = wrap_angle(std::arg(lambda));
    } else {
      const Matrix small = block.adjoint() * (m * block);
      const dense::Schur sch = dense::schur(small);
      raw.middleCols(start, k) = block * sch.z;
      for (Index i = 0; i < k; ++i)
        raw_angles[static_cast<std::size_t>(start + i)] = wrap_angle(std::arg(sch.t(i, i)));
    }
    start = stop;
  }

  std::vector<Eigenpair> pairs(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) pairs[static_cast<std::size_t>(i)] = {raw_angles[static_cast<std::size_t>(i)], i};
  std::sort(pairs.begin(), pairs.end(), [](const Eigenpair& a, const Eigenpair& b) {
    return a.angle < b.angle || (a.angle == b.angle && a.column < b.column);
  });

  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (groups.empty() || pairs[i].angle - pairs[i - 1].angle >= cluster_tol)
      groups.emplace_back();
    groups.back().push_back(i);
  }
  if (groups.size() > 1 && pairs.front().angle + kTwoPi - pairs.back().angle < cluster_tol) {
    auto& last = groups.back();
    groups.front().insert(groups.front().begin(), last.begin(), last.end());
    groups.pop_back();
  }

  struct Pending {
    double angle;
    std::vector<std::size_t> members;
  };
  std::vector<Pending> pending;
  pending.reserve(groups.size());
  for (auto& g : groups) {
    std::vector<double> a;
    a.reserve(g.size());
    for (std::size_t i : g) a.push_back(pairs[i].angle);
    pending.push_back({circular_mean(a), std::move(g)});
  }
  std::sort(pending.begin(), pending.end(), [](const Pending& a, const Pending& b) { return a.angle < b.angle; });

  Matrix vectors(n, n);
  std::vector<EigenCluster> clusters;
  clusters.reserve(pending.size());
  Index offset = 0;
  for (const Pending& p : pending) {
    const Index k = static_cast<Index>(p.members.size());
    Matrix block(n, k);
    for (Index j = 0; j < k; ++j) block.col(j) = raw.col(pairs[p.members[static_cast<std::size_t>(j)]].column);
    vectors.middleCols(offset, k) = k > 1 ? orthonormalize(block) : Matrix(block.col(0).normalized());
    clusters.push_back({p.angle, offset, k});
    offset += k;
  }

  SpectralDecomposition out(std::move(vectors), std::move(clusters), cluster_tol);
  const Matrix residual = out.reconstruct() - m;
  if (!op_norm_at_most(residual, kTol.reconstruction))
    throw Error(ErrorCode::NumericalFailure, "eigendecomposition does not reconstruct the input", op_norm(residual));
  return out;
}

Projection spectral_projection(const UnitaryMatrix& u, const Arc& arc, double boundary_tol) {
  if (arc.is_full()) return Projection::identity(u.size());
  return eig_unitary(u).projection(arc, boundary_tol);
}

Matrix apply_circle_function(const UnitaryMatrix& u, const std::function<Complex(double)>& f) {
  return eig_unitary(u).apply(f);
}

Arc nudge_arc(const Arc& arc, const SpectralDecomposition& spec, double boundary_tol) {
  if (arc.is_full() || spec.clusters().empty()) return arc;
  std::vector<double> a;
  for (const EigenCluster& c : spec.clusters()) a.push_back(c.angle);
  std::sort(a.begin(), a.end());
  auto move = [&](double b) {
    double nearest = a.front();
    std::size_t idx = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (angle_distance(a[i], b) < angle_distance(nearest, b)) {
        nearest = a[i];
        idx = i;
      }
    if (angle_distance(nearest, b) >= boundary_tol) return b;
    if (a.size() == 1) return wrap_angle(nearest + kPi);
    const double prev = a[(idx + a.size() - 1) % a.size()];
    const double next = a[(idx + 1) % a.size()];
    const double gap_before = wrap_angle(nearest - prev);
    const double gap_after = wrap_angle(next - nearest);
    return gap_after >= gap_before ? wrap_angle(nearest + 0.5 * gap_after) : wrap_angle(nearest - 0.5 * gap_before);
  };
  const double s = move(arc.start());
  const double e = move(arc.end());
  return Arc::between(s, e, arc.closed_start(), arc.closed_end());
}

// ---------------------------------------------------------------------------

UnitaryMatrix polar_unitary(const Matrix& a, double singular_floor) {
  require_square(a, "polar_unitary");
  const dense::Svd s = dense::svd(a);
  if (a.rows() > 0) {
    const double smin = s.s(s.s.size() - 1);
    if (smin <= singular_floor) throw Error(ErrorCode::SingularInput, "polar factor of a singular matrix", smin);
  }
  return UnitaryMatrix::trusted(s.u * s.v.adjoint());
}

NearestUnitary nearest_unitary(const Matrix& w) {
  require_square(w, "nearest_unitary");
  const dense::Svd s = dense::svd(w);
  double rho = 0;
  double defect = 0;
  for (Index i = 0; i < s.s.size(); ++i) {
    rho = std::max(rho, std::abs(s.s(i) * s.s(i) - 1.0));
    defect = std::max(defect, std::abs(s.s(i) - 1.0));
  }
  if (rho >= 0.2) throw Error(ErrorCode::NotAlmostUnitary, "||w*w - 1|| must be below 1/5", rho);
  return {UnitaryMatrix::trusted(s.u * s.v.adjoint()), defect, rho};
}

Compression compress_unitary(const UnitaryMatrix& u, const Matrix& basis) {
  const Matrix& m = u.matrix();
  if (basis.rows() != m.rows()) throw Error(ErrorCode::InvalidInput, "compress_unitary: size mismatch");
  const Matrix ub = m * basis;
  const Matrix c = basis.adjoint() * ub;
  const Matrix leak_out = ub - basis * c;
  const Matrix leak_in = m.adjoint() * basis - basis * c.adjoint();
  const double kappa = std::max(op_norm(leak_out), op_norm(leak_in));
  try {
    NearestUnitary nu = nearest_unitary(c);
    return {std::move(nu.u), basis, nu.defect, kappa};
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NotAlmostUnitary)
      throw Error(ErrorCode::NotAlmostUnitary, "compression too far from unitary", kappa);
    throw;
  }
}

Compression compress_unitary(const UnitaryMatrix& u, const Projection& p) { return compress_unitary(u, p.basis()); }

Matrix direct_sum(const Matrix& a, const Matrix& b) {
  check_dimension(a.rows() + b.rows(), "direct_sum");
  Matrix out = Matrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

Matrix embed(const Matrix& a, Index total, Index offset) {
  check_dimension(total, "embed");
  if (offset < 0 || offset + a.rows() > total || offset + a.cols() > total)
    throw Error(ErrorCode::InvalidInput, "embed: block does not fit");
  Matrix out = Matrix::Zero(total, total);
  out.block(offset, offset, a.rows(), a.cols()) = a;
  return out;
}

// ---------------------------------------------------------------------------

HermitianSpectrum::HermitianSpectrum(const Matrix& h) {
  require_square(h, "HermitianSpectrum");
  dense::HermitianEig e = dense::hermitian_eig(0.5 * (h + h.adjoint()));
  values_ = std::move(e.values);
  vectors_ = std::move(e.vectors);
}

Matrix HermitianSpectrum::exp_i(double t) const {
  Vector phases(values_.size());
  for (Index i = 0; i < values_.size(); ++i) phases(i) = std::polar(1.0, t * values_(i));
  return (vectors_ * phases.asDiagonal()) * vectors_.adjoint();
}

double HermitianSpectrum::norm() const {
  if (values_.size() == 0) return 0.0;
  return std::max(std::abs(values_(0)), std::abs(values_(values_.size() - 1)));
}

Matrix unitary_log(const UnitaryMatrix& u) {
  const SpectralDecomposition spec = eig_unitary(u);
  const auto& cl = spec.clusters();
  if (cl.empty()) return Matrix(0, 0);
  Vector values(spec.dim());
  for (const EigenCluster& c : cl) {
    double t = c.angle > kPi ? c.angle - kTwoPi : c.angle;
    if (angle_distance(c.angle, kPi) < kTol.boundary) t = kPi;
    values.segment(c.offset, c.size).setConstant(t);
  }
  return (spec.vectors() * values.asDiagonal()) * spec.vectors().adjoint();
}

}  // namespace acu
