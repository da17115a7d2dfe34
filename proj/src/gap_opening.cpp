#include "acu/gap_opening.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "dense.hpp"

namespace acu {

namespace {

constexpr double kEpsCap = 0.099;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Columns grouped in blocks; block i lives on rows [off[i], off[i] + blk[i].rows()).
struct BlockCols {
  Index dim = 0;
  std::vector<Index> off;
  std::vector<Matrix> blk;

  Index cols() const {
    Index c = 0;
    for (const Matrix& b : blk) c += b.cols();
    return c;
  }
  void add(Index offset, Matrix m) {
    if (m.cols() == 0) return;
    off.push_back(offset);
    blk.push_back(std::move(m));
  }
};

Matrix adjoint_times(const BlockCols& a, const BlockCols& b) {
  Matrix out = Matrix::Zero(a.cols(), b.cols());
  Index ca = 0;
  for (std::size_t i = 0; i < a.blk.size(); ++i) {
    const Index alo = a.off[i], ahi = alo + a.blk[i].rows();
    Index cb = 0;
    for (std::size_t j = 0; j < b.blk.size(); ++j) {
      const Index blo = b.off[j], bhi = blo + b.blk[j].rows();
      const Index lo = std::max(alo, blo), hi = std::min(ahi, bhi);
      if (lo < hi)
        out.block(ca, cb, a.blk[i].cols(), b.blk[j].cols()).noalias() +=
            a.blk[i].middleRows(lo - alo, hi - lo).adjoint() * b.blk[j].middleRows(lo - blo, hi - lo);
      cb += b.blk[j].cols();
    }
    ca += a.blk[i].cols();
  }
  return out;
}

struct BlockDiag {
  std::vector<Index> off;
  std::vector<Matrix> blk;
};

// u x, where u is block diagonal and covers the rows of every block of x
BlockCols apply(const BlockDiag& u, const BlockCols& x) {
  BlockCols out;
  out.dim = x.dim;
  for (std::size_t i = 0; i < x.blk.size(); ++i) {
    const Index lo = x.off[i], hi = lo + x.blk[i].rows();
    Index slo = hi, shi = lo;
    for (std::size_t k = 0; k < u.blk.size(); ++k) {
      const Index klo = u.off[k], khi = klo + u.blk[k].rows();
      if (khi <= lo || klo >= hi) continue;
      slo = std::min(slo, klo);
      shi = std::max(shi, khi);
    }
    Matrix m = Matrix::Zero(shi - slo, x.blk[i].cols());
    for (std::size_t k = 0; k < u.blk.size(); ++k) {
      const Index klo = u.off[k], khi = klo + u.blk[k].rows();
      const Index a = std::max(lo, klo), b = std::min(hi, khi);
      if (a >= b) continue;
      m.middleRows(klo - slo, khi - klo).noalias() +=
          u.blk[k].middleCols(a - klo, b - a) * x.blk[i].middleRows(a - lo, b - a);
    }
    out.add(slo, std::move(m));
  }
  return out;
}

// Exactly commuting unitaries in a common eigenbasis.
struct JointBlock {
  Matrix basis;
  Vector alpha;  // eigenvalues of the first
  Vector beta;   // of the second

  Matrix first() const { return basis * alpha.asDiagonal() * basis.adjoint(); }
  Matrix second() const { return basis * beta.asDiagonal() * basis.adjoint(); }
};

Complex unit(Complex z) { return std::abs(z) > 0 ? z / std::abs(z) : Complex(1.0); }

// Schur vectors of a generic combination are common eigenvectors of a commuting normal pair.
JointBlock joint_eig(const Matrix& u, const Matrix& v) {
  const Index n = u.rows();
  JointBlock jb;
  if (n == 0) {
    jb.basis = Matrix(0, 0);
    return jb;
  }
  const Complex c = std::polar(0.6180339887498949, 0.7734);
  const dense::Schur sch = dense::schur(u + c * v);
  jb.basis = orthonormalize(sch.z);
  jb.alpha.resize(n);
  jb.beta.resize(n);
  for (Index k = 0; k < n; ++k) {
    const auto z = jb.basis.col(k);
    jb.alpha(k) = unit(z.dot(u * z));
    jb.beta(k) = unit(z.dot(v * z));
  }
  const double err = std::max(op_norm(u - jb.first()), op_norm(v - jb.second()));
  if (err > 1e-8) throw Error(ErrorCode::NumericalFailure, "no common eigenbasis for a commuting pair", err);
  return jb;
}

class Recorder {
 public:
  Recorder(PipelineReport& r, Mode mode) : r_(r), mode_(mode) {}

  void measure(const std::string& name, double value, double bound = kNaN) {
    r_.stages.push_back({name, value, bound});
  }
  void at_most(const std::string& name, double value, double bound, const std::string& stage) {
    r_.stages.push_back({name, value, bound});
    if (!(value <= bound)) fail(name + " above its bound", value, stage);
  }
  void at_least(const std::string& name, double value, double bound, const std::string& stage) {
    r_.stages.push_back({name, value, bound, true});
    if (!(value >= bound)) fail(name + " below its bound", value, stage);
  }
  void fail(const std::string& what, double value, const std::string& stage) {
    if (mode_ == Mode::Certified) throw Error(ErrorCode::StagePreconditionFailed, what, value, stage);
    r_.flagged = true;
    r_.notes.push_back(stage + ": " + what);
  }
  void note(const std::string& s) { r_.notes.push_back(s); }
  Mode mode() const { return mode_; }

 private:
  PipelineReport& r_;
  Mode mode_;
};

UnitaryMatrix unitary_part(const Matrix& w, const std::string& name, Recorder& rec) {
  if (w.rows() == 0) return UnitaryMatrix::trusted(w);
  try {
    NearestUnitary nu = nearest_unitary(w);
    rec.measure(name, nu.defect);
    return nu.u;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotAlmostUnitary) throw;
    rec.fail(name + ": compression is not almost unitary", e.measured(), name);
    UnitaryMatrix u = polar_unitary(w);
    rec.measure(name, op_norm(w - u.matrix()));
    return u;
  }
}

// gapped oracle, with the common eigenbasis made explicit
JointBlock gapped_block(const Matrix& u, const Matrix& v, double center, double rho, const GapOpeningConfig& cfg,
                        Recorder& rec, const std::string& stage, double& dist, double& gap) {
  dist = 0;
  gap = std::numeric_limits<double>::infinity();
  if (u.rows() == 0) return joint_eig(u, v);
  OracleConfig oc = cfg.oracle;
  if (cfg.mode == Mode::BestEffort) oc.accept_unconverged = true;
  const UnitaryMatrix uu = UnitaryMatrix::trusted(u);
  const UnitaryMatrix vv = UnitaryMatrix::trusted(v);
  GappedResult g;
  try {
    g = commuting_gapped_unitaries(uu, vv, center, rho, oc);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoSpectralGap) throw;
    rec.fail("spectral gap below " + std::to_string(rho), e.measured(), stage);
    if (!(e.measured() > 1e-6)) throw;
    g = commuting_gapped_unitaries(uu, vv, center, 0.5 * e.measured(), oc);
  }
  dist = g.result.dist;
  gap = g.gap_measured;
  if (g.result.basis.size() == 0 || g.u_values.size() == 0) return joint_eig(g.result.first, g.result.second);
  JointBlock jb;
  jb.basis = g.result.basis;
  jb.alpha = g.u_values;
  jb.beta = g.v_values;
  return jb;
}

double min_singular(const Matrix& a) {
  if (a.rows() == 0) return std::numeric_limits<double>::infinity();
  const RealVector s = dense::singular_values(a);
  return s(s.size() - 1);
}

void check_eps(double eps) {
  if (!(eps > 0 && eps < 0.1)) throw Error(ErrorCode::InvalidEpsilon, "eps must lie in (0, 1/10)", eps);
}

Matrix place_blocks(Index dim, const std::vector<std::pair<Index, const Matrix*>>& blocks) {
  Matrix out = Matrix::Zero(dim, dim);
  for (const auto& [o, b] : blocks) out.block(o, o, b->rows(), b->cols()) = *b;
  return out;
}

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

void finish(ApproximantPair& out, const UnitaryMatrix& u, const UnitaryMatrix& v) {
  PipelineReport& r = out.report;
  const Index n = u.size();
  const Matrix id = Matrix::Identity(n, n);
  r.distance_u = op_norm(u.matrix() - out.u.matrix());
  r.distance_v = op_norm(v.matrix() - out.v.matrix());
  r.commutator_residual = commutator_norm(out.u.matrix(), out.v.matrix());
  r.unitarity_u = op_norm(out.u.matrix().adjoint() * out.u.matrix() - id);
  r.unitarity_v = op_norm(out.v.matrix().adjoint() * out.v.matrix() - id);
}

}  // namespace

// ---------------------------------------------------------------------------

UnitaryMatrix rotate_double(const UnitaryMatrix& u, double eps) {
  check_eps(eps);
  const Index n = u.size();
  const Matrix& m = u.matrix();
  const Matrix id = Matrix::Identity(n, n);
  // cos(pi/2 - eps), sin(pi/2 - eps); the four factors multiplied out
  const double c = std::sin(eps);
  const double s = std::cos(eps);
  Matrix w(2 * n, 2 * n);
  w.topLeftCorner(n, n) = c * c * id + s * s * m;
  w.topRightCorner(n, n) = c * s * (m - id);
  w.bottomLeftCorner(n, n) = c * s * (id - m.adjoint());
  w.bottomRightCorner(n, n) = s * s * m.adjoint() + c * c * id;
  return UnitaryMatrix::trusted(std::move(w));
}

Matrix AmplifiedPair::u_amp_dense() const {
  std::vector<std::pair<Index, const Matrix*>> b;
  for (int j = 0; j < d; ++j) b.emplace_back(amp_offset(j), &amp_blocks[j]);
  return place_blocks(dim(), b);
}

Matrix AmplifiedPair::v_amp_dense() const {
  Matrix out = Matrix::Zero(dim(), dim());
  for (int j = 0; j < 2 * d; ++j) out.block(j * n, j * n, n, n) = v;
  return out;
}

Matrix AmplifiedPair::u_sum_path_dense() const {
  std::vector<std::pair<Index, const Matrix*>> b;
  b.emplace_back(0, &u);
  for (int j = 0; j < d; ++j) b.emplace_back(path_offset(j), &path_blocks[j]);
  return place_blocks(dim(), b);
}

Matrix AmplifiedPair::v_sum_path_dense() const { return v_amp_dense(); }

AmplifiedPair amplify(const UnitaryMatrix& u, const UnitaryMatrix& v, const UnitaryPath& path, double eps,
                      std::optional<double> delta_bound) {
  require_same_size(u.matrix(), v.matrix(), "amplify");
  check_eps(eps);
  const Index n = u.size();
  if (path.dim() != n) throw Error(ErrorCode::InvalidInput, "path dimension differs from u");
  const Matrix id = Matrix::Identity(n, n);
  const double start = op_norm(path.start() - u.matrix());
  if (start > 1e-9) throw Error(ErrorCode::PathNotAdmissible, "path does not start at u", start);
  const double end = op_norm(path.end() - id);
  if (end > 1e-9) throw Error(ErrorCode::PathNotAdmissible, "path does not end at 1", end);

  std::vector<Matrix> s = subdivide_path(path, eps);
  s.front() = u.matrix();
  s.back() = id;
  if (s.size() < 2) s.push_back(id);
  AmplifiedPair a;
  a.n = n;
  a.d = static_cast<int>(s.size()) - 1;
  a.eps = eps;
  a.u = u.matrix();
  a.v = v.matrix();
  check_dimension(a.dim(), "amplified pair");
  a.samples.assign(s.begin(), s.end() - 1);

  for (int j = 0; j < a.d; ++j) {
    a.delta = std::max(a.delta, commutator_norm(s[j], v.matrix()));
    a.path_step = std::max(a.path_step, op_norm(s[j + 1] - s[j]));
  }
  if (delta_bound && a.delta > *delta_bound * (1 + 1e-9) + 1e-12)
    throw Error(ErrorCode::PathNotAdmissible, "path commutator above the admissible level", a.delta, "amplify");
  if (a.path_step > eps * (1 + 1e-9))
    throw Error(ErrorCode::PathNotAdmissible, "consecutive samples farther apart than eps", a.path_step, "amplify");

  const Matrix vv = direct_sum(v.matrix(), v.matrix());
  const Matrix id2 = Matrix::Identity(2 * n, 2 * n);
  double amp_move = 0, path_move = 0;
  a.amp_gap = a.path_gap = std::numeric_limits<double>::infinity();
  for (int j = 0; j < a.d; ++j) {
    const UnitaryMatrix uj = UnitaryMatrix::trusted(s[j]);
    a.amp_blocks.push_back(rotate_double(uj, eps).matrix());
    const Matrix& w = a.amp_blocks.back();
    a.amp_commutator = std::max(a.amp_commutator, commutator_norm(w, vv));
    a.amp_gap = std::min(a.amp_gap, min_singular(w + id2));
    amp_move = std::max(amp_move, op_norm(w - direct_sum(s[j], s[j].adjoint())));
  }
  for (int j = 1; j < a.d; ++j) {
    const UnitaryMatrix xj = UnitaryMatrix::trusted(s[j].adjoint());
    a.path_blocks.push_back(rotate_double(xj, eps).matrix());
    const Matrix& w = a.path_blocks.back();
    a.path_commutator = std::max(a.path_commutator, commutator_norm(w, vv));
    a.path_gap = std::min(a.path_gap, min_singular(w + id2));
    path_move = std::max(path_move, op_norm(w - direct_sum(s[j].adjoint(), s[j])));
  }
  a.path_blocks.push_back(id);
  a.path_gap = std::min(a.path_gap, 2.0);
  a.corner_error = op_norm(a.u - a.amp_blocks.front().topLeftCorner(n, n));
  if (a.dim() <= 1024) {
    a.sum_distance = op_norm(a.u_sum_path_dense() - a.u_amp_dense());
    a.sum_distance_exact = true;
  } else {
    a.sum_distance = path_move + a.path_step + amp_move;
  }
  return a;
}

double PipelineReport::stage(const std::string& name) const {
  for (const StageMeasure& s : stages)
    if (s.name == name) return s.value;
  return kNaN;
}

ApproximantPair open_gap(const UnitaryMatrix& u, const UnitaryMatrix& v, const UnitaryPath& path,
                         const GapOpeningConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  require_same_size(u.matrix(), v.matrix(), "open_gap");
  const Index n = u.size();
  ApproximantPair out{u, v, {}};
  PipelineReport& rep = out.report;
  rep.mode = cfg.mode;
  rep.n = n;
  rep.n_total = n;
  rep.delta = commutator_norm(u.matrix(), v.matrix());
  Recorder rec(rep, cfg.mode);
  if (rep.delta <= cfg.oracle.commute_tol) {
    rep.short_circuit = true;
    rec.note("input already commutes");
    finish(out, u, v);
    rep.runtime_ms = elapsed_ms(t0);
    return out;
  }

  double eps = 0;
  if (cfg.eps) {
    eps = *cfg.eps;
  } else {
    double dp = 0;
    for (const Matrix& m : sample_path(path, 16)) dp = std::max(dp, commutator_norm(m, v.matrix()));
    eps = std::min(std::cbrt(dp), kEpsCap);
    if (std::cbrt(dp) > kEpsCap) rec.note("eps capped at 0.099");
  }
  const AmplifiedPair a = amplify(u, v, path, eps);
  const Index D = a.dim();
  rep.eps = eps;
  rep.d = a.d;
  rep.path_delta = a.delta;
  rep.n_total = D;
  rec.measure("amplify.path_step", a.path_step, eps);
  rec.at_most("amplify.amp_commutator", a.amp_commutator, 2 * a.delta + 1e-12, "amplify");
  rec.at_most("amplify.path_commutator", a.path_commutator, 2 * a.delta + 1e-12, "amplify");
  rec.at_least("amplify.amp_gap", a.amp_gap, eps * (1 - 1e-9), "amplify");
  rec.at_least("amplify.path_gap", a.path_gap, eps * (1 - 1e-9), "amplify");
  rec.at_most("amplify.corner_error", a.corner_error, 3 * eps, "amplify");
  rec.at_most(a.sum_distance_exact ? "amplify.sum_distance" : "amplify.sum_distance_bound", a.sum_distance, 7 * eps,
              "amplify");

  // commuting amplified pairs, blockwise
  const Matrix vv = direct_sum(v.matrix(), v.matrix());
  double dmax = 0, gmin = std::numeric_limits<double>::infinity();
  std::vector<JointBlock> amp(a.d), pth(a.d);
  for (int j = 0; j < a.d; ++j) {
    double dist, gap;
    amp[j] = gapped_block(a.amp_blocks[j], vv, kPi, eps * (1 - 1e-9), cfg, rec, "amplified oracle", dist, gap);
    dmax = std::max(dmax, dist);
    gmin = std::min(gmin, gap);
  }
  rec.measure("oracle.amp_distance", dmax);
  dmax = 0;
  for (int j = 0; j < a.d; ++j) {
    double dist, gap;
    const Matrix& vb = j + 1 < a.d ? vv : v.matrix();
    pth[j] = gapped_block(a.path_blocks[j], vb, kPi, eps * (1 - 1e-9), cfg, rec, "path oracle", dist, gap);
    dmax = std::max(dmax, dist);
  }
  rec.measure("oracle.path_distance", dmax);

  // first reduction
  BlockDiag ua, va;
  BlockCols X, E;
  X.dim = E.dim = D;
  std::vector<Complex> alpha_p, beta_p;
  for (int j = 0; j < a.d; ++j) {
    ua.off.push_back(a.amp_offset(j));
    va.off.push_back(a.amp_offset(j));
    ua.blk.push_back(amp[j].first());
    va.blk.push_back(amp[j].second());
    std::vector<Index> cols;
    for (Index k = 0; k < amp[j].alpha.size(); ++k)
      if (amp[j].alpha(k).real() <= -0.5) {
        cols.push_back(k);
        alpha_p.push_back(amp[j].alpha(k));
        beta_p.push_back(amp[j].beta(k));
      }
    Matrix b(amp[j].basis.rows(), static_cast<Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) b.col(static_cast<Index>(c)) = amp[j].basis.col(cols[c]);
    X.add(a.amp_offset(j), std::move(b));
  }
  E.add(0, Matrix::Identity(n, n));
  for (int j = 0; j < a.d; ++j) {
    std::vector<Index> cols;
    for (Index k = 0; k < pth[j].alpha.size(); ++k)
      if (pth[j].alpha(k).real() <= 0.0) cols.push_back(k);
    Matrix b(pth[j].basis.rows(), static_cast<Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) b.col(static_cast<Index>(c)) = pth[j].basis.col(cols[c]);
    E.add(a.path_offset(j), std::move(b));
  }
  const Index kp = X.cols();
  const Index m1 = E.cols();
  rec.measure("first.rank_s_minus", static_cast<double>(kp));
  rec.measure("first.rank_p_plus_q", static_cast<double>(m1));
  if (kp > m1)
    throw Error(ErrorCode::StagePreconditionFailed, "1_{Omega-}(u'_amp) has larger rank than p + q",
                static_cast<double>(kp - m1), "first reduction");

  // (p+q) X = E C; its polar part is sigma X in the coordinates of E
  const Matrix C = adjoint_times(E, X);
  Matrix cpol(m1, kp);
  double cmin = 1.0;
  if (kp > 0) {
    const dense::Svd sv = dense::svd(C);
    cmin = sv.s(sv.s.size() - 1);
    cpol = sv.u * sv.v.adjoint();
  }
  rep.gamma = std::sqrt(std::max(0.0, (1 - cmin) * (1 + cmin)));
  rec.at_most("first.gamma", rep.gamma, 1.0 / 100, "first reduction");
  rec.at_most("first.gamma_inheritance", rep.gamma, 1.0 / 1000, "first reduction");
  if (cmin < 1e-8)
    throw Error(ErrorCode::StagePreconditionFailed, "ran 1_{Omega-}(u'_amp) meets r", rep.gamma, "first reduction");
  rec.measure("first.sigma_distance", std::sqrt(2 * (1 - cmin)), 5 * rep.gamma);

  // sigma is the identity on ran(p+q) minus s_-
  const Matrix K = complement_basis(cpol);
  const BlockCols UE = apply(ua, E);
  const BlockCols VE = apply(va, E);
  const Matrix Tu = adjoint_times(E, UE);
  const Matrix Tv = adjoint_times(E, VE);
  rec.measure("first.cross_term", kp > 0 && K.cols() > 0 ? op_norm(adjoint_times(X, UE) * K) : 0.0);
  const UnitaryMatrix g_plus = unitary_part(K.adjoint() * Tu * K, "first.g_plus_defect", rec);
  const UnitaryMatrix h_plus = unitary_part(K.adjoint() * Tv * K, "first.h_plus_defect", rec);
  rec.measure("first.g_plus_commutator", commutator_norm(g_plus.matrix(), h_plus.matrix()));
  double dist, gap;
  const JointBlock jp = gapped_block(g_plus.matrix(), h_plus.matrix(), kPi, 0.1, cfg, rec, "first reduction", dist, gap);
  rec.measure("first.oracle_plus_distance", dist);
  rec.at_least("first.oracle_plus_gap", gap, 0.1, "first reduction");
  // s_- block is diagonal in the basis sigma X
  rec.measure("first.oracle_minus_distance", 0.0);

  // second reduction
  std::vector<Index> sel;
  for (Index k = 0; k < jp.alpha.size(); ++k)
    if (jp.alpha(k).real() > 0.5) sel.push_back(k);
  const Matrix ktop = K.topRows(n);
  const Matrix B = ktop * jp.basis;  // p-rows of the eigenvectors of g'_+
  rec.measure("second.rank_s_plus", static_cast<double>(sel.size()), static_cast<double>(n));
  if (static_cast<Index>(sel.size()) > n) {
    rec.fail("1_{Re z > 1/2}(g') has larger rank than p", static_cast<double>(sel.size()), "second reduction");
    // keep the eigenvectors with the largest weight on p
    std::stable_sort(sel.begin(), sel.end(), [&](Index x, Index y) { return B.col(x).norm() > B.col(y).norm(); });
    sel.resize(static_cast<std::size_t>(n));
  }
  const Index k2 = static_cast<Index>(sel.size());
  Matrix w2top(n, k2);
  Vector alpha_s(k2), beta_s(k2);
  for (Index c = 0; c < k2; ++c) {
    w2top.col(c) = B.col(sel[static_cast<std::size_t>(c)]);
    alpha_s(c) = jp.alpha(sel[static_cast<std::size_t>(c)]);
    beta_s(c) = jp.beta(sel[static_cast<std::size_t>(c)]);
  }
  Matrix splus(n, k2);
  double c2min = 1.0;
  if (k2 > 0) {
    const dense::Svd sv = dense::svd(w2top);
    c2min = sv.s(sv.s.size() - 1);
    splus = sv.u * sv.v.adjoint();
  }
  const double gamma2 = std::sqrt(std::max(0.0, (1 - c2min) * (1 + c2min)));
  rec.at_most("second.overlap", gamma2, 1.0 / 100, "second reduction");
  if (c2min < 1e-8)
    throw Error(ErrorCode::StagePreconditionFailed, "ran 1_{Re z > 1/2}(g') meets q", gamma2, "second reduction");
  rec.measure("second.tau_distance", std::sqrt(2 * (1 - c2min)), 5 * gamma2);

  const Matrix F2 = complement_basis(splus);
  const Matrix A1 = cpol.topRows(n).adjoint() * F2;
  const Matrix A2 = B.adjoint() * F2;
  Vector ap(kp), bp(kp);
  for (Index k = 0; k < kp; ++k) {
    ap(k) = alpha_p[static_cast<std::size_t>(k)];
    bp(k) = beta_p[static_cast<std::size_t>(k)];
  }
  const Matrix g2 = A1.adjoint() * ap.asDiagonal() * A1 + A2.adjoint() * jp.alpha.asDiagonal() * A2;
  const Matrix h2 = A1.adjoint() * bp.asDiagonal() * A1 + A2.adjoint() * jp.beta.asDiagonal() * A2;
  const UnitaryMatrix g2u = unitary_part(g2, "second.g_minus_defect", rec);
  const UnitaryMatrix h2u = unitary_part(h2, "second.h_minus_defect", rec);
  const JointBlock j2 =
      gapped_block(g2u.matrix(), h2u.matrix(), 0.0, 1.0 / 30, cfg, rec, "second reduction", dist, gap);
  rec.measure("second.oracle_minus_distance", dist);
  rec.at_least("second.oracle_minus_gap", gap, 1.0 / 30, "second reduction");
  rec.measure("second.oracle_plus_distance", 0.0);

  Matrix Q(n, n);
  Q << splus, F2 * j2.basis;
  Vector al(n), be(n);
  al << alpha_s, j2.alpha;
  be << beta_s, j2.beta;
  out.u = UnitaryMatrix::trusted(Q * al.asDiagonal() * Q.adjoint());
  out.v = UnitaryMatrix::trusted(Q * be.asDiagonal() * Q.adjoint());
  finish(out, u, v);
  if (rep.commutator_residual > 1e-9 || std::max(rep.unitarity_u, rep.unitarity_v) > 1e-10)
    throw Error(ErrorCode::NumericalFailure, "output pair is not exactly commuting unitaries",
                std::max(rep.commutator_residual, std::max(rep.unitarity_u, rep.unitarity_v)), "output");
  rep.runtime_ms = elapsed_ms(t0);
  return out;
}

ApproximantPair approximate_with_path(const UnitaryMatrix& u, const UnitaryMatrix& v, const UnitaryPath& path_of_v,
                                      const ApproximateConfig& cfg) {
  GapOpeningConfig gc;
  gc.eps = cfg.eps;
  gc.mode = cfg.mode;
  gc.oracle = cfg.oracle;
  ApproximantPair g = open_gap(v, u, path_of_v, gc);
  ApproximantPair out{g.v, g.u, std::move(g.report)};
  std::swap(out.report.distance_u, out.report.distance_v);
  std::swap(out.report.unitarity_u, out.report.unitarity_v);
  return out;
}

ApproximantPair approximate(const UnitaryMatrix& u, const UnitaryMatrix& v, const ApproximateConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  require_same_size(u.matrix(), v.matrix(), "approximate");
  InvariantConfig ic;
  ic.mode = cfg.mode;
  ic.c1 = cfg.c1;
  const double delta = commutator_norm(u.matrix(), v.matrix());
  InvariantReport inv;
  if (delta <= cfg.oracle.commute_tol) {
    inv.winding = 0;
    inv.isospec = 0;
  } else {
    inv = compute_invariants(u, v, ic);
  }

  ApproximantPair out{u, v, {}};
  if (delta <= cfg.oracle.commute_tol) {
    PipelineReport& r = out.report;
    r.mode = cfg.mode;
    r.delta = delta;
    r.n = r.n_total = u.size();
    r.short_circuit = true;
    r.notes.push_back("input already commutes");
    finish(out, u, v);
  } else {
    HomotopyConfig hc;
    hc.N = cfg.N;
    hc.samples = cfg.samples;
    hc.mode = cfg.mode;
    hc.invariants = ic;
    const Homotopy h = build_homotopy(u, v, hc);
    out = approximate_with_path(u, v, h.path, cfg);
    out.report.N = h.certificate.N;
    for (const std::string& s : h.certificate.notes) out.report.notes.push_back("homotopy: " + s);
    if (h.certificate.mode == Mode::BestEffort && cfg.mode == Mode::Certified) out.report.flagged = true;
  }
  out.report.winding = inv.winding;
  out.report.isospec = inv.isospec;
  for (const std::string& s : inv.notes) out.report.notes.push_back("invariants: " + s);
  out.report.runtime_ms = elapsed_ms(t0);
  return out;
}

}  // namespace acu
