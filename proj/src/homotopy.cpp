#include "acu/homotopy.hpp"

#include <algorithm>
#include <cmath>

#include "dense.hpp"

namespace acu {

namespace {

int mod(int a, int n) { return ((a % n) + n) % n; }

Matrix hconcat(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows(), a.cols() + b.cols());
  out << a, b;
  return out;
}

// Unitary on C^k sending ran(a) onto ran(b) (orthonormal columns, equal rank), as close to 1 as
// the polar factors allow.
Matrix block_map(const Matrix& a, const Matrix& b) {
  const Index k = a.rows();
  if (a.cols() != b.cols())
    throw Error(ErrorCode::RankMismatch, "ranks differ", static_cast<double>(a.cols() - b.cols()));
  auto polar = [](const Matrix& m) -> Matrix {
    if (m.size() == 0) return Matrix(m.rows(), m.cols());
    const dense::Svd s = dense::svd(m);
    return s.u * s.v.adjoint();
  };
  const Matrix ac = complement_basis(a);
  const Matrix bc = complement_basis(b);
  Matrix z = Matrix::Zero(k, k);
  if (a.cols()) z += b * polar(b.adjoint() * a) * a.adjoint();
  if (ac.cols()) z += bc * polar(bc.adjoint() * ac) * ac.adjoint();
  return z;
}

// Hermitian log of a block-diagonal unitary given by blocks in orthonormal bases.
Matrix blockwise_log(const std::vector<Matrix>& bases, const std::vector<Matrix>& blocks, Index n) {
  Matrix g = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < bases.size(); ++i) {
    if (bases[i].cols() == 0) continue;
    const Matrix l = unitary_log(UnitaryMatrix::trusted(blocks[i]));
    g += bases[i] * l * bases[i].adjoint();
  }
  return 0.5 * (g + g.adjoint());
}

double largest_gap_midpoint(std::vector<double> pts, double circumference) {
  if (pts.empty()) return 0.5 * circumference;
  std::sort(pts.begin(), pts.end());
  double gap = circumference - pts.back() + pts.front();
  double mid = std::fmod(pts.back() + 0.5 * gap, circumference);
  for (std::size_t k = 1; k < pts.size(); ++k) {
    const double g = pts[k] - pts[k - 1];
    if (g > gap) {
      gap = g;
      mid = pts[k - 1] + 0.5 * g;
    }
  }
  return mid;
}

// Descent to 1 inside the eigenspaces of a (block) unitary: blocks w_i = B_i* x B_i.
Matrix descent_generator(const Matrix& x, const std::vector<Matrix>& bases) {
  std::vector<Matrix> blocks;
  blocks.reserve(bases.size());
  for (const Matrix& b : bases) {
    if (b.cols() == 0) {
      blocks.emplace_back(0, 0);
      continue;
    }
    blocks.push_back(nearest_unitary(b.adjoint() * x * b).u.matrix());
  }
  return blockwise_log(bases, blocks, x.rows());
}

}  // namespace

// ---------------------------------------------------------------------------

Segment::Segment(std::string label, Matrix base, Matrix generator, bool block_diagonal)
    : label_(std::move(label)),
      base_(std::move(base)),
      generator_(0.5 * (generator + generator.adjoint())),
      block_(block_diagonal),
      spectrum_(generator_) {
  require_same_size(base_, generator_, "Segment");
}

Matrix Segment::at(double t) const {
  if (t == 0.0) return base_;
  return spectrum_.exp_i(t) * base_;
}

UnitaryPath::UnitaryPath(std::vector<Segment> segments, std::vector<double> stage_boundaries)
    : segments_(std::move(segments)), stages_(std::move(stage_boundaries)) {
  if (segments_.empty()) throw Error(ErrorCode::InvalidInput, "path without segments");
  if (stages_.empty())
    for (std::size_t i = 0; i <= segments_.size(); ++i) stages_.push_back(static_cast<double>(i));
}

Index UnitaryPath::dim() const { return segments_.empty() ? 0 : segments_.front().base().rows(); }

double UnitaryPath::total_generator_norm() const {
  double s = 0;
  for (const Segment& seg : segments_) s += seg.generator_norm();
  return s;
}

Matrix UnitaryPath::at(double s) const {
  s = std::clamp(s, 0.0, 1.0);
  const double m = static_cast<double>(segments_.size());
  std::size_t i = std::min(segments_.size() - 1, static_cast<std::size_t>(s * m));
  return segments_[i].at(s * m - static_cast<double>(i));
}

Matrix UnitaryPath::start() const { return segments_.front().base(); }
Matrix UnitaryPath::end() const { return segments_.back().end(); }

double UnitaryPath::continuity_defect() const {
  double d = 0;
  for (std::size_t i = 0; i + 1 < segments_.size(); ++i)
    d = std::max(d, op_norm(segments_[i].end() - segments_[i + 1].base()));
  return d;
}

std::vector<Matrix> sample_path(const UnitaryPath& path, int density) {
  if (density < 1) throw Error(ErrorCode::InvalidInput, "sample density must be >= 1", density);
  std::vector<Matrix> out;
  for (const Segment& seg : path.segments())
    for (int k = 0; k <= density; ++k) out.push_back(seg.at(static_cast<double>(k) / density));
  return out;
}

std::vector<Matrix> subdivide_path(const UnitaryPath& path, double step, std::vector<int>* per_segment) {
  if (!(step > 0)) throw Error(ErrorCode::InvalidInput, "subdivision step must be positive", step);
  std::vector<Matrix> out;
  if (per_segment) per_segment->clear();
  out.push_back(path.start());
  for (const Segment& seg : path.segments()) {
    const int d = std::max(0, static_cast<int>(std::ceil(seg.generator_norm() / step - 1e-12)));
    if (per_segment) per_segment->push_back(d);
    for (int k = 1; k <= d; ++k) out.push_back(seg.at(static_cast<double>(k) / d));
  }
  return out;
}

// ---------------------------------------------------------------------------

HomotopyFamilies build_families(const UnitaryMatrix& u, const UnitaryMatrix& v, int N) {
  require_same_size(u.matrix(), v.matrix(), "build_families");
  if (N < 2) throw Error(ErrorCode::InvalidInput, "N must be >= 2", N);
  const Index n = u.size();
  const SpectralDecomposition spec = eig_unitary(u);
  const double len = kPi / N;
  std::vector<double> reduced;
  for (const auto& c : spec.clusters()) reduced.push_back(std::fmod(c.angle, len));
  const double theta0 = largest_gap_midpoint(reduced, len);

  const int M = 2 * N;
  std::vector<double> lambda(M);
  std::vector<Matrix> qb(M), pb(M);
  Matrix ut = Matrix::Zero(n, n);
  for (int j = 0; j < M; ++j) {
    lambda[j] = wrap_angle(theta0 + j * len);
    qb[j] = spec.basis_for(Arc(theta0 + j * len, len, true, false));
    pb[j] = v.matrix() * qb[j];
    ut += std::polar(1.0, lambda[j]) * (qb[j] * qb[j].adjoint());
  }
  std::vector<Projection> P, Q;
  for (int k = 0; k < N; ++k) {
    P.push_back(Projection::from_basis(hconcat(pb[mod(2 * k - 1, M)], pb[2 * k]), 1e-9));
    Q.push_back(Projection::from_basis(hconcat(qb[2 * k], qb[2 * k + 1]), 1e-9));
  }
  return {N, theta0, lambda, qb, pb, CyclicFamily(std::move(P)), CyclicFamily(std::move(Q)), ut};
}

namespace {

struct Sampled {
  double max_u = 0;
  double max_tilde = 0;
};

Sampled sample_commutators(const UnitaryPath& path, int density, const Matrix& u, const Matrix& ut) {
  Sampled s;
  for (const Segment& seg : path.segments())
    for (int k = 0; k <= density; ++k) {
      const Matrix x = seg.at(static_cast<double>(k) / density);
      s.max_u = std::max(s.max_u, commutator_norm(x, u));
      s.max_tilde = std::max(s.max_tilde, commutator_norm(x, ut));
    }
  return s;
}

Homotopy commuting_descent(const UnitaryMatrix& u, const UnitaryMatrix& v, const HomotopyConfig& cfg, double delta) {
  const SpectralDecomposition spec = eig_unitary(u);
  std::vector<Matrix> bases;
  for (std::size_t i = 0; i < spec.clusters().size(); ++i) bases.push_back(spec.cluster_basis(i));
  const Matrix g = descent_generator(v.matrix(), bases);
  UnitaryPath path({Segment("descent", v.matrix(), -g, true)}, {0.0, 1.0});
  HomotopyCertificate c;
  c.delta = delta;
  c.mode = cfg.mode;
  c.short_circuit = true;
  c.sample_density = cfg.samples;
  c.generator_norms = {path.segments()[0].generator_norm()};
  const Sampled s = sample_commutators(path, cfg.samples, u.matrix(), u.matrix());
  c.max_commutator_sampled = s.max_u;
  c.max_commutator_tilde = s.max_tilde;
  c.end_defect = op_norm(path.end() - Matrix::Identity(u.size(), u.size()));
  c.notes.push_back("commuting input: descent inside the eigenspaces of u");
  return {std::move(path), std::move(c)};
}

}  // namespace

Homotopy build_homotopy(const UnitaryMatrix& u, const UnitaryMatrix& v, const HomotopyConfig& cfg) {
  require_same_size(u.matrix(), v.matrix(), "build_homotopy");
  if (cfg.samples < 1) throw Error(ErrorCode::InvalidInput, "samples must be >= 1", cfg.samples);
  const Index n = u.size();
  const Matrix id = Matrix::Identity(n, n);
  const double delta = commutator_norm(u.matrix(), v.matrix());
  if (delta <= kTol.commute) return commuting_descent(u, v, cfg, delta);

  HomotopyCertificate cert;
  cert.delta = delta;
  cert.mode = cfg.mode;
  cert.sample_density = cfg.samples;
  const Checks checks = cfg.mode == Mode::Certified ? Checks::Strict : Checks::Relaxed;

  if (cfg.check_isospec) {
    InvariantConfig ic = cfg.invariants;
    ic.mode = cfg.mode;
    const int iso = isospec(u, v, std::nullopt, ic).first;
    if (iso != 0) throw Error(ErrorCode::ObstructionNonzero, "isospectral invariant is nonzero", iso);
  }

  // N: delta^{-2/5}, reduced until the family defect is admissible
  int N = 0;
  std::optional<HomotopyFamilies> fam;
  double eps = 0;
  if (cfg.N) {
    N = *cfg.N;
    fam.emplace(build_families(u, v, N));
    eps = measure_family_defect(fam->P, fam->Q);
  } else {
    const int n0 = std::max(2, static_cast<int>(std::lround(std::pow(delta, -0.4))));
    double best_eps = std::numeric_limits<double>::infinity();
    for (int cand = n0; cand >= 2; --cand) {
      HomotopyFamilies f = build_families(u, v, cand);
      const double e = measure_family_defect(f.P, f.Q);
      if (e < 1.0 / 200.0) {
        if (cand != n0) {
          cert.mode = Mode::BestEffort;
          cert.notes.push_back("N reduced from " + std::to_string(n0) + " to " + std::to_string(cand));
        }
        N = cand;
        eps = e;
        fam.emplace(std::move(f));
        break;
      }
      if (e < best_eps) {
        best_eps = e;
        N = cand;
        eps = e;
        fam.emplace(std::move(f));
      }
    }
    if (eps >= 1.0 / 200.0) {
      if (cfg.mode == Mode::Certified)
        throw Error(ErrorCode::StagePreconditionFailed, "no N makes the family defect smaller than 1/200", best_eps,
                    "families");
      cert.mode = Mode::BestEffort;
      cert.notes.push_back("family defect " + std::to_string(eps) + " exceeds 1/200; best-effort");
    }
  }
  cert.N = N;
  cert.quantbeek_epsilon = eps;
  const int M = 2 * N;
  const HomotopyFamilies& F = *fam;
  cert.tilde_u_error = op_norm(F.u_tilde - u.matrix());

  const RefinedFamilies ref = refine_intertwined(F.P, F.Q, checks);
  cert.w_dist = ref.w_dist;
  cert.quantbeek_stages = ref.stages;

  // z: ran q_j -> ran q'_j inside each Q_k; y: ran p'_j -> ran p_j inside each P_k
  std::vector<Matrix> qbases, zblocks, pbases, yblocks;
  Matrix z = Matrix::Zero(n, n), y = Matrix::Zero(n, n);
  for (int k = 0; k < N; ++k) {
    const Matrix& bq = F.Q[k].basis();
    const Matrix& bp = F.P[k].basis();
    const int even = 2 * k;
    if (ref.q[even].rank() != F.q_basis[even].cols() || ref.q[even + 1].rank() != F.q_basis[even + 1].cols())
      throw Error(ErrorCode::RankMismatch, "rank q'_j differs from rank q_j",
                  static_cast<double>(ref.q[even].rank() - F.q_basis[even].cols()), "z");
    const int odd = mod(2 * k - 1, M);
    if (ref.p[even].rank() != F.p_basis[even].cols() || ref.p[odd].rank() != F.p_basis[odd].cols())
      throw Error(ErrorCode::RankMismatch, "rank p'_j differs from rank p_j",
                  static_cast<double>(ref.p[even].rank() - F.p_basis[even].cols()), "y");
    const Matrix zk = block_map(bq.adjoint() * F.q_basis[even], bq.adjoint() * ref.q[even].basis());
    const Matrix yk = block_map(bp.adjoint() * ref.p[even].basis(), bp.adjoint() * F.p_basis[even]);
    qbases.push_back(bq);
    zblocks.push_back(zk);
    pbases.push_back(bp);
    yblocks.push_back(yk);
    z += bq * zk * bq.adjoint();
    y += bp * yk * bp.adjoint();
  }
  const Matrix h = blockwise_log(qbases, zblocks, n);
  const Matrix g = blockwise_log(pbases, yblocks, n);
  const Matrix& w = ref.w.matrix();
  const Matrix L = unitary_log(ref.w);

  Matrix vut = Matrix::Zero(n, n);
  for (int j = 0; j < M; ++j) vut += std::polar(1.0, F.lambda[j]) * (F.p_basis[j] * F.p_basis[j].adjoint());
  cert.z_conjugation = op_norm(z * F.u_tilde * z.adjoint() - F.u_tilde);
  cert.y_conjugation = op_norm(y * vut * y.adjoint() - vut);
  const Matrix gamma3 = y * w * z;
  cert.gamma0_residual = 0.0;
  cert.gamma3_residual = op_norm(gamma3 * F.u_tilde * gamma3.adjoint() - vut);

  // v_t = Gamma_t* v
  std::vector<Segment> segs;
  segs.emplace_back("z", v.matrix(), -h);
  const Matrix zs = z;
  segs.emplace_back("w", segs.back().end(), -(zs.adjoint() * L * zs));
  const Matrix wz = w * z;
  segs.emplace_back("y", segs.back().end(), -(wz.adjoint() * g * wz));
  const Matrix v3 = segs.back().end();
  cert.v3_commutator = commutator_norm(v3, F.u_tilde);
  if (cfg.mode == Mode::Certified && cert.v3_commutator > 1e-9)
    throw Error(ErrorCode::NumericalFailure, "v_3 does not commute with u~", cert.v3_commutator, "descent");
  std::vector<Matrix> eig_bases;
  for (int j = 0; j < M; ++j)
    if (F.q_basis[j].cols()) eig_bases.push_back(F.q_basis[j]);
  if (cert.v3_commutator <= 1e-9) {
    segs.emplace_back("descent", v3, -descent_generator(v3, eig_bases), true);
  } else {
    cert.notes.push_back("v_3 does not commute with u~; last segment is the plain geodesic to 1");
    segs.emplace_back("descent", v3, -unitary_log(nearest_unitary(v3).u));
  }

  UnitaryPath path(std::move(segs), {0.0, 1.0, 2.0, 3.0, 4.0});
  for (const Segment& s : path.segments()) cert.generator_norms.push_back(s.generator_norm());
  cert.continuity = path.continuity_defect();
  cert.start_defect = op_norm(path.start() - v.matrix());
  cert.end_defect = op_norm(path.end() - id);
  const Sampled smp = sample_commutators(path, cfg.samples, u.matrix(), F.u_tilde);
  cert.max_commutator_sampled = smp.max_u;
  cert.max_commutator_tilde = smp.max_tilde;
  if (cert.end_defect > 1e-9 || cert.continuity > 1e-9) {
    if (cfg.mode == Mode::Certified)
      throw Error(ErrorCode::NumericalFailure, "path endpoints are not exact",
                  std::max(cert.end_defect, cert.continuity), "path");
    cert.notes.push_back("endpoint defect above 1e-9");
  }
  return {std::move(path), std::move(cert)};
}

}  // namespace acu
