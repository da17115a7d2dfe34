#include "acu/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "acu/projections.hpp"

namespace acu {

namespace {

struct DetPhase {
  Complex phase;  // unit modulus
  double log_abs;
};

DetPhase det_phase(const Matrix& a) {
  Eigen::PartialPivLU<Matrix> lu(a);
  const Matrix& f = lu.matrixLU();
  Complex ph = lu.permutationP().determinant() < 0 ? Complex(-1.0) : Complex(1.0);
  double la = 0.0;
  for (Index i = 0; i < f.rows(); ++i) {
    const double m = std::abs(f(i, i));
    if (m == 0.0) return {Complex(1.0), -std::numeric_limits<double>::infinity()};
    la += std::log(m);
    ph *= f(i, i) / m;
    ph /= std::abs(ph);
  }
  return {ph, la};
}

constexpr int kMaxDepth = 40;

}  // namespace

Mode parse_mode(const std::string& s) {
  if (s == "certified") return Mode::Certified;
  if (s == "best-effort" || s == "best_effort") return Mode::BestEffort;
  throw Error(ErrorCode::InvalidInput, "unknown mode '" + s + "'");
}

std::string to_string(Mode m) { return m == Mode::Certified ? "certified" : "best-effort"; }

int winding_number(const UnitaryMatrix& u, const UnitaryMatrix& v) {
  require_same_size(u.matrix(), v.matrix(), "winding_number");
  const Index n = u.size();
  if (n == 0) return 0;
  const Matrix uv = u.matrix() * v.matrix();
  const Matrix vu = v.matrix() * u.matrix();
  const double delta = op_norm(uv - vu);
  if (delta >= 2.0) throw Error(ErrorCode::CommutatorTooLarge, "winding_number: ||[u,v]|| >= 2", delta);

  const double floor = std::log(1e-12);
  auto eval = [&](double t) {
    DetPhase d = det_phase(t * uv + (1.0 - t) * vu);
    if (!(d.log_abs / static_cast<double>(n) >= floor))
      throw Error(ErrorCode::CurveNearZero, "winding_number: determinant curve too close to 0", t);
    return d.phase;
  };
  auto incr = [](Complex a, Complex b) { return std::arg(b / a); };

  std::function<double(double, Complex, double, Complex, int)> walk =
      [&](double a, Complex fa, double b, Complex fb, int depth) -> double {
    const double m = 0.5 * (a + b);
    const Complex fm = eval(m);
    const double whole = incr(fa, fb);
    const double left = incr(fa, fm);
    const double right = incr(fm, fb);
    if (std::abs(whole) < kPi / 2 && std::abs(left + right - whole) < 1e-8) return whole;
    if (depth >= kMaxDepth)
      throw Error(ErrorCode::NumericalFailure, "winding_number: argument continuation did not settle", m);
    return walk(a, fa, m, fm, depth + 1) + walk(m, fm, b, fb, depth + 1);
  };

  constexpr int kInitial = 16;
  double total = 0.0;
  Complex prev = eval(0.0);
  for (int k = 1; k <= kInitial; ++k) {
    const double t0 = static_cast<double>(k - 1) / kInitial;
    const double t1 = static_cast<double>(k) / kInitial;
    const Complex cur = eval(t1);
    total += walk(t0, prev, t1, cur, 0);
    prev = cur;
  }
  const double w = total / kTwoPi;
  const double r = std::round(w);
  if (std::abs(w - r) > 1e-6)
    throw Error(ErrorCode::NumericalFailure, "winding_number: curve did not close", std::abs(w - r));
  return static_cast<int>(r);
}

double boundary_separation(const ArcPair& arcs) {
  const double bi[2] = {arcs.i.start(), arcs.i.end()};
  const double bj[2] = {arcs.j.start(), arcs.j.end()};
  double best = std::numeric_limits<double>::infinity();
  for (double a : bi)
    for (double b : bj) best = std::min(best, 2.0 * std::sin(0.5 * angle_distance(a, b)));
  return best;
}

ArcPair auto_arcs(const SpectralDecomposition& spec, double beta) {
  const double bp = 2.0 * std::asin(std::min(1.0, 0.5 * beta));
  // J = [a, a + pi/2], I = [a + pi/2 - bp, a + pi - bp]
  const double offsets[4] = {0.0, kPi / 2 - bp, kPi / 2, kPi - bp};
  std::vector<double> pts;
  for (const auto& c : spec.clusters())
    for (double o : offsets) pts.push_back(wrap_angle(c.angle - o));
  double a = 0.0;
  if (!pts.empty()) {
    std::sort(pts.begin(), pts.end());
    double gap = kTwoPi - pts.back() + pts.front();
    a = wrap_angle(pts.back() + 0.5 * gap);
    for (std::size_t k = 1; k < pts.size(); ++k) {
      const double g = pts[k] - pts[k - 1];
      if (g > gap) {
        gap = g;
        a = pts[k - 1] + 0.5 * g;
      }
    }
  }
  return {Arc(a + kPi / 2 - bp, kPi / 2), Arc(a, kPi / 2)};
}

namespace {

std::pair<int, InvariantReport> isospec_impl(const UnitaryMatrix& u, const UnitaryMatrix& v,
                                             const std::optional<ArcPair>& arcs, const InvariantConfig& cfg) {
  require_same_size(u.matrix(), v.matrix(), "isospec");
  InvariantReport rep;
  rep.mode = cfg.mode;
  rep.delta = commutator_norm(u.matrix(), v.matrix());
  const SpectralDecomposition spec = eig_unitary(u);

  // best-effort widens the overlap so it still sees the eigenvalue spacing
  double beta = cfg.beta;
  if (cfg.mode == Mode::BestEffort) beta = std::clamp(cfg.c1 * rep.delta, cfg.beta, std::max(cfg.beta, 1.0));
  ArcPair ij = arcs ? *arcs : auto_arcs(spec, beta);
  if (arcs) {
    ij.i = nudge_arc(ij.i, spec);
    ij.j = nudge_arc(ij.j, spec);
  }
  const double sep = boundary_separation(ij);
  const bool certified = sep <= 0.1 + 1e-12 && cfg.c1 * rep.delta <= sep;
  if (!certified) {
    if (cfg.mode == Mode::Certified)
      throw Error(ErrorCode::PreconditionUnsatisfiable,
                  "isospec: no arcs with C1*||[u,v]|| <= dist(dI, dJ) <= 1/10", rep.delta);
    rep.notes.push_back("arc condition not met; best-effort value");
  }
  rep.arcs = ij;

  const Matrix bi = spec.basis_for(ij.i);
  const Matrix bj = spec.basis_for(ij.j);
  // 1_I(u) and 1_J(u) commute, so the first rank is the size of the overlap.
  Index overlap = 0;
  for (const auto& c : spec.clusters())
    if (ij.i.contains(c.angle) && ij.j.contains(c.angle)) overlap += c.size;

  const Matrix vbi = v.matrix() * bi;
  const Matrix prod = vbi * (vbi.adjoint() * bj) * bj.adjoint();
  const Index second = rank_plus(prod, cfg.mode == Mode::Certified ? Checks::Strict : Checks::Relaxed);
  const int value = static_cast<int>(overlap - second);
  rep.isospec = value;
  return {value, rep};
}

}  // namespace

std::pair<int, InvariantReport> isospec(const UnitaryMatrix& u, const UnitaryMatrix& v,
                                        const std::optional<ArcPair>& arcs, const InvariantConfig& cfg) {
  auto r = isospec_impl(u, v, arcs, cfg);
  r.second.sign_convention = sign_convention();
  return r;
}

std::pair<UnitaryMatrix, UnitaryMatrix> voiculescu(int m) {
  if (m < 2) throw Error(ErrorCode::InvalidInput, "voiculescu: m must be >= 2", m);
  Matrix om = Matrix::Zero(m, m);
  Matrix s = Matrix::Zero(m, m);
  for (int k = 0; k < m; ++k) {
    const int e = (k + 1) % m;
    om(k, k) = std::polar(1.0, kTwoPi * e / m);
    if (e == 0) om(k, k) = 1.0;
    if (4 * e == m) om(k, k) = Complex(0, 1);
    if (2 * e == m) om(k, k) = -1.0;
    if (4 * e == 3 * m) om(k, k) = Complex(0, -1);
  }
  for (int k = 0; k + 1 < m; ++k) s(k, k + 1) = 1.0;
  s(m - 1, 0) = 1.0;
  return {UnitaryMatrix::trusted(std::move(om)), UnitaryMatrix::trusted(std::move(s))};
}

int sign_convention() {
  static const int sign = [] {
    auto [om, s] = voiculescu(8);
    InvariantConfig cfg;
    cfg.mode = Mode::BestEffort;
    const int iso = isospec_impl(om, s, std::nullopt, cfg).first;
    const int w = winding_number(om, s);
    return iso * w > 0 ? 1 : -1;
  }();
  return sign;
}

InvariantReport compute_invariants(const UnitaryMatrix& u, const UnitaryMatrix& v, const InvariantConfig& cfg) {
  InvariantReport rep;
  try {
    rep = isospec(u, v, std::nullopt, cfg).second;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::PreconditionUnsatisfiable && e.code() != ErrorCode::NotAlmostProjection) throw;
    rep.mode = cfg.mode;
    rep.sign_convention = sign_convention();
    rep.delta = commutator_norm(u.matrix(), v.matrix());
    rep.notes.push_back(std::string("isospec undefined: ") + e.what());
  }
  try {
    rep.winding = winding_number(u, v);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::CommutatorTooLarge && e.code() != ErrorCode::CurveNearZero) throw;
    rep.notes.push_back(std::string("winding undefined: ") + e.what());
  }
  return rep;
}

Agreement invariants_agree(const UnitaryMatrix& u, const UnitaryMatrix& v, const InvariantConfig& cfg) {
  InvariantReport rep = compute_invariants(u, v, cfg);
  if (!rep.winding || !rep.isospec)
    throw Error(ErrorCode::Undefined, "invariants_agree: an invariant is undefined");
  const bool ok = *rep.isospec == rep.sign_convention * *rep.winding;
  return {ok, rep};
}

}  // namespace acu
