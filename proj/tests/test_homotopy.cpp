#include "helpers.hpp"

#include "acu/generators.hpp"
#include "acu/homotopy.hpp"

using namespace acu;
using oracle::norm2;

namespace {

HomotopyConfig best_effort(std::optional<int> N = std::nullopt) {
  HomotopyConfig c;
  c.mode = Mode::BestEffort;
  c.N = N;
  return c;
}

void check_path(const Homotopy& h, const Matrix& u, const Matrix& v) {
  const Index n = u.rows();
  const HomotopyCertificate& c = h.certificate;
  EXPECT_EQ(h.path.start(), v);
  EXPECT_LT(norm2(h.path.end() - Matrix::Identity(n, n)), 1e-9);
  EXPECT_LT(h.path.continuity_defect(), 1e-9);
  EXPECT_NEAR(c.end_defect, norm2(h.path.end() - Matrix::Identity(n, n)), 1e-12);
  EXPECT_LE(c.tilde_u_error, 2 * kPi / c.N + 1e-12);
  EXPECT_LE(c.z_conjugation, 8 * kPi / c.N + 1e-12);
  EXPECT_LE(c.y_conjugation, 8 * kPi / c.N + 1e-12);
  EXPECT_LT(c.gamma0_residual, 1e-8);
  EXPECT_LT(c.gamma3_residual, 1e-8);
  double mx = 0;
  for (const Matrix& x : sample_path(h.path, c.sample_density)) {
    EXPECT_LT(norm2(x.adjoint() * x - Matrix::Identity(n, n)), 1e-9);
    mx = std::max(mx, oracle::comm(x, u));
  }
  EXPECT_NEAR(c.max_commutator_sampled, mx, 1e-9);
}

}  // namespace

TEST(Sampling, SingleSegment) {
  oracle::Gen g(61);
  const Matrix b = g.unitary(4), h = g.herm(4);
  const UnitaryPath p({Segment("s", b, h)});
  const auto s = sample_path(p, 1);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0], b);
  EXPECT_LT(norm2(s[1] - oracle::expi(h) * b), 1e-12);
}

TEST(Sampling, FineEnoughForLongGenerator) {
  oracle::Gen g(62);
  const Matrix h = 2 * kPi * g.herm(5);
  const UnitaryPath p({Segment("s", Matrix::Identity(5, 5), h)});
  const auto s = sample_path(p, 63);
  ASSERT_EQ(s.size(), 64u);
  for (std::size_t k = 1; k < s.size(); ++k) EXPECT_LE(norm2(s[k] - s[k - 1]), 0.1);
  const auto d = subdivide_path(p, 0.05);
  for (std::size_t k = 1; k < d.size(); ++k) EXPECT_LE(norm2(d[k] - d[k - 1]), 0.05 + 1e-12);
  EXPECT_LT(norm2(d.back() - p.end()), 1e-12);
}

TEST(Sampling, MultiSegmentCounts) {
  oracle::Gen g(63);
  const Matrix a = g.herm(3), b = g.herm(3);
  const Segment s1("a", Matrix::Identity(3, 3), a);
  const Segment s2("b", s1.end(), b);
  const UnitaryPath p({s1, s2});
  EXPECT_EQ(sample_path(p, 5).size(), 12u);
  EXPECT_LT(p.continuity_defect(), 1e-14);
  EXPECT_CODE(sample_path(p, 0), ErrorCode::InvalidInput);
}

TEST(Families, Structure) {
  const Instance d = make_instance({InstanceKind::Doubled, 16, 0, 0});
  const HomotopyFamilies f = build_families(d.u, d.v, 3);
  EXPECT_EQ(f.N, 3);
  EXPECT_EQ(f.P.size(), 3);
  Matrix sum = Matrix::Zero(32, 32);
  for (int j = 0; j < 6; ++j) sum += f.q_basis[j] * f.q_basis[j].adjoint();
  EXPECT_LT(norm2(sum - Matrix::Identity(32, 32)), 1e-10);
  EXPECT_LE(norm2(f.u_tilde - d.u.matrix()), 2 * kPi / 3 + 1e-12);
  for (int j = 0; j < 6; ++j) EXPECT_LT(norm2(f.p_basis[j] - d.v.matrix() * f.q_basis[j]), 1e-12);
}

TEST(Homotopy, DoubledVoiculescu) {
  for (int m : {8, 16}) {
    const Instance d = make_instance({InstanceKind::Doubled, m, 0, 0});
    const Homotopy h = build_homotopy(d.u, d.v, best_effort());
    check_path(h, d.u.matrix(), d.v.matrix());
    EXPECT_GE(h.certificate.N, 2);
  }
}

TEST(Homotopy, PerturbedBlockPair) {
  oracle::Gen g(64);
  Matrix u = Matrix::Identity(8, 8);
  u.bottomRightCorner(4, 4) *= -1;
  Matrix v0 = Matrix::Zero(8, 8);
  v0.topLeftCorner(4, 4) = g.unitary(4);
  v0.bottomRightCorner(4, 4) = g.unitary(4);
  const Matrix w = oracle::expi(g.herm(8), 1e-3);
  const Matrix v = w * v0 * w.adjoint();
  const Homotopy h = build_homotopy(UnitaryMatrix(u), UnitaryMatrix(v));
  check_path(h, u, v);
  EXPECT_EQ(h.certificate.mode, Mode::Certified);
  EXPECT_LT(h.certificate.max_commutator_sampled, 0.2);
}

TEST(Homotopy, CommutingShortCircuit) {
  oracle::Gen g(65);
  const Matrix q = g.unitary(6);
  const Matrix u = q * g.diag_unitary(6) * q.adjoint(), v = q * g.diag_unitary(6) * q.adjoint();
  const Homotopy h = build_homotopy(UnitaryMatrix(u), UnitaryMatrix(v));
  EXPECT_TRUE(h.certificate.short_circuit);
  EXPECT_EQ(h.path.start(), v);
  EXPECT_LT(norm2(h.path.end() - Matrix::Identity(6, 6)), 1e-9);
  for (const Matrix& x : sample_path(h.path, 16)) EXPECT_LT(oracle::comm(x, u), 1e-9);
}

TEST(Homotopy, ObstructionRefused) {
  const auto [om, s] = voiculescu(8);
  EXPECT_CODE(build_homotopy(om, s, best_effort()), ErrorCode::ObstructionNonzero);
}

TEST(Homotopy, ExplicitN) {
  const Instance d = make_instance({InstanceKind::Doubled, 8, 0, 0});
  const Homotopy h = build_homotopy(d.u, d.v, best_effort(3));
  EXPECT_EQ(h.certificate.N, 3);
  check_path(h, d.u.matrix(), d.v.matrix());
}
