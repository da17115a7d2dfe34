#include "helpers.hpp"

#include "acu/generators.hpp"
#include "acu/invariants.hpp"

#include <set>

using namespace acu;
using oracle::norm2;

namespace {

InvariantConfig best_effort() {
  InvariantConfig c;
  c.mode = Mode::BestEffort;
  return c;
}

// commuting diagonal pair conjugated apart by exp(i scale H)
std::pair<Matrix, Matrix> small_delta_pair(oracle::Gen& g, Index n, double scale) {
  const Matrix q = g.unitary(n);
  const Matrix u = q * g.diag_unitary(n) * q.adjoint();
  const Matrix w = oracle::expi(g.herm(n), scale);
  const Matrix v = w * q * g.diag_unitary(n) * q.adjoint() * w.adjoint();
  return {u, v};
}

}  // namespace

TEST(Voiculescu, Matrices) {
  const auto [o2, s2] = voiculescu(2);
  Matrix eo = Matrix::Zero(2, 2), es = Matrix::Zero(2, 2);
  eo(0, 0) = -1;
  eo(1, 1) = 1;
  es(0, 1) = es(1, 0) = 1;
  EXPECT_EQ(o2.matrix(), eo);
  EXPECT_EQ(s2.matrix(), es);
  const auto [o8, s8] = voiculescu(8);
  EXPECT_LT(norm2(o8.matrix() - oracle::clock(8)), 1e-15);
  EXPECT_EQ(s8.matrix(), oracle::shift(8));
  EXPECT_NEAR(commutator_norm(o8.matrix(), s8.matrix()), 0.76537, 1e-5);
  EXPECT_LT(norm2(o8.matrix().adjoint() * o8.matrix() - Matrix::Identity(8, 8)), 1e-15);
}

TEST(Winding, Cases) {
  EXPECT_EQ(winding_number(UnitaryMatrix::identity(3), UnitaryMatrix::identity(3)), 0);
  const auto [om, s] = voiculescu(8);
  const int w = winding_number(om, s);
  EXPECT_EQ(std::abs(w), 1);
  EXPECT_EQ(w, oracle::winding(om.matrix(), s.matrix()));
  const UnitaryMatrix od(oracle::dsum(om.matrix(), om.matrix().adjoint()));
  const UnitaryMatrix sd(oracle::dsum(s.matrix(), s.matrix()));
  EXPECT_EQ(winding_number(od, sd), 0);
  EXPECT_EQ(oracle::winding(od.matrix(), sd.matrix()), 0);
}

TEST(Winding, ConsistentSignAcrossSizes) {
  const auto [o8, s8] = voiculescu(8);
  const int w8 = winding_number(o8, s8);
  for (int m = 9; m <= 20; ++m) {
    const auto [om, s] = voiculescu(m);
    EXPECT_EQ(winding_number(om, s), w8) << m;
  }
}

TEST(Winding, ConjugationInvariance) {
  oracle::Gen g(51);
  const auto [om, s] = voiculescu(10);
  for (int t = 0; t < 5; ++t) {
    const Matrix q = g.unitary(10);
    EXPECT_EQ(winding_number(UnitaryMatrix(q * om.matrix() * q.adjoint()), UnitaryMatrix(q * s.matrix() * q.adjoint())),
              winding_number(om, s));
  }
}

// (v*, u*) reverses the sign; (u*, v*) keeps it, since its curve is the conjugate run backwards
TEST(Winding, InversePairReversesSign) {
  for (int m : {8, 12, 16}) {
    const auto [om, s] = voiculescu(m);
    const int w = winding_number(om, s);
    EXPECT_EQ(w + winding_number(s.adjoint(), om.adjoint()), 0);
    EXPECT_EQ(winding_number(om.adjoint(), s.adjoint()), w);
    EXPECT_EQ(w + winding_number(s, om), 0);
  }
}

TEST(Winding, MatchesDeterminantOracleOnRandomPairs) {
  oracle::Gen g(52);
  for (int t = 0; t < 20; ++t) {
    const auto [u, v] = small_delta_pair(g, 6, 0.05);
    EXPECT_EQ(winding_number(UnitaryMatrix(u), UnitaryMatrix(v)), oracle::winding(u, v));
  }
}

TEST(Winding, Preconditions) {
  Matrix a = Matrix::Zero(2, 2), b = Matrix::Zero(2, 2);
  a(0, 0) = 1;
  a(1, 1) = -1;
  b(0, 1) = b(1, 0) = 1;
  EXPECT_CODE(winding_number(UnitaryMatrix(a), UnitaryMatrix(b)), ErrorCode::CommutatorTooLarge);
}

TEST(Isospec, CommutingPairIsZero) {
  oracle::Gen g(53);
  const Matrix q = g.unitary(8);
  const UnitaryMatrix u(q * g.diag_unitary(8) * q.adjoint()), v(q * g.diag_unitary(8) * q.adjoint());
  EXPECT_EQ(isospec(u, v).first, 0);
}

TEST(Isospec, VoiculescuIsMinusOne) {
  for (int m = 8; m <= 32; ++m) {
    const auto [om, s] = voiculescu(m);
    EXPECT_EQ(isospec(om, s, std::nullopt, best_effort()).first, -1) << m;
  }
}

TEST(Isospec, CertifiedRefusesLargeCommutator) {
  const auto [om, s] = voiculescu(8);
  EXPECT_CODE(isospec(om, s), ErrorCode::PreconditionUnsatisfiable);
}

TEST(Isospec, IndependentOfArcs) {
  const auto [om, s] = voiculescu(32);
  const SpectralDecomposition spec = eig_unitary(om);
  std::set<std::pair<long, long>> seen;
  int count = 0;
  for (double beta : {0.7, 1.0}) {
    const ArcPair base = auto_arcs(spec, beta);
    for (int k = 0; k < 10; ++k) {
      const double r = 2 * kPi * (3 * k) / 32;
      const ArcPair a{base.i.rotated(r), base.j.rotated(r)};
      seen.insert({std::lround(1e6 * a.i.start()), std::lround(1e6 * a.j.length())});
      EXPECT_EQ(isospec(om, s, a, best_effort()).first, -1) << beta << " " << k;
      ++count;
    }
  }
  EXPECT_EQ(count, 20);
  EXPECT_EQ(seen.size(), 20u);
}

TEST(Isospec, DoubledIsZero) {
  for (int m : {8, 16}) {
    const Instance d = make_instance({InstanceKind::Doubled, m, 0, 0});
    const InvariantReport r = compute_invariants(d.u, d.v, best_effort());
    ASSERT_TRUE(r.isospec && r.winding);
    EXPECT_EQ(*r.isospec, 0);
    EXPECT_EQ(*r.winding, 0);
  }
}

TEST(Invariants, AdditiveOnDirectSums) {
  oracle::Gen g(54);
  for (int t = 0; t < 10; ++t) {
    const int m = 8 + t % 5;
    const auto [om, s] = voiculescu(m);
    const auto [u2, v2] = small_delta_pair(g, 5, 1e-3);
    const UnitaryMatrix u(oracle::dsum(om.matrix(), u2)), v(oracle::dsum(s.matrix(), v2));
    const InvariantReport r = compute_invariants(u, v, best_effort());
    ASSERT_TRUE(r.isospec && r.winding);
    EXPECT_EQ(*r.isospec, -1);
    EXPECT_EQ(*r.winding, -1);
    EXPECT_EQ(*r.winding, oracle::winding(u.matrix(), v.matrix(), 8000));
  }
  const auto [oa, sa] = voiculescu(9);
  const auto [ob, sb] = voiculescu(11);
  const UnitaryMatrix u(oracle::dsum(oa.matrix(), ob.matrix())), v(oracle::dsum(sa.matrix(), sb.matrix()));
  EXPECT_EQ(winding_number(u, v), -2);
}

TEST(Invariants, AgreeOnSmallDeltaPairs) {
  oracle::Gen g(55);
  for (int t = 0; t < 40; ++t) {
    const auto [u, v] = small_delta_pair(g, 4 + t % 5, 1e-4);
    const Agreement a = invariants_agree(UnitaryMatrix(u), UnitaryMatrix(v));
    EXPECT_TRUE(a.agree);
    EXPECT_EQ(*a.report.winding, 0);
  }
  const auto [o16, s16] = voiculescu(16);
  EXPECT_TRUE(invariants_agree(o16, s16, best_effort()).agree);
}

TEST(Invariants, ConstantAlongHomotopyOfPairs) {
  oracle::Gen g(56);
  const auto [om, s] = voiculescu(12);
  const Matrix h = g.herm(12);
  for (int k = 0; k <= 10; ++k) {
    const Matrix w = oracle::expi(h, 0.02 * k);
    const UnitaryMatrix u(w * om.matrix() * w.adjoint());
    const InvariantReport r = compute_invariants(u, s, best_effort());
    ASSERT_TRUE(r.isospec && r.winding);
    EXPECT_EQ(*r.isospec, -1);
    EXPECT_EQ(*r.winding, -1);
  }
}

TEST(Invariants, UndefinedWhenBothFail) {
  Matrix a = Matrix::Zero(2, 2), b = Matrix::Zero(2, 2);
  a(0, 0) = 1;
  a(1, 1) = -1;
  b(0, 1) = b(1, 0) = 1;
  EXPECT_CODE(invariants_agree(UnitaryMatrix(a), UnitaryMatrix(b)), ErrorCode::Undefined);
}

TEST(Invariants, SignConventionRecorded) {
  EXPECT_EQ(sign_convention(), 1);
  const auto [om, s] = voiculescu(8);
  EXPECT_EQ(compute_invariants(om, s, best_effort()).sign_convention, 1);
}
