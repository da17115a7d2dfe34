#include "helpers.hpp"

#include <cstdlib>

#include "acu/linalg.hpp"

using namespace acu;
using oracle::norm2;

TEST(OpNorm, Basics) {
  EXPECT_EQ(op_norm(Matrix::Zero(4, 4)), 0.0);
  for (Index n : {1, 3, 17}) EXPECT_NEAR(op_norm(Matrix::Identity(n, n)), 1.0, 1e-14);
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = Complex(0, -4);
  EXPECT_NEAR(op_norm(d), 4.0, 1e-14);
}

TEST(OpNorm, MatchesJacobiSvd) {
  oracle::Gen g(1);
  for (int t = 0; t < 20; ++t) {
    const Matrix a = g.gauss(1 + t, 1 + t);
    EXPECT_NEAR(op_norm(a), norm2(a), 1e-10 * norm2(a));
  }
}

TEST(OpNorm, NonFiniteRejected) {
  Matrix a = Matrix::Identity(2, 2);
  a(0, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_CODE(op_norm(a), ErrorCode::InvalidInput);
}

TEST(Commutator, Cases) {
  oracle::Gen g(2);
  const Matrix p = g.herm(5);
  EXPECT_NEAR(commutator_norm(p, p), 0.0, 1e-14);
  Matrix a = Matrix::Zero(2, 2), b = Matrix::Zero(2, 2);
  a(0, 0) = 1;
  a(1, 1) = 2;
  b(0, 0) = Complex(0.3, 1);
  b(1, 1) = -7;
  EXPECT_EQ(commutator_norm(a, b), 0.0);
  const Matrix om = oracle::clock(8), s = oracle::shift(8);
  EXPECT_NEAR(commutator_norm(om, s), std::abs(1.0 - std::polar(1.0, 2 * kPi / 8)), 1e-12);
  EXPECT_NEAR(commutator_norm(om, s), oracle::comm(om, s), 1e-12);
}

TEST(Polar, Cases) {
  oracle::Gen g(3);
  const Matrix u = g.unitary(6);
  EXPECT_LT(norm2(polar_unitary(u).matrix() - u), 1e-12);
  EXPECT_LT(norm2(polar_unitary(2.0 * Matrix::Identity(3, 3)).matrix() - Matrix::Identity(3, 3)), 1e-14);
  for (int t = 0; t < 10; ++t) {
    const Matrix a = g.gauss(7, 7);
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Matrix ref = svd.matrixU() * svd.matrixV().adjoint();
    EXPECT_LT(norm2(polar_unitary(a).matrix() - ref), 1e-10);
  }
  Matrix sing = Matrix::Identity(3, 3);
  sing(2, 2) = 0;
  EXPECT_CODE(polar_unitary(sing), ErrorCode::SingularInput);
}

TEST(NearestUnitary, Cases) {
  oracle::Gen g(4);
  const Matrix u = g.unitary(5);
  const NearestUnitary a = nearest_unitary(u);
  EXPECT_LT(a.defect, 1e-12);
  // w = 1.1 has rho = 0.21, outside rho < 1/5; the polar factor still gives u = 1, defect 0.1
  const Matrix w = Matrix::Constant(1, 1, 1.1);
  try {
    nearest_unitary(w);
    ADD_FAILURE() << "rho = 0.21 accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotAlmostUnitary);
    EXPECT_NEAR(e.measured(), 0.21, 1e-12);
  }
  const Matrix pu = polar_unitary(w).matrix();
  EXPECT_NEAR(pu(0, 0).real(), 1.0, 1e-14);
  EXPECT_NEAR(norm2(w - pu), 0.1, 1e-12);
  EXPECT_LE(norm2(w - pu), 5 * 0.21);
  const NearestUnitary b = nearest_unitary(Matrix::Constant(1, 1, 1.05));
  EXPECT_NEAR(b.u.matrix()(0, 0).real(), 1.0, 1e-14);
  EXPECT_NEAR(b.defect, 0.05, 1e-12);
  EXPECT_NEAR(b.rho, 0.1025, 1e-12);
  EXPECT_LE(b.defect, 5 * b.rho);
}

TEST(NearestUnitary, DefectAtMostFiveRho) {
  oracle::Gen g(5);
  for (int t = 0; t < 200; ++t) {
    const Index n = 2 + t % 12;
    const Matrix w = g.unitary(n) + g.u(0, 0.03) * g.gauss(n, n) / std::sqrt(double(n));
    const double rho = norm2(w.adjoint() * w - Matrix::Identity(n, n));
    if (rho >= 0.2) continue;
    const NearestUnitary r = nearest_unitary(w);
    EXPECT_NEAR(r.rho, rho, 1e-10);
    EXPECT_NEAR(r.defect, norm2(w - r.u.matrix()), 1e-10);
    EXPECT_LE(r.defect, 5 * rho + 1e-12);
    EXPECT_LT(norm2(r.u.matrix().adjoint() * r.u.matrix() - Matrix::Identity(n, n)), 1e-10);
  }
}

TEST(EigUnitary, IdentityAndClock) {
  const SpectralDecomposition id = eig_unitary(UnitaryMatrix::identity(5));
  ASSERT_EQ(id.clusters().size(), 1u);
  EXPECT_NEAR(angle_distance(id.clusters()[0].angle, 0.0), 0.0, 1e-12);
  EXPECT_LT(norm2(id.projector(0).matrix() - Matrix::Identity(5, 5)), 1e-12);

  const SpectralDecomposition om = eig_unitary(UnitaryMatrix(oracle::clock(8)));
  ASSERT_EQ(om.clusters().size(), 8u);
  for (std::size_t c = 0; c < 8; ++c) {
    const Projection p = om.projector(c);
    EXPECT_EQ(p.rank(), 1);
    const double a = om.clusters()[c].angle;
    const int k = static_cast<int>(std::lround(a / (2 * kPi / 8))) % 8;
    EXPECT_NEAR(angle_distance(a, 2 * kPi * k / 8), 0.0, 1e-12);
    const Index row = (k + 7) % 8;
    EXPECT_NEAR(p.matrix()(row, row).real(), 1.0, 1e-12);
  }
}

TEST(EigUnitary, DoubledBlocks) {
  oracle::Gen g(6);
  const Matrix u = g.unitary(4);
  const SpectralDecomposition a = eig_unitary(UnitaryMatrix(u));
  const SpectralDecomposition b = eig_unitary(UnitaryMatrix(oracle::dsum(u, u)));
  ASSERT_EQ(a.clusters().size(), b.clusters().size());
  for (std::size_t c = 0; c < a.clusters().size(); ++c) {
    EXPECT_NEAR(angle_distance(a.clusters()[c].angle, b.clusters()[c].angle), 0, 1e-9);
    EXPECT_EQ(2 * a.clusters()[c].size, b.clusters()[c].size);
  }
}

TEST(EigUnitary, ReconstructionAndExactProjectors) {
  oracle::Gen g(7);
  for (Index n : {1, 5, 40, 256}) {
    const Matrix u = g.unitary(n);
    const SpectralDecomposition s = eig_unitary(UnitaryMatrix(u));
    EXPECT_LE(norm2(s.reconstruct() - u), 1e-8);
    Matrix sum = Matrix::Zero(n, n);
    for (std::size_t c = 0; c < s.clusters().size(); ++c) {
      const Matrix p = s.projector(c).matrix();
      EXPECT_LT(norm2(p * p - p), 1e-10);
      sum += p;
    }
    EXPECT_LT(norm2(sum - Matrix::Identity(n, n)), 1e-10);
  }
}

TEST(SpectralProjection, Cases) {
  const UnitaryMatrix om(oracle::clock(8));
  EXPECT_LT(norm2(spectral_projection(om, Arc::full()).matrix() - Matrix::Identity(8, 8)), 1e-12);
  // angles 2pi/8 and 4pi/8 are omega^1, omega^2 = rows 0 and 1
  const Projection p = spectral_projection(om, Arc::between(2 * kPi / 8 - 0.1, 4 * kPi / 8 + 0.1));
  EXPECT_EQ(p.rank(), 2);
  Matrix ref = Matrix::Zero(8, 8);
  ref(0, 0) = ref(1, 1) = 1.0;
  EXPECT_LT(norm2(p.matrix() - ref), 1e-12);
  EXPECT_CODE(spectral_projection(om, Arc::between(2 * kPi / 8, 1.0)), ErrorCode::BoundaryEigenvalue);
}

TEST(SpectralProjection, ComplementsSumToOneAndMatchOracle) {
  oracle::Gen g(8);
  for (int t = 0; t < 30; ++t) {
    const Matrix u = g.unitary(10);
    const Arc arc(g.u(0, 2 * kPi), g.u(0.3, 5.0));
    const Arc arc2 = nudge_arc(arc, eig_unitary(UnitaryMatrix(u)));
    const Matrix p = spectral_projection(UnitaryMatrix(u), arc2).matrix();
    const Matrix q = spectral_projection(UnitaryMatrix(u), arc2.complement()).matrix();
    EXPECT_LT(norm2(p + q - Matrix::Identity(10, 10)), 1e-10);
    const Matrix ref = oracle::spectral_proj(u, [&](double a) { return arc2.contains(wrap_angle(a)); });
    EXPECT_LT(norm2(p - ref), 1e-8);
  }
}

TEST(CircleFunction, Cases) {
  oracle::Gen g(9);
  const Matrix u = g.unitary(7);
  const UnitaryMatrix uu(u);
  EXPECT_LT(norm2(apply_circle_function(uu, [](double) { return Complex(1); }) - Matrix::Identity(7, 7)), 1e-12);
  EXPECT_LT(norm2(apply_circle_function(uu, [](double a) { return std::polar(1.0, a); }) - u), 1e-8);
  const Arc arc = nudge_arc(Arc(1.0, 2.0), eig_unitary(uu));
  const Matrix f = apply_circle_function(uu, [&](double a) { return Complex(arc.contains(a) ? 1 : 0); });
  EXPECT_LT(norm2(f - spectral_projection(uu, arc).matrix()), 1e-10);
  const Matrix sq = apply_circle_function(uu, [](double a) { return std::polar(1.0, 2 * a); });
  EXPECT_LT(norm2(sq - u * u), 1e-8);
}

TEST(Compression, Cases) {
  oracle::Gen g(10);
  const Matrix u = g.unitary(6);
  const Compression full = compress_unitary(UnitaryMatrix(u), Projection::identity(6));
  EXPECT_LT(norm2(full.w.matrix() - u), 1e-12);
  EXPECT_LT(full.defect, 1e-12);

  const Matrix a = g.unitary(3), b = g.unitary(4);
  Matrix basis = Matrix::Zero(7, 3);
  basis.topRows(3) = Matrix::Identity(3, 3);
  const Compression blk = compress_unitary(UnitaryMatrix(oracle::dsum(a, b)), basis);
  EXPECT_LT(norm2(blk.w.matrix() - a), 1e-12);
  EXPECT_LT(blk.defect, 1e-12);
  EXPECT_LT(blk.kappa, 1e-12);
}

// gap radius R around -1 shrinks by at most 10 kappa under compression
TEST(Compression, GapInheritance) {
  oracle::Gen g(11);
  int checked = 0;
  for (int t = 0; t < 500; ++t) {
    const Index n = 8;
    Matrix d = Matrix::Zero(n, n);
    for (Index k = 0; k < n; ++k) {
      // |lambda + 1| >= 0.3
      const double lim = 2 * std::asin(0.15);
      d(k, k) = std::polar(1.0, g.u(-kPi + lim, kPi - lim));
    }
    const Matrix q = g.unitary(n);
    const Matrix u = q * d * q.adjoint();
    const Index r = 1 + t % 6;
    Matrix basis = (q.leftCols(r) + g.u(0, 0.003) * g.gauss(n, r));
    basis = orthonormalize(basis);
    const Projection p = Projection::from_basis(basis, 1e-9);
    const double kappa = norm2(p.matrix() * u - u * p.matrix());
    if (kappa >= 0.02) continue;
    const Compression c = compress_unitary(UnitaryMatrix(u), p);
    EXPECT_NEAR(c.kappa, kappa, 1e-10);
    Eigen::ComplexEigenSolver<Matrix> es(c.w.matrix());
    double md = 10;
    for (Index k = 0; k < es.eigenvalues().size(); ++k) md = std::min(md, std::abs(es.eigenvalues()(k) + 1.0));
    EXPECT_GE(md, 0.3 - 10 * kappa - 1e-12);
    ++checked;
  }
  EXPECT_GT(checked, 100);
}

TEST(DirectSum, Cases) {
  oracle::Gen g(12);
  const Matrix a = g.gauss(3, 3);
  EXPECT_EQ(direct_sum(a, Matrix(0, 0)), a);
  const Matrix b = g.gauss(2, 2);
  EXPECT_EQ(direct_sum(a, b), oracle::dsum(a, b));
}

TEST(DimensionCap, EnvOverride) {
  ASSERT_EQ(setenv("ACU_MAX_DIM", "64", 1), 0);
  EXPECT_EQ(max_dimension(), 64);
  EXPECT_CODE(check_dimension(65, "test"), ErrorCode::DimensionCap);
  check_dimension(64, "test");
  unsetenv("ACU_MAX_DIM");
  EXPECT_EQ(max_dimension(), 8192);
}

TEST(UnitaryLog, PrincipalBranch) {
  oracle::Gen g(13);
  for (int t = 0; t < 20; ++t) {
    const Matrix u = g.unitary(9);
    const Matrix h = unitary_log(UnitaryMatrix(u));
    EXPECT_LT(norm2(h - h.adjoint()), 1e-12);
    EXPECT_LE(norm2(h), kPi + 1e-9);
    EXPECT_LT(norm2(oracle::expi(h) - u), 1e-9);
  }
  const Matrix minus = -Matrix::Identity(3, 3);
  EXPECT_NEAR(norm2(unitary_log(UnitaryMatrix(minus))), kPi, 1e-12);
}

TEST(Arcs, Containment) {
  const Arc a(6.0, 1.0);
  EXPECT_TRUE(a.contains(6.2));
  EXPECT_TRUE(a.contains(0.5));
  EXPECT_FALSE(a.contains(1.0));
  EXPECT_FALSE(a.complement().contains(0.5));
  EXPECT_CODE(Arc(0, 0), ErrorCode::InvalidInput);
}

TEST(TypedMatrices, Validation) {
  Matrix a = Matrix::Identity(2, 2);
  a(0, 1) = 0.1;
  EXPECT_CODE(UnitaryMatrix{a}, ErrorCode::NotAlmostUnitary);
  EXPECT_CODE(HermitianMatrix{a}, ErrorCode::InvalidInput);
  EXPECT_CODE(Projection::from_matrix(0.9 * Matrix::Identity(2, 2)), ErrorCode::NotAlmostProjection);
}
