#include "helpers.hpp"

#include "acu/generators.hpp"
#include "acu/scalar_functions.hpp"

using namespace acu;

TEST(Args, Branches) {
  EXPECT_EQ(arg_minus(1.0), 0.0);
  EXPECT_NEAR(arg_minus(Complex(0, 1)), kPi / 2, 1e-15);
  EXPECT_NEAR(arg_minus(Complex(0, -1)), -kPi / 2, 1e-15);
  EXPECT_NEAR(arg_plus(Complex(0, -1)), 3 * kPi / 2, 1e-15);
  EXPECT_NEAR(arg_plus(Complex(1, 0)), 0.0, 1e-15);
}

TEST(ArgRho, PointOnTrho) {
  const auto f = arg_rho(0.1);
  const Complex z = std::polar(1.0, kPi - 0.1);
  EXPECT_NEAR(f(z), kPi - 0.1, 1e-10);
  EXPECT_NEAR(f(z), arg_minus(z), 1e-10);
  EXPECT_NEAR(f(1.0), 0.0, 1e-15);
  EXPECT_NEAR(f(Complex(0, 1)), kPi / 2, 1e-15);
}

TEST(ArgRho, AgreesWithArgMinusOnTrho) {
  for (double rho : {0.4, 0.2, 0.1, 0.05}) {
    const auto f = arg_rho(rho);
    for (int k = 0; k < 10000; ++k) {
      const Complex z = std::polar(1.0, -kPi + 2 * kPi * (k + 0.5) / 10000);
      if (std::abs(z + 1.0) < rho) continue;
      ASSERT_NEAR(f(z), arg_minus(z), 1e-10) << rho << " " << z;
    }
  }
  EXPECT_CODE(arg_rho(0.0), ErrorCode::InvalidInput);
}

TEST(SmoothStep, Limits) {
  EXPECT_EQ(smooth_step(-0.1), 0.0);
  EXPECT_EQ(smooth_step(1.1), 1.0);
  EXPECT_NEAR(smooth_step(0.5), 0.5, 1e-15);
  for (int k = 0; k < 100; ++k) {
    const double x = k / 100.0;
    EXPECT_LE(smooth_step(x), smooth_step(x + 0.01));
    EXPECT_NEAR(smooth_sign(-x), -smooth_sign(x), 1e-15);
  }
}

TEST(PlateauBump, SingleArc) {
  const Arc a(1.0, 1.0);
  const CircleFunction f = plateau_bump({a}, {1.0}, 0.5);
  for (int k = 0; k <= 100; ++k) EXPECT_EQ(f(1.0 + k / 100.0), 1.0);
  EXPECT_EQ(f(1.0 + 1.0 + 0.51), 0.0);
  EXPECT_EQ(f(1.0 - 0.51), 0.0);
  for (int k = 0; k < 4000; ++k) {
    const double v = f(2 * kPi * k / 4000);
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(PlateauBump, AntipodalOdd) {
  const Arc a(0.5, 0.7), b = a.rotated(kPi);
  const CircleFunction f = plateau_bump({a, b}, {1.0, -1.0}, 0.3);
  for (int k = 0; k < 2000; ++k) {
    const double th = 2 * kPi * k / 2000;
    EXPECT_NEAR(f(th), -f(th + kPi), 1e-12);
    EXPECT_LE(std::abs(f(th)), 1.0);
  }
  EXPECT_CODE(plateau_bump({a, Arc(1.3, 0.5)}, {1.0, 1.0}, 0.3), ErrorCode::ArcsTooClose);
}

TEST(EtaMinus, PlateauAndSupport) {
  const CircleFunction f = eta_minus();
  for (int k = 0; k < 4000; ++k) {
    const Complex z = std::polar(1.0, 2 * kPi * k / 4000);
    const double v = f(2 * kPi * k / 4000);
    if (z.real() <= -0.5) {
      EXPECT_EQ(v, 1.0);
    }
    // outside a 1/10 neighbourhood of the plateau arc
    const double chord_out = std::abs(z - std::polar(1.0, 2 * kPi / 3));
    const double chord_out2 = std::abs(z - std::polar(1.0, 4 * kPi / 3));
    if (z.real() > -0.5 && std::min(chord_out, chord_out2) > 0.2) {
      EXPECT_EQ(v, 0.0);
    }
  }
}

TEST(RatioProbe, TrivialFunctions) {
  const RatioStats c = commutator_ratio_probe([](double) { return Complex(2.0); }, 10, 6, 0.01, 1);
  EXPECT_LT(c.max, 1e-10);
  const RatioStats id = commutator_ratio_probe([](double a) { return std::polar(1.0, a); }, 10, 6, 0.01, 2);
  EXPECT_NEAR(id.min, 1.0, 1e-8);
  EXPECT_NEAR(id.max, 1.0, 1e-8);
}

TEST(RatioProbe, ArgRhoTrend) {
  std::vector<double> maxes;
  for (double rho : {0.4, 0.2, 0.1}) {
    const auto f = arg_rho(rho);
    const RatioStats s =
        commutator_ratio_probe([&](double a) { return Complex(f(std::polar(1.0, a))); }, 40, 6, 1e-3, 5, rho);
    maxes.push_back(s.max);
  }
  EXPECT_GE(maxes[1] * 2, maxes[0]);
  EXPECT_GE(maxes[2] * 2, maxes[1]);
}
