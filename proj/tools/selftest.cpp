#include "selftest.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <string>

#include "acu/gap_opening.hpp"
#include "acu/generators.hpp"
#include "acu/homotopy.hpp"
#include "acu/invariants.hpp"
#include "acu/lin_oracle.hpp"
#include "acu/projections.hpp"
#include "acu/quantbeek.hpp"
#include "acu/scalar_functions.hpp"

using namespace acu;

namespace {

Matrix expi(const Matrix& h, double t) { return HermitianSpectrum(h).exp_i(t); }

Projection coordinate_projection(Index n, Index from, Index count) {
  Matrix b = Matrix::Zero(n, count);
  for (Index k = 0; k < count; ++k) b(from + k, k) = 1.0;
  return Projection::from_basis(b);
}

// worst ratio measured / bound; the suite passes below 1
using Suite = std::function<double(Rng&, int)>;

double rotation_suite(Rng& rng, int trials) {
  double worst = 0;
  for (int t = 0; t < trials; ++t) {
    const Index n = 2 + static_cast<Index>(rng.uniform() * 10);
    const double eps = 0.01 + 0.08 * rng.uniform();
    const UnitaryMatrix u = random_unitary(n, rng);
    const UnitaryMatrix v = random_unitary(n, rng);
    const Matrix w = rotate_double(u, eps).matrix();
    worst = std::max(worst, op_norm(w - direct_sum(u.matrix(), u.matrix().adjoint())) / (3 * eps));
    const Matrix wi = (w + Matrix::Identity(2 * n, 2 * n)).inverse();
    worst = std::max(worst, op_norm(wi) * eps);
    const double c = commutator_norm(w, direct_sum(v.matrix(), v.matrix()));
    worst = std::max(worst, c / (2 * commutator_norm(u.matrix(), v.matrix())));
  }
  return worst;
}

double sharpen_suite(Rng& rng, int trials) {
  double worst = 0;
  for (int t = 0; t < trials; ++t) {
    const Index n = 4 + static_cast<Index>(rng.uniform() * 8);
    const Projection p = coordinate_projection(n, 0, n / 2);
    const Matrix t0 = p.matrix() + 0.02 * rng.uniform() * random_hermitian(n, rng);
    const Sharpened s = sharpen_projection(t0);
    worst = std::max(worst, s.dist / (4 * s.defect + 1e-15));
  }
  return worst;
}

double kato_suite(Rng& rng, int trials) {
  double worst = 0;
  for (int t = 0; t < trials; ++t) {
    const Index n = 4 + static_cast<Index>(rng.uniform() * 8);
    const Projection p = coordinate_projection(n, 0, n / 2);
    const Matrix g = expi(random_hermitian(n, rng), 0.05 * rng.uniform());
    const Projection q = Projection::from_basis(g * p.basis());
    const Intertwiner it = intertwine_projections(p, q);
    const Matrix& s = it.sigma.matrix();
    const double conj = op_norm(s * p.matrix() * s.adjoint() - q.matrix());
    worst = std::max(worst, conj / 1e-10);
    worst = std::max(worst, it.dist / (4 * op_norm(p.matrix() - q.matrix())));
  }
  return worst;
}

double disjoin_suite(Rng& rng, int trials) {
  double worst = 0;
  for (int t = 0; t < trials; ++t) {
    const Index n = 6 + static_cast<Index>(rng.uniform() * 8);
    const Projection p = coordinate_projection(n, 0, 2);
    const Matrix g = expi(random_hermitian(n, rng), 0.004 * rng.uniform());
    const Projection q = Projection::from_basis(g * coordinate_projection(n, 2, n / 2).basis());
    const Disjoiner d = disjoin_projections(p, q);
    worst = std::max(worst, op_norm(d.image.matrix() * q.matrix()) / 1e-10);
    worst = std::max(worst, d.dist / (5 * d.overlap + 1e-15));
  }
  return worst;
}

double polar_suite(Rng& rng, int trials) {
  double worst = 0;
  for (int t = 0; t < trials; ++t) {
    const Index n = 3 + static_cast<Index>(rng.uniform() * 8);
    const Matrix w = random_unitary(n, rng).matrix() + 0.03 * rng.uniform() * random_gaussian(n, n, rng) / std::sqrt(n);
    const NearestUnitary nu = nearest_unitary(w);
    worst = std::max(worst, nu.defect / (5 * nu.rho + 1e-15));
  }
  return worst;
}

double quantbeek_suite(Rng& rng, int trials) {
  double worst = 0;
  for (int t = 0; t < std::max(1, trials / 10); ++t) {
    const int N = 2 + static_cast<int>(rng.uniform() * 3);
    const Index blk = 2;
    const Index n = 2 * N * blk;
    std::vector<Projection> r;
    for (int j = 0; j < 2 * N; ++j) r.push_back(coordinate_projection(n, j * blk, blk));
    const Matrix g = expi(random_hermitian(n, rng), 1e-4);
    std::vector<Projection> P, Q;
    for (int k = 0; k < N; ++k) {
      const int a = (2 * k - 1 + 2 * N) % (2 * N), b = 2 * k, c = (2 * k + 1) % (2 * N);
      P.push_back(Projection::from_matrix(r[a].matrix() + r[b].matrix()));
      Matrix qb(n, 2 * blk);
      qb << r[b].basis(), r[c].basis();
      Q.push_back(Projection::from_basis(g * qb));
    }
    const RefinedFamilies f = refine_intertwined(CyclicFamily(P), CyclicFamily(Q));
    for (int j = 0; j < 2 * N; ++j) {
      const Matrix& w = f.w.matrix();
      const double res = op_norm(w * f.q[j].matrix() * w.adjoint() - f.p[j].matrix());
      worst = std::max(worst, res / 1e-9);
      worst = std::max(worst, op_norm(f.p[j].matrix() - f.q[j].matrix()) / (200 * f.epsilon + 1e-15));
    }
    worst = std::max(worst, f.w_dist / (100 * f.epsilon * std::sqrt(N) + 1e-15));
  }
  return worst;
}

double invariant_suite(Rng&, int) {
  double worst = 0;
  InvariantConfig be;
  be.mode = Mode::BestEffort;
  for (int m : {8, 12}) {
    const auto [om, s] = voiculescu(m);
    const InvariantReport r = compute_invariants(om, s, be);
    if (!r.isospec || *r.isospec != -1 || !r.winding || *r.winding != -1) worst = 2;
  }
  const Instance d = make_instance({InstanceKind::Doubled, 8, 0, 0});
  const InvariantReport r = compute_invariants(d.u, d.v, be);
  if (!r.isospec || *r.isospec != 0 || !r.winding || *r.winding != 0) worst = 2;
  return worst;
}

double arg_suite(Rng&, int) {
  double worst = 0;
  for (double rho : {0.4, 0.2, 0.1, 0.05}) {
    const auto f = arg_rho(rho);
    for (int k = 0; k < 2000; ++k) {
      const Complex z = std::polar(1.0, -kPi + kTwoPi * (k + 0.5) / 2000);
      if (std::abs(z + 1.0) < rho) continue;
      worst = std::max(worst, std::abs(f(z) - arg_minus(z)) / 1e-10);
    }
  }
  return worst;
}

double oracle_suite(Rng& rng, int trials) {
  double worst = 0;
  for (int t = 0; t < std::max(1, trials / 5); ++t) {
    const Index n = 8;
    const Matrix a = random_hermitian(n, rng);
    const Matrix b = a * a + 1e-3 * random_hermitian(n, rng);
    const OracleResult r = commuting_hermitian_pair(a, b);
    worst = std::max(worst, r.commutator_residual / 1e-9);
  }
  return worst;
}

double pipeline_suite(Rng& rng, int) {
  const Instance inst = make_instance({InstanceKind::PerturbedCommuting, 6, 1e-3, rng.next()});
  ApproximateConfig cfg;
  cfg.mode = Mode::BestEffort;
  const ApproximantPair r = approximate(inst.u, inst.v, cfg);
  return std::max(r.report.commutator_residual / 1e-9, std::max(r.report.unitarity_u, r.report.unitarity_v) / 1e-10);
}

}  // namespace

bool run_selftest(std::uint64_t seed, std::ostream& out) {
  const std::vector<std::pair<std::string, Suite>> suites = {
      {"rotate_double bounds", rotation_suite}, {"projection sharpening", sharpen_suite},
      {"Kato intertwiner", kato_suite},         {"projection disjoiner", disjoin_suite},
      {"almost-unitary correction", polar_suite}, {"quantbeek refinement", quantbeek_suite},
      {"invariants", invariant_suite},          {"arg_rho", arg_suite},
      {"Lin oracle", oracle_suite},             {"end-to-end pipeline", pipeline_suite},
  };
  bool all = true;
  for (std::size_t i = 0; i < suites.size(); ++i) {
    Rng rng(seed * 1000003 + i);
    const auto t0 = std::chrono::steady_clock::now();
    std::string status;
    double worst = 0;
    try {
      worst = suites[i].second(rng, selftest_trials);
      status = worst < 1.0 ? "PASS" : "FAIL";
    } catch (const std::exception& e) {
      status = std::string("FAIL (") + e.what() + ")";
      worst = NAN;
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    if (status != "PASS") all = false;
    out << status << "  " << suites[i].first << "  worst ratio " << worst << "  " << ms << " ms\n";
  }
  return all;
}
