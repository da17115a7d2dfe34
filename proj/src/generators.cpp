#include "acu/generators.hpp"

#include <cmath>

#include "acu/invariants.hpp"

namespace acu {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t Rng::next() { return splitmix(splitmix(seed_) ^ (counter_++ * 0xd1342543de82ef95ULL)); }

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  double u1 = uniform();
  while (u1 <= 0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

Complex Rng::complex_normal() { return Complex(normal(), normal()) / std::sqrt(2.0); }

Matrix random_gaussian(Index rows, Index cols, Rng& rng) {
  Matrix g(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) g(i, j) = rng.complex_normal();
  return g;
}

Matrix random_hermitian(Index n, Rng& rng) {
  const Matrix g = random_gaussian(n, n, rng);
  Matrix h = 0.5 * (g + g.adjoint());
  const double nrm = op_norm(h);
  if (nrm > 0) h /= nrm;
  return h;
}

UnitaryMatrix random_unitary(Index n, Rng& rng) {
  const Matrix g = random_gaussian(n, n, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix& r = qr.matrixQR();
  for (Index j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    if (std::abs(d) > 0) q.col(j) *= d / std::abs(d);
  }
  return UnitaryMatrix::trusted(std::move(q));
}

UnitaryMatrix random_diagonal_unitary(Index n, Rng& rng) {
  Matrix d = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) d(i, i) = std::polar(1.0, kTwoPi * rng.uniform());
  return UnitaryMatrix::trusted(std::move(d));
}

InstanceKind parse_instance_kind(const std::string& s) {
  if (s == "voiculescu") return InstanceKind::Voiculescu;
  if (s == "doubled") return InstanceKind::Doubled;
  if (s == "perturbed_commuting") return InstanceKind::PerturbedCommuting;
  if (s == "custom") return InstanceKind::Custom;
  throw Error(ErrorCode::InvalidInput, "unknown instance kind '" + s + "'");
}

std::string to_string(InstanceKind k) {
  switch (k) {
    case InstanceKind::Voiculescu: return "voiculescu";
    case InstanceKind::Doubled: return "doubled";
    case InstanceKind::PerturbedCommuting: return "perturbed_commuting";
    case InstanceKind::Custom: return "custom";
  }
  return "custom";
}

Instance make_instance(const InstanceSpec& spec) {
  switch (spec.kind) {
    case InstanceKind::Voiculescu: {
      if (spec.size < 2) throw Error(ErrorCode::InvalidInput, "voiculescu needs m >= 2");
      auto [om, s] = voiculescu(static_cast<int>(spec.size));
      const double delta = commutator_norm(om.matrix(), s.matrix());
      return {om, s, delta, -1, "voiculescu m=" + std::to_string(spec.size)};
    }
    case InstanceKind::Doubled: {
      if (spec.size < 2) throw Error(ErrorCode::InvalidInput, "doubled needs m >= 2");
      auto [om, s] = voiculescu(static_cast<int>(spec.size));
      UnitaryMatrix u = UnitaryMatrix::trusted(direct_sum(om.matrix(), om.matrix().adjoint()));
      UnitaryMatrix v = UnitaryMatrix::trusted(direct_sum(s.matrix(), s.matrix()));
      const double delta = commutator_norm(u.matrix(), v.matrix());
      return {u, v, delta, 0, "doubled voiculescu m=" + std::to_string(spec.size)};
    }
    case InstanceKind::PerturbedCommuting: {
      if (spec.size < 1) throw Error(ErrorCode::InvalidInput, "perturbed_commuting needs n >= 1");
      Rng rng(spec.seed);
      const Index n = spec.size;
      UnitaryMatrix u = random_diagonal_unitary(n, rng);
      const Matrix v0 = random_diagonal_unitary(n, rng).matrix();
      const Matrix g = HermitianSpectrum(random_hermitian(n, rng)).exp_i(spec.scale);
      UnitaryMatrix v = UnitaryMatrix::trusted(g * v0 * g.adjoint());
      const double delta = commutator_norm(u.matrix(), v.matrix());
      return {u, v, delta, 0, "perturbed commuting n=" + std::to_string(n)};
    }
    case InstanceKind::Custom:
      break;
  }
  throw Error(ErrorCode::InvalidInput, "custom instances are read from a file, not generated");
}

}  // namespace acu
