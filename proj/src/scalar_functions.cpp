#include "acu/scalar_functions.hpp"

#include <algorithm>
#include <cmath>

#include "acu/generators.hpp"

namespace acu {

namespace {

double edge(double x) { return x > 0 ? std::exp(-1.0 / x) : 0.0; }

// angular distance from theta to a closed arc
double distance_to_arc(double theta, const Arc& a) {
  if (a.contains(theta)) return 0.0;
  return a.boundary_distance(theta);
}

}  // namespace

double smooth_step(double x) {
  if (x <= 0) return 0.0;
  if (x >= 1) return 1.0;
  const double a = edge(x);
  const double b = edge(1.0 - x);
  return a / (a + b);
}

double smooth_sign(double x) { return 2.0 * smooth_step(0.5 * (x + 1.0)) - 1.0; }

double arg_minus(Complex z) { return std::arg(z); }

double arg_plus(Complex z) {
  const double a = std::arg(z);
  return a < 0 ? a + kTwoPi : a;
}

std::function<Complex(double)> CircleFunction::as_complex() const {
  auto f = eval;
  return [f](double t) { return Complex(f(t), 0.0); };
}

double arc_distance(const Arc& a, const Arc& b) {
  if (a.is_full() || b.is_full()) return 0.0;
  return std::min({distance_to_arc(a.start(), b), distance_to_arc(a.end(), b), distance_to_arc(b.start(), a),
                   distance_to_arc(b.end(), a)});
}

CircleFunction plateau_bump(const std::vector<Arc>& arcs, const std::vector<double>& values, double beta) {
  if (arcs.size() != values.size() || arcs.empty())
    throw Error(ErrorCode::InvalidInput, "plateau_bump: one value per arc required");
  if (!(beta > 0)) throw Error(ErrorCode::InvalidInput, "plateau_bump: beta must be positive", beta);
  for (double v : values)
    if (std::abs(v) > 1.0) throw Error(ErrorCode::InvalidInput, "plateau_bump: values must lie in [-1, 1]", v);
  for (std::size_t i = 0; i < arcs.size(); ++i)
    for (std::size_t j = i + 1; j < arcs.size(); ++j) {
      const double d = arc_distance(arcs[i], arcs[j]);
      if (d < beta) throw Error(ErrorCode::ArcsTooClose, "plateau_bump: arcs closer than beta", d);
    }
  const double width = 0.5 * beta;
  CircleFunction f;
  f.eval = [arcs, values, width](double theta) {
    double s = 0;
    for (std::size_t i = 0; i < arcs.size(); ++i) {
      const double d = distance_to_arc(theta, arcs[i]);
      if (d < width) s += values[i] * (1.0 - smooth_step(d / width));
    }
    return s;
  };
  f.smoothness = "C-infinity";
  f.sup_bound = 0;
  for (double v : values) f.sup_bound = std::max(f.sup_bound, std::abs(v));
  for (const Arc& a : arcs) {
    const double len = std::min(kTwoPi, a.length() + 2 * width);
    f.support.push_back(len >= kTwoPi ? Arc::full() : Arc(a.start() - width, len));
  }
  f.plateaus = arcs;
  f.plateau_values = values;
  return f;
}

CircleFunction eta_minus() {
  return plateau_bump({Arc(2.0 * kPi / 3.0, 2.0 * kPi / 3.0)}, {1.0}, 0.2);
}

std::function<double(Complex)> arg_rho(double rho) {
  if (!(rho > 0 && rho < 2)) throw Error(ErrorCode::InvalidInput, "arg_rho: rho must lie in (0, 2)", rho);
  return [rho](Complex z) {
    const double phi = 1.0 - smooth_step((std::abs(z + 1.0) - 0.1) / 0.1);
    const double psi = 1.0 - smooth_step(std::abs(std::abs(z) - 1.0) / 0.1);
    double out = 0;
    if (phi > 0) {
      const double s = smooth_sign(2.0 * z.imag() / rho);
      out += phi * (arg_plus(z) - kPi * (1.0 - s));
    }
    if (phi < 1 && psi > 0) out += (1.0 - phi) * psi * arg_minus(z);
    return out;
  };
}

RatioStats commutator_ratio_probe(const std::function<Complex(double)>& f, int trials, Index n, double scale,
                                  std::uint64_t seed, double gap) {
  RatioStats st;
  if (trials <= 0) return st;
  Rng rng(seed);
  const double edge_angle = gap > 0 ? kPi - 2.0 * std::asin(0.5 * gap) : kPi;
  double sum = 0;
  st.min = std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    const Matrix q = random_unitary(n, rng).matrix();
    RealVector angles(n);
    for (Index i = 0; i < n; ++i) angles(i) = (2.0 * rng.uniform() - 1.0) * edge_angle;
    if (n >= 2 && gap > 0) {
      angles(0) = edge_angle;
      angles(1) = -edge_angle;
    }
    Vector lam(n), flam(n);
    for (Index i = 0; i < n; ++i) {
      lam(i) = std::polar(1.0, angles(i));
      flam(i) = f(wrap_angle(angles(i)));
    }
    const Matrix u = (q * lam.asDiagonal()) * q.adjoint();
    const Matrix fu = (q * flam.asDiagonal()) * q.adjoint();
    const Matrix v = HermitianSpectrum(random_hermitian(n, rng)).exp_i(scale);
    const double base = commutator_norm(u, v);
    const double r = base > 0 ? commutator_norm(fu, v) / base : 0.0;
    st.ratios.push_back(r);
    sum += r;
    st.max = std::max(st.max, r);
    st.min = std::min(st.min, r);
  }
  st.mean = sum / trials;
  return st;
}

}  // namespace acu
