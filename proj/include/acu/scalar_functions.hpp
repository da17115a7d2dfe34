#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "acu/linalg.hpp"

namespace acu {

// C-infinity step: 0 for x <= 0, 1 for x >= 1.
double smooth_step(double x);
// -1 for x <= -1, 1 for x >= 1, odd.
double smooth_sign(double x);

// argument with the cut on the negative axis, in (-pi, pi]
double arg_minus(Complex z);
// argument with the cut on the positive axis, in [0, 2pi)
double arg_plus(Complex z);

// Real function on the circle, evaluated at eigen-angles.
struct CircleFunction {
  std::function<double(double)> eval;
  std::string smoothness;
  double sup_bound = 1.0;
  std::vector<Arc> support;
  std::vector<Arc> plateaus;
  std::vector<double> plateau_values;

  double operator()(double theta) const { return eval(theta); }
  std::function<Complex(double)> as_complex() const;
};

// closed arcs; 0 if they meet
double arc_distance(const Arc& a, const Arc& b);

CircleFunction plateau_bump(const std::vector<Arc>& arcs, const std::vector<double>& values, double beta);
// 1 on {Re z <= -1/2}, 0 outside its 1/10-neighbourhood
CircleFunction eta_minus();

// Smooth function on C agreeing with arg_minus on {|z| = 1, |z + 1| >= rho}.
std::function<double(Complex)> arg_rho(double rho);

struct RatioStats {
  double max = 0;
  double mean = 0;
  double min = 0;
  std::vector<double> ratios;
};

// ||[f(u), v]|| / ||[u, v]|| over random u with spectrum in {|z + 1| >= gap} (gap 0: anywhere)
// and v = exp(i scale H).
RatioStats commutator_ratio_probe(const std::function<Complex(double)>& f, int trials, Index n, double scale,
                                  std::uint64_t seed, double gap = 0.0);

}  // namespace acu
