#pragma once

#include "acu/linalg.hpp"

namespace acu {

// Hermitian t0 with spectrum clustered near {0, 1}.
struct AlmostProjection {
  HermitianMatrix t0;
  double defect;  // ||t0^2 - t0||
};
AlmostProjection almost_projection(const Matrix& t0);

struct Sharpened {
  Projection t;
  double dist;    // ||t - t0||
  double defect;  // ||t0^2 - t0||
};

// Strict mode demands defect < 1/10; relaxed mode only thresholds at 1/2.
enum class Checks { Strict, Relaxed };

Sharpened sharpen_projection(const Matrix& t0, Checks checks = Checks::Strict);
// (1 + polar(2 t0 - 1)) / 2, the cross-check path.
Matrix sharpen_by_polar(const Matrix& t0);
// Non-Hermitian input is replaced by its Hermitian part.
Index rank_plus(const Matrix& t0, Checks checks = Checks::Strict);

struct Intertwiner {
  UnitaryMatrix sigma;  // sigma p sigma* = q
  double dist;          // ||sigma - 1||
};
Intertwiner intertwine_projections(const Projection& p, const Projection& q);

struct Disjoiner {
  UnitaryMatrix sigma;  // sigma p sigma* = image <= 1 - q
  Projection image;
  double dist;     // ||sigma - 1||
  double overlap;  // ||p q||
};
Disjoiner disjoin_projections(const Projection& p, const Projection& q, Checks checks = Checks::Strict);

// The same rotation for ranges given by orthonormal bases x, y of equal rank, as
// sigma = 1 + a b*. Only the planes spanned by the two ranges are touched.
struct LowRankRotation {
  Matrix a;
  Matrix b;
  double max_angle;  // largest principal angle between the ranges
};
LowRankRotation rotation_between(const Matrix& x, const Matrix& y);
Matrix apply_rotation(const LowRankRotation& r, const Matrix& v);
Matrix apply_rotation_adjoint(const LowRankRotation& r, const Matrix& v);

}  // namespace acu
