#pragma once

#include <optional>
#include <string>
#include <vector>

#include "acu/homotopy.hpp"
#include "acu/invariants.hpp"
#include "acu/lin_oracle.hpp"
#include "acu/linalg.hpp"
#include "acu/quantbeek.hpp"

namespace acu {

// diag(u,1) R(pi/2 - eps) diag(u*,1) R(pi/2 - eps)^T, a 2n x 2n unitary with a gap of radius eps at -1.
UnitaryMatrix rotate_double(const UnitaryMatrix& u, double eps);

// The amplified pair is block diagonal, so it is stored by blocks:
//   u_amp(eps)  = diag(w_0, ..., w_{d-1}),        w_j = rotate_double(u_j, eps), on [2jn, 2jn + 2n)
//   u_path(eps) = diag(x_1, ..., x_{d-1}, 1),     x_j = rotate_double(u_j*, eps), on [(2j-1)n, (2j+1)n)
//   v_amp = v (x) 1_{2d},  v_path = v (x) 1_{2d-1}
// u_path lives on the last (2d-1)n coordinates; p is the first n.
struct AmplifiedPair {
  Index n = 0;
  int d = 0;
  double eps = 0;
  double delta = 0;  // max_j ||[u_j, v]|| over the samples
  Matrix u;
  Matrix v;
  std::vector<Matrix> samples;  // u_0 = u, ..., u_{d-1}
  std::vector<Matrix> amp_blocks;
  std::vector<Matrix> path_blocks;  // last one is the n x n identity

  Index dim() const { return 2 * static_cast<Index>(d) * n; }
  Index amp_offset(int j) const { return 2 * j * n; }
  Index path_offset(int j) const { return (2 * j + 1) * n; }  // j = 0 .. d-1 indexes x_{j+1}

  // Dense forms, for small dimensions only.
  Matrix u_amp_dense() const;
  Matrix v_amp_dense() const;
  Matrix u_sum_path_dense() const;  // u (+) u_path(eps)
  Matrix v_sum_path_dense() const;  // v (+) v_path

  // measured bounds
  double path_step = 0;          // max ||u_{j+1} - u_j||, u_d = 1
  double amp_commutator = 0;     // ||[u_amp(eps), v_amp]||
  double path_commutator = 0;    // ||[u_path(eps), v_path]||
  double amp_gap = 0;            // min |lambda + 1| over sigma(u_amp(eps))
  double path_gap = 0;
  double corner_error = 0;       // ||u - p u_amp(eps)|_p||
  double sum_distance = 0;       // ||u (+) u_path(eps) - u_amp(eps)||, exact or triangle bound
  bool sum_distance_exact = false;
};

// Samples the path with steps of at most eps (generator length). delta_bound, when given, is the
// admissible commutator level for the samples.
AmplifiedPair amplify(const UnitaryMatrix& u, const UnitaryMatrix& v, const UnitaryPath& path, double eps,
                      std::optional<double> delta_bound = std::nullopt);

struct PipelineReport {
  Mode mode = Mode::Certified;
  double delta = 0;       // ||[u, v]|| of the input
  double path_delta = 0;  // max commutator along the path
  double eps = 0;
  double gamma = 0;       // ||1_{Omega-}(u'_amp) r||
  int d = 0;
  int N = 0;  // homotopy parameter, 0 when the path was supplied
  Index n = 0;
  Index n_total = 0;
  double distance_u = 0;
  double distance_v = 0;
  double commutator_residual = 0;
  double unitarity_u = 0;
  double unitarity_v = 0;
  std::optional<int> winding;
  std::optional<int> isospec;
  std::vector<StageMeasure> stages;
  std::vector<std::string> notes;
  bool flagged = false;  // a stage check failed in best-effort mode
  bool short_circuit = false;
  double runtime_ms = 0;

  double stage(const std::string& name) const;  // NaN if absent
};

struct GapOpeningConfig {
  std::optional<double> eps;  // default min(delta^{1/3}, 0.099)
  Mode mode = Mode::Certified;
  OracleConfig oracle;
};

struct ApproximantPair {
  UnitaryMatrix u;
  UnitaryMatrix v;
  PipelineReport report;
};

// path: from u to 1, almost commuting with v along the way.
ApproximantPair open_gap(const UnitaryMatrix& u, const UnitaryMatrix& v, const UnitaryPath& path,
                         const GapOpeningConfig& cfg = {});

struct ApproximateConfig {
  Mode mode = Mode::Certified;
  std::optional<double> eps;
  std::optional<int> N;
  int samples = 32;
  double c1 = 10.0;
  OracleConfig oracle;
};

// Full pipeline: invariants, a path for v to 1 commuting approximately with u, then the gap
// opening applied with the roles of u and v exchanged.
ApproximantPair approximate(const UnitaryMatrix& u, const UnitaryMatrix& v, const ApproximateConfig& cfg = {});
// Same with a given path for v.
ApproximantPair approximate_with_path(const UnitaryMatrix& u, const UnitaryMatrix& v, const UnitaryPath& path_of_v,
                                      const ApproximateConfig& cfg = {});

}  // namespace acu
