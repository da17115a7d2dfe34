#pragma once

#include <optional>
#include <string>
#include <vector>

#include "acu/invariants.hpp"
#include "acu/linalg.hpp"
#include "acu/quantbeek.hpp"

namespace acu {

// t -> exp(i t G) base, t in [0, 1].
class Segment {
 public:
  Segment(std::string label, Matrix base, Matrix generator, bool block_diagonal = false);

  const std::string& label() const { return label_; }
  const Matrix& base() const { return base_; }
  const Matrix& generator() const { return generator_; }
  bool block_diagonal() const { return block_; }
  double generator_norm() const { return spectrum_.norm(); }
  Matrix at(double t) const;
  Matrix end() const { return at(1.0); }

 private:
  std::string label_;
  Matrix base_;
  Matrix generator_;
  bool block_;
  HermitianSpectrum spectrum_;
};

class UnitaryPath {
 public:
  UnitaryPath() = default;
  explicit UnitaryPath(std::vector<Segment> segments, std::vector<double> stage_boundaries = {});

  const std::vector<Segment>& segments() const { return segments_; }
  // Boundaries of the construction's own parameter (e.g. 0,1,2,3,4); the path itself runs over [0,1].
  const std::vector<double>& stage_boundaries() const { return stages_; }
  Index dim() const;
  double total_generator_norm() const;
  // s in [0, 1], segments share the interval equally
  Matrix at(double s) const;
  Matrix start() const;
  Matrix end() const;
  // max over joints of ||end_i - start_{i+1}||
  double continuity_defect() const;

 private:
  std::vector<Segment> segments_;
  std::vector<double> stages_;
};

// density + 1 samples per segment, endpoints included (joints repeated).
std::vector<Matrix> sample_path(const UnitaryPath& path, int density);
// Samples with consecutive distance at most `step` (via generator norms), joints not repeated.
std::vector<Matrix> subdivide_path(const UnitaryPath& path, double step, std::vector<int>* per_segment = nullptr);

// Arcs I_j = [theta0 + pi j / N, theta0 + pi (j+1) / N), j = 0..2N-1.
struct HomotopyFamilies {
  int N;
  double theta0;
  std::vector<double> lambda;   // angles of lambda_j
  std::vector<Matrix> q_basis;  // ran q_j
  std::vector<Matrix> p_basis;  // ran p_j = v ran q_j
  CyclicFamily P;               // P_k = p_{2k-1} + p_{2k}
  CyclicFamily Q;               // Q_k = q_{2k} + q_{2k+1}
  Matrix u_tilde;               // sum lambda_j q_j
};
HomotopyFamilies build_families(const UnitaryMatrix& u, const UnitaryMatrix& v, int N);

struct HomotopyConfig {
  std::optional<int> N;
  int samples = 32;  // per segment, for the certificate
  Mode mode = Mode::Certified;
  InvariantConfig invariants;  // mode copied from `mode`
  bool check_isospec = true;
};

struct HomotopyCertificate {
  int N = 0;
  double delta = 0;
  Mode mode = Mode::Certified;
  double max_commutator_sampled = 0;  // max ||[v_t, u]||
  double max_commutator_tilde = 0;    // max ||[v_t, u~]||
  int sample_density = 0;
  double tilde_u_error = 0;  // ||u~ - u||
  double quantbeek_epsilon = 0;
  double w_dist = 0;
  double z_conjugation = 0;  // ||z u~ z* - u~||
  double y_conjugation = 0;  // same for y and v u~ v*
  double gamma0_residual = 0;
  double gamma3_residual = 0;  // ||Gamma_3 u~ Gamma_3* - v u~ v*||
  double v3_commutator = 0;    // ||[v_3, u~]|| before the last segment
  double end_defect = 0;       // ||v_end - 1||
  double start_defect = 0;     // ||v_start - v||
  double continuity = 0;
  std::vector<double> generator_norms;
  std::vector<StageMeasure> quantbeek_stages;
  std::vector<std::string> notes;
  bool short_circuit = false;
};

struct Homotopy {
  UnitaryPath path;
  HomotopyCertificate certificate;
};

Homotopy build_homotopy(const UnitaryMatrix& u, const UnitaryMatrix& v, const HomotopyConfig& cfg = {});

}  // namespace acu
