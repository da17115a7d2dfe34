#pragma once

#include <string>
#include <vector>

#include "acu/linalg.hpp"
#include "acu/projections.hpp"

namespace acu {

// P_0..P_{N-1}, indices mod N, summing to 1 and pairwise orthogonal.
class CyclicFamily {
 public:
  explicit CyclicFamily(std::vector<Projection> members, double tol = 1e-9);
  int size() const { return static_cast<int>(members_.size()); }
  Index dim() const { return members_.front().size(); }
  const Projection& operator[](int k) const;  // k taken mod N
  const std::vector<Projection>& members() const { return members_; }

 private:
  std::vector<Projection> members_;
};

struct StageMeasure {
  std::string name;
  double value;
  double bound;  // in units of the measured epsilon already multiplied out
  bool at_least = false;  // value >= bound instead of value <= bound
};

struct RefinedFamilies {
  std::vector<Projection> p;  // p'_0..p'_{2N-1}, P_k = p'_{2k-1} + p'_{2k}
  std::vector<Projection> q;  // q'_0..q'_{2N-1}, Q_k = q'_{2k} + q'_{2k+1}
  UnitaryMatrix w;            // w q'_j w* = p'_j
  double epsilon;
  double w_dist;  // ||w - 1||
  std::vector<StageMeasure> stages;
};

double measure_family_defect(const CyclicFamily& P, const CyclicFamily& Q);

// Strict mode enforces epsilon < 1/200 and every sub-step precondition (StageFailure).
RefinedFamilies refine_intertwined(const CyclicFamily& P, const CyclicFamily& Q, Checks checks = Checks::Strict);

}  // namespace acu
