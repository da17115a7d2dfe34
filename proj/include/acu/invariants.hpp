#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "acu/linalg.hpp"

namespace acu {

enum class Mode { Certified, BestEffort };
Mode parse_mode(const std::string& s);
std::string to_string(Mode m);

// J comes first counterclockwise and its end lies inside I.
struct ArcPair {
  Arc i;
  Arc j;
};

struct InvariantConfig {
  Mode mode = Mode::Certified;
  double c1 = 10.0;
  double beta = 0.1;  // chordal separation of the inner boundaries
};

struct InvariantReport {
  std::optional<int> winding;
  std::optional<int> isospec;
  std::optional<ArcPair> arcs;
  double delta = 0.0;
  Mode mode = Mode::Certified;
  int sign_convention = 1;  // isospec = sign_convention * winding
  std::vector<std::string> notes;
};

// Winding of t -> det(t uv + (1 - t) vu) around 0.
int winding_number(const UnitaryMatrix& u, const UnitaryMatrix& v);

// rank(1_I(u) 1_J(u)) - rank_+(1_I(v u v*) 1_J(u)).
std::pair<int, InvariantReport> isospec(const UnitaryMatrix& u, const UnitaryMatrix& v,
                                        const std::optional<ArcPair>& arcs = std::nullopt,
                                        const InvariantConfig& cfg = {});

// Arc pair whose four boundary points are as far as possible from sigma(u).
ArcPair auto_arcs(const SpectralDecomposition& spec, double beta);
// Chordal distance between boundary sets.
double boundary_separation(const ArcPair& arcs);

// Clock and shift matrices.
std::pair<UnitaryMatrix, UnitaryMatrix> voiculescu(int m);

// Ratio isospec / winding on (Omega_8, S_8), computed once.
int sign_convention();

// Both invariants; an undefined one is left empty with a note.
InvariantReport compute_invariants(const UnitaryMatrix& u, const UnitaryMatrix& v, const InvariantConfig& cfg = {});

struct Agreement {
  bool agree;
  InvariantReport report;
};
Agreement invariants_agree(const UnitaryMatrix& u, const UnitaryMatrix& v, const InvariantConfig& cfg = {});

}  // namespace acu
