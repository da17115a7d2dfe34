#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "acu/linalg.hpp"

namespace acu {

// Counter-based: the k-th draw depends only on (seed, k).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed) {}
  std::uint64_t next();
  double uniform();  // [0, 1)
  double normal();
  Complex complex_normal();  // E|z|^2 = 1

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

Matrix random_gaussian(Index rows, Index cols, Rng& rng);
// Gaussian Hermitian, scaled to operator norm 1.
Matrix random_hermitian(Index n, Rng& rng);
// Haar distributed.
UnitaryMatrix random_unitary(Index n, Rng& rng);
UnitaryMatrix random_diagonal_unitary(Index n, Rng& rng);

enum class InstanceKind { Voiculescu, Doubled, PerturbedCommuting, Custom };

InstanceKind parse_instance_kind(const std::string& s);
std::string to_string(InstanceKind k);

struct InstanceSpec {
  InstanceKind kind = InstanceKind::Voiculescu;
  Index size = 8;  // m for the Voiculescu kinds, n otherwise
  double scale = 1e-3;
  std::uint64_t seed = 0;
};

struct Instance {
  UnitaryMatrix u;
  UnitaryMatrix v;
  double delta;
  std::optional<int> expected_invariant;
  std::string description;
};

Instance make_instance(const InstanceSpec& spec);

}  // namespace acu
