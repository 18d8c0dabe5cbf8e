// Deterministic point generation on the sphere and in the ball.
#pragma once

#include "qbloch/core.hpp"

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cstdint>
#include <random>
#include <vector>

namespace qbloch {

/// Seeded generator with platform-independent uniform and normal draws
/// (std distributions are implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal (Box-Muller).
  double normal();
  std::size_t index(std::size_t n);

  Vec3 on_sphere();
  Vec3 in_ball();
  /// Uniformly distributed rotation (Shoemake quaternion).
  Eigen::Matrix3d rotation();

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Fibonacci lattice of n unit vectors, spiralling from (0,0,1) to (0,0,-1)
/// with both poles included. Seed 0 gives the canonical lattice; other seeds
/// apply a seeded rotation.
std::vector<BlochVector> sample_sphere(std::size_t n, std::uint64_t seed = 0);

}  // namespace qbloch
