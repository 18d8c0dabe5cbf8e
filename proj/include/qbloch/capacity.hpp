// Smallest enclosing divergence ball and the Holevo capacity of a channel.
//
// The ball for points p_i minimizes max_i D(p_i || c) over centers c. In dual
// coordinates u = grad phi(c) each D(p_i || .) is convex, and the optimum is
// certified by c lying in the convex hull of the points that attain the
// radius.
#pragma once

#include "qbloch/channels.hpp"
#include "qbloch/geometry.hpp"

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qbloch {

/// Pure image points are pulled onto this radius before solving.
inline constexpr double kImageClampRadius = 1.0 - 1e-12;

struct EnclosingBall {
  BlochVector center;
  DualCoordinates center_dual;
  double radius = 0.0;               // nats
  std::vector<std::size_t> support;  // at most four point indices
  std::vector<double> weights;       // center = sum weights[k] * points[support[k]]
};

/// max_i D(p_i || center), the enclosing radius of `center`.
double enclosing_radius(std::span<const BlochVector> points,
                        const BlochVector& center);

/// Enumerates support subsets of size 1..4. Limited to 16 points.
EnclosingBall meb_exact(std::span<const BlochVector> points);

class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(const std::string& what, EnclosingBall partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const EnclosingBall& partial() const { return partial_; }

 private:
  EnclosingBall partial_;
};

struct IterativeStats {
  int iterations = 0;
  double duality_gap = 0.0;
};

/// Frank-Wolfe with away steps on the hull weights of the center. The
/// duality gap between the enclosing radius and the Jensen lower bound
/// drives termination: stops once it is <= tol. Throws NonConvergence after
/// max_iter iterations.
EnclosingBall meb_iterative(std::span<const BlochVector> points,
                            double tol = 1e-12, int max_iter = 200000,
                            IterativeStats* stats = nullptr);

/// Brute-force oracle: grid of centers over the bounding box of the points
/// (resolution^3 cells, r <= 1 - 1e-6), then Nelder-Mead in dual
/// coordinates from the best cell. Always an upper bound on the radius.
EnclosingBall meb_grid(std::span<const BlochVector> points, int resolution = 16);

struct CapacityReport {
  std::string label;
  std::size_t n_samples = 0;
  double capacity_nats = 0.0;
  double capacity_bits = 0.0;
  BlochVector center;
  std::vector<std::size_t> support;  // indices into the sample list
  double solver_gap = 0.0;
  bool degenerate = false;  // point image, capacity exactly 0
};

/// Samples n points of the sphere, maps them through the channel and returns
/// the radius of their smallest enclosing divergence ball.
CapacityReport holevo_capacity(const AffineChannel& channel,
                               std::size_t n_samples, double tol = 1e-12,
                               std::uint64_t seed = 0);

}  // namespace qbloch
