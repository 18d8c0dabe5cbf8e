// Distances, the quantum divergence, and the Legendre dual chart of the ball.
#pragma once

#include "qbloch/core.hpp"

namespace qbloch {

/// Gradient image of an interior Bloch vector under the potential.
class DualCoordinates {
 public:
  DualCoordinates() = default;
  DualCoordinates(double u, double v, double w);
  explicit DualCoordinates(const Vec3& d) : DualCoordinates(d.x(), d.y(), d.z()) {}

  double u() const { return coords_.x(); }
  double v() const { return coords_.y(); }
  double w() const { return coords_.z(); }
  const Vec3& vec() const { return coords_; }
  double norm() const { return BlochVector::norm(coords_); }

 private:
  Vec3 coords_ = Vec3::Zero();
};

/// Nonnegative divergence in nats. Values in [-1e-12, 0) are clamped to 0.
class DivergenceValue {
 public:
  static constexpr double kClampTolerance = 1e-12;

  explicit DivergenceValue(double nats);
  double value() const { return nats_; }

 private:
  double nats_;
};

// Pure-state distances. All of them throw DomainError on mixed input.
double trace_inner(const BlochVector& a, const BlochVector& b);
double fubini_study(const BlochVector& a, const BlochVector& b);
double bures(const BlochVector& a, const BlochVector& b);
double geodesic(const BlochVector& a, const BlochVector& b);
double euclidean(const BlochVector& a, const BlochVector& b);

/// artanh(r) / r, the radial factor of the gradient map; 1 + r^2/3 below 1e-4.
double radial_gain(double r);

/// D(a || b) = Tr a (log a - log b) from 2x2 matrix logarithms.
/// `b` must satisfy r <= 1 - 1e-12; `a` may be pure.
DivergenceValue divergence_matrix(const BlochVector& a, const BlochVector& b);

/// Closed form of D(a || b) in Bloch coordinates:
///   sum l log l (a) - 1/2 log((1 - rb^2) / 4) - gain(rb) <a, b>.
DivergenceValue divergence_closed(const BlochVector& a, const BlochVector& b);

/// Unclamped closed-form divergence for solver inner loops. No domain checks.
double divergence_raw(const BlochVector& a, const BlochVector& b);

DualCoordinates grad_potential(const BlochVector& v);
BlochVector inverse_grad(const DualCoordinates& d);

/// Convex conjugate of the potential, log(2 cosh |d|).
double conjugate_potential(const DualCoordinates& d);

/// phi*(grad phi(b)) = -1/2 log((1 - r^2) / 4) without forming the gradient;
/// finite for r < 1.
double conjugate_at_radius(double r);

/// Bregman form phi(a) + phi*(d) - <a, d>; d is the dual image of the
/// second argument.
DivergenceValue divergence_dual(const BlochVector& a, const DualCoordinates& d);

/// divergence_dual without clamping or construction overhead.
double divergence_dual_raw(double phi_a, const Vec3& a, const Vec3& d);

}  // namespace qbloch
