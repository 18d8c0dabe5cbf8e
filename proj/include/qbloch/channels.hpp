// 1-qubit channels as affine maps v -> M v + b of the Bloch ball.
#pragma once

#include "qbloch/core.hpp"

#include <Eigen/Core>

#include <string>

namespace qbloch {

using Mat3 = Eigen::Matrix3d;

inline constexpr double kImageTolerance = 1e-9;

/// Channel whose image ellipsoid leaves the ball.
class InvalidChannel : public std::invalid_argument {
 public:
  InvalidChannel(const std::string& what, double overflow)
      : std::invalid_argument(what), overflow_(overflow) {}
  double overflow() const { return overflow_; }

 private:
  double overflow_;
};

/// max over the unit sphere of |M v + b| - 1. Fibonacci sampling of 4096
/// directions, then projected gradient ascent from the best samples.
double validate_image(const Mat3& m, const Vec3& b);

class AffineChannel {
 public:
  /// Throws InvalidChannel when validate_image exceeds 1e-9.
  AffineChannel(const Mat3& m, const Vec3& b, std::string label = {});

  const Mat3& matrix() const { return m_; }
  const Vec3& offset() const { return b_; }
  const std::string& label() const { return label_; }

  BlochVector apply(const BlochVector& v) const;

  static AffineChannel identity();
  static AffineChannel depolarizing(double t);
  /// Projects onto the xy-plane, scaling x by tx and y by ty.
  static AffineChannel planar(double tx, double ty);
  static AffineChannel amplitude_damping(double gamma);
  static AffineChannel phase_damping(double lambda);
  /// Right-handed rotation by `angle` radians about `axis`.
  static AffineChannel rotation(const Vec3& axis, double angle);

 private:
  Mat3 m_;
  Vec3 b_;
  std::string label_;
};

inline double validate_image(const AffineChannel& c) {
  return validate_image(c.matrix(), c.offset());
}

}  // namespace qbloch
