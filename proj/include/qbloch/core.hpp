// 1-qubit state algebra on Bloch coordinates.
#pragma once

#include <Eigen/Core>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

namespace qbloch {

using Vec3 = Eigen::Vector3d;
using Mat2c = Eigen::Matrix2cd;

inline constexpr double kBallTolerance = 1e-12;
inline constexpr double kPureTolerance = 1e-9;
// Operations that need log(lambda2) refuse r >= 1 - kSingularGuard.
inline constexpr double kSingularGuard = 1e-12;
inline constexpr double kLn2 = 0.693147180559945309417232121458176568;

/// Input outside the domain of an operation (outside the ball, pure where a
/// mixed state is required, and so on).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Point of the closed Bloch ball. Construction rejects |v| > 1 + 1e-12.
class BlochVector {
 public:
  BlochVector() = default;
  BlochVector(double x, double y, double z);
  explicit BlochVector(const Vec3& v) : BlochVector(v.x(), v.y(), v.z()) {}

  double x() const { return coords_.x(); }
  double y() const { return coords_.y(); }
  double z() const { return coords_.z(); }
  const Vec3& vec() const { return coords_; }

  /// The one norm routine used everywhere radius matters.
  double radius() const { return norm(coords_); }
  bool is_pure() const { return std::abs(radius() - 1.0) < kPureTolerance; }

  static double norm(const Vec3& v) { return std::sqrt(v.squaredNorm()); }

  /// Rescales `v` to radius `r` (direction must be nonzero).
  static BlochVector on_radius(const Vec3& v, double r);

  friend bool operator==(const BlochVector& a, const BlochVector& b) {
    return a.coords_ == b.coords_;
  }

 private:
  Vec3 coords_ = Vec3::Zero();
};

/// 2x2 Hermitian, unit-trace, positive semidefinite matrix.
class DensityMatrix {
 public:
  explicit DensityMatrix(const Mat2c& m);

  const Mat2c& matrix() const { return m_; }
  std::complex<double> operator()(int i, int j) const { return m_(i, j); }

 private:
  Mat2c m_;
};

struct SpectralDecomposition {
  double lambda1 = 0.5;  // (1 + r) / 2
  double lambda2 = 0.5;  // (1 - r) / 2
  Mat2c unitary = Mat2c::Identity();
  bool degenerate = false;
};

DensityMatrix from_bloch(const BlochVector& v);
BlochVector to_bloch(const DensityMatrix& rho);

std::pair<double, double> eigenvalues(const BlochVector& v);

/// Eigen-decomposition rho = U diag(l1, l2) U*. For x = y = 0 the unitary is
/// the identity (z >= 0) or the basis swap (z < 0); at the origin the
/// spectrum is degenerate and the identity is returned with the flag set.
SpectralDecomposition spectral(const BlochVector& v);

/// log(rho) through the spectral decomposition. Throws DomainError for
/// r >= 1 - 1e-12.
Mat2c log_density(const BlochVector& v);

/// Entry-wise closed form of log(rho) in Bloch coordinates. Same domain as
/// log_density; used as a second route in tests.
Mat2c log_density_expanded(const BlochVector& v);

/// log((1 - r) / 2) evaluated with log1p; -inf at r = 1.
double log_lambda2(double r);
/// log((1 + r) / 2).
double log_lambda1(double r);

/// Sum of l log l over the eigenvalues, 0 log 0 = 0. Equals -entropy.
double neg_entropy_of_radius(double r);

/// von Neumann entropy in nats.
double entropy(const BlochVector& v);

/// phi = -S, the convex potential of the ball.
double potential(const BlochVector& v);

inline double nats_to_bits(double nats) { return nats / kLn2; }

}  // namespace qbloch
