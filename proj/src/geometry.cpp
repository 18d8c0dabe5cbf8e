#include "qbloch/geometry.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <string>

namespace qbloch {

namespace {

using cd = std::complex<double>;

void require_pure(const BlochVector& a, const BlochVector& b) {
  if (!a.is_pure() || !b.is_pure()) {
    throw DomainError("pure states required");
  }
}

void require_interior_second(const BlochVector& b) {
  if (b.radius() > 1.0 - kSingularGuard) {
    throw DomainError("divergence undefined at pure second argument (r = " +
                      std::to_string(b.radius()) + ")");
  }
}

}  // namespace

double conjugate_at_radius(double r) {
  return kLn2 - 0.5 * (std::log1p(-r) + std::log1p(r));
}

DualCoordinates::DualCoordinates(double u, double v, double w)
    : coords_(u, v, w) {
  if (!std::isfinite(u) || !std::isfinite(v) || !std::isfinite(w)) {
    throw DomainError("dual coordinates must be finite");
  }
}

DivergenceValue::DivergenceValue(double nats) : nats_(nats) {
  if (std::isnan(nats)) {
    throw DomainError("divergence evaluated to NaN");
  }
  if (nats < 0.0) {
    if (nats < -kClampTolerance) {
      throw DomainError("divergence below -1e-12: " + std::to_string(nats));
    }
    nats_ = 0.0;
  }
}

double trace_inner(const BlochVector& a, const BlochVector& b) {
  return 0.5 * (1.0 + a.vec().dot(b.vec()));
}

double fubini_study(const BlochVector& a, const BlochVector& b) {
  require_pure(a, b);
  const double t = std::clamp(trace_inner(a, b), 0.0, 1.0);
  return std::acos(std::sqrt(t));
}

double bures(const BlochVector& a, const BlochVector& b) {
  require_pure(a, b);
  return std::sqrt(std::max(0.0, 1.0 - trace_inner(a, b)));
}

double geodesic(const BlochVector& a, const BlochVector& b) {
  require_pure(a, b);
  return std::atan2(a.vec().cross(b.vec()).norm(), a.vec().dot(b.vec()));
}

double euclidean(const BlochVector& a, const BlochVector& b) {
  return (a.vec() - b.vec()).norm();
}

double radial_gain(double r) {
  if (r < 1e-4) {
    return 1.0 + r * r / 3.0;
  }
  return std::atanh(r) / r;
}

DivergenceValue divergence_matrix(const BlochVector& a, const BlochVector& b) {
  require_interior_second(b);
  const Mat2c rho = from_bloch(a).matrix();
  const Mat2c sigma_basis = spectral(b).unitary;

  // rho log rho = U diag(l log l) U*, with 0 log 0 = 0.
  const SpectralDecomposition sa = spectral(a);
  const double ra = a.radius();
  const double l2_term =
      sa.lambda2 > 0.0 ? sa.lambda2 * log_lambda2(ra) : 0.0;
  Eigen::Vector2cd self_diag(cd(sa.lambda1 * log_lambda1(ra), 0.0),
                             cd(l2_term, 0.0));
  const Mat2c rho_log_rho =
      sa.unitary * self_diag.asDiagonal() * sa.unitary.adjoint();

  const double rb = b.radius();
  Eigen::Vector2cd log_diag(cd(log_lambda1(rb), 0.0), cd(log_lambda2(rb), 0.0));
  const Mat2c log_sigma =
      sigma_basis * log_diag.asDiagonal() * sigma_basis.adjoint();

  const cd d = rho_log_rho.trace() - (rho * log_sigma).trace();
  return DivergenceValue(d.real());
}

double divergence_raw(const BlochVector& a, const BlochVector& b) {
  const double rb = b.radius();
  return neg_entropy_of_radius(a.radius()) + conjugate_at_radius(rb) -
         radial_gain(rb) * a.vec().dot(b.vec());
}

DivergenceValue divergence_closed(const BlochVector& a, const BlochVector& b) {
  require_interior_second(b);
  return DivergenceValue(divergence_raw(a, b));
}

DualCoordinates grad_potential(const BlochVector& v) {
  const double r = v.radius();
  if (r > 1.0 - kSingularGuard) {
    throw DomainError("dual coordinates diverge on sphere");
  }
  return DualCoordinates(v.vec() * radial_gain(r));
}

BlochVector inverse_grad(const DualCoordinates& d) {
  const double s = d.norm();
  if (s == 0.0) {
    return BlochVector();
  }
  const double gain = s < 1e-8 ? 1.0 - s * s / 3.0 : std::tanh(s) / s;
  const Vec3 v = d.vec() * gain;
  // tanh(s) rounds to 1 for large s; keep the result inside the ball.
  const double r = BlochVector::norm(v);
  return r > 1.0 ? BlochVector(v / r) : BlochVector(v);
}

double conjugate_potential(const DualCoordinates& d) {
  const double s = d.norm();
  return s + std::log1p(std::exp(-2.0 * s));
}

double divergence_dual_raw(double phi_a, const Vec3& a, const Vec3& d) {
  const double s = BlochVector::norm(d);
  return phi_a + s + std::log1p(std::exp(-2.0 * s)) - a.dot(d);
}

DivergenceValue divergence_dual(const BlochVector& a, const DualCoordinates& d) {
  return DivergenceValue(divergence_dual_raw(potential(a), a.vec(), d.vec()));
}

}  // namespace qbloch
