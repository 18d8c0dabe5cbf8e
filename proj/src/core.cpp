#include "qbloch/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qbloch {

namespace {

using cd = std::complex<double>;

constexpr double kHermitianTolerance = 1e-14;
constexpr double kTraceTolerance = 1e-14;
constexpr double kEigenTolerance = 1e-12;

std::string describe(double x, double y, double z) {
  std::ostringstream os;
  os.precision(17);
  os << "(" << x << ", " << y << ", " << z << ")";
  return os.str();
}

// r + z and r - z without cancellation.
std::pair<double, double> polar_halves(const BlochVector& v, double r) {
  const double rho2 = v.x() * v.x() + v.y() * v.y();
  if (v.z() >= 0.0) {
    const double rpz = r + v.z();
    return {rpz, rho2 / rpz};
  }
  const double rmz = r - v.z();
  return {rho2 / rmz, rmz};
}

void require_log_domain(const BlochVector& v) {
  if (v.radius() >= 1.0 - kSingularGuard) {
    throw DomainError("singular logarithm: state " +
                      describe(v.x(), v.y(), v.z()) + " is pure or near-pure");
  }
}

}  // namespace

BlochVector::BlochVector(double x, double y, double z) : coords_(x, y, z) {
  if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z)) {
    throw DomainError("Bloch vector must be finite");
  }
  if (radius() > 1.0 + kBallTolerance) {
    throw DomainError("Bloch vector " + describe(x, y, z) +
                      " lies outside the unit ball");
  }
}

BlochVector BlochVector::on_radius(const Vec3& v, double r) {
  const double n = norm(v);
  if (n == 0.0) {
    throw DomainError("cannot rescale the zero vector");
  }
  return BlochVector(v * (r / n));
}

DensityMatrix::DensityMatrix(const Mat2c& m) : m_(m) {
  if (std::abs(m(1, 0) - std::conj(m(0, 1))) > kHermitianTolerance ||
      std::abs(m(0, 0).imag()) > kHermitianTolerance ||
      std::abs(m(1, 1).imag()) > kHermitianTolerance) {
    throw DomainError("density matrix is not Hermitian");
  }
  const double tr = m(0, 0).real() + m(1, 1).real();
  if (std::abs(tr - 1.0) > kTraceTolerance) {
    throw DomainError("density matrix trace differs from 1");
  }
  // Smaller eigenvalue of a 2x2 Hermitian matrix.
  const double half_gap = 0.5 * (m(0, 0).real() - m(1, 1).real());
  const double lmin =
      0.5 * tr - std::sqrt(half_gap * half_gap + std::norm(m(1, 0)));
  if (lmin < -kEigenTolerance) {
    throw DomainError("density matrix has a negative eigenvalue");
  }
}

DensityMatrix from_bloch(const BlochVector& v) {
  Mat2c m;
  m(0, 0) = cd(0.5 * (1.0 + v.z()), 0.0);
  m(0, 1) = cd(0.5 * v.x(), -0.5 * v.y());
  m(1, 0) = cd(0.5 * v.x(), 0.5 * v.y());
  m(1, 1) = cd(0.5 * (1.0 - v.z()), 0.0);
  return DensityMatrix(m);
}

BlochVector to_bloch(const DensityMatrix& rho) {
  const cd off = rho(1, 0);
  return BlochVector(2.0 * off.real(), 2.0 * off.imag(),
                     rho(0, 0).real() - rho(1, 1).real());
}

std::pair<double, double> eigenvalues(const BlochVector& v) {
  const double r = v.radius();
  return {(1.0 + r) / 2.0, (1.0 - r) / 2.0};
}

SpectralDecomposition spectral(const BlochVector& v) {
  SpectralDecomposition out;
  const double r = v.radius();
  std::tie(out.lambda1, out.lambda2) = eigenvalues(v);
  if (r == 0.0) {
    out.degenerate = true;
    return out;
  }
  if (v.x() == 0.0 && v.y() == 0.0) {
    if (v.z() < 0.0) {
      out.unitary << 0.0, 1.0, 1.0, 0.0;
    }
    return out;
  }
  const auto [rpz, rmz] = polar_halves(v, r);
  const double rho_xy = std::hypot(v.x(), v.y());
  const cd phase(v.x() / rho_xy, -v.y() / rho_xy);
  const double a = std::sqrt(rpz / r);
  const double b = std::sqrt(rmz / r);
  const double s = 1.0 / std::sqrt(2.0);
  out.unitary(0, 0) = s * phase * a;
  out.unitary(0, 1) = s * phase * b;
  out.unitary(1, 0) = s * b;
  out.unitary(1, 1) = -s * a;
  return out;
}

double log_lambda1(double r) { return std::log1p(std::min(r, 1.0)) - kLn2; }

double log_lambda2(double r) { return std::log1p(-std::min(r, 1.0)) - kLn2; }

Mat2c log_density(const BlochVector& v) {
  require_log_domain(v);
  const SpectralDecomposition sd = spectral(v);
  const double r = v.radius();
  Eigen::Vector2cd logs(cd(log_lambda1(r), 0.0), cd(log_lambda2(r), 0.0));
  return sd.unitary * logs.asDiagonal() * sd.unitary.adjoint();
}

Mat2c log_density_expanded(const BlochVector& v) {
  require_log_domain(v);
  const double r = v.radius();
  if (r == 0.0) {
    return Mat2c::Identity() * cd(-kLn2, 0.0);
  }
  const double l1 = log_lambda1(r);
  const double l2 = log_lambda2(r);
  const double k = 1.0 / (2.0 * r);
  Mat2c m;
  m(0, 0) = k * ((r + v.z()) * l1 + (r - v.z()) * l2);
  m(0, 1) = k * cd(v.x(), -v.y()) * (l1 - l2);
  m(1, 0) = k * cd(v.x(), v.y()) * (l1 - l2);
  m(1, 1) = k * ((r - v.z()) * l1 + (r + v.z()) * l2);
  return m;
}

double neg_entropy_of_radius(double r) {
  r = std::min(r, 1.0);
  const double l1 = (1.0 + r) / 2.0;
  const double l2 = (1.0 - r) / 2.0;
  double sum = l1 * log_lambda1(r);
  if (l2 > 0.0) {
    sum += l2 * log_lambda2(r);
  }
  return sum;
}

double entropy(const BlochVector& v) {
  return -neg_entropy_of_radius(v.radius());
}

double potential(const BlochVector& v) {
  return neg_entropy_of_radius(v.radius());
}

}  // namespace qbloch
