#include "qbloch/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qbloch {

double Rng::uniform() {
  // 53 random mantissa bits.
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) {
    u1 = uniform();
  }
  const double u2 = uniform();
  const double mag = std::sqrt(-2.0 * std::log(u1));
  const double ang = 2.0 * std::numbers::pi * u2;
  spare_ = mag * std::sin(ang);
  have_spare_ = true;
  return mag * std::cos(ang);
}

std::size_t Rng::index(std::size_t n) {
  return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
}

Vec3 Rng::on_sphere() {
  while (true) {
    Vec3 g(normal(), normal(), normal());
    const double n = BlochVector::norm(g);
    if (n > 1e-6) {
      return g / n;
    }
  }
}

Vec3 Rng::in_ball() {
  const Vec3 dir = on_sphere();
  return dir * std::cbrt(uniform());
}

Eigen::Matrix3d Rng::rotation() {
  const double u1 = uniform();
  const double u2 = uniform();
  const double u3 = uniform();
  const double two_pi = 2.0 * std::numbers::pi;
  const double a = std::sqrt(1.0 - u1);
  const double b = std::sqrt(u1);
  const Eigen::Quaterniond q(b * std::cos(two_pi * u3), a * std::sin(two_pi * u2),
                             a * std::cos(two_pi * u2), b * std::sin(two_pi * u3));
  return q.normalized().toRotationMatrix();
}

std::vector<BlochVector> sample_sphere(std::size_t n, std::uint64_t seed) {
  std::vector<BlochVector> out;
  out.reserve(n);
  const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
  Eigen::Matrix3d rot = Eigen::Matrix3d::Identity();
  if (seed != 0) {
    Rng rng(seed);
    rot = rng.rotation();
  }
  // Endpoint variant: the first and last points are the poles, so
  // axis-aligned channels see their extreme inputs exactly.
  const double span = n > 1 ? static_cast<double>(n - 1) : 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double z = n > 1 ? 1.0 - 2.0 * static_cast<double>(i) / span : 1.0;
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden_angle * static_cast<double>(i);
    Vec3 p(rho * std::cos(phi), rho * std::sin(phi), z);
    p = rot * p;
    out.emplace_back(p / BlochVector::norm(p));
  }
  return out;
}

}  // namespace qbloch
