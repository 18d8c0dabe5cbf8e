#include "qbloch/channels.hpp"

#include "qbloch/sampling.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <string>

namespace qbloch {

namespace {

constexpr std::size_t kImageDirections = 4096;
constexpr std::size_t kAscentStarts = 8;

double image_norm2(const Mat3& m, const Vec3& b, const Vec3& v) {
  return (m * v + b).squaredNorm();
}

// Projected gradient ascent of |M v + b|^2 over the unit sphere.
double ascend(const Mat3& m, const Vec3& b, Vec3 v) {
  double value = image_norm2(m, b, v);
  double step = 0.1;
  for (int it = 0; it < 2000 && step > 1e-17; ++it) {
    const Vec3 grad = 2.0 * m.transpose() * (m * v + b);
    const Vec3 tangent = grad - grad.dot(v) * v;
    if (tangent.norm() < 1e-300) {
      break;
    }
    const Vec3 trial = (v + step * tangent).normalized();
    const double trial_value = image_norm2(m, b, trial);
    if (trial_value > value) {
      v = trial;
      value = trial_value;
      step *= 1.5;
    } else {
      step *= 0.5;
    }
  }
  return value;
}

void require_unit_range(double value, const char* name) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
  }
}

std::string label_of(const char* name, const char* key, double value) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s(%s=%.12g)", name, key, value);
  return buf;
}

}  // namespace

double validate_image(const Mat3& m, const Vec3& b) {
  const auto dirs = sample_sphere(kImageDirections);
  std::vector<double> values(dirs.size());
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    values[i] = image_norm2(m, b, dirs[i].vec());
  }
  std::vector<std::size_t> order(dirs.size());
  std::iota(order.begin(), order.end(), 0);
  const std::size_t starts = std::min(kAscentStarts, order.size());
  std::partial_sort(order.begin(), order.begin() + starts, order.end(),
                    [&](std::size_t i, std::size_t j) {
                      return values[i] > values[j] || (values[i] == values[j] && i < j);
                    });
  double best = values[order[0]];
  for (std::size_t k = 0; k < starts; ++k) {
    best = std::max(best, ascend(m, b, dirs[order[k]].vec()));
  }
  return std::sqrt(best) - 1.0;
}

AffineChannel::AffineChannel(const Mat3& m, const Vec3& b, std::string label)
    : m_(m), b_(b), label_(std::move(label)) {
  if (!m.allFinite() || !b.allFinite()) {
    throw InvalidChannel("channel entries must be finite",
                         std::numeric_limits<double>::infinity());
  }
  const double overflow = validate_image(m, b);
  if (overflow > kImageTolerance) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "channel image leaves the Bloch ball (overflow %.12g)",
                  overflow);
    throw InvalidChannel(buf, overflow);
  }
}

BlochVector AffineChannel::apply(const BlochVector& v) const {
  const Vec3 out = m_ * v.vec() + b_;
  const double r = BlochVector::norm(out);
  // The image is validated to 1e-9; pull tolerated overshoot back in.
  if (r > 1.0) {
    return BlochVector(out / r);
  }
  return BlochVector(out);
}

AffineChannel AffineChannel::identity() {
  return AffineChannel(Mat3::Identity(), Vec3::Zero(), "identity");
}

AffineChannel AffineChannel::depolarizing(double t) {
  require_unit_range(t, "depolarizing t");
  return AffineChannel(t * Mat3::Identity(), Vec3::Zero(),
                       label_of("depolarizing", "t", t));
}

AffineChannel AffineChannel::planar(double tx, double ty) {
  if (!(std::abs(tx) <= 1.0) || !(std::abs(ty) <= 1.0)) {
    throw std::invalid_argument("planar tx, ty must lie in [-1, 1]");
  }
  Mat3 m = Mat3::Zero();
  m(0, 0) = tx;
  m(1, 1) = ty;
  char buf[96];
  std::snprintf(buf, sizeof buf, "planar(tx=%.12g,ty=%.12g)", tx, ty);
  return AffineChannel(m, Vec3::Zero(), buf);
}

AffineChannel AffineChannel::amplitude_damping(double gamma) {
  require_unit_range(gamma, "amplitude_damping gamma");
  const double s = std::sqrt(1.0 - gamma);
  Mat3 m = Mat3::Zero();
  m(0, 0) = s;
  m(1, 1) = s;
  m(2, 2) = 1.0 - gamma;
  return AffineChannel(m, Vec3(0.0, 0.0, gamma),
                       label_of("amplitude_damping", "gamma", gamma));
}

AffineChannel AffineChannel::phase_damping(double lambda) {
  require_unit_range(lambda, "phase_damping lambda");
  const double s = std::sqrt(1.0 - lambda);
  Mat3 m = Mat3::Identity();
  m(0, 0) = s;
  m(1, 1) = s;
  return AffineChannel(m, Vec3::Zero(),
                       label_of("phase_damping", "lambda", lambda));
}

AffineChannel AffineChannel::rotation(const Vec3& axis, double angle) {
  const double n = axis.norm();
  if (!(n > 0.0) || !std::isfinite(n) || !std::isfinite(angle)) {
    throw std::invalid_argument("rotation axis must be a finite nonzero vector");
  }
  const Mat3 m = Eigen::AngleAxisd(angle, axis / n).toRotationMatrix();
  return AffineChannel(m, Vec3::Zero(), label_of("rotation", "angle", angle));
}

}  // namespace qbloch
