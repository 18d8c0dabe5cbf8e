#include "qbloch/channels.hpp"
#include "qbloch/sampling.hpp"

#include <doctest.h>

#include <cmath>

using namespace qbloch;

namespace {

// Dense-grid maximum of |M v + b| - 1 over the sphere.
double brute_overflow(const Mat3& m, const Vec3& b) {
  double best = 0.0;
  const int n = 400;
  for (int i = 0; i <= n; ++i) {
    const double th = M_PI * i / n;
    for (int j = 0; j < 2 * n; ++j) {
      const double ph = M_PI * j / n;
      const Vec3 v(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th));
      best = std::max(best, (m * v + b).norm());
    }
  }
  return best - 1.0;
}

}  // namespace

TEST_CASE("validate_image") {
  CHECK(validate_image(Mat3::Identity(), Vec3::Zero()) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(validate_image(Mat3::Identity(), Vec3(0.1, 0, 0)) == doctest::Approx(0.1).epsilon(1e-12));
  const Mat3 half = 0.5 * Mat3::Identity();
  const Vec3 shift(0.4, 0, 0);
  CHECK(validate_image(half, shift) == doctest::Approx(-0.1).epsilon(1e-12));
  CHECK(std::abs(validate_image(half, shift) - brute_overflow(half, shift)) < 1e-4);

  Mat3 skew;
  skew << 0.7, 0.2, 0.0, -0.1, 0.5, 0.3, 0.0, 0.1, 0.4;
  const Vec3 off(0.1, -0.05, 0.2);
  CHECK(validate_image(skew, off) >= brute_overflow(skew, off) - 1e-12);
  CHECK(validate_image(skew, off) - brute_overflow(skew, off) < 1e-4);
}

TEST_CASE("channel construction") {
  CHECK_THROWS_AS(AffineChannel(Mat3::Identity(), Vec3(0.1, 0, 0)), InvalidChannel);
  try {
    AffineChannel(Mat3::Identity(), Vec3(0.1, 0, 0));
  } catch (const InvalidChannel& e) {
    CHECK(e.overflow() == doctest::Approx(0.1).epsilon(1e-9));
  }
  Mat3 bad = Mat3::Identity();
  bad(0, 0) = NAN;
  CHECK_THROWS_AS(AffineChannel(bad, Vec3::Zero()), InvalidChannel);
  CHECK_THROWS_AS(AffineChannel::depolarizing(1.5), std::invalid_argument);
  CHECK_THROWS_AS(AffineChannel::depolarizing(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(AffineChannel::amplitude_damping(2), std::invalid_argument);
  CHECK_THROWS_AS(AffineChannel::phase_damping(NAN), std::invalid_argument);
  CHECK_THROWS_AS(AffineChannel::planar(1.1, 0), std::invalid_argument);
  CHECK_THROWS_AS(AffineChannel::rotation(Vec3::Zero(), 1.0), std::invalid_argument);
  CHECK(AffineChannel::depolarizing(0.5).label() == "depolarizing(t=0.5)");
}

TEST_CASE("builders") {
  const BlochVector up(0, 0, 1), v(0.3, -0.2, 0.5);
  CHECK(AffineChannel::identity().apply(v) == v);
  CHECK((AffineChannel::depolarizing(0.5).apply(up).vec() - Vec3(0, 0, 0.5)).norm() == 0.0);
  CHECK(AffineChannel::depolarizing(0).apply(v).radius() == 0.0);
  CHECK(AffineChannel::depolarizing(1).matrix() == AffineChannel::identity().matrix());
  const auto ad = AffineChannel::amplitude_damping(1);
  for (const auto& p : sample_sphere(100)) {
    REQUIRE((ad.apply(p).vec() - Vec3(0, 0, 1)).norm() < 1e-15);
  }
  CHECK(validate_image(AffineChannel::amplitude_damping(0.3)) <= 1e-9);
  CHECK(validate_image(AffineChannel::phase_damping(0.3)) <= 1e-9);
  CHECK(validate_image(AffineChannel::planar(0.9, -0.4)) <= 1e-9);
  const auto pl = AffineChannel::planar(0.9, -0.4);
  CHECK((pl.apply(BlochVector(1, 0, 0)).vec() - Vec3(0.9, 0, 0)).norm() == 0.0);
  CHECK((pl.apply(up).vec()).norm() == 0.0);
  const auto rot = AffineChannel::rotation(Vec3(0, 0, 2), M_PI / 2);
  CHECK((rot.apply(BlochVector(1, 0, 0)).vec() - Vec3(0, 1, 0)).norm() < 1e-15);
}

TEST_CASE("affinity and isometry") {
  Rng rng(31);
  const AffineChannel channels[] = {AffineChannel::amplitude_damping(0.4),
                                    AffineChannel::phase_damping(0.7),
                                    AffineChannel::depolarizing(0.3),
                                    AffineChannel::planar(0.5, 0.8)};
  for (const auto& c : channels) {
    for (int i = 0; i < 200; ++i) {
      const Vec3 a = rng.in_ball(), b = rng.in_ball();
      const double l = rng.uniform();
      const Vec3 mix = c.apply(BlochVector(l * a + (1 - l) * b)).vec();
      const Vec3 sep = l * c.apply(BlochVector(a)).vec() + (1 - l) * c.apply(BlochVector(b)).vec();
      REQUIRE((mix - sep).norm() < 1e-14);
    }
  }
  for (int i = 0; i < 100; ++i) {
    const auto rot = AffineChannel::rotation(rng.on_sphere(), rng.uniform(0, 6.3));
    const Vec3 a = rng.in_ball(), b = rng.in_ball();
    REQUIRE(std::abs((rot.apply(BlochVector(a)).vec() - rot.apply(BlochVector(b)).vec()).norm() -
                     (a - b).norm()) < 1e-12);
  }
}
