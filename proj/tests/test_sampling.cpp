#include "qbloch/sampling.hpp"

#include <doctest.h>

#include <cmath>

using namespace qbloch;

TEST_CASE("fibonacci lattice") {
  const auto one = sample_sphere(1);
  REQUIRE(one.size() == 1);
  CHECK(std::abs(one[0].radius() - 1.0) < 1e-15);

  CHECK(sample_sphere(0).empty());

  for (const auto& p : sample_sphere(1000)) REQUIRE(std::abs(p.radius() - 1.0) < 1e-14);
  for (const auto& p : sample_sphere(1000, 99)) REQUIRE(std::abs(p.radius() - 1.0) < 1e-14);

  // Deterministic and seed sensitive.
  CHECK(sample_sphere(50, 3) == sample_sphere(50, 3));
  CHECK_FALSE(sample_sphere(50, 3) == sample_sphere(50, 4));

  // Rotating keeps the pairwise geometry.
  const auto a = sample_sphere(64, 0), b = sample_sphere(64, 5);
  for (std::size_t i = 1; i < a.size(); ++i) {
    REQUIRE(std::abs(a[i].vec().dot(a[0].vec()) - b[i].vec().dot(b[0].vec())) < 1e-12);
  }
}

TEST_CASE("lattice covering radius at 4096 points") {
  const auto pts = sample_sphere(4096);
  // Probe points from an independent generator.
  Rng rng(404);
  double cover = 0.0;
  for (int t = 0; t < 20000; ++t) {
    const Vec3 q = rng.on_sphere();
    double best = -1.0;
    for (const auto& p : pts) best = std::max(best, p.vec().dot(q));
    cover = std::max(cover, std::acos(std::min(1.0, best)));
  }
  CHECK(cover < 0.06);
  CHECK(cover > 0.02);  // sanity: about 1.2 / sqrt(n)
}

TEST_CASE("rng helpers") {
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    REQUIRE(rng.index(7) < 7);
    REQUIRE(rng.in_ball().norm() <= 1.0);
    const Eigen::Matrix3d r = rng.rotation();
    REQUIRE((r * r.transpose() - Eigen::Matrix3d::Identity()).norm() < 1e-12);
    REQUIRE(r.determinant() == doctest::Approx(1.0));
  }
  Rng a(9), b(9);
  CHECK(a.normal() == b.normal());
}
