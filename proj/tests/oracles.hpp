// Reference computations shared by the tests. Everything here goes through
// generic dense linear algebra, never through the qbloch closed forms.
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <random>

namespace oracle {

using cd = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Vec3 = Eigen::Vector3d;

inline Mat2 pauli_rho(const Vec3& v) {
  Mat2 sx, sy, sz;
  sx << 0, 1, 1, 0;
  sy << 0, cd(0, -1), cd(0, 1), 0;
  sz << 1, 0, 0, -1;
  return 0.5 * (Mat2::Identity() + v.x() * sx + v.y() * sy + v.z() * sz);
}

// f applied to the spectrum of a Hermitian matrix.
template <class F>
Mat2 hermitian_fn(const Mat2& m, F f) {
  Eigen::SelfAdjointEigenSolver<Mat2> es(m);
  const auto& u = es.eigenvectors();
  Mat2 d = Mat2::Zero();
  for (int i = 0; i < 2; ++i) d(i, i) = f(es.eigenvalues()(i));
  return u * d * u.adjoint();
}

inline Mat2 logm(const Mat2& m) {
  return hermitian_fn(m, [](double x) { return std::log(x); });
}

inline Mat2 expm(const Mat2& m) {
  return hermitian_fn(m, [](double x) { return std::exp(x); });
}

inline double neg_entropy(const Vec3& v) {
  Eigen::SelfAdjointEigenSolver<Mat2> es(pauli_rho(v));
  double s = 0.0;
  for (int i = 0; i < 2; ++i) {
    const double l = es.eigenvalues()(i);
    if (l > 1e-300) s += l * std::log(l);
  }
  return s;
}

// Tr(rho log rho) - Tr(rho log sigma).
inline double relative_entropy(const Vec3& a, const Vec3& b) {
  const Mat2 rho = pauli_rho(a);
  return neg_entropy(a) - (rho * logm(pauli_rho(b))).trace().real();
}

class Sampler {
 public:
  explicit Sampler(unsigned seed) : gen_(seed) {}
  double uniform(double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(gen_);
  }
  Vec3 on_sphere() {
    std::normal_distribution<double> n;
    Vec3 v(n(gen_), n(gen_), n(gen_));
    return v.normalized();
  }
  // Uniform in the ball of the given radius.
  Vec3 in_ball(double rmax = 1.0) {
    return on_sphere() * (rmax * std::cbrt(uniform()));
  }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }

 private:
  std::mt19937 gen_;
};

}  // namespace oracle
