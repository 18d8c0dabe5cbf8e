#include "qbloch/capacity.hpp"

#include "qbloch/sampling.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

namespace qbloch {

namespace {

constexpr std::size_t kExactLimit = 16;
constexpr double kHullTolerance = 1e-9;
constexpr double kEnclosureTolerance = 1e-9;
constexpr double kInteriorLimit = 1.0 - 1e-15;
constexpr int kFrankWolfeBudget = 5000;
constexpr std::size_t kCoreSetGrowth = 8;

Vec3 grad_raw(const Vec3& theta) {
  return theta * radial_gain(BlochVector::norm(theta));
}

double phi_raw(const Vec3& theta) {
  return neg_entropy_of_radius(BlochVector::norm(theta));
}

Eigen::Matrix3d hessian_raw(const Vec3& theta) {
  const double r = BlochVector::norm(theta);
  const double tangential = radial_gain(r);
  if (r == 0.0) {
    return Eigen::Matrix3d::Identity();
  }
  const Vec3 n = theta / r;
  const double radial = 1.0 / ((1.0 - r) * (1.0 + r));
  return tangential * Eigen::Matrix3d::Identity() +
         (radial - tangential) * n * n.transpose();
}

BlochVector clamp_inside(const Vec3& v) {
  const double r = BlochVector::norm(v);
  if (r > kImageClampRadius) {
    return BlochVector::on_radius(v, kImageClampRadius);
  }
  return BlochVector(v);
}

std::vector<double> potentials(std::span<const BlochVector> points) {
  std::vector<double> phi;
  phi.reserve(points.size());
  for (const auto& p : points) phi.push_back(potential(p));
  return phi;
}

EnclosingBall make_ball(std::span<const BlochVector> points, const BlochVector& center,
                        std::vector<std::size_t> support, std::vector<double> weights) {
  EnclosingBall ball;
  ball.center = center;
  ball.center_dual = grad_potential(center);
  ball.radius = enclosing_radius(points, center);
  ball.support = std::move(support);
  ball.weights = std::move(weights);
  return ball;
}

struct Candidate {
  Vec3 theta;
  std::vector<double> weights;
};

// Center of the ball through all points of `subset` whose center lies in
// their affine hull. The equal-divergence conditions are the stationarity
// conditions of the Jensen gap sum a_k phi(p_k) - phi(sum a_k p_k) over the
// hull coordinates, which is strictly concave, so Newton's method applies.
std::optional<Candidate> solve_subset(std::span<const BlochVector> points,
                                      const std::vector<double>& phi,
                                      std::span<const std::size_t> subset) {
  const std::size_t k = subset.size();
  const Vec3 p0 = points[subset[0]].vec();
  if (k == 1) {
    return Candidate{clamp_inside(p0).vec(), {1.0}};
  }
  const int m = static_cast<int>(k) - 1;
  Eigen::MatrixXd edges(3, m);
  Eigen::VectorXd dphi(m);
  for (int a = 0; a < m; ++a) {
    edges.col(a) = points[subset[a + 1]].vec() - p0;
    dphi(a) = phi[subset[a + 1]] - phi[subset[0]];
  }
  const Eigen::MatrixXd gram = edges.transpose() * edges;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  if (es.eigenvalues().minCoeff() < 1e-12 * std::max(1.0, es.eigenvalues().maxCoeff())) {
    return std::nullopt;  // affinely dependent
  }

  Eigen::VectorXd beta = Eigen::VectorXd::Constant(m, 1.0 / static_cast<double>(k));
  auto theta_of = [&](const Eigen::VectorXd& b) -> Vec3 { return p0 + edges * b; };
  auto objective = [&](const Eigen::VectorXd& b) {
    return dphi.dot(b) - phi_raw(theta_of(b));
  };
  auto gradient = [&](const Eigen::VectorXd& b) -> Eigen::VectorXd {
    return dphi - edges.transpose() * grad_raw(theta_of(b));
  };

  double value = objective(beta);
  Eigen::VectorXd g = gradient(beta);
  for (int it = 0; it < 200 && g.norm() > 1e-14; ++it) {
    const Vec3 theta = theta_of(beta);
    const Eigen::MatrixXd h = edges.transpose() * hessian_raw(theta) * edges;
    const Eigen::VectorXd step = h.ldlt().solve(g);
    double t = 1.0;
    bool moved = false;
    while (t > 1e-30) {
      const Eigen::VectorXd trial = beta + t * step;
      if (BlochVector::norm(theta_of(trial)) < kInteriorLimit) {
        const double trial_value = objective(trial);
        if (trial_value >= value - 1e-15 * (1.0 + std::abs(value))) {
          moved = (t * step).norm() > 0.0;
          beta = trial;
          value = trial_value;
          break;
        }
      }
      t *= 0.5;
    }
    if (!moved) break;
    g = gradient(beta);
    if ((t * step).norm() < 1e-16) break;
  }
  if (g.norm() > 1e-9) {
    return std::nullopt;
  }
  Candidate c{theta_of(beta), {}};
  c.weights.push_back(1.0 - beta.sum());
  for (int a = 0; a < m; ++a) c.weights.push_back(beta(a));
  if (*std::min_element(c.weights.begin(), c.weights.end()) < -kHullTolerance) {
    return std::nullopt;
  }
  return c;
}

// Reduces a convex combination to at most four points with the same center.
void caratheodory(std::span<const BlochVector> points, std::vector<std::size_t>& idx,
                  std::vector<double>& w) {
  while (idx.size() > 4) {
    Eigen::Matrix<double, 4, 5> a;
    for (int c = 0; c < 5; ++c) {
      a.block<3, 1>(0, c) = points[idx[c]].vec();
      a(3, c) = 1.0;
    }
    Eigen::FullPivLU<Eigen::Matrix<double, 4, 5>> lu(a);
    Eigen::Matrix<double, 5, 1> lambda = lu.kernel().col(0);
    if (lambda.maxCoeff() <= 0.0) lambda = -lambda;
    int drop = -1;
    double t = std::numeric_limits<double>::infinity();
    for (int c = 0; c < 5; ++c) {
      if (lambda(c) > 0.0 && w[c] / lambda(c) < t) {
        t = w[c] / lambda(c);
        drop = c;
      }
    }
    for (int c = 0; c < 5; ++c) w[c] -= t * lambda(c);
    w[drop] = 0.0;
    std::vector<std::size_t> next_idx;
    std::vector<double> next_w;
    for (std::size_t c = 0; c < idx.size(); ++c) {
      if (w[c] > 0.0) {
        next_idx.push_back(idx[c]);
        next_w.push_back(w[c]);
      }
    }
    idx = std::move(next_idx);
    w = std::move(next_w);
  }
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= total;
}

bool single_point(std::span<const BlochVector> points) {
  for (const auto& p : points) {
    if ((p.vec() - points[0].vec()).norm() > 1e-15) return false;
  }
  return true;
}

}  // namespace

double enclosing_radius(std::span<const BlochVector> points, const BlochVector& center) {
  if (center.radius() > 1.0 - kSingularGuard) {
    throw DomainError("ball center must be interior");
  }
  double r = 0.0;
  for (const auto& p : points) {
    r = std::max(r, divergence_raw(p, center));
  }
  return r;
}

EnclosingBall meb_exact(std::span<const BlochVector> points) {
  if (points.empty()) {
    throw std::invalid_argument("smallest enclosing ball of no points");
  }
  if (points.size() > kExactLimit) {
    throw std::invalid_argument("exact enclosing-ball solver takes at most 16 points");
  }
  const std::vector<double> phi = potentials(points);
  const std::size_t n = points.size();

  std::optional<EnclosingBall> best;
  std::vector<std::size_t> subset;
  auto consider = [&]() {
    const auto cand = solve_subset(points, phi, subset);
    if (!cand) return;
    const BlochVector center(cand->theta);
    const double own = divergence_raw(points[subset[0]], center);
    const double reach = enclosing_radius(points, center);
    if (reach > own + kEnclosureTolerance) return;
    if (!best || reach < best->radius - 1e-15) {
      best = make_ball(points, center, subset, cand->weights);
    }
  };
  // Subsets in lexicographic order, by size.
  for (std::size_t k = 1; k <= std::min<std::size_t>(4, n); ++k) {
    std::vector<bool> pick(n, false);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(k), true);
    do {
      subset.clear();
      for (std::size_t i = 0; i < n; ++i) {
        if (pick[i]) subset.push_back(i);
      }
      consider();
    } while (std::prev_permutation(pick.begin(), pick.end()));
  }
  if (!best) {
    throw std::runtime_error("exact enclosing-ball solver found no feasible support");
  }
  return *best;
}

EnclosingBall meb_iterative(std::span<const BlochVector> points, double tol,
                            int max_iter, IterativeStats* stats) {
  if (points.empty()) {
    throw std::invalid_argument("smallest enclosing ball of no points");
  }
  if (!(tol > 0.0)) {
    throw std::invalid_argument("tolerance must be positive");
  }
  if (single_point(points)) {
    if (stats) *stats = {};
    return make_ball(points, clamp_inside(points[0].vec()), {0}, {1.0});
  }
  const std::size_t n = points.size();
  const std::vector<double> phi = potentials(points);

  // Start on the midpoint of a far pair; it is strictly interior.
  Vec3 centroid = Vec3::Zero();
  for (const auto& p : points) centroid += p.vec();
  centroid /= static_cast<double>(n);
  auto farthest_from = [&](const Vec3& x) {
    std::size_t best = 0;
    double d = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double di = (points[i].vec() - x).squaredNorm();
      if (di > d) {
        d = di;
        best = i;
      }
    }
    return best;
  };
  const std::size_t first = farthest_from(centroid);
  const std::size_t second = farthest_from(points[first].vec());

  std::vector<double> alpha(n, 0.0);
  std::vector<std::size_t> active = {first, second};
  alpha[first] = 0.5;
  alpha[second] = 0.5;

  std::vector<double> g(n);
  double gap = std::numeric_limits<double>::infinity();
  int it = 0;
  bool converged = false;
  const int fw_budget = std::min(max_iter, kFrankWolfeBudget);
  Vec3 theta = Vec3::Zero();
  for (; it < fw_budget; ++it) {
    theta.setZero();
    double mean_phi = 0.0;
    for (std::size_t i : active) {
      theta += alpha[i] * points[i].vec();
      mean_phi += alpha[i] * phi[i];
    }
    const Vec3 u = grad_raw(theta);
    std::size_t fw = 0;
    for (std::size_t i = 0; i < n; ++i) {
      g[i] = phi[i] - points[i].vec().dot(u);
      if (g[i] > g[fw]) fw = i;
    }
    double mean_g = 0.0;
    std::size_t away = active.front();
    for (std::size_t i : active) {
      mean_g += alpha[i] * g[i];
      if (g[i] < g[away]) away = i;
    }
    gap = g[fw] - mean_g;
    if (gap <= tol) {
      converged = true;
      break;
    }

    const bool toward = g[fw] - mean_g >= mean_g - g[away];
    Vec3 dir;
    double dphi;
    double gamma_max;
    if (toward) {
      dir = points[fw].vec() - theta;
      dphi = phi[fw] - mean_phi;
      gamma_max = 1.0;
    } else {
      dir = theta - points[away].vec();
      dphi = mean_phi - phi[away];
      gamma_max = alpha[away] / (1.0 - alpha[away]);
    }
    // The Jensen gap is concave along the segment; bisect its slope.
    auto slope = [&](double gamma) {
      const Vec3 x = theta + gamma * dir;
      const double r = BlochVector::norm(x);
      if (r >= kInteriorLimit) return -std::numeric_limits<double>::infinity();
      return dphi - radial_gain(r) * x.dot(dir);
    };
    double gamma = 0.0;
    if (slope(0.0) > 0.0) {
      if (slope(gamma_max) >= 0.0) {
        gamma = gamma_max;
      } else {
        double lo = 0.0;
        double hi = gamma_max;
        for (int b = 0; b < 200 && hi - lo > 1e-17 * gamma_max; ++b) {
          const double mid = 0.5 * (lo + hi);
          (slope(mid) > 0.0 ? lo : hi) = mid;
        }
        gamma = 0.5 * (lo + hi);
      }
    }
    if (gamma <= 0.0) {
      break;  // numerical floor; the core-set phase takes over
    }

    if (toward) {
      for (std::size_t i : active) alpha[i] *= 1.0 - gamma;
      if (alpha[fw] == 0.0) active.push_back(fw);
      alpha[fw] += gamma;
      if (gamma == 1.0) {
        for (std::size_t i : active) alpha[i] = 0.0;
        alpha[fw] = 1.0;
      }
    } else {
      for (std::size_t i : active) alpha[i] *= 1.0 + gamma;
      alpha[away] -= gamma;
      if (gamma == gamma_max) alpha[away] = 0.0;
    }
    std::erase_if(active, [&](std::size_t i) { return alpha[i] <= 0.0; });
  }

  std::sort(active.begin(), active.end());
  std::vector<double> w;
  for (std::size_t i : active) w.push_back(alpha[i]);
  caratheodory(points, active, w);
  Vec3 center = Vec3::Zero();
  for (std::size_t c = 0; c < active.size(); ++c) center += w[c] * points[active[c]].vec();
  EnclosingBall ball = make_ball(points, clamp_inside(center), active, w);

  // Core-set phase: solve the support plus the farthest points exactly and
  // grow the set until nothing lies outside. The exact radius of a subset
  // is a lower bound on the optimum, the enclosing radius an upper bound.
  std::vector<double> reach(n);
  std::vector<std::size_t> order(n);
  for (; !converged && it < max_iter; ++it) {
    for (std::size_t i = 0; i < n; ++i) reach[i] = divergence_raw(points[i], ball.center);
    std::iota(order.begin(), order.end(), 0);
    const std::size_t extra = std::min<std::size_t>(kCoreSetGrowth, n);
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(extra),
                      order.end(), [&](std::size_t a, std::size_t b) {
                        return reach[a] > reach[b] || (reach[a] == reach[b] && a < b);
                      });
    std::vector<std::size_t> core = ball.support;
    for (std::size_t k = 0; k < extra && core.size() < kExactLimit; ++k) {
      if (std::find(core.begin(), core.end(), order[k]) == core.end()) core.push_back(order[k]);
    }
    std::vector<BlochVector> subset;
    for (std::size_t i : core) subset.push_back(points[i]);
    const EnclosingBall local = meb_exact(subset);
    std::vector<std::size_t> support;
    for (std::size_t s : local.support) support.push_back(core[s]);
    ball = make_ball(points, local.center, std::move(support), local.weights);
    gap = std::max(0.0, ball.radius - local.radius);
    if (gap <= tol) converged = true;
  }
  if (stats) {
    stats->iterations = it;
    stats->duality_gap = gap;
  }
  if (!converged) {
    throw NonConvergence("enclosing-ball iteration hit max_iter", std::move(ball));
  }
  return ball;
}

namespace {

struct Simplex3 {
  std::array<Vec3, 4> x;
  std::array<double, 4> f;
};

template <class F>
Vec3 nelder_mead(const F& f, Vec3 start, double step, int max_iter) {
  Simplex3 s;
  s.x[0] = start;
  for (int k = 0; k < 3; ++k) {
    s.x[k + 1] = start;
    s.x[k + 1](k) += step;
  }
  for (int k = 0; k < 4; ++k) s.f[k] = f(s.x[k]);
  for (int it = 0; it < max_iter; ++it) {
    std::array<int, 4> order = {0, 1, 2, 3};
    std::sort(order.begin(), order.end(), [&](int a, int b) { return s.f[a] < s.f[b]; });
    Simplex3 sorted;
    for (int k = 0; k < 4; ++k) {
      sorted.x[k] = s.x[order[k]];
      sorted.f[k] = s.f[order[k]];
    }
    s = sorted;
    double diameter = 0.0;
    for (int k = 1; k < 4; ++k) diameter = std::max(diameter, (s.x[k] - s.x[0]).norm());
    if (diameter < 1e-14) break;

    const Vec3 c = (s.x[0] + s.x[1] + s.x[2]) / 3.0;
    const Vec3 xr = c + (c - s.x[3]);
    const double fr = f(xr);
    if (fr < s.f[0]) {
      const Vec3 xe = c + 2.0 * (c - s.x[3]);
      const double fe = f(xe);
      if (fe < fr) {
        s.x[3] = xe;
        s.f[3] = fe;
      } else {
        s.x[3] = xr;
        s.f[3] = fr;
      }
    } else if (fr < s.f[2]) {
      s.x[3] = xr;
      s.f[3] = fr;
    } else {
      const bool outside = fr < s.f[3];
      const Vec3 xc = outside ? c + 0.5 * (xr - c) : c + 0.5 * (s.x[3] - c);
      const double fc = f(xc);
      if (fc < std::min(fr, s.f[3])) {
        s.x[3] = xc;
        s.f[3] = fc;
      } else {
        for (int k = 1; k < 4; ++k) {
          s.x[k] = s.x[0] + 0.5 * (s.x[k] - s.x[0]);
          s.f[k] = f(s.x[k]);
        }
      }
    }
  }
  int best = 0;
  for (int k = 1; k < 4; ++k) {
    if (s.f[k] < s.f[best]) best = k;
  }
  return s.x[best];
}

}  // namespace

EnclosingBall meb_grid(std::span<const BlochVector> points, int resolution) {
  if (points.empty()) {
    throw std::invalid_argument("smallest enclosing ball of no points");
  }
  if (resolution < 8) {
    throw std::invalid_argument("grid resolution must be at least 8");
  }
  const std::vector<double> phi = potentials(points);
  constexpr double kGridRadius = 1.0 - 1e-6;

  Vec3 lo = points[0].vec();
  Vec3 hi = lo;
  for (const auto& p : points) {
    lo = lo.cwiseMin(p.vec());
    hi = hi.cwiseMax(p.vec());
  }
  Vec3 best = Vec3::Zero();
  double best_value = enclosing_radius(points, BlochVector());
  const double res = static_cast<double>(resolution);
  for (int i = 0; i < resolution; ++i) {
    for (int j = 0; j < resolution; ++j) {
      for (int k = 0; k < resolution; ++k) {
        const Vec3 frac((i + 0.5) / res, (j + 0.5) / res, (k + 0.5) / res);
        const Vec3 c = lo + (hi - lo).cwiseProduct(frac);
        if (BlochVector::norm(c) > kGridRadius) continue;
        const double v = enclosing_radius(points, BlochVector(c));
        if (v < best_value) {
          best_value = v;
          best = c;
        }
      }
    }
  }

  // Refine in dual coordinates, where the objective is convex and unconstrained.
  auto objective = [&](const Vec3& u) {
    const double s = BlochVector::norm(u);
    const double conj = s + std::log1p(std::exp(-2.0 * s));
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points.size(); ++i) {
      m = std::max(m, phi[i] + conj - points[i].vec().dot(u));
    }
    return m;
  };
  Vec3 u = grad_raw(best);
  double value = objective(u);
  double step = std::max(1e-3, (hi - lo).maxCoeff() / res);
  for (int restart = 0; restart < 40; ++restart) {
    const Vec3 next = nelder_mead(objective, u, step, 4000);
    const double next_value = objective(next);
    const bool improved = next_value < value - 1e-16;
    if (next_value <= value) {
      u = next;
      value = next_value;
    }
    if (!improved && step < 1e-9) break;
    step = improved ? step : step * 0.1;
  }
  const BlochVector center = clamp_inside(inverse_grad(DualCoordinates(u)).vec());
  return make_ball(points, center, {}, {});
}

CapacityReport holevo_capacity(const AffineChannel& channel, std::size_t n_samples,
                               double tol, std::uint64_t seed) {
  if (n_samples < 16) {
    throw std::invalid_argument("capacity needs at least 16 samples");
  }
  const auto inputs = sample_sphere(n_samples, seed);
  std::vector<BlochVector> image;
  image.reserve(inputs.size());
  for (const auto& v : inputs) {
    image.push_back(clamp_inside(channel.apply(v).vec()));
  }

  CapacityReport report;
  report.label = channel.label();
  report.n_samples = n_samples;

  bool point_image = true;
  for (const auto& p : image) {
    if ((p.vec() - image[0].vec()).norm() > 1e-12) {
      point_image = false;
      break;
    }
  }
  if (point_image) {
    report.degenerate = true;
    report.center = image[0];
    report.support = {0};
    return report;
  }

  const EnclosingBall ball = meb_iterative(image, tol);

  // Exact cross-check on the hull support plus the farthest points.
  std::vector<std::size_t> order(image.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> reach(image.size());
  for (std::size_t i = 0; i < image.size(); ++i) {
    reach[i] = divergence_raw(image[i], ball.center);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return reach[a] > reach[b]; });
  std::vector<std::size_t> picked = ball.support;
  for (std::size_t i : order) {
    if (picked.size() >= kExactLimit) break;
    if (std::find(picked.begin(), picked.end(), i) == picked.end()) picked.push_back(i);
  }
  std::vector<BlochVector> subset;
  for (std::size_t i : picked) subset.push_back(image[i]);
  const EnclosingBall exact = meb_exact(subset);

  report.capacity_nats = ball.radius;
  report.capacity_bits = nats_to_bits(ball.radius);
  report.center = ball.center;
  for (std::size_t s : exact.support) report.support.push_back(picked[s]);
  std::sort(report.support.begin(), report.support.end());
  report.solver_gap = std::abs(ball.radius - exact.radius);
  return report;
}

}  // namespace qbloch
