#include "qbloch/voronoi.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qbloch {

namespace {

constexpr double kVertexSlack = 1e-12;
constexpr double kTieTolerance = 1e-9;
constexpr double kMergeTolerance = 1e-9;

// True when some open arc of the bisector great circle of (i, j) has i and j
// as strict nearest sites.
bool share_edge(const std::vector<BlochVector>& s, std::size_t i, std::size_t j) {
  const Vec3 m = (s[j].vec() - s[i].vec()).normalized();
  const Vec3 e1 = m.unitOrthogonal();
  const Vec3 e2 = m.cross(e1);

  // Each other site k keeps the half circle a cos t + b sin t <= 0.
  std::vector<std::pair<double, double>> halfplanes;
  std::vector<double> cuts;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (k == i || k == j) continue;
    const Vec3 d = s[k].vec() - s[i].vec();
    const double a = e1.dot(d);
    const double b = e2.dot(d);
    if (std::hypot(a, b) < 1e-15) continue;
    halfplanes.emplace_back(a, b);
    const double c = std::atan2(b, a);
    cuts.push_back(c + std::numbers::pi / 2.0);
    cuts.push_back(c - std::numbers::pi / 2.0);
  }
  if (halfplanes.empty()) {
    return true;
  }
  const double two_pi = 2.0 * std::numbers::pi;
  for (double& c : cuts) {
    c = std::fmod(std::fmod(c, two_pi) + two_pi, two_pi);
  }
  std::sort(cuts.begin(), cuts.end());
  for (std::size_t q = 0; q < cuts.size(); ++q) {
    const double lo = cuts[q];
    const double hi = q + 1 < cuts.size() ? cuts[q + 1] : cuts[0] + two_pi;
    if (hi - lo < 1e-12) continue;
    const double t = 0.5 * (lo + hi);
    const double ct = std::cos(t);
    const double st = std::sin(t);
    bool inside = true;
    for (const auto& [a, b] : halfplanes) {
      if (a * ct + b * st > -kVertexSlack) {
        inside = false;
        break;
      }
    }
    if (inside) return true;
  }
  return false;
}

}  // namespace

SphericalDiagram spherical_diagram(const SiteSet& sites) {
  if (sites.size() < 2) {
    throw SiteError("spherical diagram needs at least two distinct sites");
  }
  if (!sites.all_pure()) {
    throw ModeMisuse("spherical diagram requires pure sites");
  }
  const auto& s = sites.sites();
  const std::size_t n = s.size();

  SphericalDiagram out;
  out.sites = sites;

  // Geodesically equidistant points of a triple are the two poles of the
  // plane through the three sites; keep those no other site beats.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        const Vec3 normal =
            (s[j].vec() - s[i].vec()).cross(s[k].vec() - s[i].vec());
        if (normal.norm() < 1e-14) continue;
        for (double sign : {1.0, -1.0}) {
          const Vec3 p = sign * normal.normalized();
          const double reach = p.dot(s[i].vec());
          bool empty = true;
          for (std::size_t l = 0; l < n && empty; ++l) {
            empty = p.dot(s[l].vec()) <= reach + kVertexSlack;
          }
          if (!empty) continue;
          auto existing = std::find_if(
              out.vertices.begin(), out.vertices.end(), [&](const SphereVertex& v) {
                return (v.position - p).norm() < kMergeTolerance;
              });
          if (existing != out.vertices.end()) continue;
          SphereVertex v{p, {}};
          for (std::size_t l = 0; l < n; ++l) {
            if (std::abs(p.dot(s[l].vec()) - reach) <= kTieTolerance) {
              v.sites.push_back(l);
            }
          }
          out.vertices.push_back(std::move(v));
        }
      }
    }
  }

  out.adjacency.assign(n, {});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (share_edge(s, i, j)) {
        out.adjacency[i].push_back(j);
        out.adjacency[j].push_back(i);
      }
    }
  }
  for (auto& row : out.adjacency) {
    std::sort(row.begin(), row.end());
  }
  return out;
}

}  // namespace qbloch
