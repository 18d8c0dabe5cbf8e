#include "oracles.hpp"
#include "qbloch/geometry.hpp"
#include "qbloch/sampling.hpp"
#include "qbloch/voronoi.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace qbloch;

namespace {

SiteSet random_pure_sites(oracle::Sampler& s, int n) {
  std::vector<BlochVector> v;
  for (int i = 0; i < n; ++i) v.emplace_back(s.on_sphere());
  return SiteSet(std::move(v));
}

SiteSet tetrahedron() {
  const double k = 1.0 / std::sqrt(3.0);
  return SiteSet({BlochVector(k, k, k), BlochVector(k, -k, -k), BlochVector(-k, k, -k),
                  BlochVector(-k, -k, k)});
}

// Nearest site by angle, lowest index on ties.
std::size_t angular_owner(const SiteSet& sites, const Vec3& q) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < sites.size(); ++i) {
    if (sites[i].vec().dot(q) > sites[best].vec().dot(q)) best = i;
  }
  return best;
}

// Cell adjacency from sample pairs that straddle a boundary.
std::set<std::pair<std::size_t, std::size_t>> sampled_adjacency(const SiteSet& sites, int n) {
  const auto pts = sample_sphere(static_cast<std::size_t>(n));
  std::vector<std::size_t> owner;
  for (const auto& p : pts) owner.push_back(angular_owner(sites, p.vec()));
  std::set<std::pair<std::size_t, std::size_t>> out;
  const double reach = 2.0 * std::sqrt(4.0 * M_PI / n);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size() && j < i + 400; ++j) {
      if (owner[i] != owner[j] && (pts[i].vec() - pts[j].vec()).norm() < reach) {
        out.insert({std::min(owner[i], owner[j]), std::max(owner[i], owner[j])});
      }
    }
  }
  return out;
}

}  // namespace

TEST_CASE("mode names") {
  for (auto m : kAllModes) CHECK(parse_mode(to_string(m)) == m);
  CHECK_FALSE(parse_mode("manhattan").has_value());
  CHECK(requires_pure(DiagramMode::Bures));
  CHECK_FALSE(requires_pure(DiagramMode::EuclideanSection));
  CHECK_FALSE(requires_pure(DiagramMode::DivergencePrimal));
}

TEST_CASE("site sets") {
  CHECK_THROWS_AS(SiteSet({BlochVector(0, 0, 1), BlochVector(0, 0, 1)}), SiteError);
  const SiteSet s({BlochVector(0, 0, 1), BlochVector(0, 0, 0.5)});
  CHECK(s.is_pure(0));
  CHECK_FALSE(s.is_pure(1));
  CHECK_FALSE(s.all_pure());
  CHECK_FALSE(s.all_interior());
}

TEST_CASE("classification") {
  const SiteSet poles({BlochVector(0, 0, 1), BlochVector(0, 0, -1)});
  const BlochVector upper = BlochVector(Vec3(0.3, 0.2, 0.5).normalized());
  for (auto m : {DiagramMode::FubiniStudy, DiagramMode::Bures, DiagramMode::Geodesic,
                 DiagramMode::EuclideanSection}) {
    CHECK(classify(m, poles, upper).site == 0);
    const auto tie = classify(m, poles, BlochVector(1, 0, 0));
    CHECK(tie.site == 0);
    CHECK(tie.ambiguous());
  }

  const SiteSet mixed({BlochVector(0, 0, 0.2), BlochVector(0, 0, 0.8)});
  const Vec3 q(0, 0, 0.5);
  const auto c = classify(DiagramMode::DivergencePrimal, mixed, BlochVector(q));
  const double d0 = oracle::relative_entropy(q, Vec3(0, 0, 0.2));
  const double d1 = oracle::relative_entropy(q, Vec3(0, 0, 0.8));
  CHECK(c.site == (d1 < d0 ? 1u : 0u));
  CHECK(c.margin == doctest::Approx(std::abs(d1 - d0)).epsilon(1e-10));

  const SiteSet single({BlochVector(0.1, 0.1, 0.1)});
  const auto one = classify(DiagramMode::DivergenceDual, single, BlochVector(0.5, 0, 0));
  CHECK(one.site == 0);
  CHECK(std::isinf(one.margin));
}

TEST_CASE("classification matches direct divergence argmin") {
  oracle::Sampler s(41);
  for (int t = 0; t < 20; ++t) {
    std::vector<BlochVector> v;
    for (int i = 0; i < 6; ++i) v.emplace_back(s.in_ball(0.95));
    const SiteSet sites(v);
    for (int k = 0; k < 200; ++k) {
      const Vec3 q = s.in_ball(0.95);
      std::size_t p = 0, d = 0;
      for (std::size_t i = 1; i < sites.size(); ++i) {
        if (oracle::relative_entropy(q, sites[i].vec()) <
            oracle::relative_entropy(q, sites[p].vec())) p = i;
        if (oracle::relative_entropy(sites[i].vec(), q) <
            oracle::relative_entropy(sites[d].vec(), q)) d = i;
      }
      const auto cp = classify(DiagramMode::DivergencePrimal, sites, BlochVector(q));
      const auto cd = classify(DiagramMode::DivergenceDual, sites, BlochVector(q));
      if (cp.margin > 1e-9) REQUIRE(cp.site == p);
      if (cd.margin > 1e-9) REQUIRE(cd.site == d);
    }
  }
}

TEST_CASE("mode preconditions") {
  const SiteSet pure({BlochVector(0, 0, 1), BlochVector(1, 0, 0)});
  const SiteSet mixed({BlochVector(0, 0, 0.5), BlochVector(0.5, 0, 0)});
  const BlochVector pq(0, 1, 0), mq(0, 0.5, 0);
  CHECK_THROWS_AS(classify(DiagramMode::Geodesic, mixed, pq), ModeMisuse);
  CHECK_THROWS_AS(classify(DiagramMode::FubiniStudy, pure, mq), ModeMisuse);
  CHECK_THROWS_AS(classify(DiagramMode::DivergencePrimal, pure, mq), ModeMisuse);
  CHECK_THROWS_AS(classify(DiagramMode::DivergenceDual, mixed, pq), ModeMisuse);
  CHECK_NOTHROW(classify(DiagramMode::DivergencePrimal, mixed, pq));
  CHECK_NOTHROW(classify(DiagramMode::DivergenceDual, pure, mq));
  CHECK_NOTHROW(classify(DiagramMode::EuclideanSection, mixed, mq));
  CHECK_THROWS_AS(classify(DiagramMode::Geodesic, SiteSet{}, pq), SiteError);
}

TEST_CASE("bisectors") {
  const BlochVector n(0, 0, 1), s(0, 0, -1);
  for (auto m : {DiagramMode::FubiniStudy, DiagramMode::Bures, DiagramMode::Geodesic,
                 DiagramMode::EuclideanSection}) {
    const auto b = bisector(m, n, s);
    CHECK(b.normal.normalized().isApprox(Vec3(0, 0, -1)));
    CHECK(b.offset == 0.0);
  }
  CHECK_THROWS_AS(bisector(DiagramMode::Geodesic, n, n), SiteError);
  CHECK_THROWS_AS(bisector(DiagramMode::DivergencePrimal, n, BlochVector(0, 0, 0)), ModeMisuse);

  SUBCASE("equal radii pass through the origin") {
    const BlochVector a(0.4, 0, 0), b(0, 0.4, 0);
    const auto bp = bisector(DiagramMode::DivergencePrimal, a, b);
    CHECK(std::abs(bp.offset) < 1e-15);
    CHECK(bp.normal.normalized().isApprox((b.vec() - a.vec()).normalized()));
  }

  SUBCASE("mixed pair on an axis differs from the euclidean bisector") {
    const BlochVector a(0, 0, 0.2), b(0, 0, 0.8);
    const auto bp = bisector(DiagramMode::DivergencePrimal, a, b);
    const auto be = bisector(DiagramMode::EuclideanSection, a, b);
    const double zp = bp.offset / bp.normal.z();
    const double ze = be.offset / be.normal.z();
    CHECK(ze == doctest::Approx(0.5));
    CHECK(std::abs(zp - ze) > 0.01);
    // The plane is where the two divergences agree.
    const Vec3 on(0.1, -0.2, zp);
    CHECK(std::abs(oracle::relative_entropy(on, a.vec()) - oracle::relative_entropy(on, b.vec())) <
          1e-12);
  }

  SUBCASE("sign agrees with classification") {
    oracle::Sampler smp(42);
    for (int t = 0; t < 500; ++t) {
      const SiteSet two({BlochVector(smp.in_ball(0.95)), BlochVector(smp.in_ball(0.95))});
      const BlochVector q(smp.in_ball(0.95));
      for (auto m : {DiagramMode::DivergencePrimal, DiagramMode::DivergenceDual,
                     DiagramMode::EuclideanSection}) {
        const auto c = classify(m, two, q);
        if (c.margin < 1e-9) continue;
        REQUIRE(bisector(m, two[0], two[1]).favors_first(q) == (c.site == 0));
      }
    }
  }
}

TEST_CASE("assign and compare") {
  oracle::Sampler s(43);
  const SiteSet sites = random_pure_sites(s, 7);
  const auto q = sample_sphere(2000, 3);
  const auto fs = assign(DiagramMode::FubiniStudy, sites, q);
  const auto eu = assign(DiagramMode::EuclideanSection, sites, q);
  CHECK(fs.entries.size() == q.size());
  CHECK(diagrams_equal(fs, fs).equal);
  const auto cmp = diagrams_equal(fs, eu);
  CHECK(cmp.equal);
  CHECK(cmp.compared > 1900);

  const auto other = assign(DiagramMode::Geodesic, sites, sample_sphere(2000, 4));
  CHECK_THROWS_AS(diagrams_equal(fs, other), std::invalid_argument);
  const auto shorter = assign(DiagramMode::Geodesic, sites, sample_sphere(10, 3));
  CHECK_THROWS_AS(diagrams_equal(fs, shorter), std::invalid_argument);

  for (std::size_t i = 0; i < q.size(); ++i) {
    REQUIRE((fs.entries[i].site == angular_owner(sites, q[i].vec()) || fs.entries[i].ambiguous()));
  }
}

TEST_CASE("primal and dual divergence diagrams can differ") {
  const SiteSet sites({BlochVector(0, 0, 0.1), BlochVector(0, 0.6, 0.3), BlochVector(0.7, 0, -0.2)});
  const auto grid = [] {
    std::vector<BlochVector> g;
    for (int i = -9; i <= 9; ++i)
      for (int j = -9; j <= 9; ++j)
        for (int k = -9; k <= 9; ++k) {
          const Vec3 p(i / 10.0, j / 10.0, k / 10.0);
          if (p.norm() <= 0.95) g.emplace_back(p);
        }
    return g;
  }();
  const auto primal = assign(DiagramMode::DivergencePrimal, sites, grid);
  const auto dual = assign(DiagramMode::DivergenceDual, sites, grid);
  const auto cmp = diagrams_equal(primal, dual);
  REQUIRE_FALSE(cmp.equal);
  const auto& w = cmp.mismatches.front();
  CHECK(w.margin_a > 1e-6);
  CHECK(w.margin_b > 1e-6);
  // Confirm the witness directly.
  const Vec3 q = grid[w.query].vec();
  CHECK(oracle::relative_entropy(q, sites[w.site_a].vec()) <
        oracle::relative_entropy(q, sites[w.site_b].vec()));
  CHECK(oracle::relative_entropy(sites[w.site_b].vec(), q) <
        oracle::relative_entropy(sites[w.site_a].vec(), q));
}

TEST_CASE("epsilon sections") {
  const SiteSet poles({BlochVector(0, 0, 1), BlochVector(0, 0, -1)});
  const auto q = sample_sphere(500);
  for (auto m : {DiagramMode::DivergencePrimal, DiagramMode::DivergenceDual}) {
    const auto a = pure_limit_section(poles, 0.1, m, q);
    REQUIRE(a.epsilon == 0.1);
    for (const auto& e : a.entries) {
      if (!e.ambiguous()) REQUIRE(e.site == (e.query.z() > 0 ? 0u : 1u));
    }
  }

  const SiteSet one({BlochVector(0, 1, 0)});
  for (const auto& e : pure_limit_section(one, 0.3, DiagramMode::DivergenceDual, q).entries) {
    REQUIRE(e.site == 0);
  }

  oracle::Sampler s(44);
  const SiteSet eight = random_pure_sites(s, 8);
  const auto queries = sample_sphere(10000, 8);
  const auto geo = assign(DiagramMode::Geodesic, eight, queries);
  for (double eps : {1e-1, 1e-3, 1e-6}) {
    for (auto m : {DiagramMode::DivergencePrimal, DiagramMode::DivergenceDual}) {
      const auto sec = pure_limit_section(eight, eps, m, queries);
      REQUIRE(diagrams_equal(sec, geo).equal);
    }
  }

  CHECK_THROWS_AS(pure_limit_section(poles, 0.0, DiagramMode::DivergencePrimal, q),
                  std::invalid_argument);
  CHECK_THROWS_AS(pure_limit_section(poles, 0.6, DiagramMode::DivergencePrimal, q),
                  std::invalid_argument);
  CHECK_THROWS_AS(pure_limit_section(poles, 0.1, DiagramMode::Geodesic, q), ModeMisuse);
  const SiteSet mixed({BlochVector(0, 0, 0.5)});
  CHECK_THROWS_AS(pure_limit_section(mixed, 0.1, DiagramMode::DivergencePrimal, q), ModeMisuse);
  const std::vector<BlochVector> inner{BlochVector(0, 0, 0.5)};
  CHECK_THROWS_AS(pure_limit_section(poles, 0.1, DiagramMode::DivergenceDual, inner), ModeMisuse);
}

TEST_CASE("spherical diagram") {
  SUBCASE("antipodal pair") {
    const auto d = spherical_diagram(SiteSet({BlochVector(0, 0, 1), BlochVector(0, 0, -1)}));
    CHECK(d.vertices.empty());
    REQUIRE(d.adjacency.size() == 2);
    CHECK(d.adjacency[0] == std::vector<std::size_t>{1});
    CHECK(d.adjacency[1] == std::vector<std::size_t>{0});
  }
  SUBCASE("tetrahedron") {
    const SiteSet t = tetrahedron();
    const auto d = spherical_diagram(t);
    REQUIRE(d.vertices.size() == 4);
    for (const auto& v : d.vertices) {
      CHECK(v.sites.size() == 3);
      // Vertices sit opposite the site they exclude.
      bool opposite = false;
      for (std::size_t i = 0; i < 4; ++i) opposite |= (v.position + t[i].vec()).norm() < 1e-9;
      CHECK(opposite);
    }
    const auto sampled = sampled_adjacency(t, 20000);
    CHECK(sampled.size() == 6);
    for (std::size_t i = 0; i < 4; ++i) CHECK(d.adjacency[i].size() == 3);
  }
  SUBCASE("three sites on a great circle") {
    const SiteSet c({BlochVector(1, 0, 0), BlochVector(-0.5, std::sqrt(0.75), 0),
                     BlochVector(-0.5, -std::sqrt(0.75), 0)});
    const auto d = spherical_diagram(c);
    REQUIRE(d.vertices.size() == 2);
    for (const auto& v : d.vertices) {
      CHECK(std::abs(std::abs(v.position.z()) - 1.0) < 1e-12);
      CHECK(v.sites.size() == 3);
    }
    const auto sampled = sampled_adjacency(c, 20000);
    CHECK(sampled.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(d.adjacency[i].size() == 2);
  }
  SUBCASE("random sets match sampled adjacency") {
    oracle::Sampler s(45);
    for (int t = 0; t < 5; ++t) {
      const SiteSet sites = random_pure_sites(s, 6);
      const auto d = spherical_diagram(sites);
      std::set<std::pair<std::size_t, std::size_t>> edges;
      for (std::size_t i = 0; i < d.adjacency.size(); ++i)
        for (auto j : d.adjacency[i]) edges.insert({std::min(i, j), std::max(i, j)});
      // Sampling can miss very short edges, never invent them.
      const auto sampled = sampled_adjacency(sites, 40000);
      for (const auto& e : sampled) CHECK(edges.count(e) == 1);
      // Euler: V - E + F = 2 for a generic diagram.
      CHECK(static_cast<int>(d.vertices.size()) - static_cast<int>(edges.size()) +
                static_cast<int>(sites.size()) == 2);
    }
  }
  CHECK_THROWS_AS(spherical_diagram(SiteSet({BlochVector(0, 0, 1)})), SiteError);
  CHECK_THROWS_AS(spherical_diagram(SiteSet({BlochVector(0, 0, 1), BlochVector(0, 0, 0.5)})),
                  ModeMisuse);
}

TEST_CASE("cell export") {
  CHECK(parse_export_format("off") == ExportFormat::Off);
  CHECK(parse_export_format("svg") == ExportFormat::Svg);
  CHECK_FALSE(parse_export_format("png").has_value());
  CHECK_THROWS_AS(sphere_cell_mesh(SiteSet{}, DiagramMode::Geodesic), SiteError);

  const SiteSet poles({BlochVector(0, 0, 1), BlochVector(0, 0, -1)});
  const auto two = sphere_cell_mesh(poles, DiagramMode::Geodesic);
  CHECK(two.faces.size() == 20480);
  CHECK(std::set<std::size_t>(two.face_site.begin(), two.face_site.end()).size() == 2);

  auto areas = [](const SphereMesh& m, std::size_t groups) {
    std::vector<double> a(groups, 0.0);
    for (std::size_t f = 0; f < m.faces.size(); ++f) {
      const Vec3& p = m.vertices[m.faces[f][0]];
      const Vec3& q = m.vertices[m.faces[f][1]];
      const Vec3& r = m.vertices[m.faces[f][2]];
      a[m.face_site[f]] += 0.5 * (q - p).cross(r - p).norm();
    }
    return a;
  };
  const auto halves = areas(two, 2);
  CHECK(halves[0] == doctest::Approx(halves[1]).epsilon(0.02));

  const auto tet = sphere_cell_mesh(tetrahedron(), DiagramMode::Geodesic);
  const auto quarters = areas(tet, 4);
  const double mean = (quarters[0] + quarters[1] + quarters[2] + quarters[3]) / 4.0;
  for (double a : quarters) CHECK(std::abs(a - mean) / mean < 0.02);

  const std::string off = to_off(tet);
  CHECK(off.rfind("OFF\n", 0) == 0);
  const std::string svg = export_cells(tetrahedron(), DiagramMode::Geodesic, ExportFormat::Svg);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);

  ExportOptions eps;
  eps.epsilon = 0.1;
  const auto sec = sphere_cell_mesh(poles, DiagramMode::DivergencePrimal, eps);
  CHECK(sec.face_site == two.face_site);
  CHECK_THROWS_AS(sphere_cell_mesh(poles, DiagramMode::DivergencePrimal), ModeMisuse);
}
