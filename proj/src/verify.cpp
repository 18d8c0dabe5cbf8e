#include "qbloch/verify.hpp"

#include "qbloch/capacity.hpp"
#include "qbloch/channels.hpp"
#include "qbloch/geometry.hpp"
#include "qbloch/io.hpp"
#include "qbloch/sampling.hpp"
#include "qbloch/voronoi.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace qbloch {

namespace {

using cd = std::complex<double>;

class Recorder {
 public:
  Recorder(std::string suite, std::vector<PropertyResult>& out)
      : suite_(std::move(suite)), out_(out) {}

  // Passes when max_error <= tolerance.
  void bound(std::string property, std::size_t samples, double max_error,
             double tolerance, std::string note = {}) {
    out_.push_back({suite_, std::move(property), samples, max_error, tolerance,
                    max_error <= tolerance, std::move(note)});
  }

  void check(std::string property, std::size_t samples, bool ok,
             std::string note = {}) {
    out_.push_back({suite_, std::move(property), samples, ok ? 0.0 : 1.0, 0.0, ok,
                    std::move(note)});
  }

 private:
  std::string suite_;
  std::vector<PropertyResult>& out_;
};

BlochVector random_in_ball(Rng& rng, double max_radius) {
  return BlochVector(rng.on_sphere() * (max_radius * std::cbrt(rng.uniform())));
}

// exp of a Hermitian 2x2 matrix a I + b . sigma.
Mat2c exp_hermitian(const Mat2c& h) {
  const double a = 0.5 * (h(0, 0).real() + h(1, 1).real());
  const Vec3 b(h(1, 0).real(), h(1, 0).imag(), 0.5 * (h(0, 0).real() - h(1, 1).real()));
  const double n = b.norm();
  const double sh = n > 0 ? std::sinh(n) / n : 1.0;
  Mat2c pauli;
  pauli << cd(b.z(), 0), cd(b.x(), -b.y()), cd(b.x(), b.y()), cd(-b.z(), 0);
  return std::exp(a) * (std::cosh(n) * Mat2c::Identity() + sh * pauli);
}

void suite_core(Rng& rng, Recorder& rec) {
  constexpr std::size_t kN = 10000;
  double round_trip = 0.0, recon = 0.0, exp_log = 0.0, concave = 0.0, unitary = 0.0;
  for (std::size_t i = 0; i < kN; ++i) {
    const BlochVector v = random_in_ball(rng, 1.0);
    round_trip = std::max(round_trip, (to_bloch(from_bloch(v)).vec() - v.vec()).norm());
    if (v.radius() > 0.0) {
      const auto sd = spectral(v);
      const Eigen::Vector2cd lam(sd.lambda1, sd.lambda2);
      recon = std::max(recon, (sd.unitary * lam.asDiagonal() * sd.unitary.adjoint() -
                               from_bloch(v).matrix()).norm());
      unitary = std::max(unitary,
                         (sd.unitary * sd.unitary.adjoint() - Mat2c::Identity()).norm());
    }
    const BlochVector w = random_in_ball(rng, 0.999);
    exp_log = std::max(exp_log, (exp_hermitian(log_density(w)) - from_bloch(w).matrix()).norm());
    const BlochVector a = random_in_ball(rng, 1.0);
    const BlochVector b = random_in_ball(rng, 1.0);
    const BlochVector m((a.vec() + b.vec()) / 2.0);
    concave = std::max(concave, 0.5 * (entropy(a) + entropy(b)) - entropy(m));
  }
  rec.bound("bloch/matrix round trip", kN, round_trip, 1e-14);
  rec.bound("spectral reconstruction", kN, recon, 1e-12);
  rec.bound("spectral unitary", kN, unitary, 1e-12);
  rec.bound("exp(log rho) reconstruction (r <= 0.999)", kN, exp_log, 1e-10);
  rec.bound("entropy midpoint concavity", kN, std::max(0.0, concave), 1e-12);
}

void suite_lemma(Rng& rng, Recorder& rec) {
  constexpr std::size_t kN = 10000;
  double agree = 0.0;
  for (std::size_t i = 0; i < kN; ++i) {
    const BlochVector a = i % 4 == 0 ? BlochVector(rng.on_sphere()) : random_in_ball(rng, 1.0);
    const BlochVector b = random_in_ball(rng, 0.999);
    agree = std::max(agree, std::abs(divergence_closed(a, b).value() -
                                     divergence_matrix(a, b).value()));
  }
  rec.bound("closed form vs matrix trace", kN, agree, 1e-10);

  double last = 0.0;
  for (int k = 1; k <= 10; ++k) {
    const BlochVector b(0.0, 0.0, std::pow(10.0, -k));
    last = std::abs(divergence_closed(BlochVector(0, 0, 1), b).value() - kLn2);
  }
  rec.bound("origin limit D(pure || b) -> log 2", 10, last, 1e-8);
}

void suite_geometry(Rng& rng, Recorder& rec) {
  double negative = 0.0;
  bool indiscernible = true;
  for (std::size_t i = 0; i < 100000; ++i) {
    const BlochVector a = random_in_ball(rng, 1.0);
    const BlochVector b = random_in_ball(rng, 0.999);
    const double d = divergence_raw(a, b);
    negative = std::max(negative, -d);
    if (d < 1e-10 && euclidean(a, b) >= 1e-4) indiscernible = false;
  }
  rec.bound("nonnegativity", 100000, std::max(0.0, negative), 1e-12);
  rec.check("identity of indiscernibles", 100000, indiscernible);

  double tangent = 0.0, rotation = 0.0;
  for (std::size_t i = 0; i < 10000; ++i) {
    const BlochVector a = random_in_ball(rng, 1.0);
    const BlochVector b = random_in_ball(rng, 0.999);
    const Vec3 u = grad_potential(b).vec();
    const double gap = potential(a) - (potential(b) + u.dot(a.vec() - b.vec()));
    tangent = std::max(tangent, std::abs(gap - divergence_closed(a, b).value()));
    const Eigen::Matrix3d r = rng.rotation();
    const BlochVector ra(r * a.vec());
    const BlochVector rb(r * b.vec());
    rotation = std::max(rotation, std::abs(divergence_closed(ra, rb).value() -
                                           divergence_closed(a, b).value()));
  }
  rec.bound("tangent-plane gap equals divergence", 10000, tangent, 1e-10);
  rec.bound("rotational covariance", 10000, rotation, 1e-10);

  double asym = 0.0;
  std::string witness;
  for (double ra = 0.05; ra < 0.96; ra += 0.05) {
    for (double rb = 0.05; rb < 0.96; rb += 0.05) {
      const BlochVector a(0, 0, ra), b(0, 0, rb);
      const double d = std::abs(divergence_closed(a, b).value() - divergence_closed(b, a).value());
      if (d > asym) {
        asym = d;
        witness = "radii " + format_number(ra) + ", " + format_number(rb);
      }
    }
  }
  rec.check("asymmetry witness |D(a||b) - D(b||a)| > 0.01", 361, asym > 0.01,
            witness + ": " + format_number(asym));

  double fs = 0.0, bu = 0.0;
  std::vector<std::array<double, 4>> pairs;
  for (std::size_t i = 0; i < 1000; ++i) {
    const BlochVector a(rng.on_sphere()), b(rng.on_sphere());
    const double theta = geodesic(a, b);
    fs = std::max(fs, std::abs(fubini_study(a, b) - theta / 2.0));
    bu = std::max(bu, std::abs(bures(a, b) - euclidean(a, b) / 2.0));
    pairs.push_back({fubini_study(a, b), bures(a, b), theta, euclidean(a, b)});
  }
  rec.bound("d_FS = theta / 2", 1000, fs, 1e-12);
  rec.bound("d_B = d_E / 2", 1000, bu, 1e-12);
  std::vector<std::size_t> base(pairs.size());
  std::iota(base.begin(), base.end(), 0);
  bool same_order = true;
  std::vector<std::vector<std::size_t>> perms;
  for (int k = 0; k < 4; ++k) {
    auto p = base;
    std::stable_sort(p.begin(), p.end(),
                     [&](std::size_t x, std::size_t y) { return pairs[x][k] < pairs[y][k]; });
    perms.push_back(std::move(p));
  }
  for (int k = 1; k < 4; ++k) same_order = same_order && perms[k] == perms[0];
  rec.check("pure distances order pairs identically", 1000, same_order);
}

void suite_duality(Rng& rng, Recorder& rec) {
  constexpr std::size_t kN = 1000;
  double fenchel = 0.0, round_trip = 0.0, fd = 0.0, dual_vs_matrix = 0.0;
  const double h = 1e-5;
  for (std::size_t i = 0; i < kN; ++i) {
    const BlochVector v = random_in_ball(rng, 0.999);
    const DualCoordinates d = grad_potential(v);
    fenchel = std::max(fenchel, std::abs(potential(v) + conjugate_potential(d) -
                                         v.vec().dot(d.vec())));
    round_trip = std::max(round_trip, (inverse_grad(d).vec() - v.vec()).norm());

    const double r = rng.uniform(0.05, 0.99);
    const Vec3 p = rng.on_sphere() * r;
    Vec3 numeric;
    for (int k = 0; k < 3; ++k) {
      Vec3 hi = p, lo = p;
      hi(k) += h;
      lo(k) -= h;
      numeric(k) = (potential(BlochVector(hi)) - potential(BlochVector(lo))) / (2 * h);
    }
    const Vec3 exact = grad_potential(BlochVector(p)).vec();
    fd = std::max(fd, (numeric - exact).norm() / exact.norm());

    const BlochVector a = random_in_ball(rng, 1.0);
    dual_vs_matrix = std::max(dual_vs_matrix, std::abs(divergence_dual(a, d).value() -
                                                       divergence_matrix(a, v).value()));
  }
  rec.bound("Fenchel equality", kN, fenchel, 1e-10);
  rec.bound("inverse_grad(grad(v)) = v", kN, round_trip, 1e-10);
  rec.bound("gradient vs central differences (relative)", kN, fd, 1e-6);
  rec.bound("dual Bregman form vs matrix divergence", kN, dual_vs_matrix, 1e-10);
}

void suite_channels(Rng& rng, Recorder& rec) {
  std::vector<AffineChannel> family = {AffineChannel::identity()};
  for (double p : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    family.push_back(AffineChannel::depolarizing(p));
    family.push_back(AffineChannel::amplitude_damping(p));
    family.push_back(AffineChannel::phase_damping(p));
    family.push_back(AffineChannel::planar(p, 1.0 - p));
  }
  family.push_back(AffineChannel::rotation(Vec3(1, 2, 3), 0.7));
  double overflow = -1.0;
  for (const auto& c : family) overflow = std::max(overflow, validate_image(c));
  rec.bound("builders keep the image in the ball", family.size(), std::max(0.0, overflow),
            kImageTolerance);

  double affine = 0.0;
  for (const auto& c : family) {
    for (int i = 0; i < 50; ++i) {
      const BlochVector a = random_in_ball(rng, 1.0);
      const BlochVector b = random_in_ball(rng, 1.0);
      const double t = rng.uniform();
      const BlochVector mix(t * a.vec() + (1 - t) * b.vec());
      const Vec3 lhs = c.apply(mix).vec();
      const Vec3 rhs = t * c.apply(a).vec() + (1 - t) * c.apply(b).vec();
      affine = std::max(affine, (lhs - rhs).norm());
    }
  }
  rec.bound("affinity", family.size() * 50, affine, 1e-14);

  double iso = 0.0;
  for (int i = 0; i < 200; ++i) {
    const AffineChannel c = AffineChannel::rotation(rng.on_sphere(), rng.uniform(-3.0, 3.0));
    const BlochVector a = random_in_ball(rng, 1.0);
    const BlochVector b = random_in_ball(rng, 1.0);
    iso = std::max(iso, std::abs(euclidean(c.apply(a), c.apply(b)) - euclidean(a, b)));
  }
  rec.bound("rotations are isometries", 200, iso, 1e-12);
}

struct SiteBatch {
  std::vector<SiteSet> sets;
  std::vector<BlochVector> queries;
};

SiteBatch pure_batch(std::uint64_t seed) {
  Rng rng(seed * 7919 + 17);
  SiteBatch batch;
  for (int s = 0; s < 100; ++s) {
    const std::size_t n = 2 + rng.index(19);
    std::vector<BlochVector> sites;
    for (std::size_t i = 0; i < n; ++i) sites.emplace_back(rng.on_sphere());
    batch.sets.emplace_back(std::move(sites));
  }
  batch.queries = sample_sphere(10000, seed + 1);
  return batch;
}

void suite_pure_modes(std::uint64_t seed, Recorder& rec) {
  const SiteBatch batch = pure_batch(seed);
  std::size_t mismatches = 0, compared = 0;
  for (const auto& sites : batch.sets) {
    const auto geo = assign(DiagramMode::Geodesic, sites, batch.queries);
    for (DiagramMode m : {DiagramMode::FubiniStudy, DiagramMode::Bures,
                          DiagramMode::EuclideanSection}) {
      const auto cmp = diagrams_equal(assign(m, sites, batch.queries), geo);
      mismatches += cmp.mismatches.size();
      compared += cmp.compared;
    }
  }
  rec.bound("FS / Bures / geodesic / Euclidean section agree", compared,
            static_cast<double>(mismatches), 0.0, "100 site sets x 10^4 queries");
}

void suite_sections(std::uint64_t seed, Recorder& rec) {
  const SiteBatch batch = pure_batch(seed);
  for (DiagramMode m : {DiagramMode::DivergencePrimal, DiagramMode::DivergenceDual}) {
    for (double eps : {1e-1, 1e-2, 1e-4, 1e-6}) {
      std::size_t mismatches = 0, compared = 0;
      for (const auto& sites : batch.sets) {
        const auto geo = assign(DiagramMode::Geodesic, sites, batch.queries);
        const auto cmp = diagrams_equal(pure_limit_section(sites, eps, m, batch.queries), geo);
        mismatches += cmp.mismatches.size();
        compared += cmp.compared;
      }
      rec.bound(std::string(to_string(m)) + " section eps=" + format_number(eps) +
                    " matches geodesic",
                compared, static_cast<double>(mismatches), 0.0);
    }
  }
}

void suite_witness(std::uint64_t seed, Recorder& rec) {
  Rng rng(seed + 101);
  std::string note = "none found";
  bool found = false;
  for (int attempt = 0; attempt < 200 && !found; ++attempt) {
    std::vector<BlochVector> s;
    for (int i = 0; i < 3; ++i) s.push_back(random_in_ball(rng, 0.95));
    const SiteSet sites(s);
    for (int q = 0; q < 2000 && !found; ++q) {
      const BlochVector query = random_in_ball(rng, 0.95);
      const auto p = classify(DiagramMode::DivergencePrimal, sites, query);
      const auto d = classify(DiagramMode::DivergenceDual, sites, query);
      if (p.site != d.site && p.margin > 1e-6 && d.margin > 1e-6) {
        found = true;
        std::ostringstream os;
        os << "sites";
        for (const auto& x : s) {
          os << " (" << format_number(x.x()) << "," << format_number(x.y()) << ","
             << format_number(x.z()) << ")";
        }
        os << "; query (" << format_number(query.x()) << "," << format_number(query.y())
           << "," << format_number(query.z()) << ") primal->" << p.site << " dual->"
           << d.site << "; margins " << format_number(p.margin) << " / "
           << format_number(d.margin);
        note = os.str();
      }
    }
  }
  rec.check("primal and dual divergence diagrams differ on mixed sites", 1, found, note);
}

void suite_capacity(std::uint64_t seed, Recorder& rec) {
  for (double t : {0.25, 0.5, 0.75}) {
    const auto report = holevo_capacity(AffineChannel::depolarizing(t), 2000, 1e-12, seed);
    const double expected = kLn2 - entropy(BlochVector(0, 0, t));
    rec.bound("depolarizing t=" + format_number(t) + " capacity", 2000,
              std::abs(report.capacity_nats - expected), 1e-4);
  }
  const auto id = holevo_capacity(AffineChannel::identity(), 4000, 1e-12, seed);
  const double below = kLn2 - id.capacity_nats;
  rec.check("identity capacity in [log 2 - 1e-3, log 2 + 1e-6]", 4000,
            below <= 1e-3 && below >= -1e-6, "capacity " + format_number(id.capacity_nats));

  Rng rng(seed + 303);
  double exact_iter = 0.0, grid_below = 0.0, grid_gap = 0.0;
  for (int s = 0; s < 50; ++s) {
    const std::size_t n = 2 + rng.index(11);
    std::vector<BlochVector> pts;
    for (std::size_t i = 0; i < n; ++i) pts.push_back(random_in_ball(rng, 1.0));
    const auto ex = meb_exact(pts);
    const auto it = meb_iterative(pts);
    const auto gr = meb_grid(pts, 16);
    exact_iter = std::max(exact_iter, std::abs(ex.radius - it.radius));
    grid_below = std::max(grid_below, ex.radius - gr.radius);
    grid_gap = std::max(grid_gap, gr.radius - ex.radius);
  }
  rec.bound("exact vs iterative radius", 50, exact_iter, 1e-6);
  rec.bound("grid radius never below exact", 50, std::max(0.0, grid_below), 1e-12);
  rec.bound("grid radius within 1e-4 of exact", 50, grid_gap, 1e-4);
}

}  // namespace

const std::vector<std::string>& verification_suites() {
  static const std::vector<std::string> names = {
      "core", "lemma", "geometry", "duality", "channels",
      "pure-modes", "sections", "witness", "capacity"};
  return names;
}

std::vector<PropertyResult> run_verification(const VerifyOptions& options) {
  const auto& names = verification_suites();
  if (options.only &&
      std::find(names.begin(), names.end(), *options.only) == names.end()) {
    throw std::invalid_argument("unknown verification suite: " + *options.only);
  }
  std::vector<PropertyResult> out;
  for (std::size_t idx = 0; idx < names.size(); ++idx) {
    const std::string& name = names[idx];
    if (options.only && *options.only != name) continue;
    Recorder rec(name, out);
    Rng rng(options.seed * 1000003 + idx);
    if (name == "core") suite_core(rng, rec);
    else if (name == "lemma") suite_lemma(rng, rec);
    else if (name == "geometry") suite_geometry(rng, rec);
    else if (name == "duality") suite_duality(rng, rec);
    else if (name == "channels") suite_channels(rng, rec);
    else if (name == "pure-modes") suite_pure_modes(options.seed, rec);
    else if (name == "sections") suite_sections(options.seed, rec);
    else if (name == "witness") suite_witness(options.seed, rec);
    else if (name == "capacity") suite_capacity(options.seed, rec);
  }
  return out;
}

std::string format_verification_table(const std::vector<PropertyResult>& results) {
  std::ostringstream os;
  char buf[512];
  std::snprintf(buf, sizeof buf, "%-6s %-10s %-55s %9s %14s %10s\n", "status", "suite",
                "property", "samples", "max_error", "tolerance");
  os << buf;
  for (const auto& r : results) {
    std::snprintf(buf, sizeof buf, "%-6s %-10s %-55s %9zu %14s %10s", r.pass ? "PASS" : "FAIL",
                  r.suite.c_str(), r.property.c_str(), r.samples,
                  format_number(r.max_error).c_str(), format_number(r.tolerance).c_str());
    os << buf;
    if (!r.note.empty()) os << "  " << r.note;
    os << '\n';
  }
  return os.str();
}

}  // namespace qbloch
