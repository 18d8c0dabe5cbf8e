#include "qbloch/voronoi.hpp"

#include "qbloch/geometry.hpp"

#include <cmath>
#include <limits>

namespace qbloch {

namespace {

constexpr double kDuplicateTolerance = 1e-12;

bool interior(const BlochVector& v) { return v.radius() <= 1.0 - kSingularGuard; }

void require_sites(DiagramMode mode, const SiteSet& sites) {
  if (sites.empty()) {
    throw SiteError("site set is empty");
  }
  if (requires_pure(mode) && !sites.all_pure()) {
    throw ModeMisuse(std::string(to_string(mode)) + " requires pure sites");
  }
  if (mode == DiagramMode::DivergencePrimal && !sites.all_interior()) {
    throw ModeMisuse(
        "divergence-primal requires mixed (interior) sites; use an epsilon "
        "section for pure sites");
  }
}

void require_query(DiagramMode mode, const BlochVector& q) {
  if (requires_pure(mode) && !q.is_pure()) {
    throw ModeMisuse(std::string(to_string(mode)) + " requires pure queries");
  }
  if (mode == DiagramMode::DivergenceDual && !interior(q)) {
    throw ModeMisuse("divergence-dual requires mixed (interior) queries");
  }
}

// Per-site constants so a batch of queries avoids recomputing logarithms.
// Divergence modes evaluate the Bregman form, which equals the closed form
// term by term.
class Prepared {
 public:
  Prepared(DiagramMode mode, const SiteSet& sites) : mode_(mode), sites_(sites) {
    if (mode == DiagramMode::DivergencePrimal) {
      for (const auto& s : sites.sites()) {
        dual_.push_back(s.vec() * radial_gain(s.radius()));
        conj_.push_back(conjugate_at_radius(s.radius()));
      }
    } else if (mode == DiagramMode::DivergenceDual) {
      for (const auto& s : sites.sites()) {
        phi_.push_back(potential(s));
      }
    }
  }

  Classification classify(const BlochVector& q) const {
    double best = std::numeric_limits<double>::infinity();
    double second = best;
    std::size_t winner = 0;
    auto offer = [&](std::size_t i, double d) {
      if (d < best) {
        second = best;
        best = d;
        winner = i;
      } else if (d < second) {
        second = d;
      }
    };
    const std::size_t n = sites_.size();
    switch (mode_) {
      case DiagramMode::DivergencePrimal: {
        const double phi_q = potential(q);
        for (std::size_t i = 0; i < n; ++i) {
          offer(i, clamp(phi_q + conj_[i] - q.vec().dot(dual_[i])));
        }
        break;
      }
      case DiagramMode::DivergenceDual: {
        const double rq = q.radius();
        const double conj_q = conjugate_at_radius(rq);
        const Vec3 dual_q = q.vec() * radial_gain(rq);
        for (std::size_t i = 0; i < n; ++i) {
          offer(i, clamp(phi_[i] + conj_q - sites_[i].vec().dot(dual_q)));
        }
        break;
      }
      default:
        for (std::size_t i = 0; i < n; ++i) {
          offer(i, mode_distance(mode_, q, sites_[i]));
        }
    }
    return {winner, second - best};
  }

 private:
  static double clamp(double d) { return d < 0.0 ? 0.0 : d; }

  DiagramMode mode_;
  const SiteSet& sites_;
  std::vector<Vec3> dual_;
  std::vector<double> conj_;
  std::vector<double> phi_;
};

}  // namespace

std::string_view to_string(DiagramMode mode) {
  switch (mode) {
    case DiagramMode::FubiniStudy: return "fubini-study";
    case DiagramMode::Bures: return "bures";
    case DiagramMode::Geodesic: return "geodesic";
    case DiagramMode::EuclideanSection: return "euclidean";
    case DiagramMode::DivergencePrimal: return "divergence-primal";
    case DiagramMode::DivergenceDual: return "divergence-dual";
  }
  return "unknown";
}

std::optional<DiagramMode> parse_mode(std::string_view name) {
  for (DiagramMode m : kAllModes) {
    if (to_string(m) == name) {
      return m;
    }
  }
  return std::nullopt;
}

bool requires_pure(DiagramMode mode) {
  return mode == DiagramMode::FubiniStudy || mode == DiagramMode::Bures ||
         mode == DiagramMode::Geodesic;
}

SiteSet::SiteSet(std::vector<BlochVector> sites) : sites_(std::move(sites)) {
  for (std::size_t i = 0; i < sites_.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if ((sites_[i].vec() - sites_[j].vec()).norm() < kDuplicateTolerance) {
        throw SiteError("duplicate sites " + std::to_string(j) + " and " +
                        std::to_string(i));
      }
    }
    pure_.push_back(sites_[i].is_pure());
  }
}

bool SiteSet::all_pure() const {
  for (bool p : pure_) {
    if (!p) return false;
  }
  return true;
}

bool SiteSet::all_interior() const {
  for (const auto& s : sites_) {
    if (!interior(s)) return false;
  }
  return true;
}

double mode_distance(DiagramMode mode, const BlochVector& query,
                     const BlochVector& site) {
  switch (mode) {
    case DiagramMode::FubiniStudy: return fubini_study(query, site);
    case DiagramMode::Bures: return bures(query, site);
    case DiagramMode::Geodesic: return geodesic(query, site);
    case DiagramMode::EuclideanSection: return euclidean(query, site);
    case DiagramMode::DivergencePrimal:
      return divergence_closed(query, site).value();
    case DiagramMode::DivergenceDual:
      return divergence_closed(site, query).value();
  }
  throw std::logic_error("unknown diagram mode");
}

Classification classify(DiagramMode mode, const SiteSet& sites,
                        const BlochVector& query) {
  require_sites(mode, sites);
  require_query(mode, query);
  return Prepared(mode, sites).classify(query);
}

DiagramAssignment assign(DiagramMode mode, const SiteSet& sites,
                         std::span<const BlochVector> queries) {
  require_sites(mode, sites);
  const Prepared prepared(mode, sites);
  DiagramAssignment out;
  out.mode = mode;
  out.entries.reserve(queries.size());
  for (const auto& q : queries) {
    require_query(mode, q);
    const Classification c = prepared.classify(q);
    out.entries.push_back({q, c.site, c.margin});
  }
  return out;
}

double AffineBisector::signed_value(const BlochVector& p) const {
  if (frame == BisectorFrame::Dual) {
    return normal.dot(grad_potential(p).vec()) - offset;
  }
  return normal.dot(p.vec()) - offset;
}

AffineBisector bisector(DiagramMode mode, const BlochVector& site_i,
                        const BlochVector& site_j) {
  if ((site_i.vec() - site_j.vec()).norm() < kDuplicateTolerance) {
    throw SiteError("bisector of coincident sites");
  }
  AffineBisector b;
  switch (mode) {
    case DiagramMode::FubiniStudy:
    case DiagramMode::Bures:
    case DiagramMode::Geodesic:
      if (!site_i.is_pure() || !site_j.is_pure()) {
        throw ModeMisuse(std::string(to_string(mode)) + " requires pure sites");
      }
      // Unit sites: the perpendicular bisector plane passes through 0.
      b.normal = site_j.vec() - site_i.vec();
      b.offset = 0.0;
      break;
    case DiagramMode::EuclideanSection:
      b.normal = 2.0 * (site_j.vec() - site_i.vec());
      b.offset = site_j.vec().squaredNorm() - site_i.vec().squaredNorm();
      break;
    case DiagramMode::DivergencePrimal: {
      if (!interior(site_i) || !interior(site_j)) {
        throw ModeMisuse("divergence-primal requires interior sites");
      }
      // D(p||i) - D(p||j) = phi*(u_i) - phi*(u_j) - p . (u_i - u_j).
      const double ri = site_i.radius();
      const double rj = site_j.radius();
      b.normal = site_j.vec() * radial_gain(rj) - site_i.vec() * radial_gain(ri);
      b.offset = conjugate_at_radius(rj) - conjugate_at_radius(ri);
      break;
    }
    case DiagramMode::DivergenceDual:
      // D(i||q) - D(j||q) = phi(i) - phi(j) - u_q . (i - j).
      b.normal = site_j.vec() - site_i.vec();
      b.offset = potential(site_j) - potential(site_i);
      b.frame = BisectorFrame::Dual;
      break;
  }
  return b;
}

DiagramAssignment pure_limit_section(const SiteSet& sites, double epsilon,
                                     DiagramMode mode,
                                     std::span<const BlochVector> queries) {
  if (!(epsilon > 0.0 && epsilon <= 0.5)) {
    throw std::invalid_argument("epsilon must lie in (0, 0.5]");
  }
  if (mode != DiagramMode::DivergencePrimal &&
      mode != DiagramMode::DivergenceDual) {
    throw ModeMisuse("epsilon sections are defined for divergence modes only");
  }
  if (sites.empty()) {
    throw SiteError("site set is empty");
  }
  if (!sites.all_pure()) {
    throw ModeMisuse("epsilon sections take pure sites");
  }
  const double radius = 1.0 - epsilon;
  std::vector<BlochVector> shrunk;
  shrunk.reserve(sites.size());
  for (const auto& s : sites.sites()) {
    shrunk.push_back(BlochVector::on_radius(s.vec(), radius));
  }
  const SiteSet section_sites(std::move(shrunk));
  const Prepared prepared(mode, section_sites);

  DiagramAssignment out;
  out.mode = mode;
  out.epsilon = epsilon;
  out.entries.reserve(queries.size());
  for (const auto& q : queries) {
    if (!q.is_pure()) {
      throw ModeMisuse("epsilon sections take pure queries");
    }
    const Classification c =
        prepared.classify(BlochVector::on_radius(q.vec(), radius));
    out.entries.push_back({q, c.site, c.margin});
  }
  return out;
}

DiagramComparison diagrams_equal(const DiagramAssignment& a,
                                 const DiagramAssignment& b) {
  if (a.entries.size() != b.entries.size()) {
    throw std::invalid_argument("assignments cover different query lists");
  }
  DiagramComparison out;
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    const auto& ea = a.entries[i];
    const auto& eb = b.entries[i];
    if (!(ea.query == eb.query)) {
      throw std::invalid_argument("assignments cover different query lists");
    }
    if (ea.ambiguous() || eb.ambiguous()) {
      continue;
    }
    ++out.compared;
    if (ea.site != eb.site) {
      out.equal = false;
      out.mismatches.push_back({i, ea.site, eb.site, ea.margin, eb.margin});
    }
  }
  return out;
}

}  // namespace qbloch
