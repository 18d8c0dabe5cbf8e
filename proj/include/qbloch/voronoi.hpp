// Voronoi diagrams of 1-qubit states under six comparison rules.
//
// Every mode reduces to pairwise affine tests: in Bloch coordinates for the
// sphere modes and for D(query || site), in dual coordinates for
// D(site || query). Cells are therefore intersections of halfspaces and the
// library represents a diagram by its classifier plus pairwise bisectors,
// building explicit cell geometry only on the sphere.
#pragma once

#include "qbloch/core.hpp"

#include <array>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qbloch {

inline constexpr double kAmbiguityBand = 1e-9;

enum class DiagramMode {
  FubiniStudy,
  Bures,
  Geodesic,
  EuclideanSection,
  DivergencePrimal,  // site cells by D(query || site)
  DivergenceDual,    // site cells by D(site || query)
};

inline constexpr DiagramMode kAllModes[] = {
    DiagramMode::FubiniStudy,      DiagramMode::Bures,
    DiagramMode::Geodesic,         DiagramMode::EuclideanSection,
    DiagramMode::DivergencePrimal, DiagramMode::DivergenceDual,
};

std::string_view to_string(DiagramMode mode);
std::optional<DiagramMode> parse_mode(std::string_view name);
bool requires_pure(DiagramMode mode);

/// A mode applied to states it is not defined on.
class ModeMisuse : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed site list (duplicates, empty where sites are needed).
class SiteError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class SiteSet {
 public:
  SiteSet() = default;
  /// Rejects any two sites closer than 1e-12.
  explicit SiteSet(std::vector<BlochVector> sites);

  std::size_t size() const { return sites_.size(); }
  bool empty() const { return sites_.empty(); }
  const BlochVector& operator[](std::size_t i) const { return sites_[i]; }
  const std::vector<BlochVector>& sites() const { return sites_; }
  bool is_pure(std::size_t i) const { return pure_[i]; }
  bool all_pure() const;
  bool all_interior() const;

 private:
  std::vector<BlochVector> sites_;
  std::vector<bool> pure_;
};

struct Classification {
  std::size_t site = 0;
  double margin = 0.0;  // runner-up minus winner; +inf with one site
  bool ambiguous() const { return margin < kAmbiguityBand; }
};

/// Distance or divergence the mode minimizes, oriented query -> site.
double mode_distance(DiagramMode mode, const BlochVector& query,
                     const BlochVector& site);

/// Nearest site under `mode`; ties go to the lowest index.
Classification classify(DiagramMode mode, const SiteSet& sites,
                        const BlochVector& query);

struct AssignmentEntry {
  BlochVector query;
  std::size_t site = 0;
  double margin = 0.0;
  bool ambiguous() const { return margin < kAmbiguityBand; }
};

struct DiagramAssignment {
  DiagramMode mode = DiagramMode::Geodesic;
  std::optional<double> epsilon;
  std::vector<AssignmentEntry> entries;
};

DiagramAssignment assign(DiagramMode mode, const SiteSet& sites,
                         std::span<const BlochVector> queries);

enum class BisectorFrame { Primal, Dual };

/// Halfspace {p : normal . p <= offset}, p taken in `frame` coordinates,
/// on which site i beats or ties site j.
struct AffineBisector {
  Vec3 normal = Vec3::Zero();
  double offset = 0.0;
  BisectorFrame frame = BisectorFrame::Primal;

  /// normal . p - offset with p mapped into the frame; <= 0 where i wins.
  double signed_value(const BlochVector& p) const;
  bool favors_first(const BlochVector& p) const { return signed_value(p) <= 0.0; }
};

AffineBisector bisector(DiagramMode mode, const BlochVector& site_i,
                        const BlochVector& site_j);

struct SphereVertex {
  Vec3 position;
  std::vector<std::size_t> sites;  // all sites at the common nearest distance
};

struct SphericalDiagram {
  SiteSet sites;
  std::vector<SphereVertex> vertices;
  std::vector<std::vector<std::size_t>> adjacency;  // sorted neighbor lists
};

/// Geodesic Voronoi diagram of pure sites on the sphere.
SphericalDiagram spherical_diagram(const SiteSet& sites);

/// Scales pure sites and pure queries to radius 1 - epsilon and classifies
/// under a divergence mode. Entries carry the original pure queries.
DiagramAssignment pure_limit_section(const SiteSet& sites, double epsilon,
                                     DiagramMode mode,
                                     std::span<const BlochVector> queries);

struct AssignmentMismatch {
  std::size_t query = 0;
  std::size_t site_a = 0;
  std::size_t site_b = 0;
  double margin_a = 0.0;
  double margin_b = 0.0;
};

struct DiagramComparison {
  bool equal = true;
  std::size_t compared = 0;  // queries outside the ambiguity band in both
  std::vector<AssignmentMismatch> mismatches;
};

/// Winners must agree on every query unambiguous in both assignments.
DiagramComparison diagrams_equal(const DiagramAssignment& a,
                                 const DiagramAssignment& b);

// Sphere cell export.

enum class ExportFormat { Off, Svg };

std::optional<ExportFormat> parse_export_format(std::string_view name);

struct SphereMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> faces;
  std::vector<std::size_t> face_site;
};

struct ExportOptions {
  int subdivisions = 5;  // 20 * 4^5 = 20480 faces
  std::optional<double> epsilon;
};

/// Icosphere whose faces are labeled by the site owning their centroid.
SphereMesh sphere_cell_mesh(const SiteSet& sites, DiagramMode mode,
                            const ExportOptions& options = {});

std::string export_cells(const SiteSet& sites, DiagramMode mode,
                         ExportFormat format, const ExportOptions& options = {});

std::string to_off(const SphereMesh& mesh);
/// Stereographic projection from (0, 0, 1) onto the equatorial plane.
std::string to_svg(const SphereMesh& mesh, const SiteSet& sites);

}  // namespace qbloch
