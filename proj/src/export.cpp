#include "qbloch/voronoi.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace qbloch {

namespace {

SphereMesh icosphere(int subdivisions) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  SphereMesh mesh;
  for (const Vec3& v : {Vec3(-1, t, 0), Vec3(1, t, 0), Vec3(-1, -t, 0), Vec3(1, -t, 0),
                        Vec3(0, -1, t), Vec3(0, 1, t), Vec3(0, -1, -t), Vec3(0, 1, -t),
                        Vec3(t, 0, -1), Vec3(t, 0, 1), Vec3(-t, 0, -1), Vec3(-t, 0, 1)}) {
    mesh.vertices.push_back(v.normalized());
  }
  mesh.faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (int level = 0; level < subdivisions; ++level) {
    std::map<std::pair<int, int>, int> midpoints;
    auto midpoint = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto it = midpoints.find(key);
      if (it != midpoints.end()) return it->second;
      mesh.vertices.push_back((mesh.vertices[a] + mesh.vertices[b]).normalized());
      const int idx = static_cast<int>(mesh.vertices.size()) - 1;
      midpoints.emplace(key, idx);
      return idx;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(mesh.faces.size() * 4);
    for (const auto& f : mesh.faces) {
      const int ab = midpoint(f[0], f[1]);
      const int bc = midpoint(f[1], f[2]);
      const int ca = midpoint(f[2], f[0]);
      next.push_back({f[0], ab, ca});
      next.push_back({f[1], bc, ab});
      next.push_back({f[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    mesh.faces = std::move(next);
  }
  return mesh;
}

std::string site_color(std::size_t site) {
  // Golden-ratio hue walk, fixed saturation and value.
  const double h = std::fmod(0.13 + 0.618033988749895 * static_cast<double>(site), 1.0);
  const double s = 0.55;
  const double v = 0.92;
  const int sector = static_cast<int>(h * 6.0);
  const double f = h * 6.0 - sector;
  const double p = v * (1 - s), q = v * (1 - f * s), u = v * (1 - (1 - f) * s);
  double r = v, g = u, b = p;
  switch (sector % 6) {
    case 1: r = q; g = v; b = p; break;
    case 2: r = p; g = v; b = u; break;
    case 3: r = p; g = q; b = v; break;
    case 4: r = u; g = p; b = v; break;
    case 5: r = v; g = p; b = q; break;
    default: break;
  }
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(r * 255 + 0.5),
                static_cast<int>(g * 255 + 0.5), static_cast<int>(b * 255 + 0.5));
  return buf;
}

}  // namespace

std::optional<ExportFormat> parse_export_format(std::string_view name) {
  if (name == "off") return ExportFormat::Off;
  if (name == "svg") return ExportFormat::Svg;
  return std::nullopt;
}

SphereMesh sphere_cell_mesh(const SiteSet& sites, DiagramMode mode,
                            const ExportOptions& options) {
  if (sites.empty()) {
    throw SiteError("cannot export an empty site set");
  }
  if (options.subdivisions < 0 || options.subdivisions > 8) {
    throw std::invalid_argument("subdivisions must lie in [0, 8]");
  }
  SphereMesh mesh = icosphere(options.subdivisions);
  std::vector<BlochVector> centroids;
  centroids.reserve(mesh.faces.size());
  for (const auto& f : mesh.faces) {
    const Vec3 c = mesh.vertices[f[0]] + mesh.vertices[f[1]] + mesh.vertices[f[2]];
    centroids.emplace_back(c.normalized());
  }
  const DiagramAssignment a =
      options.epsilon ? pure_limit_section(sites, *options.epsilon, mode, centroids)
                      : assign(mode, sites, centroids);
  mesh.face_site.reserve(a.entries.size());
  for (const auto& e : a.entries) {
    mesh.face_site.push_back(e.site);
  }
  return mesh;
}

std::string to_off(const SphereMesh& mesh) {
  std::ostringstream os;
  os << "OFF\n# face color index = owning site\n";
  os << mesh.vertices.size() << ' ' << mesh.faces.size() << " 0\n";
  char buf[128];
  for (const auto& v : mesh.vertices) {
    std::snprintf(buf, sizeof buf, "%.12g %.12g %.12g\n", v.x(), v.y(), v.z());
    os << buf;
  }
  for (std::size_t i = 0; i < mesh.faces.size(); ++i) {
    const auto& f = mesh.faces[i];
    os << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << ' ' << mesh.face_site[i]
       << '\n';
  }
  return os.str();
}

std::string to_svg(const SphereMesh& mesh, const SiteSet& sites) {
  // Faces near the projection pole blow up; clip to the disk of radius 3.
  constexpr double kClip = 3.0;
  constexpr double kScale = 100.0;
  const double half = kClip * kScale;
  auto project = [&](const Vec3& p) {
    const double d = 1.0 - p.z();
    return std::pair<double, double>(half + kScale * p.x() / d,
                                     half - kScale * p.y() / d);
  };
  const double z_limit = (kClip * kClip - 1.0) / (kClip * kClip + 1.0);

  std::ostringstream os;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" "
                "viewBox=\"0 0 %d %d\">\n",
                static_cast<int>(2 * half), static_cast<int>(2 * half),
                static_cast<int>(2 * half), static_cast<int>(2 * half));
  os << buf;
  for (std::size_t i = 0; i < mesh.faces.size(); ++i) {
    const auto& f = mesh.faces[i];
    bool clipped = false;
    for (int k : f) clipped = clipped || mesh.vertices[k].z() > z_limit;
    if (clipped) continue;
    const std::string color = site_color(mesh.face_site[i]);
    os << "<polygon points=\"";
    for (int c = 0; c < 3; ++c) {
      const auto [x, y] = project(mesh.vertices[f[c]]);
      std::snprintf(buf, sizeof buf, "%s%.3f,%.3f", c ? " " : "", x, y);
      os << buf;
    }
    os << "\" fill=\"" << color << "\" stroke=\"" << color << "\" stroke-width=\"0.3\"/>\n";
  }
  std::snprintf(buf, sizeof buf,
                "<circle cx=\"%.3f\" cy=\"%.3f\" r=\"%.3f\" fill=\"none\" "
                "stroke=\"#444444\" stroke-dasharray=\"4 3\"/>\n",
                half, half, kScale);
  os << buf;
  for (std::size_t i = 0; i < sites.size(); ++i) {
    const Vec3& s = sites[i].vec();
    const double r = sites[i].radius();
    if (r == 0.0) continue;
    const Vec3 p = s / r;
    if (p.z() > z_limit) continue;
    const auto [x, y] = project(p);
    std::snprintf(buf, sizeof buf,
                  "<circle cx=\"%.3f\" cy=\"%.3f\" r=\"3\" fill=\"#000000\"/>"
                  "<text x=\"%.3f\" y=\"%.3f\" font-size=\"10\">%zu</text>\n",
                  x, y, x + 4.0, y - 4.0, i);
    os << buf;
  }
  os << "</svg>\n";
  return os.str();
}

std::string export_cells(const SiteSet& sites, DiagramMode mode,
                         ExportFormat format, const ExportOptions& options) {
  const SphereMesh mesh = sphere_cell_mesh(sites, mode, options);
  switch (format) {
    case ExportFormat::Off: return to_off(mesh);
    case ExportFormat::Svg: return to_svg(mesh, sites);
  }
  throw std::invalid_argument("unsupported export format");
}

}  // namespace qbloch
