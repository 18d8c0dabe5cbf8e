#include "qbloch/capacity.hpp"
#include "qbloch/channels.hpp"
#include "qbloch/core.hpp"
#include "qbloch/geometry.hpp"
#include "qbloch/io.hpp"
#include "qbloch/sampling.hpp"
#include "qbloch/verify.hpp"
#include "qbloch/voronoi.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace qbloch;

namespace {

using Triple = std::array<double, 3>;

BlochVector bv(const Triple& t) { return BlochVector(t[0], t[1], t[2]); }
Triple tup(const Vec3& v) { return {v.x(), v.y(), v.z()}; }
Triple tup(const BlochVector& v) { return tup(v.vec()); }

std::vector<BlochVector> bvs(const std::vector<Triple>& ts) {
  std::vector<BlochVector> out;
  out.reserve(ts.size());
  for (const auto& t : ts) out.push_back(bv(t));
  return out;
}

DiagramMode mode_of(const std::string& name) {
  const auto m = parse_mode(name);
  if (!m) throw std::invalid_argument("unknown mode '" + name + "'");
  return *m;
}

py::dict ball_dict(const EnclosingBall& b) {
  py::dict d;
  d["center"] = tup(b.center);
  d["radius"] = b.radius;
  d["support"] = b.support;
  d["weights"] = b.weights;
  return d;
}

py::list assignment_list(const DiagramAssignment& a) {
  py::list out;
  for (const auto& e : a.entries) out.append(py::make_tuple(e.site, e.margin));
  return out;
}

}  // namespace

PYBIND11_MODULE(_qbloch, m) {
  m.doc() = "Bloch-ball geometry, divergence Voronoi diagrams and Holevo capacity";

  py::register_exception<InvalidChannel>(m, "InvalidChannel", PyExc_ValueError);
  py::register_exception<ModeMisuse>(m, "ModeMisuse", PyExc_ValueError);
  py::register_exception<SiteError>(m, "SiteError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
  py::register_exception<NonConvergence>(m, "NonConvergence", PyExc_RuntimeError);

  // states
  m.def("from_bloch", [](const Triple& v) { return from_bloch(bv(v)).matrix(); }, py::arg("v"));
  m.def("to_bloch", [](const Mat2c& rho) { return tup(to_bloch(DensityMatrix(rho))); },
        py::arg("rho"));
  m.def("eigenvalues", [](const Triple& v) { return eigenvalues(bv(v)); }, py::arg("v"));
  m.def("log_density", [](const Triple& v) { return log_density(bv(v)); }, py::arg("v"));
  m.def("entropy", [](const Triple& v) { return entropy(bv(v)); }, py::arg("v"),
        "von Neumann entropy in nats");
  m.def("potential", [](const Triple& v) { return potential(bv(v)); }, py::arg("v"));

  // distances and divergences
  m.def("fubini_study", [](const Triple& a, const Triple& b) { return fubini_study(bv(a), bv(b)); });
  m.def("bures", [](const Triple& a, const Triple& b) { return bures(bv(a), bv(b)); });
  m.def("geodesic", [](const Triple& a, const Triple& b) { return geodesic(bv(a), bv(b)); });
  m.def("euclidean", [](const Triple& a, const Triple& b) { return euclidean(bv(a), bv(b)); });
  m.def("divergence",
        [](const Triple& a, const Triple& b) { return divergence_closed(bv(a), bv(b)).value(); },
        py::arg("a"), py::arg("b"), "quantum relative entropy D(a || b) in nats");
  m.def("divergence_matrix",
        [](const Triple& a, const Triple& b) { return divergence_matrix(bv(a), bv(b)).value(); },
        py::arg("a"), py::arg("b"));
  m.def("grad_potential", [](const Triple& v) { return tup(grad_potential(bv(v)).vec()); });
  m.def("inverse_grad", [](const Triple& d) {
    return tup(inverse_grad(DualCoordinates(d[0], d[1], d[2])));
  });
  m.def("conjugate_potential", [](const Triple& d) {
    return conjugate_potential(DualCoordinates(d[0], d[1], d[2]));
  });

  m.def("sample_sphere",
        [](std::size_t n, std::uint64_t seed) {
          std::vector<Triple> out;
          for (const auto& p : sample_sphere(n, seed)) out.push_back(tup(p));
          return out;
        },
        py::arg("n"), py::arg("seed") = 0);

  // channels
  py::class_<AffineChannel>(m, "AffineChannel")
      .def(py::init([](const Mat3& mat, const Triple& b, std::string label) {
             return AffineChannel(mat, Vec3(b[0], b[1], b[2]), std::move(label));
           }),
           py::arg("matrix"), py::arg("offset"), py::arg("label") = "")
      .def_property_readonly("matrix", &AffineChannel::matrix)
      .def_property_readonly("offset", [](const AffineChannel& c) { return tup(c.offset()); })
      .def_property_readonly("label", &AffineChannel::label)
      .def("apply", [](const AffineChannel& c, const Triple& v) { return tup(c.apply(bv(v))); })
      .def("to_json", &channel_to_json)
      .def_static("from_json", &parse_channel_json)
      .def_static("identity", &AffineChannel::identity)
      .def_static("depolarizing", &AffineChannel::depolarizing, py::arg("t"))
      .def_static("planar", &AffineChannel::planar, py::arg("tx"), py::arg("ty"))
      .def_static("amplitude_damping", &AffineChannel::amplitude_damping, py::arg("gamma"))
      .def_static("phase_damping", &AffineChannel::phase_damping, py::arg("lam"))
      .def_static("rotation",
                  [](const Triple& axis, double angle) {
                    return AffineChannel::rotation(Vec3(axis[0], axis[1], axis[2]), angle);
                  },
                  py::arg("axis"), py::arg("angle"))
      .def("__repr__", [](const AffineChannel& c) { return "AffineChannel(" + c.label() + ")"; });

  // enclosing balls and capacity
  m.def("meb_exact", [](const std::vector<Triple>& p) { return ball_dict(meb_exact(bvs(p))); });
  m.def("meb_iterative",
        [](const std::vector<Triple>& p, double tol, int max_iter) {
          return ball_dict(meb_iterative(bvs(p), tol, max_iter));
        },
        py::arg("points"), py::arg("tol") = 1e-12, py::arg("max_iter") = 200000);
  m.def("meb_grid",
        [](const std::vector<Triple>& p, int resolution) {
          return ball_dict(meb_grid(bvs(p), resolution));
        },
        py::arg("points"), py::arg("resolution") = 16);
  m.def("holevo_capacity",
        [](const AffineChannel& c, std::size_t n, double tol, std::uint64_t seed) {
          const auto r = holevo_capacity(c, n, tol, seed);
          py::dict d;
          d["label"] = r.label;
          d["n_samples"] = r.n_samples;
          d["capacity_nats"] = r.capacity_nats;
          d["capacity_bits"] = r.capacity_bits;
          d["center"] = tup(r.center);
          d["support"] = r.support;
          d["solver_gap"] = r.solver_gap;
          d["degenerate"] = r.degenerate;
          return d;
        },
        py::arg("channel"), py::arg("n_samples") = 2000, py::arg("tol") = 1e-12,
        py::arg("seed") = 0);

  // diagrams
  m.attr("MODES") = [] {
    std::vector<std::string> names;
    for (auto md : kAllModes) names.emplace_back(to_string(md));
    return names;
  }();
  m.def("classify",
        [](const std::string& mode, const std::vector<Triple>& sites, const Triple& q) {
          const auto c = classify(mode_of(mode), SiteSet(bvs(sites)), bv(q));
          return py::make_tuple(c.site, c.margin);
        },
        py::arg("mode"), py::arg("sites"), py::arg("query"),
        "(site index, margin); ties go to the lowest index");
  m.def("assign",
        [](const std::string& mode, const std::vector<Triple>& sites,
           const std::vector<Triple>& queries) {
          return assignment_list(assign(mode_of(mode), SiteSet(bvs(sites)), bvs(queries)));
        },
        py::arg("mode"), py::arg("sites"), py::arg("queries"));
  m.def("pure_limit_section",
        [](const std::vector<Triple>& sites, double eps, const std::string& mode,
           const std::vector<Triple>& queries) {
          return assignment_list(
              pure_limit_section(SiteSet(bvs(sites)), eps, mode_of(mode), bvs(queries)));
        },
        py::arg("sites"), py::arg("epsilon"), py::arg("mode"), py::arg("queries"));
  m.def("export_cells",
        [](const std::vector<Triple>& sites, const std::string& mode, const std::string& format,
           std::optional<double> eps) {
          const auto f = parse_export_format(format);
          if (!f) throw std::invalid_argument("format must be off or svg");
          ExportOptions opts;
          opts.epsilon = eps;
          return export_cells(SiteSet(bvs(sites)), mode_of(mode), *f, opts);
        },
        py::arg("sites"), py::arg("mode"), py::arg("format") = "off",
        py::arg("epsilon") = py::none());

  m.def("verify",
        [](std::optional<std::string> only, std::uint64_t seed) {
          VerifyOptions opts;
          opts.only = std::move(only);
          opts.seed = seed;
          py::list out;
          for (const auto& r : run_verification(opts)) {
            py::dict d;
            d["suite"] = r.suite;
            d["property"] = r.property;
            d["max_error"] = r.max_error;
            d["tolerance"] = r.tolerance;
            d["pass"] = r.pass;
            d["note"] = r.note;
            out.append(d);
          }
          return out;
        },
        py::arg("only") = py::none(), py::arg("seed") = 0);
}
