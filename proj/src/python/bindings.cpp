#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "leastgrad/barrier.hpp"
#include "leastgrad/cli/gallery.hpp"
#include "leastgrad/errors.hpp"
#include "leastgrad/functional.hpp"
#include "leastgrad/imaging.hpp"
#include "leastgrad/report.hpp"
#include "leastgrad/solver.hpp"
#include "leastgrad/structure.hpp"

namespace py = pybind11;
using namespace leastgrad;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

// Fields cross the boundary as (ny, nx) arrays, row 0 at the bottom.
ScalarGrid to_grid(const Array& a, const GridGeometry& g) {
  if (a.ndim() != 2 || a.shape(0) != g.ny || a.shape(1) != g.nx) {
    throw DimensionError("expected an array of shape (" + std::to_string(g.ny) + ", " + std::to_string(g.nx) + ")");
  }
  ScalarGrid out(g);
  std::copy(a.data(), a.data() + g.cells(), out.values().begin());
  return out;
}

Array to_array(const ScalarGrid& s) {
  const GridGeometry& g = s.geometry();
  Array out({g.ny, g.nx});
  std::copy(s.values().begin(), s.values().end(), out.mutable_data());
  return out;
}

VectorGrid to_vgrid(const Array& a, const GridGeometry& g) {
  if (a.ndim() != 3 || a.shape(0) != g.ny || a.shape(1) != g.nx || a.shape(2) != 2) {
    throw DimensionError("expected an array of shape (ny, nx, 2)");
  }
  VectorGrid out(g);
  const double* p = a.data();
  for (int c = 0; c < g.cells(); ++c) out[c] = {p[2 * c], p[2 * c + 1]};
  return out;
}

Array to_array(const VectorGrid& v) {
  const GridGeometry& g = v.geometry();
  Array out({g.ny, g.nx, 2});
  double* p = out.mutable_data();
  for (int c = 0; c < g.cells(); ++c) {
    p[2 * c] = v[c].x;
    p[2 * c + 1] = v[c].y;
  }
  return out;
}

Sym2 to_sym(const std::vector<double>& t) {
  if (t.size() != 3) throw DomainError("tensor expects (xx, xy, yy)");
  return {t[0], t[1], t[2]};
}

MetricField make_metric(const std::string& kind, const py::object& weight, const std::vector<double>& tensor,
                        const DomainMask& mask) {
  const GridGeometry& g = mask.geometry();
  ScalarGrid a = py::isinstance<py::float_>(weight) || py::isinstance<py::int_>(weight)
                     ? ScalarGrid(g, weight.cast<double>())
                     : to_grid(weight.cast<Array>(), g);
  const NormKind k = parse_norm_kind(kind);
  std::vector<Sym2> sigma;
  if (k == NormKind::Riemannian) sigma.assign(static_cast<std::size_t>(g.cells()), to_sym(tensor));
  return MetricField(k, std::move(a), std::move(sigma));
}

std::string json_text(const Json& j) { return j.dump(); }

}  // namespace

PYBIND11_MODULE(_leastgrad, m) {
  m.doc() = "Least gradient problems with inhomogeneous anisotropic norms";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  py::class_<DomainMask>(m, "DomainMask")
      .def_property_readonly("nx", [](const DomainMask& d) { return d.geometry().nx; })
      .def_property_readonly("ny", [](const DomainMask& d) { return d.geometry().ny; })
      .def_property_readonly("h", [](const DomainMask& d) { return d.geometry().h; })
      .def_property_readonly("origin",
                             [](const DomainMask& d) { return py::make_tuple(d.geometry().origin.x, d.geometry().origin.y); })
      .def_property_readonly("interior",
                             [](const DomainMask& d) {
                               ScalarGrid s(d.geometry());
                               for (int c : d.interior_cells()) s[c] = 1.0;
                               return to_array(s);
                             })
      .def_property_readonly("face_count", [](const DomainMask& d) { return d.faces().size(); })
      .def_property_readonly("boundary_measure", &DomainMask::boundary_measure)
      .def("centers",
           [](const DomainMask& d) {
             const GridGeometry& g = d.geometry();
             ScalarGrid x(g), y(g);
             for (int c = 0; c < g.cells(); ++c) {
               x[c] = g.center(c).x;
               y[c] = g.center(c).y;
             }
             return py::make_tuple(to_array(x), to_array(y));
           },
           "cell-centre coordinates (X, Y)");

  m.def("build_mask", [](const std::string& shape, int n) { return build_mask(parse_shape(shape), n); },
        py::arg("shape"), py::arg("n"));

  m.def("phi",
        [](const std::string& kind, double a, const std::vector<double>& tensor, double x, double y) {
          return LocalNorm(parse_norm_kind(kind), a, to_sym(tensor)).phi({x, y});
        },
        py::arg("kind"), py::arg("a"), py::arg("tensor") = std::vector<double>{1, 0, 1}, py::arg("x"), py::arg("y"));
  m.def("dual_norm",
        [](const std::string& kind, double a, const std::vector<double>& tensor, double x, double y) {
          return LocalNorm(parse_norm_kind(kind), a, to_sym(tensor)).dual({x, y});
        },
        py::arg("kind"), py::arg("a"), py::arg("tensor") = std::vector<double>{1, 0, 1}, py::arg("x"), py::arg("y"));
  m.def("project_dual_ball",
        [](const std::string& kind, double a, const std::vector<double>& tensor, double x, double y) {
          const Vec2 p = LocalNorm(parse_norm_kind(kind), a, to_sym(tensor)).project({x, y});
          return py::make_tuple(p.x, p.y);
        },
        py::arg("kind"), py::arg("a"), py::arg("tensor") = std::vector<double>{1, 0, 1}, py::arg("x"), py::arg("y"));

  m.def("solve",
        [](const Array& f, const DomainMask& mask, const std::string& kind, const py::object& weight,
           const std::vector<double>& tensor, long max_iters, double tol_gap, double tol_div, long check_every) {
          const MetricField metric = make_metric(kind, weight, tensor, mask);
          SolverOptions o;
          o.max_iters = max_iters;
          o.tol_gap = tol_gap;
          o.tol_div = tol_div;
          o.check_every = check_every;
          SolveResult r;
          {
            py::gil_scoped_release release;
            r = solve_relaxed(to_grid(f, mask.geometry()), metric, mask, o);
          }
          return py::make_tuple(to_array(r.u), to_array(r.T), json_text(to_json(r.report, true)));
        },
        py::arg("f"), py::arg("mask"), py::arg("kind") = "isotropic", py::arg("weight") = 1.0,
        py::arg("tensor") = std::vector<double>{1, 0, 1}, py::arg("max_iters") = 200000, py::arg("tol_gap") = 1e-3,
        py::arg("tol_div") = 1e-6, py::arg("check_every") = 100);

  m.def("duality_gap",
        [](const Array& u, const Array& f, const Array& t, const DomainMask& mask, const std::string& kind,
           const py::object& weight, const std::vector<double>& tensor) {
          const GridGeometry& g = mask.geometry();
          const MetricField metric = make_metric(kind, weight, tensor, mask);
          return json_text(to_json(duality_gap(to_grid(u, g), to_grid(f, g), metric, mask, to_vgrid(t, g))));
        },
        py::arg("u"), py::arg("f"), py::arg("T"), py::arg("mask"), py::arg("kind") = "isotropic",
        py::arg("weight") = 1.0, py::arg("tensor") = std::vector<double>{1, 0, 1});

  m.def("green_identity_residual",
        [](const Array& u, const Array& v, const DomainMask& mask) {
          return green_identity_residual(to_grid(u, mask.geometry()), to_vgrid(v, mask.geometry()), mask);
        },
        py::arg("u"), py::arg("V"), py::arg("mask"));

  m.def("phi_perimeter",
        [](const std::string& set, const DomainMask& mask, const std::string& kind, const py::object& weight,
           const std::vector<double>& tensor) {
          const MetricField metric = make_metric(kind, weight, tensor, mask);
          return phi_perimeter(indicator(parse_shape(set), mask.geometry()), metric, mask);
        },
        py::arg("set"), py::arg("mask"), py::arg("kind") = "isotropic", py::arg("weight") = 1.0,
        py::arg("tensor") = std::vector<double>{1, 0, 1});

  m.def("alignment_report",
        [](const Array& u, const Array& t, const DomainMask& mask, const std::string& kind, const py::object& weight,
           const std::vector<double>& tensor) {
          const GridGeometry& g = mask.geometry();
          const MetricField metric = make_metric(kind, weight, tensor, mask);
          const AlignmentReport r = alignment_report(to_grid(u, g), to_vgrid(t, g), metric, mask);
          return py::make_tuple(to_array(r.residual), json_text(to_json(r)));
        },
        py::arg("u"), py::arg("T"), py::arg("mask"), py::arg("kind") = "isotropic", py::arg("weight") = 1.0,
        py::arg("tensor") = std::vector<double>{1, 0, 1});

  m.def("boundary_jump_report",
        [](const Array& u, const Array& f, const Array& t, const DomainMask& mask, const std::string& kind,
           const py::object& weight, const std::vector<double>& tensor) {
          const GridGeometry& g = mask.geometry();
          const MetricField metric = make_metric(kind, weight, tensor, mask);
          const ScalarGrid fg = to_grid(f, g);
          const BoundaryJumpReport r = boundary_jump_report(to_grid(u, g), fg, to_vgrid(t, g), metric, mask);
          Json j = to_json(r, mask);
          j["arcs"] = to_json(nonexistence_diagnostic(r, fg, mask));
          return json_text(j);
        },
        py::arg("u"), py::arg("f"), py::arg("T"), py::arg("mask"), py::arg("kind") = "isotropic",
        py::arg("weight") = 1.0, py::arg("tensor") = std::vector<double>{1, 0, 1});

  m.def("level_sets",
        [](const Array& u, const DomainMask& mask, double level) {
          std::vector<std::vector<std::pair<double, double>>> out;
          for (const Polyline& p : level_sets(to_grid(u, mask.geometry()), mask, level)) {
            auto& line = out.emplace_back();
            for (const Vec2& q : p.points) line.emplace_back(q.x, q.y);
          }
          return out;
        },
        py::arg("u"), py::arg("mask"), py::arg("level"));

  m.def("signed_distance",
        [](const std::string& shape, const DomainMask& mask) {
          return to_array(signed_distance_field(parse_shape(shape), mask.geometry()));
        },
        py::arg("shape"), py::arg("mask"));

  m.def("barrier",
        [](const std::string& shape, int n, const std::string& kind, const py::object& weight,
           const std::vector<double>& tensor) {
          const Shape s = parse_shape(shape);
          const DomainMask mask = build_mask(s, n);
          const MetricField metric = make_metric(kind, weight, tensor, mask);
          const BarrierReport r = barrier_indicator(metric, signed_distance_field(s, mask.geometry()), mask);
          return json_text(to_json(r, classify(r, mask)));
        },
        py::arg("shape"), py::arg("n"), py::arg("kind") = "isotropic", py::arg("weight") = 1.0,
        py::arg("tensor") = std::vector<double>{1, 0, 1});

  m.def("imaging",
        [](const std::string& phantom_kind, int n, const std::string& shape, double data_scale) {
          Phantom ph;
          ph.kind = parse_phantom_kind(phantom_kind);
          const ImagingProblem p =
              make_problem(ph, parse_shape(shape), n, [data_scale](const Vec2& q) { return data_scale * q.x; });
          ImagingReport r;
          {
            py::gil_scoped_release release;
            r = run_pipeline(p);
          }
          return py::make_tuple(to_array(r.recovery.c), to_array(p.c_true), json_text(to_json(r)));
        },
        py::arg("phantom"), py::arg("n"), py::arg("shape") = "box:1,1", py::arg("data_scale") = 1.0);

  m.def("gallery_ids", [] {
    std::vector<std::string> ids;
    for (const auto& e : cli::gallery()) ids.push_back(e.id);
    return ids;
  });
  m.def("gallery_run",
        [](const std::string& id) {
          cli::GalleryOutcome o;
          {
            py::gil_scoped_release release;
            o = cli::gallery_run(cli::gallery_entry(id));
          }
          return json_text(o.report);
        },
        py::arg("id"));
}
