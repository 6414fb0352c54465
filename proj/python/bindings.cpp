#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "logpot/disc_spectrum.hpp"
#include "logpot/error.hpp"
#include "logpot/experiments.hpp"
#include "logpot/io.hpp"
#include "logpot/rearrange.hpp"
#include "logpot/solver.hpp"
#include "logpot/specfun.hpp"
#include "logpot/tdiam.hpp"
#include "logpot/verify.hpp"

namespace py = pybind11;
using namespace logpot;
using io::json;

namespace {

using MaskPtr = std::shared_ptr<PixelMask>;

py::object to_py(const json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

json from_py(const py::handle& obj) {
  if (py::isinstance<py::str>(obj)) return json::parse(obj.cast<std::string>());
  return json::parse(py::module_::import("json").attr("dumps")(obj).cast<std::string>());
}

Shape make_shape(const py::handle& spec) {
  if (py::isinstance<Shape>(spec)) return spec.cast<Shape>();
  if (py::isinstance<py::str>(spec)) return io::load_shape(spec.cast<std::string>());
  return io::shape_from_json(from_py(spec));
}

Polarizer make_polarizer(const std::vector<double>& normal, double offset, double h) {
  if (normal.size() != 2) throw InputError("normal must have two components");
  const double len = std::hypot(normal[0], normal[1]);
  if (!(len > 0.0)) throw InputError("normal must be nonzero");
  return Polarizer::on_grid({normal[0] / len, normal[1] / len}, offset, h);
}

py::array_t<double> points_array(const std::vector<Vec2>& pts) {
  py::array_t<double> a({static_cast<py::ssize_t>(pts.size()), py::ssize_t{2}});
  auto v = a.mutable_unchecked<2>();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    v(i, 0) = pts[i].x;
    v(i, 1) = pts[i].y;
  }
  return a;
}

// Row 0 of the array is the bottom row of the grid.
py::array_t<std::uint8_t> occupancy_array(const PixelMask& m) {
  py::array_t<std::uint8_t> a({static_cast<py::ssize_t>(m.ny()), static_cast<py::ssize_t>(m.nx())});
  std::copy(m.occupancy().begin(), m.occupancy().end(), a.mutable_data());
  return a;
}

GridFunction grid_function(const MaskPtr& mask, const py::array_t<double, py::array::c_style | py::array::forcecast>& values) {
  if (values.ndim() != 1 || static_cast<std::size_t>(values.shape(0)) != mask->active_count())
    throw InputError("values must be a 1-d array with one entry per active cell");
  return GridFunction(mask, std::vector<double>(values.data(), values.data() + values.shape(0)));
}

py::array_t<double> values_array(const GridFunction& u) {
  return py::array_t<double>(static_cast<py::ssize_t>(u.size()), u.values().data());
}

RunOptions run_options(std::uint64_t seed, int threads) {
  RunOptions o;
  o.eig.seed = seed;
  o.threads = threads;
  o.assemble.threads = threads;
  return o;
}

EigenMethod parse_method(const std::string& m) {
  if (m == "auto") return EigenMethod::Auto;
  if (m == "dense") return EigenMethod::Dense;
  if (m == "jacobi") return EigenMethod::Jacobi;
  if (m == "lanczos") return EigenMethod::Lanczos;
  throw InputError("unknown method '" + m + "'");
}

} // namespace

PYBIND11_MODULE(_logpot, m) {
  m.doc() = "Logarithmic potential operator on planar domains";

  auto base = py::register_exception<Error>(m, "LogpotError", PyExc_RuntimeError);
  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());

  m.def("bessel_zero", &specfun::bessel_zero, py::arg("m"), py::arg("n"));
  m.def("mu_modified", [](double R) { return specfun::mu_modified(R).value; }, py::arg("R"));
  m.def("asymptotic_neg", &asymptotic_neg, py::arg("R"));
  m.def("leading_eigs", [](double R, int count) {
    json arr = json::array();
    for (const auto& e : leading_eigs(R, count)) arr.push_back(io::to_json(e));
    return to_py(arr);
  }, py::arg("R"), py::arg("count") = 3);
  m.def("neg_eig", [](double R) { return to_py(io::to_json(neg_eig(R))); }, py::arg("R"));

  py::class_<Shape>(m, "Shape")
      .def(py::init([](const py::object& spec) { return make_shape(spec); }), py::arg("spec"))
      .def_property_readonly("kind", [](const Shape& s) { return kind_name(s); })
      .def("contains", [](const Shape& s, double x, double y) { return contains(s, {x, y}); })
      .def("bounds", [](const Shape& s) {
        const BBox b = bounds(s);
        return py::make_tuple(b.lo.x, b.lo.y, b.hi.x, b.hi.y);
      })
      .def("area", [](const Shape& s) { return nominal_area(s); })
      .def("to_dict", [](const Shape& s) { return to_py(io::shape_to_json(s)); })
      .def("__repr__", [](const Shape& s) { return "Shape(" + io::shape_to_json(s).dump() + ")"; });

  py::class_<PixelMask, MaskPtr>(m, "Mask")
      .def_property_readonly("h", &PixelMask::h)
      .def_property_readonly("origin", [](const PixelMask& k) { return py::make_tuple(k.origin().x, k.origin().y); })
      .def_property_readonly("nx", &PixelMask::nx)
      .def_property_readonly("ny", &PixelMask::ny)
      .def_property_readonly("cells", &PixelMask::active_count)
      .def_property_readonly("area", &PixelMask::area)
      .def_property_readonly("occupancy", &occupancy_array)
      .def("centers", [](const PixelMask& k) { return points_array(k.active_centers()); })
      .def("diameter", [](const PixelMask& k) { return diameter(k); })
      .def("metadata", [](const PixelMask& k) { return to_py(io::mask_metadata(k)); })
      .def("to_pbm", &io::mask_to_pbm)
      .def_static("from_pbm", [](const std::string& text) { return std::make_shared<PixelMask>(io::mask_from_pbm(text)); })
      .def("same_cells", [](const PixelMask& a, const PixelMask& b) { return same_cells(a, b); })
      .def("__len__", &PixelMask::active_count);

  m.def("rasterize", [](const py::object& spec, double h) {
    return std::make_shared<PixelMask>(rasterize(make_shape(spec), h));
  }, py::arg("shape"), py::arg("h"));

  m.def("solve", [](const MaskPtr& mask, const std::string& kernel, int topk, const std::string& method,
                    bool vectors, std::uint64_t seed, std::size_t max_cells, int threads) {
    json j;
    {
      py::gil_scoped_release release;
      const KernelSpec k = parse_kernel(kernel);
      AssembleOptions ao;
      ao.max_cells = max_cells;
      ao.threads = threads;
      const auto A = assemble(mask, k, ao);
      EigOptions eo;
      eo.method = parse_method(method);
      eo.seed = seed;
      const auto r = extremal_eigs(A, topk, eo);
      j = io::to_json(r, *mask, k, vectors);
      if (k.kind == KernelSpec::Kind::Log) j["sign_check"] = io::to_json(positive_sign_check(r, *mask));
    }
    return to_py(j);
  }, py::arg("mask"), py::arg("kernel") = "log", py::arg("topk") = 3, py::arg("method") = "auto",
        py::arg("vectors") = false, py::arg("seed") = 0, py::arg("max_cells") = 0, py::arg("threads") = 1);

  m.def("matrix", [](const MaskPtr& mask, const std::string& kernel, std::size_t max_cells) {
    AssembleOptions ao;
    ao.max_cells = max_cells;
    const auto A = assemble(mask, parse_kernel(kernel), ao);
    const Eigen::MatrixXd& d = A.dense();
    py::array_t<double> a({static_cast<py::ssize_t>(d.rows()), static_cast<py::ssize_t>(d.cols())});
    auto v = a.mutable_unchecked<2>();
    for (Eigen::Index i = 0; i < d.rows(); ++i)
      for (Eigen::Index k = 0; k < d.cols(); ++k) v(i, k) = d(i, k);
    return a;
  }, py::arg("mask"), py::arg("kernel") = "log", py::arg("max_cells") = 0);

  m.def("refine", [](const py::object& spec, const std::vector<double>& h_list, const std::string& kernel,
                     std::uint64_t seed) {
    const Shape s = make_shape(spec);
    const KernelSpec k = parse_kernel(kernel);
    RefineTable t;
    {
      py::gil_scoped_release release;
      EigOptions eo;
      eo.seed = seed;
      t = refine_study(s, k, h_list, eo);
    }
    json j = io::to_json(t);
    j["kernel"] = k.name();
    return to_py(j);
  }, py::arg("shape"), py::arg("h_list"), py::arg("kernel") = "log", py::arg("seed") = 0);

  m.def("polarize", [](const MaskPtr& mask, const std::vector<double>& normal, double offset) {
    return std::make_shared<PixelMask>(polarize_set(*mask, make_polarizer(normal, offset, mask->h())));
  }, py::arg("mask"), py::arg("normal"), py::arg("offset") = 0.0);
  m.def("schwarz", [](const MaskPtr& mask) { return std::make_shared<PixelMask>(schwarz_set(*mask)); },
        py::arg("mask"));

  m.def("polarize_values", [](const MaskPtr& mask, const py::array_t<double, py::array::c_style | py::array::forcecast>& values,
                              const std::vector<double>& normal, double offset) {
    const GridFunction u = grid_function(mask, values);
    const GridFunction p = polarize_fn(u, make_polarizer(normal, offset, mask->h()));
    return py::make_tuple(std::const_pointer_cast<PixelMask>(p.mask_ptr()), values_array(p));
  }, py::arg("mask"), py::arg("values"), py::arg("normal"), py::arg("offset") = 0.0);

  m.def("energy", [](const MaskPtr& mask, const py::array_t<double, py::array::c_style | py::array::forcecast>& values,
                     const std::string& kernel) {
    return discrete_energy(grid_function(mask, values), parse_kernel(kernel));
  }, py::arg("mask"), py::arg("values"), py::arg("kernel") = "log");

  m.def("polarization_gap", [](const MaskPtr& mask, std::optional<std::vector<double>> normal, double offset,
                               bool force, std::uint64_t seed) {
    GapResult g;
    const auto o = run_options(seed, 1);
    if (normal) {
      const Polarizer H = make_polarizer(*normal, offset, mask->h());
      py::gil_scoped_release release;
      g = reverse_fk_polarization(*mask, H, force, o);
    } else {
      py::gil_scoped_release release;
      g = reverse_fk_schwarz(*mask, force, o);
    }
    return to_py(io::to_json(g));
  }, py::arg("mask"), py::arg("normal") = py::none(), py::arg("offset") = 0.0, py::arg("force") = false,
        py::arg("seed") = 0);

  m.def("rho_n", [](const py::object& spec, int n, int restarts, std::uint64_t seed) {
    const Shape s = make_shape(spec);
    FeketeOptions fo;
    fo.restarts = restarts;
    fo.seed = seed;
    FeketeResult r;
    {
      py::gil_scoped_release release;
      r = rho_n(s, n, fo);
    }
    py::dict d;
    d["n"] = r.n;
    d["rho_n"] = r.rho_n;
    d["points"] = points_array(r.points);
    d["restarts_used"] = r.restarts_used;
    return d;
  }, py::arg("shape"), py::arg("n"), py::arg("restarts") = 4, py::arg("seed") = 0);

  m.def("robin_constant", [](const py::object& spec, int nodes) {
    const Shape s = make_shape(spec);
    RobinResult r;
    {
      py::gil_scoped_release release;
      r = robin_constant(s, nodes);
    }
    py::dict d;
    d["V_E"] = r.V_E;
    d["tdiam"] = r.tdiam;
    d["method"] = r.method;
    d["mask_fallback"] = r.mask_fallback;
    d["nodes"] = points_array(r.nodes);
    d["weights"] = r.weights;
    return d;
  }, py::arg("shape"), py::arg("nodes") = 512);

  m.def("tdiam", [](const py::object& spec, int n_max, int nodes, double band, std::uint64_t seed) {
    const Shape s = make_shape(spec);
    if (!(band > 0.0 && band < 1.0)) throw InputError("band must lie in (0, 1)");
    FeketeOptions fo;
    fo.seed = seed;
    TdiamEstimate est;
    {
      py::gil_scoped_release release;
      est = tdiam_estimate(s, n_max, nodes, fo);
    }
    PositivityResult p;
    p.band = band;
    p.tdiam = est.tdiam;
    p.cls = std::abs(est.tdiam - 1.0) < band ? Positivity::Inconclusive
                                              : (est.tdiam < 1.0 ? Positivity::Positive : Positivity::Indefinite);
    return to_py(io::to_json(est, p));
  }, py::arg("shape"), py::arg("n_max") = 12, py::arg("nodes") = 512, py::arg("band") = 0.02, py::arg("seed") = 0);

  m.def("experiment_names", &experiment_names);
  m.def("experiment", [](const std::string& name, const py::object& config, std::uint64_t seed, int threads) {
    const json cfg = config.is_none() ? json::object() : from_py(config);
    const ExperimentJob job = plan_experiment(name, cfg, seed, threads);
    ExperimentReport rep;
    {
      py::gil_scoped_release release;
      rep = job();
    }
    return to_py(io::to_json(rep));
  }, py::arg("name"), py::arg("config") = py::none(), py::arg("seed") = 0, py::arg("threads") = 1);
}
