#include "eik/catalog_json.hpp"
#include "eik/fmm.hpp"
#include "eik/grid.hpp"
#include "eik/solutions.hpp"
#include "eik/symmetry.hpp"
#include "eik/transforms.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#ifndef EIK_VERSION
#define EIK_VERSION "0.0.0"
#endif

namespace py = pybind11;

namespace {

eik::VectorField field_from_text(int n, const std::vector<std::string>& xi,
                                 const std::string& eta) {
  if (static_cast<int>(xi.size()) != n + 1)
    throw std::invalid_argument("xi needs n+1 component strings");
  const auto names = eik::xu_names(n);
  std::vector<eik::Poly> xs;
  for (const auto& s : xi) xs.push_back(eik::Poly::parse(s, names));
  return eik::VectorField(n, std::move(xs), eik::Poly::parse(eta, names));
}

py::dict verdict_dict(const eik::SymmetryVerdict& v, int n) {
  const auto names = eik::xu_names(n);
  py::dict d;
  d["yes"] = v.yes;
  d["violated"] = v.violated;
  if (v.yes) {
    d["lambda0"] = v.lambda0.str(names);
    py::list l1;
    for (const auto& p : v.lambda1) l1.append(p.str(names));
    d["lambda1"] = l1;
  }
  return d;
}

py::list roots_list(const std::vector<eik::EnvelopeRoot>& roots) {
  py::list out;
  for (const auto& r : roots) {
    py::dict d;
    d["u"] = r.u;
    d["tau"] = r.tau;
    d["branch_id"] = r.branch_id;
    d["newton_iters"] = r.newton_iters;
    out.append(d);
  }
  return out;
}

eik::GridField grid_from_parts(const std::vector<double>& origin,
                               const std::vector<double>& spacing,
                               const std::vector<int>& shape,
                               const std::vector<double>& values) {
  eik::GridField g(origin, spacing, shape);
  if (values.size() != g.size())
    throw std::invalid_argument("values length does not match the shape");
  g.values() = values;
  return g;
}

py::dict grid_dict(const eik::GridField& g) {
  py::dict d;
  d["origin"] = g.origin();
  d["spacing"] = g.spacing();
  d["shape"] = g.shape();
  d["values"] = g.values();
  return d;
}

eik::TransformOptions target_opts(
    const std::optional<std::tuple<double, double, int>>& target) {
  eik::TransformOptions opt;
  if (target)
    opt.target = eik::Axis{std::get<0>(*target), std::get<1>(*target),
                           std::get<2>(*target)};
  return opt;
}

}  // namespace

PYBIND11_MODULE(_eiktools, m) {
  m.doc() = "eikonal symmetry and solution toolkit";
  m.attr("__version__") = EIK_VERSION;

  m.def("catalog_count",
        [](int n) { return eik::symmeik1_catalog(n).size(); },
        py::arg("n"), "Number of point-symmetry generators of the c=1 equation.");

  m.def("catalog_names", [](int n) {
    std::vector<std::string> out;
    for (const auto& nf : eik::symmeik1_catalog(n)) out.push_back(nf.name);
    return out;
  }, py::arg("n"));

  m.def("is_symmetry",
        [](int n, int c, const std::vector<std::string>& xi,
           const std::string& eta) {
          const auto f = field_from_text(n, xi, eta);
          return verdict_dict(eik::is_symmetry(f, eik::EikonalProblem(n, c)), n);
        },
        py::arg("n"), py::arg("c"), py::arg("xi"), py::arg("eta"),
        "Exact symmetry verdict for X = xi^mu d_mu + eta d_u; coefficients "
        "are polynomial strings in x0..xn, u.");

  m.def("sampled_check",
        [](int n, int c, const std::vector<std::string>& xi,
           const std::string& eta, int samples, std::uint64_t seed) {
          const auto f = field_from_text(n, xi, eta);
          return eik::sampled_symmetry_check(
              eik::to_smooth(f), eik::EikonalProblem(n, c), samples, seed);
        },
        py::arg("n"), py::arg("c"), py::arg("xi"), py::arg("eta"),
        py::arg("samples") = 1000, py::arg("seed") = 0,
        "Largest prolonged residual over random solution-manifold samples.");

  m.def("euclid2_roots",
        [](const std::string& psi, double x1, double x2) {
          return roots_list(eik::eval_euclid2(
              eik::Poly::parse(psi, eik::tau_names(1)), x1, x2));
        },
        py::arg("psi"), py::arg("x1"), py::arg("x2"),
        "Envelope roots of u = x1 t + x2 sqrt(1-t^2) + psi(t), sorted by u.");

  m.def("solve_envelope",
        [](int n, int k, const std::string& psi,
           const std::vector<std::string>& w, const std::vector<double>& x,
           std::uint64_t seed) {
          const auto tau = eik::tau_names(k);
          std::vector<eik::Poly> ws;
          for (const auto& s : w) ws.push_back(eik::Poly::parse(s, tau));
          const eik::ParametricSolution sol(
              n, k, eik::Poly::parse(psi, tau), std::move(ws));
          eik::EnvelopeOptions opt;
          opt.seed = seed;
          return roots_list(eik::solve_envelope(sol, x, opt));
        },
        py::arg("n"), py::arg("k"), py::arg("psi"), py::arg("w"),
        py::arg("x"), py::arg("seed") = 0,
        "Multistart Newton roots of the rank-k envelope at the point x.");

  m.def("cone_distance", &eik::cone_distance_euclid2, py::arg("x1"),
        py::arg("x2"), py::arg("apex1") = 0.0, py::arg("apex2") = 0.0,
        "Distance to the apex, evaluated through the envelope solver.");

  m.def("fd_residual",
        [](const std::vector<double>& origin, const std::vector<double>& spacing,
           const std::vector<int>& shape, const std::vector<double>& values,
           const std::string& equation, int c) {
          const auto g = grid_from_parts(origin, spacing, shape, values);
          std::size_t evaluated = 0;
          double r = 0;
          if (equation == "minkowski")
            r = eik::fd_residual_minkowski(g, c, &evaluated);
          else if (equation == "euclid")
            r = eik::fd_residual_euclid(g, &evaluated);
          else if (equation == "space-slices")
            r = eik::fd_residual_space_slices(g, &evaluated);
          else if (equation == "hj")
            r = eik::fd_residual_hj(g, &evaluated);
          else
            throw std::invalid_argument(
                "equation must be minkowski, euclid, space-slices or hj");
          return py::make_tuple(r, evaluated);
        },
        py::arg("origin"), py::arg("spacing"), py::arg("shape"),
        py::arg("values"), py::arg("equation"), py::arg("c") = 1,
        "Central-difference residual of a row-major grid sample; returns "
        "(max_residual, evaluated_nodes).");

  m.def("legendre",
        [](const std::vector<double>& origin, const std::vector<double>& spacing,
           const std::vector<int>& shape, const std::vector<double>& values,
           const std::optional<std::tuple<double, double, int>>& target) {
          return grid_dict(eik::legendre_1var(
              grid_from_parts(origin, spacing, shape, values),
              target_opts(target)));
        },
        py::arg("origin"), py::arg("spacing"), py::arg("shape"),
        py::arg("values"), py::arg("target") = std::nullopt,
        "Legendre transform in the first axis; returns the image grid as a "
        "dict with origin/spacing/shape/values.");

  m.def("hodograph",
        [](const std::vector<double>& origin, const std::vector<double>& spacing,
           const std::vector<int>& shape, const std::vector<double>& values,
           const std::optional<std::tuple<double, double, int>>& target) {
          return grid_dict(eik::hodograph(
              grid_from_parts(origin, spacing, shape, values),
              target_opts(target)));
        },
        py::arg("origin"), py::arg("spacing"), py::arg("shape"),
        py::arg("values"), py::arg("target") = std::nullopt,
        "Hodograph transform along axis 0.");

  py::register_exception<eik::DegenerateEnvelopeError>(
      m, "DegenerateEnvelopeError");
  py::register_exception<eik::MonotonicityError>(m, "MonotonicityError");
  py::register_exception<eik::MissingDataError>(m, "MissingDataError");
}
