#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cmaplab/config.hpp"
#include "cmaplab/geo_verify.hpp"
#include "cmaplab/models.hpp"

namespace py = pybind11;
using namespace cmaplab;

namespace {

ChartPoint make_point(const CVec& z, double phi, double phit, const Vec& a, const Vec& b) {
  ChartPoint p;
  p.z = z;
  p.phi = phi;
  p.phit = phit;
  p.a = a;
  p.b = b;
  return p;
}

}  // namespace

PYBIND11_MODULE(_cmaplab, m) {
  m.doc() = "c-map quaternionic metrics, their reductions, and numerical checks";

  py::register_exception<Error>(m, "CmaplabError");

  py::class_<PrepotentialSpec>(m, "PrepotentialSpec")
      .def_readonly("n", &PrepotentialSpec::n);

  py::class_<Jet3>(m, "Jet3")
      .def_readonly("Z", &Jet3::Z)
      .def_readonly("F", &Jet3::F)
      .def_readonly("FA", &Jet3::FA)
      .def_readonly("FAB", &Jet3::FAB)
      .def("homogeneity_residual", &Jet3::homogeneity_residual);

  py::class_<ModelDescriptor>(m, "ModelDescriptor")
      .def_readonly("name", &ModelDescriptor::name)
      .def_readonly("prep", &ModelDescriptor::prep)
      .def_readonly("z0", &ModelDescriptor::z0)
      .def_readonly("expected_r", &ModelDescriptor::expected_r)
      .def_readonly("expected_dim_Mprime_real", &ModelDescriptor::expected_dim_Mprime_real);

  py::class_<ChartPoint>(m, "ChartPoint")
      .def(py::init(&make_point), py::arg("z"), py::arg("phi"), py::arg("phit"), py::arg("a"),
           py::arg("b"))
      .def_readonly("z", &ChartPoint::z)
      .def_readonly("phi", &ChartPoint::phi)
      .def_readonly("phit", &ChartPoint::phit)
      .def_readonly("a", &ChartPoint::a)
      .def_readonly("b", &ChartPoint::b);

  py::class_<QuotientSpec>(m, "QuotientSpec")
      .def_readonly("Z0", &QuotientSpec::Z0)
      .def_readonly("D", &QuotientSpec::D)
      .def_readonly("C", &QuotientSpec::C)
      .def_readonly("r", &QuotientSpec::r)
      .def_readonly("dim_N_real", &QuotientSpec::dim_N_real)
      .def_readonly("dim_Mprime_real", &QuotientSpec::dim_Mprime_real)
      .def_readonly("cdim_Mwedge", &QuotientSpec::cdim_Mwedge)
      .def_readonly("cdim_Mprime", &QuotientSpec::cdim_Mprime)
      .def_readonly("warning", &QuotientSpec::warning);

  m.def("make_model", &make_model, py::arg("name"));
  m.def("catalog_names", &catalog_names);
  m.def("eval_jet", &eval_jet, py::arg("spec"), py::arg("Z"));
  m.def("n_matrix", &n_matrix, py::arg("jet"));
  m.def("kahler_potential", &kahler_potential, py::arg("spec"), py::arg("z"));
  m.def("in_domain", &in_domain, py::arg("spec"), py::arg("z"));
  m.def(
      "base_metric",
      [](const PrepotentialSpec& s, const CVec& z) { return CMat(base_geometry(s, z).g); },
      py::arg("spec"), py::arg("z"));
  m.def("metric", [](const PrepotentialSpec& s, const ChartPoint& p) { return metric(s, p); },
        py::arg("spec"), py::arg("point"));
  m.def(
      "complex_structures",
      [](const PrepotentialSpec& s, const ChartPoint& p) {
        auto J = complex_structures(s, p);
        return py::make_tuple(J.J1, J.J2, J.J3);
      },
      py::arg("spec"), py::arg("point"));
  m.def(
      "su2_connection",
      [](const PrepotentialSpec& s, const ChartPoint& p) {
        auto w = su2_connection(s, p);
        return py::make_tuple(w[0], w[1], w[2]);
      },
      py::arg("spec"), py::arg("point"));
  m.def(
      "holo_coords",
      [](const PrepotentialSpec& s, const ChartPoint& p) {
        auto h = holo_coords(s, p);
        return py::make_tuple(h.w0, h.w);
      },
      py::arg("spec"), py::arg("point"));
  m.def("null_vector_sample", &null_vector_sample, py::arg("spec"), py::arg("Z0"),
        py::arg("seed"));
  m.def("make_quotient_spec", &make_quotient_spec, py::arg("spec"), py::arg("Z0"), py::arg("D"),
        py::arg("Ctilde") = cplx(0.0, 0.0), py::arg("probe_seed") = 1);
  m.def("recommended_recipe",
        [](const ModelDescriptor& md, std::uint64_t seed) {
          auto r = recommended_recipe(md, seed);
          return py::make_tuple(r.Z0, r.D, r.Ctilde);
        },
        py::arg("model"), py::arg("seed") = 1);
  m.def(
      "membership",
      [](const PrepotentialSpec& s, const QuotientSpec& q, const ChartPoint& p) {
        auto r = membership(s, q, p);
        return py::make_tuple(r.first, r.second);
      },
      py::arg("spec"), py::arg("qspec"), py::arg("point"));
  m.def(
      "act",
      [](const QuotientSpec& q, cplx lam, const ChartPoint& p) { return act(q, lam, p); },
      py::arg("qspec"), py::arg("lam"), py::arg("point"));
  m.def(
      "fiber_quotient_metric",
      [](const PrepotentialSpec& s, const QuotientSpec& q, const CVec& z, const CVec& x) {
        auto fm = fiber_quotient_metric(s, q, z, x);
        return py::make_tuple(fm.h_closed, fm.h_pullback, fm.route_gap);
      },
      py::arg("spec"), py::arg("qspec"), py::arg("z"), py::arg("x"));
  m.def(
      "run_suites",
      [](const std::string& model, const std::vector<std::string>& suites, int samples,
         std::uint64_t seed) {
        RunConfig cfg;
        cfg.model = model;
        cfg.suites = suites;
        cfg.samples = samples;
        cfg.seed = seed;
        VerificationReport rep = run(cfg);
        return py::make_tuple(rep.all_pass(), rep.to_json());
      },
      py::arg("model"), py::arg("suites"), py::arg("samples") = 20, py::arg("seed") = 1);
}
