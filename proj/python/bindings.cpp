#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "ldopt/classifier.hpp"
#include "ldopt/cli.hpp"
#include "ldopt/error.hpp"
#include "ldopt/infomat.hpp"
#include "ldopt/optimizer.hpp"
#include "ldopt/reducer.hpp"

namespace py = pybind11;
using namespace ldopt;

namespace {

Design make_design(const std::vector<std::pair<double, double>>& support, std::pair<double, double> region) {
  std::vector<SupportPoint> pts;
  pts.reserve(support.size());
  for (const auto& [c, w] : support) pts.push_back({c, w});
  return Design::make(std::move(pts), {region.first, region.second});
}

py::list support_list(const Design& d) {
  py::list out;
  for (const auto& p : d.points()) out.append(py::make_tuple(p.c, p.w));
  return out;
}

py::tuple matrix_tuple(const InfoMatrix& m) { return py::make_tuple(m.m11, m.m12, m.m22); }

}  // namespace

PYBIND11_MODULE(_ldopt, m) {
  m.doc() = "Locally optimal designs for two-parameter models";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  auto domain = py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<UnclassifiableRegion>(m, "UnclassifiableRegion", domain.ptr());
  py::register_exception<ParseError>(m, "ParseError", domain.ptr());
  py::register_exception<PreconditionError>(m, "PreconditionError", base.ptr());
  py::register_exception<NumericalError>(m, "NumericalError", base.ptr());

  py::class_<Model>(m, "Model")
      .def_static("parse", &Model::parse, py::arg("id"))
      .def_property_readonly("id", &Model::id)
      .def_property_readonly("parity", &Model::parity)
      .def_property_readonly("degenerate", &Model::degenerate)
      .def_property_readonly("natural_domain",
                             [](const Model& self) {
                               const Interval r = self.natural_domain();
                               return py::make_tuple(r.lo, r.hi);
                             })
      .def("psi", &Model::psi, py::arg("j"), py::arg("c"))
      .def("x_to_c", &Model::x_to_c, py::arg("alpha"), py::arg("beta"), py::arg("x"))
      .def("c_to_x", &Model::c_to_x, py::arg("alpha"), py::arg("beta"), py::arg("c"))
      .def("__repr__", [](const Model& self) { return "Model('" + self.id() + "')"; });

  m.def(
      "classify",
      [](const std::string& model, double lo, double hi, int grid_n) {
        const Classification c = check_type(Model::parse(model), {lo, hi}, grid_n);
        py::dict d;
        d["verdict"] = to_string(c.verdict);
        d["tested"] = py::make_tuple(c.tested.lo, c.tested.hi);
        d["condition_41"] = c.condition_41;
        d["reason"] = c.reason;
        return d;
      },
      py::arg("model"), py::arg("lo"), py::arg("hi"), py::arg("grid_n") = kDefaultGrid);

  m.def(
      "find_breakpoints",
      [](const std::string& model, double lo, double hi) {
        py::list out;
        for (const auto& b : find_breakpoints(Model::parse(model), {lo, hi})) {
          out.append(py::make_tuple(b.c, to_string(b.kind)));
        }
        return out;
      },
      py::arg("model"), py::arg("lo"), py::arg("hi"));

  m.def(
      "merge_pair",
      [](const std::string& model, double anchor, double c1, double c2, double omega) {
        const auto orient = anchor <= c1 ? Orientation::TypeI : Orientation::TypeII;
        const MergeResult r = merge_pair(Model::parse(model), anchor, c1, c2, omega, orient);
        return py::make_tuple(r.c, r.anchor_share);
      },
      py::arg("model"), py::arg("anchor"), py::arg("c1"), py::arg("c2"), py::arg("omega"),
      "Merged point and the weight moved onto the anchor.");

  m.def(
      "reduce",
      [](const std::string& model, const std::vector<std::pair<double, double>>& support,
         std::pair<double, double> region) {
        const Model mdl = Model::parse(model);
        const ReductionOutcome r = reduce(mdl, make_design(support, region));
        py::dict d;
        d["support"] = support_list(r.reduced);
        d["structure"] = to_string(r.structure);
        d["psd_margin"] = r.certificate.psd_margin;
        d["valid"] = r.certificate.valid();
        return d;
      },
      py::arg("model"), py::arg("support"), py::arg("region"));

  m.def(
      "c_matrix",
      [](const std::string& model, const std::vector<std::pair<double, double>>& support,
         std::pair<double, double> region) {
        return matrix_tuple(c_matrix(make_design(support, region), Model::parse(model)));
      },
      py::arg("model"), py::arg("support"), py::arg("region"));

  m.def(
      "loewner_compare",
      [](std::tuple<double, double, double> a, std::tuple<double, double, double> b) {
        const InfoMatrix ma{std::get<0>(a), std::get<1>(a), std::get<2>(a)};
        const InfoMatrix mb{std::get<0>(b), std::get<1>(b), std::get<2>(b)};
        return std::string(to_string(loewner_compare(ma, mb)));
      },
      py::arg("m1"), py::arg("m2"));

  m.def(
      "optimize",
      [](const std::string& model, std::pair<double, double> region, double alpha, double beta,
         const std::string& criterion) {
        const OptimizeResult r = optimize(Model::parse(model), {region.first, region.second}, alpha,
                                          beta, Criterion::parse(criterion));
        py::dict d;
        d["support"] = support_list(r.design);
        d["value"] = r.value;
        d["structure"] = r.structure.name();
        d["region"] = py::make_tuple(r.region.lo, r.region.hi);
        return d;
      },
      py::arg("model"), py::arg("region"), py::arg("alpha") = 0.0, py::arg("beta") = 1.0,
      py::arg("criterion") = "D");

  m.def(
      "verify_equivalence_D",
      [](const std::string& model, const std::vector<std::pair<double, double>>& support,
         std::pair<double, double> region) {
        const Model mdl = Model::parse(model);
        const EquivalenceReport r =
            verify_equivalence_D(make_design(support, region), mdl, {region.first, region.second});
        py::dict d;
        d["max_variance"] = r.max_variance;
        d["argmax"] = r.argmax;
        d["certified"] = r.certified;
        return d;
      },
      py::arg("model"), py::arg("support"), py::arg("region"));

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs a CLI command; returns (exit code, stdout, stderr).");
}
