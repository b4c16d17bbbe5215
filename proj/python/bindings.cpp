// Python bindings for the main operations: profile construction, resonance
// invariants, limit classification, scattering of H_eps and of the limit,
// and the convergence studies.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pointlim/convergence.hpp"
#include "pointlim/fixtures.hpp"
#include "pointlim/json_io.hpp"
#include "pointlim/point_ops.hpp"

namespace py = pybind11;
using namespace pointlim;

namespace {

Profile profile_from_pieces(const std::vector<std::tuple<double, double, std::vector<Cplx>>>& pieces) {
    std::vector<double> breaks;
    std::vector<Polynomial> polys;
    for (const auto& [lo, hi, coeffs] : pieces) {
        if (breaks.empty()) breaks.push_back(lo);
        breaks.push_back(hi);
        polys.emplace_back(coeffs);
    }
    return Profile(PiecewisePoly(std::move(breaks), std::move(polys)));
}

py::dict interaction_dict(const LimitInteraction& li) {
    py::module_ json = py::module_::import("json");
    return json.attr("loads")(to_json(li).dump());
}

}  // namespace

PYBIND11_MODULE(_pointlim, m) {
    m.doc() = "norm-resolvent limits of 1-D Schrodinger operators with shrinking "
              "rank-two perturbations";

    py::register_exception<Error>(m, "PointlimError");

    py::class_<Profile>(m, "Profile")
        .def_static("constant", [](Cplx c) { return Profile::constant(c); })
        .def_static("poly", [](std::vector<Cplx> c) { return Profile::poly(std::move(c)); })
        .def_static("bump_even", &Profile::bump_even)
        .def_static("bump_odd", &Profile::bump_odd)
        .def_static("from_pieces", &profile_from_pieces,
                    "pieces: list of (lo, hi, coeffs) with ascending-power coefficients")
        .def("__call__", &Profile::eval)
        .def("l2norm", [](const Profile& p) { return l2norm(p); })
        .def("moment", [](const Profile& p, int order) { return moment(p, order); });

    py::class_<Triple>(m, "Triple")
        .def(py::init<Profile, Profile, Profile>(), py::arg("f"), py::arg("g"), py::arg("q"));

    py::class_<Tolerances>(m, "Tolerances")
        .def(py::init<>())
        .def(py::init([](double rel, double abs) { return Tolerances{rel, abs}; }),
             py::arg("rel") = 1e-9, py::arg("abs") = 1e-12)
        .def_readwrite("rel", &Tolerances::rel)
        .def_readwrite("abs", &Tolerances::abs);

    py::class_<ScatteringData>(m, "ScatteringData")
        .def_readonly("k", &ScatteringData::k)
        .def_readonly("t", &ScatteringData::t)
        .def_readonly("r_left", &ScatteringData::r_left)
        .def_readonly("r_right", &ScatteringData::r_right)
        .def("unitarity_defect", &ScatteringData::unitarity_defect);

    m.def("classify",
          [](const Triple& t, const Tolerances& tol, bool strict) {
              return interaction_dict(classify(t, tol, strict));
          },
          py::arg("triple"), py::arg("tol") = Tolerances{}, py::arg("strict") = false,
          "classify the norm-resolvent limit; returns the JSON document as a dict");

    m.def("invariants", [](const Triple& t) {
        py::module_ json = py::module_::import("json");
        return json.attr("loads")(to_json(compute_invariants(t)).dump());
    });

    m.def("half_bound_states", [](const Triple& t) {
        py::module_ json = py::module_::import("json");
        return json.attr("loads")(to_json(half_bound_states(t)).dump());
    });

    m.def("scattering_eps",
          [](const Triple& t, double eps, double k) { return scattering_eps(t, eps, k); },
          py::arg("triple"), py::arg("eps"), py::arg("k"));

    m.def("scattering_limit",
          [](const Triple& t, double k) { return scattering_limit(classify(t), k); },
          py::arg("triple"), py::arg("k"),
          "closed-form scattering of the classified limit interaction");

    m.def("scattering_convergence",
          [](const Triple& t, double k, std::vector<double> eps) {
              py::module_ json = py::module_::import("json");
              return json.attr("loads")(
                  to_json(scattering_convergence(t, k, eps)).dump());
          },
          py::arg("triple"), py::arg("k"), py::arg("eps"));

    m.def("fit_rate", [](std::vector<std::pair<double, double>> pts) {
        RateFit f = fit_rate(pts);
        return py::make_tuple(f.slope, f.intercept, f.residual);
    });

    m.def("fixture_names", [] { return fixture_names(); });
    m.def("fixture",
          [](const std::string& name, const std::map<std::string, double>& params) {
              Fixture f = make_fixture(name, params);
              return py::make_tuple(f.triple, to_string(f.expected), f.note);
          },
          py::arg("name"), py::arg("params") = std::map<std::string, double>{});
}
