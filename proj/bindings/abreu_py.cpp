#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "abreu/extremal.hpp"
#include "abreu/io.hpp"
#include "abreu/labelling.hpp"
#include "abreu/mongeampere.hpp"
#include "abreu/potential.hpp"
#include "abreu/soliton.hpp"

namespace py = pybind11;
using namespace abreu;

namespace {

LabelledPolytope polytope_from_halfspaces(int dim, const std::vector<std::pair<Vec, double>>& hs) {
    std::vector<HalfSpace> halfspaces;
    for (const auto& [n, c] : hs) halfspaces.emplace_back(n, c);
    return LabelledPolytope::from_halfspaces(dim, std::move(halfspaces));
}

std::string classify(SingularityClass c) {
    switch (c) {
        case SingularityClass::Conical: return "conical";
        case SingularityClass::Smooth: return "smooth";
        default: return "large-angle";
    }
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Labelled polytopes: Einstein normalization, extremal data, Abreu "
              "equation audits and the toric Monge-Ampere solver.";

    py::register_exception<ValidationError>(m, "ValidationError");
    py::register_exception<ConvergenceError>(m, "ConvergenceError");

    py::class_<LabelledPolytope>(m, "Polytope")
        .def_static("from_halfspaces", &polytope_from_halfspaces, py::arg("dim"),
                    py::arg("halfspaces"),
                    "Build from [(normal, offset), ...] with L_k = <normal,x> + offset")
        .def_static(
            "from_vertices",
            [](int dim, const std::vector<Vec>& pts) {
                return LabelledPolytope::from_vertices(dim, pts);
            },
            py::arg("dim"), py::arg("points"))
        .def_static(
            "from_file",
            [](const std::string& path) { return parse_polytope_file(path).polytope; },
            py::arg("path"))
        .def_property_readonly("dim", &LabelledPolytope::dim)
        .def_property_readonly("num_facets", &LabelledPolytope::num_facets)
        .def_property_readonly("vertices", &LabelledPolytope::vertices)
        .def_property_readonly("diameter", &LabelledPolytope::diameter)
        .def("normals",
             [](const LabelledPolytope& P) {
                 std::vector<Vec> out;
                 for (const auto& h : P.halfspaces()) out.push_back(h.normal);
                 return out;
             })
        .def("offsets",
             [](const LabelledPolytope& P) {
                 std::vector<double> out;
                 for (const auto& h : P.halfspaces()) out.push_back(h.offset);
                 return out;
             })
        .def("L", &LabelledPolytope::L, py::arg("k"), py::arg("x"))
        .def("contains", &LabelledPolytope::contains, py::arg("x"), py::arg("margin") = 0.0)
        .def("volume", [](const LabelledPolytope& P) { return volume(P); })
        .def("barycenter", [](const LabelledPolytope& P) { return barycenter(P); })
        .def("__repr__", [](const LabelledPolytope& P) {
            return "<Polytope dim=" + std::to_string(P.dim()) +
                   " facets=" + std::to_string(P.num_facets()) +
                   " vertices=" + std::to_string(P.num_vertices()) + ">";
        });

    m.def("moments", [](const LabelledPolytope& P) {
        MomentData md = moments(P);
        return py::make_tuple(md.W, md.Z);
    });
    m.def(
        "psi_map",
        [](const LabelledPolytope& P, double constant, const Vec& linear) {
            return psi_map(P, AffineFunction(constant, linear));
        },
        py::arg("polytope"), py::arg("constant"), py::arg("linear"));

    m.def(
        "extremal_affine",
        [](const LabelledPolytope& P) {
            ExtremalResult er = extremal_affine(P);
            py::dict d;
            d["A0"] = er.A.constant;
            d["linear"] = er.A.linear;
            d["constant"] = er.is_constant;
            d["condition_number"] = er.condition_number;
            return d;
        },
        py::arg("polytope"));

    m.def(
        "monotone_point",
        [](const LabelledPolytope& P) -> py::object {
            auto cert = monotone_point(P);
            if (!cert) return py::none();
            py::dict d;
            d["preferred_point"] = cert->preferred_point;
            d["common_value"] = cert->common_value;
            d["residual"] = cert->residual;
            return d;
        },
        py::arg("polytope"));

    m.def(
        "einstein_normalize",
        [](const LabelledPolytope& P) {
            auto [Q, cert] = einstein_normalize(P);
            py::dict d;
            d["preferred_point"] = cert.preferred_point;
            d["common_value"] = cert.common_value;
            return py::make_tuple(Q, d);
        },
        py::arg("polytope"));

    m.def("cone_labels", &cone_labels, py::arg("polytope"), py::arg("lambda_"), py::arg("p"));

    m.def(
        "soliton_vector",
        [](const LabelledPolytope& P, double tol) {
            SolitonVector sv = soliton_vector(P, tol);
            py::dict d;
            d["a"] = sv.a;
            d["residual"] = sv.residual;
            d["iterations"] = sv.iterations;
            return d;
        },
        py::arg("polytope"), py::arg("tol") = 1e-10);
    m.def("soliton_residual", &soliton_residual, py::arg("polytope"), py::arg("p"), py::arg("a"));

    m.def(
        "cone_angles",
        [](const LabelledPolytope& eta, const LabelledPolytope& nu, double smooth_tol) {
            SingularityReport sr = cone_angles(eta, nu, smooth_tol);
            py::list out;
            for (const auto& f : sr.facets) {
                py::dict d;
                d["ratio"] = f.ratio;
                d["angle"] = f.angle;
                d["class"] = classify(f.cls);
                out.append(d);
            }
            return out;
        },
        py::arg("reference"), py::arg("candidate"), py::arg("smooth_tol") = 1e-12);

    m.def(
        "rationality",
        [](const LabelledPolytope& P) {
            RationalityReport rr = rationality(P);
            py::dict d;
            d["is_lattice_polytope"] = rr.is_lattice_polytope;
            d["minimal_scale"] = rr.minimal_scale ? py::object(py::str(rr.minimal_scale->str()))
                                                  : py::object(py::none());
            if (rr.scaled_normals) d["scaled_normals"] = *rr.scaled_normals;
            return d;
        },
        py::arg("polytope"));

    m.def(
        "delzant_check",
        [](const LabelledPolytope& P) {
            DelzantReport dr = delzant_check(P);
            py::dict d;
            d["delzant"] = dr.all_delzant;
            py::list dets;
            for (const auto& v : dr.vertices) dets.append(v.abs_det);
            d["abs_dets"] = dets;
            return d;
        },
        py::arg("polytope"));

    py::class_<PotentialModel, std::shared_ptr<PotentialModel>>(m, "PotentialModel")
        .def("u", &PotentialModel::u, py::arg("x"))
        .def("grad", &PotentialModel::grad, py::arg("x"))
        .def("hess", &PotentialModel::hess, py::arg("x"))
        .def("hess_inverse", &PotentialModel::hess_inverse, py::arg("x"))
        .def("domain", &PotentialModel::domain);

    py::class_<GuilleminModel, PotentialModel, std::shared_ptr<GuilleminModel>>(m,
                                                                                "GuilleminModel")
        .def(py::init<LabelledPolytope>(), py::arg("polytope"));
    py::class_<HirzebruchModel, PotentialModel, std::shared_ptr<HirzebruchModel>>(
        m, "HirzebruchModel")
        .def(py::init<double>(), py::arg("C"));
    py::class_<PerturbedModel, PotentialModel, std::shared_ptr<PerturbedModel>>(m,
                                                                                "PerturbedModel");

    m.def("abreu_scalar", &abreu_scalar, py::arg("model"), py::arg("x"));
    m.def("legendre_h", &legendre_h, py::arg("model"), py::arg("x"));
    m.def(
        "boundary_check",
        [](const PotentialModel& model, const LabelledPolytope& P, int samples, double tol) {
            auto bc = boundary_check(model, P, samples, tol);
            py::dict d;
            d["pass"] = bc.pass;
            py::list rows;
            for (const auto& f : bc.facets) {
                py::dict r;
                r["facet"] = f.facet;
                r["max_H_nu"] = f.max_Hnu;
                r["max_dH_nn_minus_2nu"] = f.max_dHnn;
                r["min_tangent_eig"] = f.min_tangent_eig;
                r["pass"] = f.pass;
                rows.append(r);
            }
            d["facets"] = rows;
            return d;
        },
        py::arg("model"), py::arg("polytope"), py::arg("samples_per_facet") = 5,
        py::arg("tol") = 1e-6);
    m.def(
        "einstein_residual",
        [](const PotentialModel& model, const LabelledPolytope& P, double lambda, const Vec& a,
           int grid_n) {
            auto rf = einstein_residual(model, P, lambda, a, grid_n);
            py::dict d;
            d["mean"] = rf.mean;
            d["deviation"] = rf.deviation;
            d["points"] = rf.points.size();
            return d;
        },
        py::arg("model"), py::arg("polytope"), py::arg("lambda_"), py::arg("a"),
        py::arg("grid_n") = 50);

    m.def(
        "solve",
        [](const LabelledPolytope& P, double lambda, py::object a, int resolution, double tol,
           int degree, int cells, int continuation) {
            SolverConfig cfg;
            cfg.resolution = resolution;
            cfg.tolerance = tol;
            cfg.spline_degree = degree;
            cfg.spline_cells = cells;
            cfg.continuation_steps = continuation;
            std::optional<Vec> av;
            if (!a.is_none()) av = a.cast<Vec>();
            SolverResult res = solve(P, lambda, av, cfg);
            py::dict d;
            d["model"] = py::cast(res.model);
            d["deviation"] = res.deviation;
            d["iterations"] = res.iterations;
            d["a"] = res.soliton_a;
            d["preferred_point"] = res.preferred_point;
            return d;
        },
        py::arg("polytope"), py::arg("lambda_") = 1.0, py::arg("a") = py::none(),
        py::arg("resolution") = 32, py::arg("tol") = 1e-8, py::arg("degree") = 5,
        py::arg("cells") = 0, py::arg("continuation") = 0);

    m.def(
        "compare",
        [](const PotentialModel& A, const PotentialModel& B, int grid_n, double delta) {
            CompareMetrics cm = compare(A, B, grid_n, delta);
            py::dict d;
            d["h_rel_max"] = cm.h_rel_max;
            d["h_rel_mean"] = cm.h_rel_mean;
            d["u_gauge_max"] = cm.u_gauge_max;
            d["points"] = cm.points;
            return d;
        },
        py::arg("model_a"), py::arg("model_b"), py::arg("grid_n") = 40, py::arg("delta") = 0.05);

    m.attr("__version__") = "0.1.0";
}
