#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "abreu/extremal.hpp"
#include "abreu/io.hpp"
#include "abreu/labelling.hpp"
#include "abreu/mongeampere.hpp"
#include "abreu/potential.hpp"
#include "abreu/soliton.hpp"

using namespace abreu;

namespace {

OrderedJson vec_json(const Vec& v) {
    OrderedJson a = OrderedJson::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

OrderedJson mat_json(const Mat& M) {
    OrderedJson a = OrderedJson::array();
    for (int i = 0; i < M.rows(); ++i) {
        OrderedJson row = OrderedJson::array();
        for (int j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
        a.push_back(row);
    }
    return a;
}

struct Options {
    std::string input;
    std::string output;
    bool json = false;
    double tol = -1.0;  // -1 = per-command default
    double lambda = 1.0;
    int resolution = 32;

    double tol_or(double dflt) const { return tol > 0.0 ? tol : dflt; }
};

void write_report(const OrderedJson& report, const Options& opt) {
    std::string text = opt.json ? report.dump(2) + "\n" : render_text_report(report);
    if (!opt.output.empty()) {
        std::ofstream out(opt.output);
        if (!out) throw ValidationError("ParseError", "cannot write " + opt.output);
        out << text;
    } else {
        std::cout << text;
    }
}

OrderedJson labels_json(const LabelledPolytope& P) {
    OrderedJson arr = OrderedJson::array();
    for (const auto& h : P.halfspaces()) {
        OrderedJson f;
        f["normal"] = vec_json(h.normal);
        f["offset"] = h.offset;
        arr.push_back(f);
    }
    return arr;
}

std::unique_ptr<PotentialModel> make_model(const std::string& kind, const ParsedPolytope& pp,
                                           double C, double lambda, const Options& opt) {
    if (kind == "guillemin") return std::make_unique<GuilleminModel>(pp.polytope);
    if (kind == "hirzebruch") return std::make_unique<HirzebruchModel>(C);
    if (kind == "solve") {
        SolverConfig cfg;
        cfg.resolution = opt.resolution;
        cfg.tolerance = opt.tol_or(1e-8);
        auto result = solve(pp.polytope, lambda, std::nullopt, cfg);
        return std::make_unique<PerturbedModel>(*result.model);
    }
    throw ValidationError("ParseError", "unknown model \"" + kind + "\"");
}

int run(int argc, char** argv) {
    CLI::App app{"abreu-lab: canonical Einstein normalization, extremal data and "
                 "Monge-Ampere solving for labelled polytopes"};
    app.require_subcommand(1);

    Options opt;

    auto add_common = [&](CLI::App* cmd, bool needs_input = true) {
        if (needs_input)
            cmd->add_option("--input", opt.input, "polytope JSON file")->required();
        cmd->add_flag("--json", opt.json, "machine-readable JSON report");
        cmd->add_option("--output", opt.output, "write the report to a file");
        cmd->add_option("--tol", opt.tol, "tolerance (where applicable)");
        cmd->add_option("--lambda", opt.lambda, "Einstein constant lambda");
        cmd->add_option("--resolution", opt.resolution, "grid / solver resolution");
    };

    auto* c_info = app.add_subcommand("info", "polytope summary");
    add_common(c_info);
    auto* c_moments = app.add_subcommand("moments", "moment matrix W and boundary vector Z");
    add_common(c_moments);
    auto* c_extremal = app.add_subcommand("extremal", "extremal affine function");
    add_common(c_extremal);
    auto* c_normalize = app.add_subcommand("normalize", "Einstein normalization of the labels");
    add_common(c_normalize);
    auto* c_soliton = app.add_subcommand("soliton", "Kaehler-Ricci soliton vector");
    add_common(c_soliton);
    auto* c_angles = app.add_subcommand("angles", "cone angles against reference labels");
    add_common(c_angles);
    double angles_smooth_tol = 1e-12;
    c_angles->add_option("--smooth-tol", angles_smooth_tol, "|a_k - 1| tolerance for smoothness");
    auto* c_rat = app.add_subcommand("rationality", "lattice / rationality report");
    add_common(c_rat);
    auto* c_delzant = app.add_subcommand("delzant", "per-vertex Delzant determinants");
    add_common(c_delzant);

    auto* c_check = app.add_subcommand("check-potential", "audit a symplectic potential");
    add_common(c_check);
    std::string check_model = "guillemin";
    double model_C = 1.0;
    int samples = 5, grid = 50;
    bool use_soliton_a = false;
    c_check->add_option("--model", check_model, "guillemin | hirzebruch");
    c_check->add_option("--C", model_C, "Hirzebruch label scale C");
    c_check->add_option("--samples", samples, "boundary samples per facet");
    c_check->add_option("--grid", grid, "interior grid resolution");
    c_check->add_flag("--soliton-a", use_soliton_a, "use the computed soliton vector in the residual");

    auto* c_solve = app.add_subcommand("solve", "solve the KE / soliton equation");
    add_common(c_solve);
    int solve_degree = 5, solve_cells = 0, continuation = 0;
    c_solve->add_option("--degree", solve_degree, "spline degree");
    c_solve->add_option("--cells", solve_cells, "spline cells per axis (0 = auto)");
    c_solve->add_option("--continuation", continuation, "continuation steps (0 = direct)");

    auto* c_compare = app.add_subcommand("compare", "compare two potential models");
    add_common(c_compare);
    std::string model_a = "solve", model_b = "hirzebruch";
    double Ca = 1.0, Cb = 1.0, delta = 0.05;
    c_compare->add_option("--model-a", model_a, "guillemin | hirzebruch | solve");
    c_compare->add_option("--model-b", model_b, "guillemin | hirzebruch | solve");
    c_compare->add_option("--C-a", Ca, "C for model A when hirzebruch");
    c_compare->add_option("--C-b", Cb, "C for model B when hirzebruch");
    c_compare->add_option("--grid", grid, "comparison grid resolution");
    c_compare->add_option("--delta", delta, "inset: keep points with all L_k >= delta");

    auto* c_examples = app.add_subcommand("examples", "emit a built-in fixture");
    std::string example_name;
    c_examples->add_option("name", example_name, "square | simplex | hirzebruch | rectangle")
        ->required();
    c_examples->add_flag("--json", opt.json, "(fixtures are always JSON)");
    c_examples->add_option("--output", opt.output, "write to a file");

    CLI11_PARSE(app, argc, argv);

    OrderedJson report;

    if (c_examples->parsed()) {
        OrderedJson fixture = example_polytope(example_name);
        std::string text = fixture.dump(2) + "\n";
        if (!opt.output.empty()) {
            std::ofstream out(opt.output);
            if (!out) throw ValidationError("ParseError", "cannot write " + opt.output);
            out << text;
        } else {
            std::cout << text;
        }
        return 0;
    }

    ParsedPolytope pp = parse_polytope_file(opt.input);
    const LabelledPolytope& P = pp.polytope;
    report["schema_version"] = 1;
    report["input"] = opt.input;
    if (pp.float_input) report["warning"] = "float entries: lattice arithmetic is approximate";

    if (c_info->parsed()) {
        report["dim"] = P.dim();
        report["num_facets"] = P.num_facets();
        report["num_vertices"] = P.num_vertices();
        OrderedJson vs = OrderedJson::array();
        for (const auto& v : P.vertices()) vs.push_back(vec_json(v));
        report["vertices"] = vs;
        report["volume"] = volume(P);
        report["diameter"] = P.diameter();
        report["barycenter"] = vec_json(barycenter(P));
        OrderedJson facets = OrderedJson::array();
        for (int k = 0; k < P.num_facets(); ++k) {
            OrderedJson f;
            f["normal"] = vec_json(P.facet(k).normal);
            f["offset"] = P.facet(k).offset;
            f["sigma_measure"] = integrate_facet(P, k, Polynomial2::constant(P.dim(), 1.0));
            facets.push_back(f);
        }
        report["facets"] = facets;
        if (auto cert = monotone_point(P)) {
            report["monotone"] = true;
            report["preferred_point"] = vec_json(cert->preferred_point);
            report["common_value"] = cert->common_value;
        } else {
            report["monotone"] = false;
        }
        report["tolerances"]["geometry_rel"] = kGeomTol;
    } else if (c_moments->parsed()) {
        MomentData md = moments(P);
        report["W"] = mat_json(md.W);
        report["Z"] = vec_json(md.Z);
        report["method"] = "closed-form simplex integration (exact)";
    } else if (c_extremal->parsed()) {
        ExtremalResult er = extremal_affine(P);
        report["A0"] = er.A.constant;
        report["A_linear"] = vec_json(er.A.linear);
        report["constant"] = er.is_constant;
        report["condition_number"] = er.condition_number;
        if (er.warning) report["warning"] = *er.warning;
        auto bc = barycenter_criterion(P);
        report["barycenter_interior"] = vec_json(bc.bary_interior);
        report["barycenter_boundary"] = vec_json(bc.bary_boundary);
        report["barycenters_coincide"] = bc.coincide;
        report["tolerances"]["constancy"] = er.constancy_tol;
        report["tolerances"]["barycenter"] = 1e-8;
    } else if (c_normalize->parsed()) {
        auto [Q, cert] = einstein_normalize(P);
        report["labels"] = labels_json(Q);
        report["preferred_point"] = vec_json(cert.preferred_point);
        report["common_value"] = cert.common_value;
        report["monotone_residual"] = cert.residual;
        ExtremalResult er = extremal_affine(Q);
        report["extremal_A0"] = er.A.constant;
        report["extremal_constant"] = er.is_constant;
        report["tolerances"]["monotone_rel"] = 1e-9;
        if (!opt.output.empty()) {
            std::ofstream out(opt.output);
            out << emit_polytope(Q).dump(2) << "\n";
            report["written"] = opt.output;
            opt.output.clear();
        }
    } else if (c_soliton->parsed()) {
        SolitonVector sv = soliton_vector(P, opt.tol_or(1e-10));
        report["a"] = vec_json(sv.a);
        report["residual"] = sv.residual;
        report["iterations"] = sv.iterations;
        report["tolerances"]["moment_residual"] = opt.tol_or(1e-10);
    } else if (c_angles->parsed()) {
        if (!pp.reference_labels)
            throw ValidationError("ParseError",
                                  "angles needs \"reference_labels\" in the input file");
        SingularityReport sr = cone_angles(*pp.reference_labels, P, angles_smooth_tol);
        OrderedJson facets = OrderedJson::array();
        for (size_t k = 0; k < sr.facets.size(); ++k) {
            const auto& fs = sr.facets[k];
            OrderedJson f;
            f["facet"] = k + 1;
            f["ratio"] = fs.ratio;
            if (fs.ratio_exact) f["ratio_exact"] = fs.ratio_exact->str();
            f["class"] = fs.cls == SingularityClass::Smooth      ? "smooth"
                         : fs.cls == SingularityClass::Conical   ? "conical"
                                                                 : "large-angle";
            f["angle"] = fs.angle;
            if (fs.ratio_exact && fs.cls != SingularityClass::Smooth)
                f["angle_str"] = "2*pi*" + fs.ratio_exact->str();
            facets.push_back(f);
        }
        report["facets"] = facets;
        report["tolerances"]["smooth"] = angles_smooth_tol;
    } else if (c_rat->parsed()) {
        RationalityReport rr = rationality(P);
        report["is_lattice_polytope"] = rr.is_lattice_polytope;
        if (rr.minimal_scale) {
            report["minimal_scale"] = rr.minimal_scale->str();
            OrderedJson sn = OrderedJson::array();
            for (const auto& row : *rr.scaled_normals) {
                OrderedJson r = OrderedJson::array();
                for (long long v : row) r.push_back(v);
                sn.push_back(r);
            }
            report["scaled_normals"] = sn;
        } else {
            report["minimal_scale"] = nullptr;
            report["error_kind"] = "IrrationalInput";
        }
        report["lattice"] = "Z^n of the input coordinates";
        write_report(report, opt);
        return rr.minimal_scale ? 0 : 2;
    } else if (c_delzant->parsed()) {
        DelzantReport dr = delzant_check(P);
        OrderedJson vs = OrderedJson::array();
        for (const auto& vd : dr.vertices) {
            OrderedJson v;
            v["vertex"] = vec_json(P.vertices()[vd.vertex]);
            v["abs_det"] = vd.abs_det;
            v["delzant"] = vd.delzant;
            vs.push_back(v);
        }
        report["vertices"] = vs;
        report["delzant"] = dr.all_delzant;
        report["scale_applied"] = dr.scale_applied.str();
        report["lattice"] = "Z^n of the input coordinates (see report caveat for sublattices)";
    } else if (c_check->parsed()) {
        auto model = make_model(check_model, pp, model_C, opt.lambda, opt);
        auto bc = boundary_check(*model, P, samples, opt.tol_or(1e-6));
        report["boundary_check"]["pass"] = bc.pass;
        OrderedJson fr = OrderedJson::array();
        for (const auto& f : bc.facets) {
            OrderedJson e;
            e["facet"] = f.facet + 1;
            e["max_H_nu"] = f.max_Hnu;
            e["max_dH_nn_minus_2nu"] = f.max_dHnn;
            e["min_tangent_eig"] = f.min_tangent_eig;
            e["pass"] = f.pass;
            fr.push_back(e);
        }
        report["boundary_check"]["facets"] = fr;
        report["boundary_check"]["tol"] = bc.tol;
        // scalar curvature statistics on the interior grid
        {
            Vec lo = P.vertices()[0], hi = P.vertices()[0];
            for (const auto& v : P.vertices()) {
                lo = lo.cwiseMin(v);
                hi = hi.cwiseMax(v);
            }
            double margin = 1e-3 * P.diameter();
            double smin = 1e300, smax = -1e300, ssum = 0.0;
            int cnt = 0;
            for (int i = 0; i < grid; ++i)
                for (int j = 0; j < grid; ++j) {
                    Vec x(2);
                    x << lo[0] + (hi[0] - lo[0]) * (i + 0.5) / grid,
                        lo[1] + (hi[1] - lo[1]) * (j + 0.5) / grid;
                    if (!P.contains(x, margin)) continue;
                    double s = abreu_scalar(*model, x);
                    smin = std::min(smin, s);
                    smax = std::max(smax, s);
                    ssum += s;
                    ++cnt;
                }
            report["abreu_scalar"]["min"] = smin;
            report["abreu_scalar"]["max"] = smax;
            report["abreu_scalar"]["mean"] = ssum / std::max(1, cnt);
            report["abreu_scalar"]["grid_points"] = cnt;
        }
        Vec a = Vec::Zero(P.dim());
        if (use_soliton_a) a = soliton_vector(P).a;
        auto rf = einstein_residual(*model, P, opt.lambda, a, grid);
        report["einstein_residual"]["lambda"] = opt.lambda;
        report["einstein_residual"]["a"] = vec_json(a);
        report["einstein_residual"]["mean"] = rf.mean;
        report["einstein_residual"]["deviation"] = rf.deviation;
        report["einstein_residual"]["grid_points"] = rf.points.size();
        report["tolerances"]["boundary"] = bc.tol;
    } else if (c_solve->parsed()) {
        SolverConfig cfg;
        cfg.resolution = opt.resolution;
        cfg.tolerance = opt.tol_or(1e-8);
        cfg.spline_degree = solve_degree;
        cfg.spline_cells = solve_cells;
        cfg.continuation_steps = continuation;
        SolverResult res = solve(P, opt.lambda, std::nullopt, cfg);
        report["deviation"] = res.deviation;
        report["iterations"] = res.iterations;
        report["soliton_a"] = vec_json(res.soliton_a);
        report["preferred_point"] = vec_json(res.preferred_point);
        report["lambda"] = opt.lambda;
        report["resolution"] = cfg.resolution;
        report["tolerances"]["deviation"] = cfg.tolerance;
    } else if (c_compare->parsed()) {
        auto A = make_model(model_a, pp, Ca, opt.lambda, opt);
        auto B = make_model(model_b, pp, Cb, opt.lambda, opt);
        CompareMetrics cm = compare(*A, *B, grid, delta);
        report["h_rel_max"] = cm.h_rel_max;
        report["h_rel_mean"] = cm.h_rel_mean;
        report["u_gauge_max"] = cm.u_gauge_max;
        report["grid_points"] = cm.points;
        report["delta"] = delta;
    }

    write_report(report, opt);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ConvergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
