#include "abreu/labelling.hpp"

#include <algorithm>
#include <cmath>

namespace abreu {

std::optional<MonotoneCertificate> monotone_point(const LabelledPolytope& P) {
    int n = P.dim();
    int d = P.num_facets();
    Mat A(d - 1, n);
    Vec b(d - 1);
    const auto& h = P.halfspaces();
    for (int k = 1; k < d; ++k) {
        A.row(k - 1) = (h[k].normal - h[0].normal).transpose();
        b[k - 1] = h[0].offset - h[k].offset;
    }
    Vec p = A.colPivHouseholderQr().solve(b);

    double mean = 0.0;
    for (int k = 0; k < d; ++k) mean += P.L(k, p);
    mean /= d;
    double res = 0.0;
    for (int k = 0; k < d; ++k)
        res = std::max(res, std::abs(P.L(k, p) - mean) / (h[k].normal.norm() * P.diameter()));
    if (res > 1e-9 || !P.contains(p)) return std::nullopt;
    return MonotoneCertificate{p, mean, res};
}

std::pair<LabelledPolytope, MonotoneCertificate> einstein_normalize(const LabelledPolytope& P) {
    Vec pbar = barycenter(P);
    std::vector<HalfSpace> labels = P.halfspaces();
    for (auto& h : labels) {
        double lp = h.value(pbar);
        h.normal /= lp;
        h.offset /= lp;
        h.normal_exact.reset();
        h.offset_exact.reset();
    }
    LabelledPolytope Q = P.with_labels(std::move(labels));
    auto cert = monotone_point(Q);
    if (!cert)
        throw ValidationError("NotMonotone", "normalized labels failed the monotone check");
    return {Q, *cert};
}

Vec preferred_point_formula(const LabelledPolytope& P) {
    int n = P.dim();
    Vec zero = Vec::Zero(n);
    if (!P.contains(zero))
        throw ValidationError("NormalizationRequired", "the origin is not an interior point");
    for (int k = 0; k < P.num_facets(); ++k)
        if (std::abs(P.facet(k).offset - 1.0) > 1e-9)
            throw ValidationError("NormalizationRequired",
                                  "facet " + std::to_string(k + 1) + " has L_k(0) = " +
                                      std::to_string(P.facet(k).offset) + ", expected 1");
    double z0 = 0.0;
    Vec zi = Vec::Zero(n);
    for (int k = 0; k < P.num_facets(); ++k) {
        z0 += integrate_facet(P, k, Polynomial2::constant(n, 1.0));
        for (int i = 0; i < n; ++i)
            zi[i] += integrate_facet(P, k, Polynomial2::coordinate(n, i));
    }
    return (static_cast<double>(n) / ((n + 1.0) * z0)) * zi;
}

LabelledPolytope cone_labels(const LabelledPolytope& P, double lambda, const Vec& p) {
    if (lambda <= 0.0) throw ValidationError("BadIndex", "lambda must be positive");
    if (!P.contains(p, 1e-12 * P.diameter()))
        throw ValidationError("PointNotInterior", "the given point is not interior to P");
    std::vector<HalfSpace> labels = P.halfspaces();
    for (auto& h : labels) {
        double lp = h.value(p);
        h.normal *= lambda / lp;
        h.offset *= lambda / lp;
        h.normal_exact.reset();
        h.offset_exact.reset();
    }
    return P.with_labels(std::move(labels));
}

namespace {

// Exact entries when present, otherwise a tight continued-fraction
// rationalization of the doubles (small denominators only, so genuinely
// irrational data is rejected rather than approximated).
std::optional<std::vector<std::vector<Rational>>> recover_rational_normals(
    const LabelledPolytope& P) {
    std::vector<std::vector<Rational>> out;
    for (const auto& h : P.halfspaces()) {
        if (h.normal_exact) {
            out.push_back(*h.normal_exact);
            continue;
        }
        std::vector<Rational> row;
        for (int i = 0; i < h.normal.size(); ++i) {
            auto r = Rational::from_double(h.normal[i], 100000, 1e-12);
            if (!r) return std::nullopt;
            row.push_back(*r);
        }
        out.push_back(std::move(row));
    }
    return out;
}

}  // namespace

RationalityReport rationality(const LabelledPolytope& P) {
    RationalityReport rep;
    auto normals = recover_rational_normals(P);
    if (normals) {
        // minimal positive rational s with s * nu_k integral:
        // s = lcm(denominators) / gcd(numerators) over all nonzero entries
        long long L = 1, G = 0;
        for (const auto& nu : *normals)
            for (const auto& e : nu) {
                if (e.num() == 0) continue;
                L = lcm_ll(L, e.den());
                G = std::gcd(G, std::llabs(e.num()));
            }
        if (G == 0) throw ValidationError("BadIndex", "all normals are zero");
        Rational s(L, G);
        rep.minimal_scale = s;
        std::vector<std::vector<long long>> scaled;
        for (const auto& nu : *normals) {
            std::vector<long long> row;
            for (const auto& e : nu) {
                Rational v = e * s;
                row.push_back(v.num());  // v.den() == 1 by construction
            }
            scaled.push_back(std::move(row));
        }
        rep.scaled_normals = std::move(scaled);
    }

    // lattice polytope <=> every vertex admits rational coordinates (then a
    // homothety clearing the common denominator puts them in Z^n)
    bool lattice = true;
    for (int v = 0; v < P.num_vertices() && lattice; ++v) {
        for (int i = 0; i < P.dim(); ++i)
            if (!Rational::from_double(P.vertices()[v][i], 100000, 1e-12)) {
                lattice = false;
                break;
            }
    }
    rep.is_lattice_polytope = lattice;
    return rep;
}

DelzantReport delzant_check(const LabelledPolytope& P) {
    RationalityReport rr = rationality(P);
    if (!rr.minimal_scale || !rr.scaled_normals)
        throw ValidationError("NonIntegralLabels",
                              "labels admit no rational scaling to integer vectors");
    const auto& scaled = *rr.scaled_normals;
    int n = P.dim();
    DelzantReport rep;
    rep.scale_applied = *rr.minimal_scale;
    rep.all_delzant = true;
    for (int v = 0; v < P.num_vertices(); ++v) {
        const auto& inc = P.vertex_facets(v);
        Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic> M(n, n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) M(r, c) = scaled[inc[r]][c];
        long long det = 0;
        if (n == 1)
            det = M(0, 0);
        else if (n == 2)
            det = M(0, 0) * M(1, 1) - M(0, 1) * M(1, 0);
        else if (n == 3)
            det = M(0, 0) * (M(1, 1) * M(2, 2) - M(1, 2) * M(2, 1)) -
                  M(0, 1) * (M(1, 0) * M(2, 2) - M(1, 2) * M(2, 0)) +
                  M(0, 2) * (M(1, 0) * M(2, 1) - M(1, 1) * M(2, 0));
        else
            throw ValidationError("BadIndex", "delzant_check implemented for n <= 3");
        VertexDelzant vd;
        vd.vertex = v;
        vd.abs_det = std::llabs(det);
        vd.delzant = vd.abs_det == 1;
        rep.all_delzant = rep.all_delzant && vd.delzant;
        rep.vertices.push_back(vd);
    }
    return rep;
}

SingularityReport cone_angles(const LabelledPolytope& reference_eta,
                              const LabelledPolytope& candidate_nu, double smooth_tol) {
    if (reference_eta.num_facets() != candidate_nu.num_facets() ||
        reference_eta.dim() != candidate_nu.dim())
        throw ValidationError("FacetMismatch", "label sets have different facet counts");
    const double pi = 3.14159265358979323846;
    SingularityReport rep;
    for (int k = 0; k < candidate_nu.num_facets(); ++k) {
        const auto& eta = reference_eta.facet(k);
        const auto& nu = candidate_nu.facet(k);
        double a = eta.normal.norm() / nu.normal.norm();
        if ((eta.normal - a * nu.normal).norm() > 1e-9 * eta.normal.norm())
            throw ValidationError("NotCollinear", "facet " + std::to_string(k + 1) +
                                                      " normals are not positively collinear");
        if (std::abs(eta.offset - a * nu.offset) >
            1e-9 * (std::abs(eta.offset) + eta.normal.norm() * candidate_nu.diameter()))
            throw ValidationError("FacetMismatch", "facet " + std::to_string(k + 1) +
                                                       " hyperplanes differ between label sets");
        FacetSingularity fs;
        fs.ratio = a;
        if (eta.has_exact() && nu.has_exact()) {
            // exact ratio from the first nonzero component
            for (size_t i = 0; i < eta.normal_exact->size(); ++i) {
                if ((*nu.normal_exact)[i].num() != 0) {
                    fs.ratio_exact = (*eta.normal_exact)[i] / (*nu.normal_exact)[i];
                    break;
                }
            }
            if (fs.ratio_exact) fs.ratio = fs.ratio_exact->to_double();
        }
        bool exactly_one = fs.ratio_exact && *fs.ratio_exact == Rational(1);
        if (exactly_one || std::abs(fs.ratio - 1.0) <= smooth_tol)
            fs.cls = SingularityClass::Smooth;
        else
            fs.cls = fs.ratio < 1.0 ? SingularityClass::Conical : SingularityClass::LargeAngle;
        fs.angle = 2.0 * pi * fs.ratio;
        rep.facets.push_back(std::move(fs));
    }
    return rep;
}

}  // namespace abreu
