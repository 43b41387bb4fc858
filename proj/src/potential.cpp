#include "abreu/potential.hpp"

#include <cmath>

namespace abreu {

Mat PotentialModel::hess_inverse(const Vec& x) const { return hess(x).inverse(); }

void PotentialModel::H_derivatives(const Vec&, Mat&, std::vector<Mat>&,
                                   std::vector<std::vector<Mat>>&) const {
    throw ValidationError("BadIndex", "model provides no analytic H derivatives");
}

// ---------------------------------------------------------------------------
// Guillemin

void GuilleminModel::require_interior(const Vec& x) const {
    for (int k = 0; k < P_.num_facets(); ++k)
        if (P_.L(k, x) <= 0.0)
            throw ValidationError("PointOnBoundary",
                                  "derivatives of the Guillemin potential need L_k(x) > 0");
}

double GuilleminModel::u(const Vec& x) const {
    double acc = 0.0;
    for (int k = 0; k < P_.num_facets(); ++k) {
        double L = P_.L(k, x);
        if (L < 0.0)
            throw ValidationError("OutsideDomain", "point outside the closure of P");
        if (L > 0.0) acc += 0.5 * L * std::log(L);
    }
    return acc;
}

Vec GuilleminModel::grad(const Vec& x) const {
    require_interior(x);
    Vec g = Vec::Zero(P_.dim());
    for (int k = 0; k < P_.num_facets(); ++k)
        g += 0.5 * (std::log(P_.L(k, x)) + 1.0) * P_.facet(k).normal;
    return g;
}

Mat GuilleminModel::hess(const Vec& x) const {
    require_interior(x);
    int n = P_.dim();
    Mat G = Mat::Zero(n, n);
    for (int k = 0; k < P_.num_facets(); ++k) {
        const Vec& nu = P_.facet(k).normal;
        G += 0.5 / P_.L(k, x) * (nu * nu.transpose());
    }
    return G;
}

void GuilleminModel::H_derivatives(const Vec& x, Mat& H, std::vector<Mat>& dH,
                                   std::vector<std::vector<Mat>>& d2H) const {
    require_interior(x);
    int n = P_.dim();
    Mat G = Mat::Zero(n, n);
    std::vector<Mat> dG(n, Mat::Zero(n, n));
    std::vector<std::vector<Mat>> d2G(n, std::vector<Mat>(n, Mat::Zero(n, n)));
    for (int k = 0; k < P_.num_facets(); ++k) {
        const Vec& nu = P_.facet(k).normal;
        double L = P_.L(k, x);
        Mat nn = nu * nu.transpose();
        G += 0.5 / L * nn;
        for (int i = 0; i < n; ++i) {
            dG[i] += -0.5 * nu[i] / (L * L) * nn;
            for (int j = 0; j < n; ++j) d2G[i][j] += nu[i] * nu[j] / (L * L * L) * nn;
        }
    }
    H = G.inverse();
    dH.assign(n, Mat());
    for (int i = 0; i < n; ++i) dH[i] = -H * dG[i] * H;
    d2H.assign(n, std::vector<Mat>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            d2H[i][j] = H * dG[i] * H * dG[j] * H + H * dG[j] * H * dG[i] * H - H * d2G[i][j] * H;
}

// ---------------------------------------------------------------------------
// Hirzebruch closed form

namespace {

// scalar function of (s,t) with partials up to second order
struct Fun2 {
    double v = 0, s = 0, t = 0, ss = 0, st = 0, tt = 0;
};

// chain rule through s = x1, t = x2/x1
struct Chained {
    double v;
    Vec grad;
    Mat hess;
};
Chained chain(const Fun2& f, double s, double t) {
    Chained c;
    c.v = f.v;
    c.grad = Vec(2);
    c.grad << f.s - (t / s) * f.t, f.t / s;
    c.hess = Mat(2, 2);
    double ts = t / s;
    c.hess(0, 0) = f.ss - 2.0 * ts * f.st + ts * ts * f.tt + 2.0 * t / (s * s) * f.t;
    c.hess(0, 1) = f.st / s - ts / s * f.tt - f.t / (s * s);
    c.hess(1, 0) = c.hess(0, 1);
    c.hess(1, 1) = f.tt / (s * s);
    return c;
}

LabelledPolytope hirzebruch_polytope(double C) {
    std::vector<HalfSpace> hs;
    Vec n1(2), n2(2), n3(2), n4(2);
    n1 << 7.0 * C / 5.0, 0.0;
    n2 << -7.0 * C / 4.0, 0.0;
    n3 << 0.0, C;
    n4 << C, -C;
    hs.emplace_back(n1, -7.0 * C / 5.0);
    hs.emplace_back(n2, 7.0 * C / 2.0);
    hs.emplace_back(n3, 0.0);
    hs.emplace_back(n4, 0.0);
    return LabelledPolytope::from_halfspaces(2, std::move(hs));
}

}  // namespace

HirzebruchModel::HirzebruchModel(double C) : C_(C), chat_(1.0 / C), P_(hirzebruch_polytope(C)) {
    if (!(C > 0.0)) throw ValidationError("BadIndex", "Hirzebruch constant C must be positive");
}

double HirzebruchModel::poly_A(double s) const {
    return (2.0 * chat_ / 7.0) * (-3.0 * s * s * s + 7.0 * s * s - 4.0);
}
double HirzebruchModel::poly_B(double t) const { return 2.0 * chat_ * t * (1.0 - t); }

void HirzebruchModel::require_domain(const Vec& x) const {
    double s = x[0], t = x[1] / x[0];
    if (!(s > 1.0 && s < 2.0 && t > 0.0 && t < 1.0))
        throw ValidationError("OutsideDomain", "point outside the open quadrilateral");
}

double HirzebruchModel::u(const Vec& x) const {
    require_domain(x);
    double s = x[0], t = x[1] / x[0];
    double c7 = 7.0 / (2.0 * chat_);
    double F = c7 * ((1.0 / 5.0) * ((s - 1.0) * std::log(s - 1.0) - (s - 1.0)) +
                     (1.0 / 4.0) * ((2.0 - s) * std::log(2.0 - s) - (2.0 - s)) +
                     (1.0 / 60.0) * ((3.0 * s + 2.0) * std::log(3.0 * s + 2.0) - (3.0 * s + 2.0)));
    double G = (0.5 / chat_) * (t * std::log(t) + (1.0 - t) * std::log(1.0 - t));
    return F + s * G;
}

Vec HirzebruchModel::grad(const Vec& x) const {
    require_domain(x);
    double s = x[0], t = x[1] / x[0];
    double c7 = 7.0 / (2.0 * chat_);
    double Fp = c7 * ((1.0 / 5.0) * std::log(s - 1.0) - (1.0 / 4.0) * std::log(2.0 - s) +
                      (1.0 / 20.0) * std::log(3.0 * s + 2.0));
    double G = (0.5 / chat_) * (t * std::log(t) + (1.0 - t) * std::log(1.0 - t));
    double Gp = (0.5 / chat_) * (std::log(t) - std::log(1.0 - t));
    Vec g(2);
    g << Fp + G - t * Gp, Gp;
    return g;
}

Mat HirzebruchModel::hess(const Vec& x) const {
    require_domain(x);
    double s = x[0], t = x[1] / x[0];
    double Fpp = (7.0 / (2.0 * chat_)) * s / ((s - 1.0) * (2.0 - s) * (3.0 * s + 2.0));
    double Gpp = 1.0 / (2.0 * chat_ * t * (1.0 - t));
    Mat G(2, 2);
    G(0, 0) = Fpp + t * t * Gpp / s;
    G(0, 1) = G(1, 0) = -t * Gpp / s;
    G(1, 1) = Gpp / s;
    return G;
}

Mat HirzebruchModel::hess_inverse(const Vec& x) const {
    require_domain(x);
    double s = x[0], t = x[1] / x[0];
    double h11 = poly_A(s) / s;
    Mat H(2, 2);
    H(0, 0) = h11;
    H(0, 1) = H(1, 0) = t * h11;
    H(1, 1) = s * poly_B(t) + t * t * h11;
    return H;
}

void HirzebruchModel::H_derivatives(const Vec& x, Mat& H, std::vector<Mat>& dH,
                                    std::vector<std::vector<Mat>>& d2H) const {
    require_domain(x);
    double s = x[0], t = x[1] / x[0];
    double k = 2.0 * chat_ / 7.0;
    double h11 = k * (-3.0 * s * s + 7.0 * s - 4.0 / s);
    double h11p = k * (-6.0 * s + 7.0 + 4.0 / (s * s));
    double h11pp = k * (-6.0 - 8.0 / (s * s * s));
    double B = 2.0 * chat_ * (t - t * t);
    double Bp = 2.0 * chat_ * (1.0 - 2.0 * t);
    double Bpp = -4.0 * chat_;

    Fun2 e11{h11, h11p, 0.0, h11pp, 0.0, 0.0};
    Fun2 e12{t * h11, t * h11p, h11, t * h11pp, h11p, 0.0};
    Fun2 e22{s * B + t * t * h11,       B + t * t * h11p, s * Bp + 2.0 * t * h11,
             t * t * h11pp,             Bp + 2.0 * t * h11p, s * Bpp + 2.0 * h11};

    Chained c11 = chain(e11, s, t), c12 = chain(e12, s, t), c22 = chain(e22, s, t);
    H = Mat(2, 2);
    H << c11.v, c12.v, c12.v, c22.v;
    dH.assign(2, Mat(2, 2));
    d2H.assign(2, std::vector<Mat>(2, Mat(2, 2)));
    for (int i = 0; i < 2; ++i) {
        dH[i] << c11.grad[i], c12.grad[i], c12.grad[i], c22.grad[i];
        for (int j = 0; j < 2; ++j)
            d2H[i][j] << c11.hess(i, j), c12.hess(i, j), c12.hess(i, j), c22.hess(i, j);
    }
}

// ---------------------------------------------------------------------------
// Perturbed

PerturbedModel::PerturbedModel(LabelledPolytope P, SplineField f)
    : base_(std::move(P)), f_(std::move(f)) {
    if (base_.domain().dim() != 2)
        throw ValidationError("BadIndex", "PerturbedModel is two-dimensional");
}

double PerturbedModel::u(const Vec& x) const { return base_.u(x) + f_.value(x.head<2>()); }

Vec PerturbedModel::grad(const Vec& x) const {
    return base_.grad(x) + Vec(f_.gradient(x.head<2>()));
}

Mat PerturbedModel::hess(const Vec& x) const {
    return base_.hess(x) + Mat(f_.hessian(x.head<2>()));
}

void PerturbedModel::H_derivatives(const Vec& x, Mat& H, std::vector<Mat>& dH,
                                   std::vector<std::vector<Mat>>& d2H) const {
    // Guillemin derivative assembly plus spline third/fourth derivatives
    int n = 2;
    Mat G = base_.hess(x) + Mat(f_.hessian(x.head<2>()));
    std::vector<Mat> dG(n, Mat::Zero(n, n));
    std::vector<std::vector<Mat>> d2G(n, std::vector<Mat>(n, Mat::Zero(n, n)));
    const auto& P = base_.domain();
    for (int k = 0; k < P.num_facets(); ++k) {
        const Vec& nu = P.facet(k).normal;
        double L = P.L(k, x);
        Mat nn = nu * nu.transpose();
        for (int i = 0; i < n; ++i) {
            dG[i] += -0.5 * nu[i] / (L * L) * nn;
            for (int j = 0; j < n; ++j) d2G[i][j] += nu[i] * nu[j] / (L * L * L) * nn;
        }
    }
    Eigen::Vector2d p2 = x.head<2>();
    auto fder = [&](int dx, int dy) { return f_.derivative(p2, dx, dy); };
    // d_i Hess f and d_i d_j Hess f from the spline
    auto dhess = [&](int i) {
        Mat M(2, 2);
        if (i == 0)
            M << fder(3, 0), fder(2, 1), fder(2, 1), fder(1, 2);
        else
            M << fder(2, 1), fder(1, 2), fder(1, 2), fder(0, 3);
        return M;
    };
    auto d2hess = [&](int i, int j) {
        int dx = (i == 0) + (j == 0), dy = (i == 1) + (j == 1);
        Mat M(2, 2);
        M << fder(dx + 2, dy), fder(dx + 1, dy + 1), fder(dx + 1, dy + 1), fder(dx, dy + 2);
        return M;
    };
    for (int i = 0; i < n; ++i) {
        dG[i] += dhess(i);
        for (int j = 0; j < n; ++j) d2G[i][j] += d2hess(i, j);
    }
    H = G.inverse();
    dH.assign(n, Mat());
    for (int i = 0; i < n; ++i) dH[i] = -H * dG[i] * H;
    d2H.assign(n, std::vector<Mat>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            d2H[i][j] = H * dG[i] * H * dG[j] * H + H * dG[j] * H * dG[i] * H - H * d2G[i][j] * H;
}

// ---------------------------------------------------------------------------
// curvature, boundary audit, Legendre transform, Einstein residual

double abreu_scalar(const PotentialModel& model, const Vec& x) {
    if (!model.domain().contains(x))
        throw ValidationError("OutsideDomain", "abreu_scalar needs an interior point");
    int n = model.dim();
    if (model.has_H_derivatives()) {
        Mat H;
        std::vector<Mat> dH;
        std::vector<std::vector<Mat>> d2H;
        model.H_derivatives(x, H, dH, d2H);
        double S = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) S -= d2H[i][j](i, j);
        return S;
    }
    // central differences with one Richardson level
    auto S_fd = [&](double h) {
        double S = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double d2;
                if (i == j) {
                    Vec xp = x, xm = x;
                    xp[i] += h;
                    xm[i] -= h;
                    d2 = (model.hess_inverse(xp)(i, i) - 2.0 * model.hess_inverse(x)(i, i) +
                          model.hess_inverse(xm)(i, i)) /
                         (h * h);
                } else {
                    Vec a = x, b = x, c = x, d = x;
                    a[i] += h; a[j] += h;
                    b[i] += h; b[j] -= h;
                    c[i] -= h; c[j] += h;
                    d[i] -= h; d[j] -= h;
                    d2 = (model.hess_inverse(a)(i, j) - model.hess_inverse(b)(i, j) -
                          model.hess_inverse(c)(i, j) + model.hess_inverse(d)(i, j)) /
                         (4.0 * h * h);
                }
                S -= d2;
            }
        return S;
    };
    double h = 1e-4 * model.domain().diameter();
    double Sh = S_fd(h), Sh2 = S_fd(0.5 * h);
    return (4.0 * Sh2 - Sh) / 3.0;
}

namespace {

// polynomial extrapolation to 0 through (nodes, values)
Vec neville_at_zero(const std::vector<double>& nodes, std::vector<Vec> vals) {
    int m = static_cast<int>(nodes.size());
    for (int level = 1; level < m; ++level)
        for (int i = 0; i < m - level; ++i) {
            double s0 = nodes[i], s1 = nodes[i + level];
            vals[i] = (s1 * vals[i] - s0 * vals[i + 1]) / (s1 - s0);
        }
    return vals[0];
}

Vec flatten(const Mat& M) {
    Vec v(M.size());
    int idx = 0;
    for (int i = 0; i < M.rows(); ++i)
        for (int j = 0; j < M.cols(); ++j) v[idx++] = M(i, j);
    return v;
}
Mat unflatten(const Vec& v, int n) {
    Mat M(n, n);
    int idx = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) M(i, j) = v[idx++];
    return M;
}

Vec grad_Hnn(const PotentialModel& model, const Vec& x, const Vec& nu) {
    int n = model.dim();
    if (model.has_H_derivatives()) {
        Mat H;
        std::vector<Mat> dH;
        std::vector<std::vector<Mat>> d2H;
        model.H_derivatives(x, H, dH, d2H);
        Vec g(n);
        for (int i = 0; i < n; ++i) g[i] = nu.dot(dH[i] * nu);
        return g;
    }
    double h = 1e-6 * model.domain().diameter();
    Vec g(n);
    for (int i = 0; i < n; ++i) {
        Vec xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        g[i] = (nu.dot(model.hess_inverse(xp) * nu) - nu.dot(model.hess_inverse(xm) * nu)) /
               (2.0 * h);
    }
    return g;
}

}  // namespace

BoundaryCheckReport boundary_check(const PotentialModel& model, const LabelledPolytope& P,
                                   int samples_per_facet, double tol) {
    int n = P.dim();
    double diam = P.diameter();
    // extrapolation nodes inside the 1e-2..1e-5 * diam window; the geometric
    // spacing keeps the Lagrange weights at 0 bounded
    const std::vector<double> base_offsets = {1e-3, 3.162e-4, 1e-4, 3.162e-5, 1e-5};

    BoundaryCheckReport report;
    report.tol = tol;
    report.pass = true;
    for (int k = 0; k < P.num_facets(); ++k) {
        const Vec nu = P.facet(k).normal;
        const Vec nhat = nu.normalized();
        auto decomp = facet_decomposition(P, k);

        FacetBoundaryCheck fc;
        fc.facet = k;
        fc.min_tangent_eig = std::numeric_limits<double>::infinity();

        int per_simplex = std::max(1, (samples_per_facet + static_cast<int>(decomp.size()) - 1) /
                                          static_cast<int>(decomp.size()));
        for (const auto& sx : decomp) {
            // interior barycentric samples of the facet simplex
            for (int si = 0; si < per_simplex; ++si) {
                Vec y;
                if (n == 2) {
                    double t = (si + 1.0) / (per_simplex + 1.0);
                    y = (1.0 - t) * sx.vertices.col(0) + t * sx.vertices.col(1);
                } else {
                    double t = (si + 1.0) / (per_simplex + 1.0);
                    Vec w(sx.vertices.cols());
                    for (int c = 0; c < w.size(); ++c)
                        w[c] = 1.0 + 0.3 * std::cos(2.1 * (si + 1) * (c + 1) + 0.4 * t);
                    w /= w.sum();
                    y = sx.vertices * w;
                }
                std::vector<double> offsets = base_offsets;
                bool usable = true;
                for (int shrink = 0; shrink < 25; ++shrink) {
                    usable = true;
                    for (double s : offsets)
                        if (!P.contains(y + s * diam * nhat)) usable = false;
                    if (usable) break;
                    for (auto& s : offsets) s *= 0.5;
                }
                if (!usable) continue;

                std::vector<double> nodes;
                std::vector<Vec> hv, gv;
                for (double s : offsets) {
                    Vec xq = y + s * diam * nhat;
                    nodes.push_back(s * diam);
                    hv.push_back(flatten(model.hess_inverse(xq)));
                    gv.push_back(grad_Hnn(model, xq, nu));
                }
                Mat H0 = unflatten(neville_at_zero(nodes, hv), n);
                Vec g0 = neville_at_zero(nodes, gv);
                fc.max_Hnu = std::max(fc.max_Hnu, (H0 * nu).norm());
                fc.max_dHnn = std::max(fc.max_dHnn, (g0 - 2.0 * nu).norm());

                if (n >= 2) {
                    Mat T(n, n - 1);
                    for (int j = 0; j < n - 1; ++j)
                        T.col(j) = (sx.vertices.col(j + 1) - sx.vertices.col(0)).normalized();
                    Eigen::SelfAdjointEigenSolver<Mat> es(T.transpose() * H0 * T);
                    fc.min_tangent_eig = std::min(fc.min_tangent_eig, es.eigenvalues().minCoeff());
                }
            }
        }
        fc.pass = fc.max_Hnu <= tol && fc.max_dHnn <= tol && fc.min_tangent_eig > 0.0;
        report.pass = report.pass && fc.pass;
        report.facets.push_back(fc);
    }
    return report;
}

double legendre_h(const PotentialModel& model, const Vec& x) {
    if (!model.domain().contains(x))
        throw ValidationError("OutsideDomain", "legendre_h needs an interior point");
    return x.dot(model.grad(x)) - model.u(x);
}

ResidualField einstein_residual(const PotentialModel& model, const LabelledPolytope& P,
                                double lambda, const Vec& a, int grid_n) {
    auto cert = monotone_point(P);
    if (!cert)
        throw ValidationError("NotMonotone", "einstein_residual needs a monotone polytope");
    const Vec p = cert->preferred_point;
    int n = P.dim();

    Vec lo = P.vertices()[0], hi = P.vertices()[0];
    for (const auto& v : P.vertices()) {
        lo = lo.cwiseMin(v);
        hi = hi.cwiseMax(v);
    }
    double margin = 1e-3 * P.diameter();

    ResidualField field;
    std::vector<int> idx(n, 0);
    // tensor grid of cell centers, kept if inside the inset interior
    std::vector<Vec> pts;
    std::function<void(int)> rec = [&](int d) {
        if (d == n) {
            Vec x(n);
            for (int i = 0; i < n; ++i)
                x[i] = lo[i] + (hi[i] - lo[i]) * (idx[i] + 0.5) / grid_n;
            if (P.contains(x, margin)) pts.push_back(x);
            return;
        }
        for (idx[d] = 0; idx[d] < grid_n; ++idx[d]) rec(d + 1);
    };
    rec(0);

    double sum = 0.0;
    for (const auto& x : pts) {
        Mat G = model.hess(x);
        double det = G.determinant();
        if (!(det > 0.0))
            throw ValidationError("HessianNotPD", "Hess u is not positive definite on the grid");
        double h_p = (x - p).dot(model.grad(x)) - model.u(x);
        double r = 0.5 * std::log(det) - lambda * h_p - a.dot(x - p);
        field.points.push_back(x);
        field.values.push_back(r);
        sum += r;
    }
    if (field.values.empty())
        throw ValidationError("BadIndex", "residual grid contains no interior points");
    field.mean = sum / field.values.size();
    for (double r : field.values)
        field.deviation = std::max(field.deviation, std::abs(r - field.mean));
    return field;
}

}  // namespace abreu
