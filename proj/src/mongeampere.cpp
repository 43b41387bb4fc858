#include "abreu/mongeampere.hpp"

#include <cmath>

namespace abreu {

namespace {

struct Workspace {
    LabelledPolytope P;
    Vec p;                      // preferred point
    Vec a;
    double lambda = 1.0;
    GuilleminModel base;
    std::vector<Vec> colloc;
    std::vector<double> q;      // 1/2 log det Hess u_o at collocation points
    std::vector<Mat> G0;        // Hess u_o
    std::vector<double> u0, h0c;  // u_o and <x-p, grad u_o> - u_o
    std::vector<Vec> g0;        // grad u_o
    std::vector<int> active;    // active coefficient (flattened) indices
    std::vector<int> col_of;    // flattened index -> column or -1
    SplineField f;

    Workspace(const LabelledPolytope& poly) : P(poly), base(poly) {}
};

// collocation cloud: tensor grid of cell centers plus boundary-graded rings
std::vector<Vec> collocation_points(const LabelledPolytope& P, const SolverConfig& cfg) {
    double diam = P.diameter();
    double layer = cfg.boundary_layer * diam;
    Vec lo = P.vertices()[0], hi = P.vertices()[0];
    for (const auto& v : P.vertices()) {
        lo = lo.cwiseMin(v);
        hi = hi.cwiseMax(v);
    }
    std::vector<Vec> pts;
    int N = cfg.resolution;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            Vec x(2);
            x << lo[0] + (hi[0] - lo[0]) * (i + 0.5) / N, lo[1] + (hi[1] - lo[1]) * (j + 0.5) / N;
            if (P.contains(x, layer)) pts.push_back(x);
        }
    // graded rings toward each facet
    for (int k = 0; k < P.num_facets(); ++k) {
        auto decomp = facet_decomposition(P, k);
        Vec nhat = P.facet(k).normal.normalized();
        for (const auto& sx : decomp) {
            int m = std::max(4, N / 2);
            for (int i = 0; i < m; ++i) {
                double t = (i + 0.5) / m;
                Vec y = (1.0 - t) * sx.vertices.col(0) + t * sx.vertices.col(1);
                for (double f : {1.0, 2.0, 4.0, 8.0, 16.0}) {
                    Vec x = y + f * layer * nhat;
                    if (P.contains(x, 0.999 * layer)) pts.push_back(x);
                }
            }
        }
    }
    return pts;
}

double half_logdet(const Mat& G) { return 0.5 * std::log(G.determinant()); }

bool spd2(const Mat& G) {
    return G(0, 0) > 0.0 && G(0, 0) * G(1, 1) - G(0, 1) * G(1, 0) > 0.0;
}

struct Residuals {
    Vec r;          // raw residual values r(x_i) (without kappa)
    bool pd = true;
    double deviation = 0.0;
};

Residuals eval_residuals(Workspace& W, const Vec& coef, double s) {
    int m = static_cast<int>(W.colloc.size());
    // write coefficients into the spline
    auto& C = W.f.coefficients();
    for (size_t j = 0; j < W.active.size(); ++j)
        C(W.active[j] / C.cols(), W.active[j] % C.cols()) = coef[j];

    Residuals res;
    res.r.resize(m);
    for (int i = 0; i < m; ++i) {
        const Vec& x = W.colloc[i];
        Eigen::Vector2d x2 = x.head<2>();
        Mat G = W.G0[i] + Mat(W.f.hessian(x2));
        if (!spd2(G)) {
            res.pd = false;
            return res;
        }
        double fval = W.f.value(x2);
        Vec fgrad = W.f.gradient(x2);
        double h = W.h0c[i] + (x - W.p).dot(fgrad) - fval;
        res.r[i] = half_logdet(G) - s * W.lambda * h - (1.0 - s) * W.q[i] - s * W.a.dot(x - W.p);
    }
    double mean = res.r.mean();
    res.deviation = (res.r.array() - mean).abs().maxCoeff();
    return res;
}

// one Gauss-Newton stage at fixed continuation parameter s
bool newton_stage(Workspace& W, Vec& coef, double s, const SolverConfig& cfg, int& iter_count,
                  std::vector<double>& history, double target) {
    int m = static_cast<int>(W.colloc.size());
    int nc = static_cast<int>(W.active.size());
    const double gw = cfg.gauge_weight;

    Residuals cur = eval_residuals(W, coef, s);
    if (!cur.pd) throw ConvergenceError("HessianNotPD", "initial iterate is not convex");

    auto gauge_rows = [&](const Vec& c, Vec& gr) {
        // f(p) = 0, grad f(p) = 0
        Eigen::Vector2d p2 = W.p.head<2>();
        gr.resize(3);
        auto& C = W.f.coefficients();
        for (size_t j = 0; j < W.active.size(); ++j)
            C(W.active[j] / C.cols(), W.active[j] % C.cols()) = c[j];
        gr[0] = W.f.value(p2);
        Eigen::Vector2d g = W.f.gradient(p2);
        gr[1] = g[0];
        gr[2] = g[1];
    };

    for (int it = 0; it < cfg.max_newton; ++it) {
        ++iter_count;
        double kappa = cur.r.mean();
        Vec gr;
        gauge_rows(coef, gr);
        history.push_back(cur.deviation);
        if (cur.deviation <= target && gr.lpNorm<Eigen::Infinity>() <= 1e-10) return true;

        // assemble J (m + 3 rows, nc + 1 columns) and R
        Mat J = Mat::Zero(m + 3, nc + 1);
        Vec R(m + 3);
        const int deg = W.f.degree();
        for (int i = 0; i < m; ++i) {
            const Vec& x = W.colloc[i];
            Eigen::Vector2d x2 = x.head<2>();
            Mat G = W.G0[i] + Mat(W.f.hessian(x2));
            Mat H = G.inverse();
            auto patch = W.f.patch(x2, 2);
            const auto& C = W.f.coefficients();
            for (int aI = 0; aI <= deg; ++aI)
                for (int bI = 0; bI <= deg; ++bI) {
                    int flat = (patch.ix0 + aI) * static_cast<int>(C.cols()) + (patch.iy0 + bI);
                    int col = W.col_of[flat];
                    if (col < 0) continue;
                    double phi = patch.bx(0, aI) * patch.by(0, bI);
                    double phix = patch.bx(1, aI) * patch.by(0, bI);
                    double phiy = patch.bx(0, aI) * patch.by(1, bI);
                    double phixx = patch.bx(2, aI) * patch.by(0, bI);
                    double phixy = patch.bx(1, aI) * patch.by(1, bI);
                    double phiyy = patch.bx(0, aI) * patch.by(2, bI);
                    double trH = H(0, 0) * phixx + 2.0 * H(0, 1) * phixy + H(1, 1) * phiyy;
                    double dh = (x[0] - W.p[0]) * phix + (x[1] - W.p[1]) * phiy - phi;
                    J(i, col) = 0.5 * trH - s * W.lambda * dh;
                }
            J(i, nc) = -1.0;
            R[i] = cur.r[i] - kappa;
        }
        // gauge rows
        {
            Eigen::Vector2d p2 = W.p.head<2>();
            auto patch = W.f.patch(p2, 1);
            const auto& C = W.f.coefficients();
            for (int aI = 0; aI <= deg; ++aI)
                for (int bI = 0; bI <= deg; ++bI) {
                    int flat = (patch.ix0 + aI) * static_cast<int>(C.cols()) + (patch.iy0 + bI);
                    int col = W.col_of[flat];
                    if (col < 0) continue;
                    J(m, col) = gw * patch.bx(0, aI) * patch.by(0, bI);
                    J(m + 1, col) = gw * patch.bx(1, aI) * patch.by(0, bI);
                    J(m + 2, col) = gw * patch.bx(0, aI) * patch.by(1, bI);
                }
            R[m] = gw * gr[0];
            R[m + 1] = gw * gr[1];
            R[m + 2] = gw * gr[2];
        }

        // Gauss-Newton step from the normal equations (ridge fallback)
        Mat JtJ = Mat::Zero(nc + 1, nc + 1);
        JtJ.selfadjointView<Eigen::Lower>().rankUpdate(J.transpose());
        Vec JtR = J.transpose() * R;
        Eigen::LDLT<Mat> ldlt(JtJ.selfadjointView<Eigen::Lower>());
        Vec delta = ldlt.solve(-JtR);
        if (ldlt.info() != Eigen::Success || !delta.allFinite()) {
            double mu = 1e-10 * JtJ.trace() / (nc + 1);
            delta = (JtJ.selfadjointView<Eigen::Lower>().toDenseMatrix() +
                     mu * Mat::Identity(nc + 1, nc + 1))
                        .ldlt()
                        .solve(-JtR);
        }
        double base_obj = 0.5 * R.squaredNorm();
        double slope = JtR.dot(delta);  // negative

        // damped step: keep the Hessian positive definite and decrease ||R||^2
        double alpha = 1.0;
        bool accepted = false;
        for (int bt = 0; bt < cfg.max_backtracks; ++bt) {
            Vec trial = coef + alpha * delta.head(nc);
            Residuals rt = eval_residuals(W, trial, s);
            if (rt.pd) {
                Vec grt;
                gauge_rows(trial, grt);
                double kap = rt.r.mean();
                double obj = 0.5 * (rt.r.array() - kap).matrix().squaredNorm() +
                             0.5 * gw * gw * grt.squaredNorm();
                if (obj <= base_obj + cfg.armijo * alpha * slope || obj < base_obj) {
                    coef = trial;
                    cur = rt;
                    accepted = true;
                    break;
                }
            }
            alpha *= 0.5;
        }
        if (!accepted) return false;  // stalled
    }
    return false;
}

Vec fit_initial_guess(Workspace& W, const std::function<double(const Vec&)>& g) {
    // least-squares fit of g at the collocation points in the active basis
    int m = static_cast<int>(W.colloc.size());
    int nc = static_cast<int>(W.active.size());
    Mat A = Mat::Zero(m, nc);
    Vec b(m);
    const int deg = W.f.degree();
    const auto& C = W.f.coefficients();
    for (int i = 0; i < m; ++i) {
        Eigen::Vector2d x2 = W.colloc[i].head<2>();
        auto patch = W.f.patch(x2, 0);
        for (int aI = 0; aI <= deg; ++aI)
            for (int bI = 0; bI <= deg; ++bI) {
                int flat = (patch.ix0 + aI) * static_cast<int>(C.cols()) + (patch.iy0 + bI);
                int col = W.col_of[flat];
                if (col < 0) continue;
                A(i, col) = patch.bx(0, aI) * patch.by(0, bI);
            }
        b[i] = g(W.colloc[i]);
    }
    return (A.transpose() * A + 1e-12 * Mat::Identity(nc, nc)).ldlt().solve(A.transpose() * b);
}

}  // namespace

SolverResult solve(const LabelledPolytope& P, double lambda, std::optional<Vec> a,
                   SolverConfig cfg) {
    if (P.dim() != 2)
        throw ValidationError("BadIndex", "the solver is restricted to dimension 2");
    if (!(cfg.tolerance > 0.0) || cfg.resolution < 8)
        throw ValidationError("BadIndex", "SolverConfig needs tolerance > 0 and resolution >= 8");
    auto cert = monotone_point(P);
    if (!cert) throw ValidationError("NotMonotone", "the solver needs a monotone polytope");

    Workspace W(P);
    W.p = cert->preferred_point;
    W.lambda = lambda;
    W.a = a ? *a : soliton_vector(P).a;

    // spline over the bounding box
    Vec lo = P.vertices()[0], hi = P.vertices()[0];
    for (const auto& v : P.vertices()) {
        lo = lo.cwiseMin(v);
        hi = hi.cwiseMax(v);
    }
    double pad = 1e-9 * P.diameter();
    int cells = cfg.spline_cells > 0 ? cfg.spline_cells : std::max(4, cfg.resolution / 2);
    W.f = SplineField(Eigen::Vector2d(lo[0] - pad, lo[1] - pad),
                      Eigen::Vector2d(hi[0] + pad, hi[1] + pad), cells, cells, cfg.spline_degree);

    W.colloc = collocation_points(P, cfg);
    int m = static_cast<int>(W.colloc.size());
    W.q.resize(m);
    W.G0.resize(m);
    W.u0.resize(m);
    W.h0c.resize(m);
    W.g0.resize(m);
    for (int i = 0; i < m; ++i) {
        const Vec& x = W.colloc[i];
        W.G0[i] = W.base.hess(x);
        W.q[i] = half_logdet(W.G0[i]);
        W.u0[i] = W.base.u(x);
        W.g0[i] = W.base.grad(x);
        W.h0c[i] = (x - W.p).dot(W.g0[i]) - W.u0[i];
    }

    // active coefficients: basis functions seen by some collocation point
    const auto& C = W.f.coefficients();
    std::vector<char> seen(C.size(), 0);
    const int deg = W.f.degree();
    for (int i = 0; i < m; ++i) {
        auto patch = W.f.patch(W.colloc[i].head<2>(), 0);
        for (int aI = 0; aI <= deg; ++aI)
            for (int bI = 0; bI <= deg; ++bI)
                seen[(patch.ix0 + aI) * C.cols() + (patch.iy0 + bI)] = 1;
    }
    W.col_of.assign(C.size(), -1);
    for (int flat = 0; flat < static_cast<int>(C.size()); ++flat)
        if (seen[flat]) {
            W.col_of[flat] = static_cast<int>(W.active.size());
            W.active.push_back(flat);
        }
    if (static_cast<int>(W.active.size()) + 1 > m + 3)
        throw ValidationError("BadIndex", "not enough collocation points for the spline basis");

    Vec coef = Vec::Zero(W.active.size());
    if (cfg.initial_guess) coef = fit_initial_guess(W, *cfg.initial_guess);

    SolverResult result;
    result.soliton_a = W.a;
    result.preferred_point = W.p;

    int iters = 0;
    std::vector<double> history;
    bool ok = false;
    Vec best = coef;
    double best_dev = std::numeric_limits<double>::infinity();
    auto consider = [&](const Vec& c) {
        Residuals r = eval_residuals(W, c, 1.0);
        if (r.pd && r.deviation < best_dev) {
            best_dev = r.deviation;
            best = c;
        }
    };
    if (cfg.continuation_steps <= 1) {
        ok = newton_stage(W, coef, 1.0, cfg, iters, history, cfg.tolerance);
        consider(coef);
    }
    if (!ok) {
        // continuation on the interpolated residual family; intermediate
        // stages only warm-start the next one, so a stage stalling at its
        // collocation floor does not abort the path
        int steps = std::max(4, cfg.continuation_steps);
        coef.setZero();
        if (cfg.initial_guess) coef = fit_initial_guess(W, *cfg.initial_guess);
        for (int k = 1; k <= steps; ++k) {
            double s = static_cast<double>(k) / steps;
            double target = (k == steps) ? cfg.tolerance : std::max(cfg.tolerance, 1e-8);
            bool stage_ok = newton_stage(W, coef, s, cfg, iters, history, target);
            if (k == steps) ok = stage_ok;
        }
        consider(coef);
    }
    coef = best;

    Residuals fin = eval_residuals(W, coef, 1.0);
    result.deviation = fin.pd ? fin.deviation : std::numeric_limits<double>::infinity();
    result.iterations = iters;
    result.history = std::move(history);
    result.model = std::make_shared<PerturbedModel>(P, W.f);
    if (!ok)
        throw ConvergenceError("NoConvergence",
                               "solver stalled at deviation " + std::to_string(result.deviation));
    return result;
}

CompareMetrics compare(const PotentialModel& A, const PotentialModel& B, int grid_n, double delta) {
    const LabelledPolytope& PA = A.domain();
    const LabelledPolytope& PB = B.domain();
    if (PA.dim() != PB.dim() || PA.num_vertices() != PB.num_vertices())
        throw ValidationError("DomainMismatch", "models live on different polytopes");
    double tol = 1e-7 * PB.diameter();
    for (int v = 0; v < PA.num_vertices(); ++v)
        if ((PA.vertices()[v] - PB.vertices()[v]).norm() > tol)
            throw ValidationError("DomainMismatch", "models live on different polytopes");

    Vec lo = PB.vertices()[0], hi = PB.vertices()[0];
    for (const auto& v : PB.vertices()) {
        lo = lo.cwiseMin(v);
        hi = hi.cwiseMax(v);
    }
    std::vector<Vec> pts;
    for (int i = 0; i < grid_n; ++i)
        for (int j = 0; j < grid_n; ++j) {
            Vec x(2);
            x << lo[0] + (hi[0] - lo[0]) * (i + 0.5) / grid_n,
                lo[1] + (hi[1] - lo[1]) * (j + 0.5) / grid_n;
            bool inside = true;
            for (int k = 0; k < PB.num_facets() && inside; ++k)
                if (PB.L(k, x) < delta) inside = false;
            if (inside) pts.push_back(x);
        }
    if (pts.empty()) throw ValidationError("BadIndex", "comparison grid is empty");

    CompareMetrics cm;
    cm.points = static_cast<int>(pts.size());
    double sum = 0.0;
    Vec du(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) {
        Mat HA = A.hess_inverse(pts[i]);
        Mat HB = B.hess_inverse(pts[i]);
        double rel = (HA - HB).norm() / HB.norm();
        cm.h_rel_max = std::max(cm.h_rel_max, rel);
        sum += rel;
        du[i] = A.u(pts[i]) - B.u(pts[i]);
    }
    cm.h_rel_mean = sum / pts.size();

    // Chebyshev-minimal affine gauge via Lawson's iteratively reweighted LS
    Mat X(pts.size(), 3);
    for (size_t i = 0; i < pts.size(); ++i) X.row(i) << 1.0, pts[i][0], pts[i][1];
    Vec w = Vec::Ones(pts.size());
    Vec g = Vec::Zero(3);
    for (int it = 0; it < 60; ++it) {
        g = (X.transpose() * w.asDiagonal() * X)
                .ldlt()
                .solve(X.transpose() * (w.asDiagonal() * du));
        Vec resid = (du - X * g).cwiseAbs();
        double wr = w.dot(resid);
        if (wr <= 0.0) break;
        w = (w.array() * resid.array()).matrix() / wr;
    }
    cm.u_gauge_max = (du - X * g).cwiseAbs().maxCoeff();
    return cm;
}

}  // namespace abreu
