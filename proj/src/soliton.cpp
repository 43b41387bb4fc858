#include "abreu/soliton.hpp"

#include <cmath>

namespace abreu {

namespace {

// gradient of V about p: 2 int exp(2<a,x-p>) (x - p) dw
Vec grad_V(const LabelledPolytope& P, const Vec& a, const Vec& p, double qtol) {
    int n = P.dim();
    Vec g(n);
    for (int i = 0; i < n; ++i) {
        Polynomial2 xi = Polynomial2::coordinate(n, i);
        xi.c = -p[i];
        g[i] = 2.0 * integrate_exp_weighted(P, a, p, xi, qtol);
    }
    return g;
}

Mat hess_V(const LabelledPolytope& P, const Vec& a, const Vec& p, double qtol) {
    int n = P.dim();
    Mat H(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            Polynomial2 q(n);  // (x_i - p_i)(x_j - p_j)
            q.Q(i, j) += 0.5;
            q.Q(j, i) += 0.5;
            q.l[i] += -p[j];
            q.l[j] += -p[i];
            q.c = p[i] * p[j];
            H(i, j) = H(j, i) = 4.0 * integrate_exp_weighted(P, a, p, q, qtol);
        }
    return H;
}

}  // namespace

SolitonVector soliton_vector(const LabelledPolytope& P, double tol) {
    auto cert = monotone_point(P);
    if (!cert)
        throw ValidationError("NotMonotone", "soliton_vector needs a monotone labelled polytope");
    const Vec p = cert->preferred_point;
    const int n = P.dim();
    const double vol = volume(P);
    // gradient quadrature well below the stopping threshold, so the Newton
    // plateau sits under it rather than on top of it
    const double qtol = tol / 30.0;

    Vec a = Vec::Zero(n);
    const int max_iter = 80;
    double V = integrate_exp_weighted(P, a, p, Polynomial2::constant(n, 1.0), qtol);
    for (int it = 0; it <= max_iter; ++it) {
        Vec g = grad_V(P, a, p, qtol);
        // gradient norm <= tol * vol(P), relaxed by the weight mass when the
        // minimizer sits far out (the integrals then dwarf vol and double
        // precision cannot resolve tol * vol absolutely)
        if (g.lpNorm<Eigen::Infinity>() <= tol * std::max(vol, V)) {
            SolitonVector sv;
            sv.a = a;
            sv.iterations = it;
            sv.residual = soliton_residual(P, p, a);
            return sv;
        }
        if (it == max_iter) break;
        Mat H = hess_V(P, a, p, qtol);
        Eigen::LLT<Mat> llt(H);
        if (llt.info() != Eigen::Success)
            throw ConvergenceError("MaxIterations", "Newton Hessian lost positive definiteness");
        Vec step = llt.solve(-g);
        if (g.lpNorm<Eigen::Infinity>() <= 1e-6 * std::max(vol, V)) {
            // in the quadratic regime V-differences drop below double
            // resolution; take the undamped Newton step
            a += step;
            V = integrate_exp_weighted(P, a, p, Polynomial2::constant(n, 1.0), qtol);
            continue;
        }
        // Armijo backtracking on the strictly convex V
        double t = 1.0;
        double gTs = g.dot(step);
        for (int ls = 0; ls < 40; ++ls) {
            double Vt =
                integrate_exp_weighted(P, a + t * step, p, Polynomial2::constant(n, 1.0), qtol);
            if (Vt <= V + 1e-4 * t * gTs) {
                a += t * step;
                V = Vt;
                break;
            }
            t *= 0.5;
        }
    }
    throw ConvergenceError("MaxIterations",
                           "soliton Newton did not converge in " + std::to_string(max_iter) +
                               " iterations");
}

double soliton_residual(const LabelledPolytope& P, const Vec& p, const Vec& a) {
    int n = P.dim();
    const double vol = volume(P);
    Vec origin = Vec::Zero(n);
    double res = 0.0;
    for (int i = 0; i < n; ++i) {
        Polynomial2 xi = Polynomial2::coordinate(n, i);
        xi.c = -p[i];
        res = std::max(res, std::abs(integrate_exp_weighted(P, a, origin, xi, 1e-12)) / vol);
    }
    return res;
}

}  // namespace abreu
