#pragma once

#include <functional>

#include "abreu/polytope.hpp"

namespace abreu {

/// x -> constant + <linear, x>.
struct AffineFunction {
    double constant = 0.0;
    Vec linear;

    AffineFunction() = default;
    AffineFunction(double c, Vec l) : constant(c), linear(std::move(l)) {}
    double operator()(const Vec& x) const { return constant + linear.dot(x); }
};

/// Polynomial of total degree <= 2: c + <l,x> + x^T Q x (Q symmetric).
struct Polynomial2 {
    double c = 0.0;
    Vec l;
    Mat Q;

    explicit Polynomial2(int n) : l(Vec::Zero(n)), Q(Mat::Zero(n, n)) {}
    double operator()(const Vec& x) const { return c + l.dot(x) + x.dot(Q * x); }

    static Polynomial2 constant(int n, double v) {
        Polynomial2 p(n);
        p.c = v;
        return p;
    }
    static Polynomial2 coordinate(int n, int i) {
        Polynomial2 p(n);
        p.l[i] = 1.0;
        return p;
    }
    static Polynomial2 product(int n, int i, int j) {
        Polynomial2 p(n);
        p.Q(i, j) += 0.5;
        p.Q(j, i) += 0.5;
        return p;
    }
    static Polynomial2 affine(const AffineFunction& f) {
        Polynomial2 p(static_cast<int>(f.linear.size()));
        p.c = f.constant;
        p.l = f.linear;
        return p;
    }
};

/// Moment data of Eq-style linear system: W_ij = int_P x_i x_j dw (x_0 = 1),
/// Z_i = int_{dP} x_i dsigma_nu. W is (n+1)x(n+1) SPD, Z_0 > 0.
struct MomentData {
    Mat W;
    Vec Z;
};

/// Exact integral of p over P against Lebesgue measure (closed-form monomial
/// integrals over the fan triangulation; no quadrature error).
double integrate_interior(const LabelledPolytope& P, const Polynomial2& p);

/// Exact integral of p over facet k against dsigma_nu, the boundary measure
/// with nu_k ^ dsigma_nu = -dw: Euclidean facet measure divided by |nu_k|.
double integrate_facet(const LabelledPolytope& P, int k, const Polynomial2& p);

MomentData moments(const LabelledPolytope& P);

double volume(const LabelledPolytope& P);
Vec barycenter(const LabelledPolytope& P);
/// Center of mass of (dP, dsigma_nu).
Vec boundary_barycenter(const LabelledPolytope& P);

/// Psi(f) = sum_k (int_{F_k} f dsigma_nu) nu_k; equals -vol(P) * linear(f)
/// and is independent of the labelling.
Vec psi_map(const LabelledPolytope& P, const AffineFunction& f);

/// int_P exp(2<a, x-p>) g(x) dw by order-12 Gauss-Legendre per simplex with
/// dyadic refinement until two successive levels agree to rel_tol.
/// Throws ConvergenceError("QuadratureNotConverged") past the depth limit.
double integrate_exp_weighted(const LabelledPolytope& P, const Vec& a, const Vec& p,
                              const Polynomial2& g, double rel_tol = 1e-10);

/// Same adaptive rule for an arbitrary smooth integrand.
double integrate_function(const LabelledPolytope& P, const std::function<double(const Vec&)>& f,
                          double rel_tol = 1e-10);

}  // namespace abreu
