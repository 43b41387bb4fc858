#pragma once

#include "abreu/labelling.hpp"
#include "abreu/measure.hpp"

namespace abreu {

/// The soliton vector a: the unique linear weight making the exp(2<a,.>)
/// weighted barycenter of P equal the preferred point.
struct SolitonVector {
    Vec a;
    double residual = 0.0;  // normalized moment residual, see soliton_residual
    int iterations = 0;
};

/// Damped Newton minimization of V(a) = int_P exp(2<a,x-p>) dw for a monotone
/// polytope with preferred point p. Returns a = 0 exactly when p is the
/// barycenter within tolerance. Throws NotMonotone / MaxIterations.
SolitonVector soliton_vector(const LabelledPolytope& P, double tol = 1e-10);

/// max_i |int_P exp(2<a,x>) (x_i - p_i) dw| / vol(P); the f == 1 moment
/// condition holds identically.
double soliton_residual(const LabelledPolytope& P, const Vec& p, const Vec& a);

}  // namespace abreu
