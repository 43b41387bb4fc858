#pragma once

#include <optional>
#include <string>

#include "abreu/measure.hpp"

namespace abreu {

/// The extremal affine function A with W A = 2 Z, expressed in the basis
/// (1, x_1, ..., x_n) of the input frame.
struct ExtremalResult {
    AffineFunction A;
    double condition_number = 0.0;
    bool is_constant = false;
    double constancy_tol = 1e-8;
    std::optional<std::string> warning;  // set when the W-solve is ill-conditioned
};

/// SPD solve of the moment system; is_constant iff
/// |linear part| * diam(P) <= 1e-8 * |A_0|. Never throws for valid P; an
/// IllConditioned warning is attached when cond(W) > 1e12.
ExtremalResult extremal_affine(const LabelledPolytope& P);

struct BarycenterCriterion {
    Vec bary_interior;
    Vec bary_boundary;
    bool coincide = false;
};

/// Donaldson's criterion: A is constant iff the centers of mass of (P, dw)
/// and (dP, dsigma_nu) coincide (within 1e-8 * diam).
BarycenterCriterion barycenter_criterion(const LabelledPolytope& P);

}  // namespace abreu
