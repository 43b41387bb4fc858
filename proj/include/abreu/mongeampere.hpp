#pragma once

#include <functional>
#include <memory>
#include <optional>

#include "abreu/potential.hpp"
#include "abreu/soliton.hpp"

namespace abreu {

struct SolverConfig {
    int resolution = 32;       // interior collocation grid resolution (>= 8)
    double tolerance = 1e-8;   // target deviation of the residual
    int max_newton = 60;
    double armijo = 1e-4;
    int max_backtracks = 40;
    int continuation_steps = 0;  // 0 = direct solve, continuation enabled on failure
    int spline_degree = 5;
    int spline_cells = 0;        // per axis; 0 derives from resolution
    double boundary_layer = 1e-3;  // collocation inset, * diam
    double gauge_weight = 10.0;
    /// optional initial guess for the correction f (fitted into the spline)
    std::optional<std::function<double(const Vec&)>> initial_guess;
};

struct SolverResult {
    std::shared_ptr<PerturbedModel> model;
    double deviation = 0.0;
    int iterations = 0;
    std::vector<double> history;  // deviation per accepted Newton step
    Vec soliton_a;
    Vec preferred_point;
};

/// Solves the two-dimensional Kaehler-Einstein / Kaehler-Ricci-soliton
/// equation on a monotone labelled polytope: finds u = u_o + f, with f a
/// smooth spline on the closure of P, making
///   r(x) = 1/2 log det Hess u - lambda h_p(x) - <a, x-p>
/// constant over the collocation points (least-squares Gauss-Newton; f is
/// gauge-fixed by f(p) = 0, grad f(p) = 0). When `a` is omitted the soliton
/// vector is computed first. Throws NotMonotone, HessianNotPD, NoConvergence.
SolverResult solve(const LabelledPolytope& P, double lambda, std::optional<Vec> a = std::nullopt,
                   SolverConfig config = {});

struct CompareMetrics {
    double h_rel_max = 0.0;
    double h_rel_mean = 0.0;
    double u_gauge_max = 0.0;  // min over affine g of max |u_A - u_B - g|
    int points = 0;
};

/// Relative differences of H over a grid with all L_k >= delta (labels of B),
/// plus the affine-gauge-minimized sup difference of u. Throws DomainMismatch.
CompareMetrics compare(const PotentialModel& A, const PotentialModel& B, int grid_n, double delta);

}  // namespace abreu
