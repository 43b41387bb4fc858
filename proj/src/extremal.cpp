#include "abreu/extremal.hpp"

namespace abreu {

ExtremalResult extremal_affine(const LabelledPolytope& P) {
    int n = P.dim();
    MomentData md = moments(P);

    Eigen::SelfAdjointEigenSolver<Mat> es(md.W);
    double lmin = es.eigenvalues().minCoeff();
    double lmax = es.eigenvalues().maxCoeff();

    ExtremalResult res;
    res.condition_number = lmax / std::max(lmin, 1e-300);
    Vec A = md.W.ldlt().solve(2.0 * md.Z);
    res.A = AffineFunction(A[0], A.tail(n));
    res.is_constant = res.A.linear.norm() * P.diameter() <= res.constancy_tol * std::abs(A[0]);
    if (res.condition_number > 1e12)
        res.warning = "IllConditioned: cond(W) = " + std::to_string(res.condition_number);
    return res;
}

BarycenterCriterion barycenter_criterion(const LabelledPolytope& P) {
    BarycenterCriterion bc;
    bc.bary_interior = barycenter(P);
    bc.bary_boundary = boundary_barycenter(P);
    bc.coincide = (bc.bary_interior - bc.bary_boundary).norm() <= 1e-8 * P.diameter();
    return bc;
}

}  // namespace abreu
