#pragma once

#include <memory>
#include <vector>

#include "abreu/labelling.hpp"
#include "abreu/polytope.hpp"
#include "abreu/spline.hpp"

namespace abreu {

/// An evaluable symplectic potential u on a polytope domain, with exact
/// gradient and Hessian. H = (Hess u)^-1 is the metric tensor in angle
/// directions; models may provide analytic first/second derivatives of H
/// for the Abreu scalar curvature.
class PotentialModel {
public:
    virtual ~PotentialModel() = default;

    virtual const LabelledPolytope& domain() const = 0;
    int dim() const { return domain().dim(); }

    virtual double u(const Vec& x) const = 0;
    virtual Vec grad(const Vec& x) const = 0;
    virtual Mat hess(const Vec& x) const = 0;
    virtual Mat hess_inverse(const Vec& x) const;

    virtual bool has_H_derivatives() const { return false; }
    /// H, dH[i] = d_i H and d2H[i][j] = d_i d_j H at an interior point.
    virtual void H_derivatives(const Vec& x, Mat& H, std::vector<Mat>& dH,
                               std::vector<std::vector<Mat>>& d2H) const;
};

/// u_o = 1/2 sum_k L_k log L_k; the canonical potential of the labelling.
class GuilleminModel : public PotentialModel {
public:
    explicit GuilleminModel(LabelledPolytope P) : P_(std::move(P)) {}

    const LabelledPolytope& domain() const override { return P_; }
    double u(const Vec& x) const override;
    Vec grad(const Vec& x) const override;
    Mat hess(const Vec& x) const override;
    bool has_H_derivatives() const override { return true; }
    void H_derivatives(const Vec& x, Mat& H, std::vector<Mat>& dH,
                       std::vector<std::vector<Mat>>& d2H) const override;

private:
    void require_interior(const Vec& x) const;
    LabelledPolytope P_;
};

/// The closed-form Kaehler-Einstein metric on the quadrilateral
/// hull{(1,0),(1,1),(2,2),(2,0)}, adapted to the monotone labels nu(C)
/// (nu_1 = 7C/5 e1, nu_2 = -7C/4 e1, nu_3 = C e2, nu_4 = C(e1-e2)).
/// H is given directly by two polynomials with roots on the facets.
class HirzebruchModel : public PotentialModel {
public:
    explicit HirzebruchModel(double C);

    double C() const { return C_; }
    const LabelledPolytope& domain() const override { return P_; }
    double u(const Vec& x) const override;
    Vec grad(const Vec& x) const override;
    Mat hess(const Vec& x) const override;
    Mat hess_inverse(const Vec& x) const override;
    bool has_H_derivatives() const override { return true; }
    void H_derivatives(const Vec& x, Mat& H, std::vector<Mat>& dH,
                       std::vector<std::vector<Mat>>& d2H) const override;

    /// The fiber polynomial A(s) = -(2/(7C))(s-1)(s-2)(3s+2) and the base
    /// polynomial B(t) = (2/C) t (1-t); A(1) = A(2) = 0, B(0) = B(1) = 0.
    double poly_A(double s) const;
    double poly_B(double t) const;

private:
    void require_domain(const Vec& x) const;
    double C_;
    double chat_;  // polynomial coefficient 1/C
    LabelledPolytope P_;
};

/// u = u_o + f with f a smooth spline field on the closure of P.
class PerturbedModel : public PotentialModel {
public:
    PerturbedModel(LabelledPolytope P, SplineField f);

    const LabelledPolytope& domain() const override { return base_.domain(); }
    const SplineField& correction() const { return f_; }
    double u(const Vec& x) const override;
    Vec grad(const Vec& x) const override;
    Mat hess(const Vec& x) const override;
    bool has_H_derivatives() const override { return true; }
    void H_derivatives(const Vec& x, Mat& H, std::vector<Mat>& dH,
                       std::vector<std::vector<Mat>>& d2H) const override;

private:
    GuilleminModel base_;
    SplineField f_;
};

/// Abreu scalar curvature S(u) = -sum_ij d^2 H_ij / dx_i dx_j; analytic when
/// the model provides H derivatives, otherwise central differences with one
/// Richardson extrapolation level (step 1e-4 * diam).
double abreu_scalar(const PotentialModel& model, const Vec& x);

struct FacetBoundaryCheck {
    int facet = 0;
    double max_Hnu = 0.0;        // max |H_y nu_k| over samples
    double max_dHnn = 0.0;       // max |dH_y(nu_k,nu_k) - 2 nu_k|
    double min_tangent_eig = 0.0;
    bool pass = false;
};
struct BoundaryCheckReport {
    std::vector<FacetBoundaryCheck> facets;
    bool pass = false;
    double tol = 0.0;
};

/// Audits the Guillemin boundary conditions H_y nu_k = 0,
/// dH_y(nu_k, nu_k) = 2 nu_k and tangential positivity at facet-interior
/// samples; H is extended continuously by polynomial extrapolation along the
/// inward normal from interior points at distances 1e-2..1e-5 * diam.
BoundaryCheckReport boundary_check(const PotentialModel& model, const LabelledPolytope& P,
                                   int samples_per_facet = 5, double tol = 1e-6);

/// h(x) = <x, grad u(x)> - u(x): the Legendre transform of u read back on P.
double legendre_h(const PotentialModel& model, const Vec& x);

struct ResidualField {
    std::vector<Vec> points;
    std::vector<double> values;
    double mean = 0.0;
    double deviation = 0.0;  // max |r - mean|
};

/// r(x) = 1/2 log det(Hess u) - lambda h_p(x) - <a, x-p> on an interior grid,
/// with h_p based at the preferred point p of the monotone polytope. Only
/// constancy of r is meaningful (u is defined up to affine functions);
/// deviation <= tol certifies a soliton / Kaehler-Einstein potential.
ResidualField einstein_residual(const PotentialModel& model, const LabelledPolytope& P,
                                double lambda, const Vec& a, int grid_n = 50);

}  // namespace abreu
