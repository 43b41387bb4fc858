#pragma once

#include <Eigen/Dense>
#include <vector>

#include "abreu/errors.hpp"

namespace abreu {

/// Clamped B-spline basis on [a,b] with uniform interior knots.
class BSplineBasis {
public:
    BSplineBasis() = default;
    BSplineBasis(double a, double b, int cells, int degree);

    int degree() const { return degree_; }
    int size() const { return nbasis_; }
    double a() const { return knots_[degree_]; }
    double b() const { return knots_[nbasis_]; }

    /// Derivatives 0..nders of the degree+1 basis functions that are nonzero
    /// at u. Row k of `ders` holds the k-th derivatives; `first` is the index
    /// of the first nonzero basis function.
    void evaluate(double u, int nders, int& first, Eigen::MatrixXd& ders) const;

private:
    int find_span(double u) const;

    int degree_ = 3;
    int nbasis_ = 0;
    std::vector<double> knots_;
};

/// Tensor-product B-spline field on a bounding box, exactly differentiable to
/// any order up to the degree.
class SplineField {
public:
    SplineField() = default;
    SplineField(const Eigen::Vector2d& lo, const Eigen::Vector2d& hi, int cells_x, int cells_y,
                int degree);

    const BSplineBasis& basis_x() const { return bx_; }
    const BSplineBasis& basis_y() const { return by_; }
    Eigen::MatrixXd& coefficients() { return coef_; }
    const Eigen::MatrixXd& coefficients() const { return coef_; }
    int degree() const { return bx_.degree(); }

    /// d^(dx+dy) f / dx^dx dy^dy at p.
    double derivative(const Eigen::Vector2d& p, int dx, int dy) const;

    double value(const Eigen::Vector2d& p) const { return derivative(p, 0, 0); }
    Eigen::Vector2d gradient(const Eigen::Vector2d& p) const;
    Eigen::Matrix2d hessian(const Eigen::Vector2d& p) const;

    /// Nonzero basis block at p: tensor values B(kx,ky,a,b) =
    /// d^kx Nx_{ix0+a} * d^ky Ny_{iy0+b}, for assembling collocation rows.
    struct Patch {
        int ix0 = 0, iy0 = 0;
        Eigen::MatrixXd bx;  // (orders+1) x (degree+1)
        Eigen::MatrixXd by;
    };
    Patch patch(const Eigen::Vector2d& p, int orders) const;

private:
    BSplineBasis bx_, by_;
    Eigen::MatrixXd coef_;
};

}  // namespace abreu
