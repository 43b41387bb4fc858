#include "abreu/spline.hpp"

#include <algorithm>
#include <cmath>

namespace abreu {

BSplineBasis::BSplineBasis(double a, double b, int cells, int degree) : degree_(degree) {
    if (!(b > a) || cells < 1 || degree < 1)
        throw ValidationError("BadIndex", "invalid B-spline basis parameters");
    nbasis_ = cells + degree;
    knots_.assign(nbasis_ + degree + 1, a);
    for (int i = 0; i <= cells; ++i) knots_[degree + i] = a + (b - a) * i / cells;
    for (int i = nbasis_; i < static_cast<int>(knots_.size()); ++i) knots_[i] = b;
}

int BSplineBasis::find_span(double u) const {
    int lo = degree_, hi = nbasis_;
    if (u >= knots_[nbasis_]) return nbasis_ - 1;
    if (u <= knots_[degree_]) return degree_;
    while (hi - lo > 1) {
        int mid = (lo + hi) / 2;
        if (u < knots_[mid])
            hi = mid;
        else
            lo = mid;
    }
    return lo;
}

// de Boor recursion with derivatives (NURBS-book DersBasisFuns).
// Rows beyond the degree are zero (those derivatives vanish identically).
void BSplineBasis::evaluate(double u, int nders, int& first, Eigen::MatrixXd& ders) const {
    const int p = degree_;
    const int span = find_span(u);
    first = span - p;
    const int rows = nders;
    nders = std::min(nders, p);

    Eigen::MatrixXd ndu(p + 1, p + 1);
    std::vector<double> left(p + 1), right(p + 1);
    ndu(0, 0) = 1.0;
    for (int j = 1; j <= p; ++j) {
        left[j] = u - knots_[span + 1 - j];
        right[j] = knots_[span + j] - u;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            ndu(j, r) = right[r + 1] + left[j - r];
            double temp = ndu(r, j - 1) / ndu(j, r);
            ndu(r, j) = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        ndu(j, j) = saved;
    }
    ders.setZero(rows + 1, p + 1);
    for (int j = 0; j <= p; ++j) ders(0, j) = ndu(j, p);

    Eigen::MatrixXd a(2, p + 1);
    for (int r = 0; r <= p; ++r) {
        int s1 = 0, s2 = 1;
        a(0, 0) = 1.0;
        for (int k = 1; k <= nders; ++k) {
            double d = 0.0;
            int rk = r - k, pk = p - k;
            if (r >= k) {
                a(s2, 0) = a(s1, 0) / ndu(pk + 1, rk);
                d = a(s2, 0) * ndu(rk, pk);
            }
            int j1 = rk >= -1 ? 1 : -rk;
            int j2 = r - 1 <= pk ? k - 1 : p - r;
            for (int j = j1; j <= j2; ++j) {
                a(s2, j) = (a(s1, j) - a(s1, j - 1)) / ndu(pk + 1, rk + j);
                d += a(s2, j) * ndu(rk + j, pk);
            }
            if (r <= pk) {
                a(s2, k) = -a(s1, k - 1) / ndu(pk + 1, r);
                d += a(s2, k) * ndu(r, pk);
            }
            ders(k, r) = d;
            std::swap(s1, s2);
        }
    }
    double r = p;
    for (int k = 1; k <= nders; ++k) {
        for (int j = 0; j <= p; ++j) ders(k, j) *= r;
        r *= (p - k);
    }
}

SplineField::SplineField(const Eigen::Vector2d& lo, const Eigen::Vector2d& hi, int cells_x,
                         int cells_y, int degree)
    : bx_(lo[0], hi[0], cells_x, degree), by_(lo[1], hi[1], cells_y, degree) {
    coef_ = Eigen::MatrixXd::Zero(bx_.size(), by_.size());
}

SplineField::Patch SplineField::patch(const Eigen::Vector2d& p, int orders) const {
    Patch pt;
    bx_.evaluate(p[0], orders, pt.ix0, pt.bx);
    by_.evaluate(p[1], orders, pt.iy0, pt.by);
    return pt;
}

double SplineField::derivative(const Eigen::Vector2d& p, int dx, int dy) const {
    Patch pt = patch(p, std::max(dx, dy));
    double acc = 0.0;
    for (int a = 0; a <= bx_.degree(); ++a)
        for (int b = 0; b <= by_.degree(); ++b)
            acc += coef_(pt.ix0 + a, pt.iy0 + b) * pt.bx(dx, a) * pt.by(dy, b);
    return acc;
}

Eigen::Vector2d SplineField::gradient(const Eigen::Vector2d& p) const {
    Patch pt = patch(p, 1);
    Eigen::Vector2d g = Eigen::Vector2d::Zero();
    for (int a = 0; a <= bx_.degree(); ++a)
        for (int b = 0; b <= by_.degree(); ++b) {
            double c = coef_(pt.ix0 + a, pt.iy0 + b);
            g[0] += c * pt.bx(1, a) * pt.by(0, b);
            g[1] += c * pt.bx(0, a) * pt.by(1, b);
        }
    return g;
}

Eigen::Matrix2d SplineField::hessian(const Eigen::Vector2d& p) const {
    Patch pt = patch(p, 2);
    Eigen::Matrix2d h = Eigen::Matrix2d::Zero();
    for (int a = 0; a <= bx_.degree(); ++a)
        for (int b = 0; b <= by_.degree(); ++b) {
            double c = coef_(pt.ix0 + a, pt.iy0 + b);
            h(0, 0) += c * pt.bx(2, a) * pt.by(0, b);
            h(0, 1) += c * pt.bx(1, a) * pt.by(1, b);
            h(1, 1) += c * pt.bx(0, a) * pt.by(2, b);
        }
    h(1, 0) = h(0, 1);
    return h;
}

}  // namespace abreu
