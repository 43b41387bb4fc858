#include <doctest.h>

#include <random>

#include "abreu/spline.hpp"

using namespace abreu;

TEST_CASE("basis partition of unity and derivative sums") {
    for (int degree : {3, 5, 7}) {
        BSplineBasis basis(-1.0, 2.0, 6, degree);
        std::mt19937 rng(degree);
        std::uniform_real_distribution<double> un(-1.0, 2.0);
        for (int t = 0; t < 50; ++t) {
            double u = un(rng);
            int first;
            Eigen::MatrixXd ders;
            basis.evaluate(u, 4, first, ders);
            CHECK(ders.row(0).sum() == doctest::Approx(1.0).epsilon(1e-12));
            for (int k = 1; k <= std::min(4, degree); ++k)
                CHECK(ders.row(k).sum() == doctest::Approx(0.0).epsilon(1e-8));
            CHECK(first >= 0);
            CHECK(first + degree < basis.size());
        }
    }
}

TEST_CASE("spline derivatives against finite differences") {
    SplineField f(Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 2), 5, 4, 5);
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> un(-1.0, 1.0);
    auto& C = f.coefficients();
    for (int i = 0; i < C.rows(); ++i)
        for (int j = 0; j < C.cols(); ++j) C(i, j) = un(rng);

    std::uniform_real_distribution<double> ux(0.15, 0.85), uy(0.3, 1.7);
    double h = 1e-5;
    for (int t = 0; t < 25; ++t) {
        Eigen::Vector2d p(ux(rng), uy(rng));
        Eigen::Vector2d g = f.gradient(p);
        Eigen::Matrix2d H = f.hessian(p);
        Eigen::Vector2d ex(h, 0), ey(0, h);
        CHECK(g[0] == doctest::Approx((f.value(p + ex) - f.value(p - ex)) / (2 * h)).epsilon(1e-6));
        CHECK(g[1] == doctest::Approx((f.value(p + ey) - f.value(p - ey)) / (2 * h)).epsilon(1e-6));
        CHECK(H(0, 0) ==
              doctest::Approx((f.gradient(p + ex)[0] - f.gradient(p - ex)[0]) / (2 * h))
                  .epsilon(1e-5));
        CHECK(H(0, 1) ==
              doctest::Approx((f.gradient(p + ey)[0] - f.gradient(p - ey)[0]) / (2 * h))
                  .epsilon(1e-5));
        // third/fourth derivatives through the generic entry point
        CHECK(f.derivative(p, 3, 0) ==
              doctest::Approx((f.derivative(p + ex, 2, 0) - f.derivative(p - ex, 2, 0)) / (2 * h))
                  .epsilon(1e-4));
        CHECK(f.derivative(p, 2, 2) ==
              doctest::Approx((f.derivative(p + ey, 2, 1) - f.derivative(p - ey, 2, 1)) / (2 * h))
                  .epsilon(1e-4));
    }
}

TEST_CASE("spline reproduces polynomials up to its degree") {
    // fit x^2 y + 3x - y + 2 exactly with a cubic tensor basis
    SplineField f(Eigen::Vector2d(-1, -1), Eigen::Vector2d(1, 1), 4, 4, 3);
    auto& C = f.coefficients();
    int nx = static_cast<int>(C.rows()), ny = static_cast<int>(C.cols());
    // least squares on a dense grid
    int G = 20;
    Eigen::MatrixXd A(G * G, nx * ny);
    Eigen::VectorXd b(G * G);
    int row = 0;
    for (int i = 0; i < G; ++i)
        for (int j = 0; j < G; ++j, ++row) {
            Eigen::Vector2d p(-1 + 2.0 * (i + 0.5) / G, -1 + 2.0 * (j + 0.5) / G);
            auto patch = f.patch(p, 0);
            A.row(row).setZero();
            for (int a = 0; a <= 3; ++a)
                for (int c = 0; c <= 3; ++c)
                    A(row, (patch.ix0 + a) * ny + (patch.iy0 + c)) =
                        patch.bx(0, a) * patch.by(0, c);
            b[row] = p[0] * p[0] * p[1] + 3 * p[0] - p[1] + 2;
        }
    Eigen::VectorXd coef = A.colPivHouseholderQr().solve(b);
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) C(i, j) = coef[i * ny + j];

    std::mt19937 rng(5);
    std::uniform_real_distribution<double> un(-0.95, 0.95);
    for (int t = 0; t < 30; ++t) {
        Eigen::Vector2d p(un(rng), un(rng));
        double exact = p[0] * p[0] * p[1] + 3 * p[0] - p[1] + 2;
        CHECK(f.value(p) == doctest::Approx(exact).epsilon(1e-9));
        CHECK(f.hessian(p)(0, 0) == doctest::Approx(2 * p[1]).epsilon(1e-7));
        CHECK(f.hessian(p)(0, 1) == doctest::Approx(2 * p[0]).epsilon(1e-7));
    }
}
