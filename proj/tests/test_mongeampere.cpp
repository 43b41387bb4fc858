#include <doctest.h>

#include <random>

#include "abreu/mongeampere.hpp"
#include "support.hpp"

using namespace abreu;
using namespace abreu::testsupport;

TEST_CASE("square: the Guillemin potential solves the KE equation (f = 0)") {
    SolverConfig cfg;
    cfg.resolution = 32;
    auto res = solve(square(), 1.0, Vec::Zero(2), cfg);
    CHECK(res.deviation <= 1e-8);
    // sup norm of the correction over an interior grid
    double fmax = 0.0;
    for (double x = -0.95; x <= 0.95; x += 0.1)
        for (double y = -0.95; y <= 0.95; y += 0.1)
            fmax = std::max(fmax, std::abs(res.model->correction().value(Eigen::Vector2d(x, y))));
    CHECK(fmax <= 1e-4);
}

TEST_CASE("solver rejects bad input") {
    auto S = square();
    auto labels = S.halfspaces();
    labels[0].normal *= 2.0;
    labels[0].offset *= 2.0;
    CHECK_THROWS_AS(solve(S.with_labels(std::move(labels)), 1.0, Vec::Zero(2), {}),
                    ValidationError);
    SolverConfig bad;
    bad.resolution = 4;
    CHECK_THROWS_AS(solve(S, 1.0, Vec::Zero(2), bad), ValidationError);
}

TEST_CASE("hirzebruch: solver recovers the closed-form metric") {
    auto P = hirzebruch_nu(9.0 / 7.0);
    SolverConfig cfg;
    cfg.resolution = 48;
    cfg.spline_cells = 12;
    cfg.spline_degree = 5;
    cfg.tolerance = 1e-5;
    auto res = solve(P, 1.0, Vec::Zero(2), cfg);
    CHECK(res.deviation <= 1e-5);

    HirzebruchModel closed_form(9.0 / 7.0);
    auto cm = compare(*res.model, closed_form, 40, 0.05);
    CHECK(cm.h_rel_max <= 1e-3);
}

TEST_CASE("affine gauge invariance of the converged solution") {
    SolverConfig cfg;
    cfg.resolution = 24;
    cfg.spline_cells = 8;
    auto base = solve(square(), 1.0, Vec::Zero(2), cfg);

    SolverConfig cfg2 = cfg;
    cfg2.initial_guess = [](const Vec& x) { return 0.3 + 0.2 * x[0] - 0.1 * x[1]; };
    auto shifted = solve(square(), 1.0, Vec::Zero(2), cfg2);

    auto cm = compare(*base.model, *shifted.model, 30, 0.02);
    CHECK(cm.h_rel_max <= 1e-9);
    CHECK(cm.u_gauge_max <= 1e-9);
}

TEST_CASE("equivariance under translation") {
    SolverConfig cfg;
    cfg.resolution = 24;
    cfg.spline_cells = 8;
    auto T = simplex2();
    Vec t = v2(2.0, -1.0);
    auto P1 = cone_labels(T, 1.0, v2(0.4, 0.3));
    auto P2 = cone_labels(translate(T, t), 1.0, v2(0.4, 0.3) + t);

    auto r1 = solve(P1, 1.0, std::nullopt, cfg);
    auto r2 = solve(P2, 1.0, std::nullopt, cfg);
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> un(0.05, 0.45);
    for (int i = 0; i < 20; ++i) {
        Vec x = v2(un(rng), un(rng));
        if (!P1.contains(x, 0.02)) continue;
        Mat H1 = r1.model->hess_inverse(x);
        Mat H2 = r2.model->hess_inverse(x + t);
        CHECK((H1 - H2).norm() <= 1e-9 * std::max(1.0, H1.norm()));
    }
}

TEST_CASE("grid refinement does not worsen the square deviation") {
    SolverConfig c1, c2;
    c1.resolution = 16;
    c2.resolution = 32;
    auto r1 = solve(square(), 1.0, Vec::Zero(2), c1);
    auto r2 = solve(square(), 1.0, Vec::Zero(2), c2);
    // the exact solution lies in the basis, so both sit at the floor
    double floor_dev = 1e-10;
    bool both_at_floor = r1.deviation <= floor_dev && r2.deviation <= floor_dev;
    CHECK((both_at_floor || r2.deviation <= r1.deviation / 4.0));
}

TEST_CASE("compare metrics") {
    GuilleminModel g(square());
    auto cm = compare(g, g, 25, 0.02);
    CHECK(cm.h_rel_max == 0.0);
    CHECK(cm.u_gauge_max == 0.0);

    // guillemin vs guillemin + affine: zero after gauge minimization
    auto S = square();
    SplineField affine(Eigen::Vector2d(-1.0000001, -1.0000001),
                       Eigen::Vector2d(1.0000001, 1.0000001), 2, 2, 3);
    // represent 0.7 - 0.3 x + 0.5 y exactly via interpolation at Greville-like
    // points (affine functions lie in every spline space)
    {
        auto& C = affine.coefficients();
        int nx = static_cast<int>(C.rows()), ny = static_cast<int>(C.cols());
        Eigen::MatrixXd A(nx * ny, nx * ny);
        Eigen::VectorXd b(nx * ny);
        int row = 0;
        for (int i = 0; i < nx; ++i)
            for (int j = 0; j < ny; ++j, ++row) {
                Eigen::Vector2d p(-0.99 + 1.98 * i / (nx - 1.0), -0.99 + 1.98 * j / (ny - 1.0));
                auto patch = affine.patch(p, 0);
                A.row(row).setZero();
                for (int a = 0; a <= 3; ++a)
                    for (int c = 0; c <= 3; ++c)
                        A(row, (patch.ix0 + a) * ny + (patch.iy0 + c)) =
                            patch.bx(0, a) * patch.by(0, c);
                b[row] = 0.7 - 0.3 * p[0] + 0.5 * p[1];
            }
        Eigen::VectorXd coef = A.colPivHouseholderQr().solve(b);
        for (int i = 0; i < nx; ++i)
            for (int j = 0; j < ny; ++j) C(i, j) = coef[i * ny + j];
    }
    PerturbedModel shifted(S, affine);
    auto cm2 = compare(g, shifted, 25, 0.02);
    CHECK(cm2.h_rel_max <= 1e-10);
    CHECK(cm2.u_gauge_max <= 1e-9);

    CHECK_THROWS_AS(compare(g, GuilleminModel(simplex2()), 25, 0.02), ValidationError);
}

TEST_CASE("shifted-simplex soliton solve") {
    auto P = cone_labels(simplex2(), 1.0, v2(0.4, 0.3));
    SolverConfig cfg;
    cfg.resolution = 40;
    cfg.spline_cells = 2;
    cfg.spline_degree = 11;
    cfg.tolerance = 1e-8;
    auto res = solve(P, 1.0, std::nullopt, cfg);
    CHECK(res.deviation <= 1e-8);
    CHECK(soliton_residual(P, res.preferred_point, res.soliton_a) <= 1e-8);
}
