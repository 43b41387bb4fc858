#include <doctest.h>

#include <random>

#include "support.hpp"

using namespace abreu;
using namespace abreu::testsupport;

TEST_CASE("interior integrals against hand antiderivatives") {
    auto S = square();
    CHECK(integrate_interior(S, Polynomial2::constant(2, 1.0)) == doctest::Approx(4.0));
    CHECK(integrate_interior(S, Polynomial2::product(2, 0, 0)) ==
          doctest::Approx(4.0 / 3.0).epsilon(1e-13));

    // iterated integral: int_0^1 int_0^{1-x} xy dy dx = 1/24
    auto T = simplex2();
    CHECK(integrate_interior(T, Polynomial2::product(2, 0, 1)) ==
          doctest::Approx(1.0 / 24.0).epsilon(1e-13));

    CHECK(integrate_interior(T, Polynomial2::constant(2, 0.0)) == 0.0);
}

TEST_CASE("facet integrals: simplex facet measures 1/(n-1)!") {
    auto T = simplex2();
    for (int k = 0; k < 3; ++k)
        CHECK(integrate_facet(T, k, Polynomial2::constant(2, 1.0)) ==
              doctest::Approx(1.0).epsilon(1e-12));

    // int_{E_0} x1 dsigma = vol(simplex) = 1/2
    CHECK(integrate_facet(T, 2, Polynomial2::coordinate(2, 0)) ==
          doctest::Approx(0.5).epsilon(1e-12));

    // odd symmetry on the square
    auto S = square();
    CHECK(integrate_facet(S, 1, Polynomial2::coordinate(2, 1)) ==
          doctest::Approx(0.0).epsilon(1e-13));

    // 3d unit simplex facet measures: 1/2
    std::vector<HalfSpace> f;
    f.push_back(HalfSpace(v3(1, 0, 0), 0));
    f.push_back(HalfSpace(v3(0, 1, 0), 0));
    f.push_back(HalfSpace(v3(0, 0, 1), 0));
    f.push_back(HalfSpace(v3(-1, -1, -1), 1));
    auto T3 = LabelledPolytope::from_halfspaces(3, std::move(f));
    for (int k = 0; k < 4; ++k)
        CHECK(integrate_facet(T3, k, Polynomial2::constant(3, 1.0)) ==
              doctest::Approx(0.5).epsilon(1e-12));

    CHECK_THROWS_AS(integrate_facet(T, 5, Polynomial2::constant(2, 1.0)), ValidationError);
}

TEST_CASE("moments of the square and the simplex") {
    MomentData md = moments(square());
    CHECK(md.W(0, 0) == doctest::Approx(4.0));
    CHECK(md.W(1, 1) == doctest::Approx(4.0 / 3.0));
    CHECK(md.W(2, 2) == doctest::Approx(4.0 / 3.0));
    CHECK(md.W(0, 1) == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(md.W(1, 2) == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(md.Z[0] == doctest::Approx(8.0));
    CHECK(md.Z[1] == doctest::Approx(0.0).epsilon(1e-13));

    MomentData ms = moments(simplex2());
    CHECK(ms.W(0, 0) == doctest::Approx(0.5));
    CHECK(ms.W(0, 1) == doctest::Approx(1.0 / 6.0));
    CHECK(ms.W(0, 2) == doctest::Approx(1.0 / 6.0));
    CHECK(ms.W(1, 1) == doctest::Approx(1.0 / 12.0));
    CHECK(ms.W(2, 2) == doctest::Approx(1.0 / 12.0));
    CHECK(ms.W(1, 2) == doctest::Approx(1.0 / 24.0));
    CHECK(ms.Z[0] == doctest::Approx(3.0));
    CHECK(ms.Z[1] == doctest::Approx(1.0));
    CHECK(ms.Z[2] == doctest::Approx(1.0));
}

TEST_CASE("label rescaling: Z scales by 1/s, W fixed") {
    std::mt19937 rng(5);
    auto P = random_polygon(rng);
    auto md = moments(P);
    double s = 2.75;
    auto md2 = moments(scale_all_labels(P, s));
    CHECK((md2.W - md.W).norm() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK((md2.Z - md.Z / s).norm() <= 1e-10 * md.Z.norm());
}

TEST_CASE("psi map examples") {
    auto S = square();
    Vec zero2 = Vec::Zero(2);
    // constant f
    Vec r = psi_map(S, AffineFunction(3.7, zero2));
    CHECK(r.norm() <= 1e-12);
    // f = x1 on the square
    Vec e1 = v2(1, 0);
    CHECK((psi_map(S, AffineFunction(0.0, e1)) - v2(-4, 0)).norm() <= 1e-12);
    // quadrilateral, f = x2: -vol * e2 with vol = 3/2
    Vec e2 = v2(0, 1);
    CHECK((psi_map(hirzebruch_nu(), AffineFunction(0.0, e2)) - v2(0, -1.5)).norm() <= 1e-12);
}

TEST_CASE("psi identity on random polygons / 3-polytopes, labelling independent") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> un(-2.0, 2.0);
    for (int trial = 0; trial < 40; ++trial) {
        auto P = trial % 3 == 2 ? random_polytope3(rng) : random_polygon(rng);
        int n = P.dim();
        Vec lin(n);
        for (int i = 0; i < n; ++i) lin[i] = un(rng);
        AffineFunction f(un(rng), lin);
        double vol = volume(P);
        Vec psi = psi_map(P, f);
        CHECK((psi + vol * f.linear).norm() <= 1e-9 * vol * std::max(1.0, f.linear.norm()));
        Vec psi2 = psi_map(rescale_labels(P, rng), f);
        CHECK((psi2 - psi).norm() <= 1e-9 * vol * std::max(1.0, f.linear.norm()));
    }
}

TEST_CASE("divergence identities under the L_k(0)=1 normalization") {
    std::mt19937 rng(17);
    for (int trial = 0; trial < 15; ++trial) {
        auto P0 = trial % 3 == 2 ? random_polytope3(rng) : random_polygon(rng);
        int n = P0.dim();
        // translate barycenter to origin, then set L_k(0) = 1
        auto Pt = translate(P0, -barycenter(P0));
        auto P = cone_labels(Pt, 1.0, Vec::Zero(n));
        auto md = moments(P);
        CHECK(md.W(0, 0) == doctest::Approx(md.Z[0] / n).epsilon(1e-10));
        for (int i = 1; i <= n; ++i)
            CHECK(md.W(i, 0) == doctest::Approx(md.Z[i] / (n + 1)).epsilon(1e-10));
    }
}

TEST_CASE("monte carlo oracle agrees on random polygons") {
    std::mt19937 rng(404);
    std::uniform_real_distribution<double> un(-1.0, 1.0);
    for (int trial = 0; trial < 3; ++trial) {
        auto P = random_polygon(rng);
        Polynomial2 p(2);
        p.c = un(rng);
        p.l = v2(un(rng), un(rng));
        p.Q << un(rng), un(rng), 0, un(rng);
        p.Q = ((p.Q + p.Q.transpose()) / 2).eval();

        Vec lo = P.vertices()[0], hi = P.vertices()[0];
        for (const auto& v : P.vertices()) {
            lo = lo.cwiseMin(v);
            hi = hi.cwiseMax(v);
        }
        const long N = 10000000;
        std::mt19937_64 mcrng(9000 + trial);
        std::uniform_real_distribution<double> ux(lo[0], hi[0]), uy(lo[1], hi[1]);
        double box_area = (hi[0] - lo[0]) * (hi[1] - lo[1]);
        double sum = 0, sumsq = 0;
        for (long i = 0; i < N; ++i) {
            Vec x = v2(ux(mcrng), uy(mcrng));
            double val = P.contains(x) ? p(x) : 0.0;
            sum += val;
            sumsq += val * val;
        }
        double mean = sum / N;
        double stderr_mc = std::sqrt((sumsq / N - mean * mean) / N) * box_area;
        double mc_val = mean * box_area;
        double exact = integrate_interior(P, p);
        CHECK(std::abs(exact - mc_val) <= 3.0 * stderr_mc + 1e-12);
    }
}

TEST_CASE("exponential quadrature") {
    auto S = square();
    Vec zero2 = Vec::Zero(2);
    // weight 1 gives the volume
    CHECK(integrate_exp_weighted(S, zero2, zero2, Polynomial2::constant(2, 1.0)) ==
          doctest::Approx(4.0).epsilon(1e-12));

    // separable 1-d antiderivative oracle: int e^{2x} dx * int dy
    double oracle = (std::exp(2.0) - std::exp(-2.0)) / 2.0 * 2.0;
    CHECK(integrate_exp_weighted(S, v2(1, 0), zero2, Polynomial2::constant(2, 1.0)) ==
          doctest::Approx(oracle).epsilon(1e-11));

    // monotone lower bound: I >= vol * exp(2 min <a, x-p>)
    std::mt19937 rng(8);
    std::uniform_real_distribution<double> un(-1.0, 1.0);
    for (int trial = 0; trial < 8; ++trial) {
        auto P = random_polygon(rng);
        Vec a = v2(un(rng), un(rng));
        double lo = 1e300;
        for (const auto& v : P.vertices()) lo = std::min(lo, 2.0 * a.dot(v));
        double I = integrate_exp_weighted(P, a, zero2, Polynomial2::constant(2, 1.0));
        CHECK(I >= volume(P) * std::exp(lo) * (1.0 - 1e-9));
    }
}

TEST_CASE("exp quadrature with a=0 reproduces exact integrals") {
    std::mt19937 rng(55);
    std::uniform_real_distribution<double> un(-1.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        auto P = trial % 3 == 2 ? random_polytope3(rng) : random_polygon(rng);
        int n = P.dim();
        Polynomial2 p(n);
        p.c = un(rng);
        for (int i = 0; i < n; ++i) {
            p.l[i] = un(rng);
            for (int j = 0; j < n; ++j) p.Q(i, j) = un(rng);
        }
        p.Q = ((p.Q + p.Q.transpose()) / 2).eval();
        double exact = integrate_interior(P, p);
        double quad = integrate_exp_weighted(P, Vec::Zero(n), Vec::Zero(n), p);
        CHECK(quad == doctest::Approx(exact).epsilon(1e-10));
    }
}
