#pragma once

#include <random>

#include "abreu/labelling.hpp"
#include "abreu/polytope.hpp"

namespace abreu::testsupport {

inline Vec v2(double x, double y) {
    Vec v(2);
    v << x, y;
    return v;
}
inline Vec v3(double x, double y, double z) {
    Vec v(3);
    v << x, y, z;
    return v;
}

inline HalfSpace hs(Vec n, double c, std::vector<long long> nex = {}, long long cex_num = 0,
                    long long cex_den = 0) {
    HalfSpace h(std::move(n), c);
    if (!nex.empty()) {
        std::vector<Rational> ex;
        for (auto v : nex) ex.emplace_back(v);
        h.normal_exact = ex;
    }
    if (cex_den != 0) h.offset_exact = Rational(cex_num, cex_den);
    return h;
}

/// [-1,1]^2 with unit normals, facet order (x=-1, x=1, y=-1, y=1).
inline LabelledPolytope square() {
    std::vector<HalfSpace> f;
    f.push_back(hs(v2(1, 0), 1, {1, 0}, 1, 1));
    f.push_back(hs(v2(-1, 0), 1, {-1, 0}, 1, 1));
    f.push_back(hs(v2(0, 1), 1, {0, 1}, 1, 1));
    f.push_back(hs(v2(0, -1), 1, {0, -1}, 1, 1));
    return LabelledPolytope::from_halfspaces(2, std::move(f));
}

/// unit 2-simplex with normals e = {e1, e2, -e1-e2}.
inline LabelledPolytope simplex2() {
    std::vector<HalfSpace> f;
    f.push_back(hs(v2(1, 0), 0, {1, 0}, 0, 1));
    f.push_back(hs(v2(0, 1), 0, {0, 1}, 0, 1));
    f.push_back(hs(v2(-1, -1), 1, {-1, -1}, 1, 1));
    return LabelledPolytope::from_halfspaces(2, std::move(f));
}

/// hull{(1,0),(1,1),(2,2),(2,0)} with labels nu(C).
inline LabelledPolytope hirzebruch_nu(double C = 1.0) {
    HalfSpace h1(v2(7.0 * C / 5.0, 0), -7.0 * C / 5.0);
    HalfSpace h2(v2(-7.0 * C / 4.0, 0), 7.0 * C / 2.0);
    HalfSpace h3(v2(0, C), 0.0);
    HalfSpace h4(v2(C, -C), 0.0);
    if (C == 1.0) {
        h1.normal_exact = {{Rational(7, 5), Rational(0)}};
        h1.offset_exact = Rational(-7, 5);
        h2.normal_exact = {{Rational(-7, 4), Rational(0)}};
        h2.offset_exact = Rational(7, 2);
        h3.normal_exact = {{Rational(0), Rational(1)}};
        h3.offset_exact = Rational(0);
        h4.normal_exact = {{Rational(1), Rational(-1)}};
        h4.offset_exact = Rational(0);
    }
    std::vector<HalfSpace> v{h1, h2, h3, h4};
    return LabelledPolytope::from_halfspaces(2, std::move(v));
}

/// same quadrilateral with the Delzant labels eta.
inline LabelledPolytope hirzebruch_eta() {
    std::vector<HalfSpace> f;
    f.push_back(hs(v2(1, 0), -1, {1, 0}, -1, 1));
    f.push_back(hs(v2(-1, 0), 2, {-1, 0}, 2, 1));
    f.push_back(hs(v2(0, 1), 0, {0, 1}, 0, 1));
    f.push_back(hs(v2(1, -1), 0, {1, -1}, 0, 1));
    return LabelledPolytope::from_halfspaces(2, std::move(f));
}

/// [-1,3]x[-1,1] with labels normalized to L_k(0) = 1.
inline LabelledPolytope rectangle_normalized() {
    std::vector<HalfSpace> f;
    f.push_back(hs(v2(1, 0), 1));
    Vec n(2);
    n << -1.0 / 3.0, 0.0;
    f.push_back(HalfSpace(n, 1));
    f.push_back(hs(v2(0, 1), 1));
    f.push_back(hs(v2(0, -1), 1));
    return LabelledPolytope::from_halfspaces(2, std::move(f));
}

/// random simple polygon: support directions with bounded angular gaps
inline LabelledPolytope random_polygon(std::mt19937& rng, int min_facets = 4, int max_facets = 9) {
    std::uniform_int_distribution<int> md(min_facets, max_facets);
    std::uniform_real_distribution<double> un(0.0, 1.0);
    for (int attempt = 0; attempt < 100; ++attempt) {
        int m = md(rng);
        std::vector<HalfSpace> f;
        for (int i = 0; i < m; ++i) {
            double theta = 2.0 * M_PI * (i + 0.2 + 0.6 * un(rng)) / m;
            double c = 0.5 + 1.5 * un(rng);
            f.push_back(HalfSpace(v2(std::cos(theta), std::sin(theta)), c));
        }
        try {
            return LabelledPolytope::from_halfspaces(2, std::move(f));
        } catch (const ValidationError&) {
            continue;  // redundant facet drawn; resample
        }
    }
    throw std::runtime_error("random_polygon failed to generate");
}

/// random simple 3-polytope: a box with generic corner cuts
inline LabelledPolytope random_polytope3(std::mt19937& rng, int cuts = 4) {
    std::uniform_real_distribution<double> un(0.0, 1.0);
    for (int attempt = 0; attempt < 200; ++attempt) {
        std::vector<HalfSpace> f;
        for (int i = 0; i < 3; ++i)
            for (double s : {1.0, -1.0}) {
                Vec n = Vec::Zero(3);
                n[i] = s;
                f.push_back(HalfSpace(n, 1.0 + un(rng)));
            }
        int k = 1 + static_cast<int>(un(rng) * cuts);
        for (int i = 0; i < k; ++i) {
            Vec n(3);
            n << un(rng) - 0.5, un(rng) - 0.5, un(rng) - 0.5;
            if (n.norm() < 0.1) n << 1, 1, 1;
            n.normalize();
            f.push_back(HalfSpace(n, 0.8 + 0.8 * un(rng)));
        }
        try {
            return LabelledPolytope::from_halfspaces(3, std::move(f));
        } catch (const ValidationError&) {
            continue;
        }
    }
    throw std::runtime_error("random_polytope3 failed to generate");
}

/// independent positive rescaling of every label
inline LabelledPolytope rescale_labels(const LabelledPolytope& P, std::mt19937& rng,
                                       double lo = 0.3, double hi = 3.0) {
    std::uniform_real_distribution<double> un(lo, hi);
    std::vector<HalfSpace> f = P.halfspaces();
    for (auto& h : f) {
        double s = un(rng);
        h.normal *= s;
        h.offset *= s;
        h.normal_exact.reset();
        h.offset_exact.reset();
    }
    return P.with_labels(std::move(f));
}

inline LabelledPolytope scale_all_labels(const LabelledPolytope& P, double s) {
    std::vector<HalfSpace> f = P.halfspaces();
    for (auto& h : f) {
        h.normal *= s;
        h.offset *= s;
        h.normal_exact.reset();
        h.offset_exact.reset();
    }
    return P.with_labels(std::move(f));
}

inline LabelledPolytope translate(const LabelledPolytope& P, const Vec& t) {
    std::vector<HalfSpace> f = P.halfspaces();
    for (auto& h : f) {
        h.offset -= h.normal.dot(t);
        h.normal_exact.reset();
        h.offset_exact.reset();
    }
    return LabelledPolytope::from_halfspaces(P.dim(), std::move(f));
}

}  // namespace abreu::testsupport
