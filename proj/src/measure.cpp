#include "abreu/measure.hpp"

#include <array>
#include <cmath>

namespace abreu {

namespace {

// int over an m-simplex of 1, x_i, x_i x_j against its m-volume:
//   int 1       = V
//   int x_i     = V * mean_k v_{k,i}
//   int x_i x_j = V/((m+1)(m+2)) * [ (sum_k v_{k,i})(sum_k v_{k,j}) + sum_k v_{k,i} v_{k,j} ]
double integrate_simplex(const Simplex& s, const Polynomial2& p) {
    double V = s.volume();
    int m = s.dim();
    int cols = m + 1;
    Vec sum = s.vertices.rowwise().sum();
    double acc = p.c * V;
    acc += V / cols * p.l.dot(sum);
    if (p.Q.cwiseAbs().sum() > 0.0) {
        Mat second = (sum * sum.transpose() + s.vertices * s.vertices.transpose()) /
                     (static_cast<double>(cols) * (cols + 1));
        acc += V * (p.Q.cwiseProduct(second)).sum();
    }
    return acc;
}

struct GaussRule {
    std::array<double, 12> x;  // nodes on [0,1]
    std::array<double, 12> w;
};

// 12-point Gauss-Legendre on [0,1]
const GaussRule& gauss12() {
    static const GaussRule rule = [] {
        GaussRule r;
        // nodes/weights on [-1,1], mapped below
        const double xs[6] = {0.1252334085114689, 0.3678314989981802, 0.5873179542866175,
                              0.7699026741943047, 0.9041172563704749, 0.9815606342467192};
        const double ws[6] = {0.2491470458134028, 0.2334925365383548, 0.2031674267230659,
                              0.1600783285433462, 0.1069393259953184, 0.0471753363865118};
        for (int i = 0; i < 6; ++i) {
            r.x[i] = 0.5 * (1.0 - xs[5 - i]);
            r.x[11 - i] = 0.5 * (1.0 + xs[5 - i]);
            r.w[i] = 0.5 * ws[5 - i];
            r.w[11 - i] = 0.5 * ws[5 - i];
        }
        return r;
    }();
    return rule;
}

// Gauss tensor rule collapsed onto the reference n-simplex (Duffy map),
// then pushed to s by the affine map. Returns the integral and the L1 mass
// (the latter sets the absolute floor of the convergence test).
std::pair<double, double> gauss_on_simplex(const Simplex& s,
                                           const std::function<double(const Vec&)>& f) {
    const GaussRule& g = gauss12();
    int n = s.dim();
    double V = s.volume();
    if (V == 0.0) return {0.0, 0.0};
    Mat J(s.ambient_dim(), n);
    for (int j = 0; j < n; ++j) J.col(j) = s.vertices.col(j + 1) - s.vertices.col(0);
    Vec v0 = s.vertices.col(0);
    double fact = 1.0;
    for (int j = 2; j <= n; ++j) fact *= j;
    double scale = V * fact;  // |det J| for full-dim, Gram sqrt otherwise

    double acc = 0.0, mass = 0.0;
    auto add = [&](double w, const Vec& x) {
        double v = w * f(x);
        acc += v;
        mass += std::abs(v);
    };
    if (n == 1) {
        for (int i = 0; i < 12; ++i) add(g.w[i], v0 + J.col(0) * g.x[i]);
    } else if (n == 2) {
        Vec u(2);
        for (int i = 0; i < 12; ++i)
            for (int j = 0; j < 12; ++j) {
                u[0] = g.x[i];
                u[1] = g.x[j] * (1.0 - g.x[i]);
                add(g.w[i] * g.w[j] * (1.0 - g.x[i]), v0 + J * u);
            }
    } else if (n == 3) {
        Vec u(3);
        for (int i = 0; i < 12; ++i)
            for (int j = 0; j < 12; ++j)
                for (int k = 0; k < 12; ++k) {
                    double a = g.x[i], b = g.x[j] * (1.0 - a),
                           c = g.x[k] * (1.0 - a) * (1.0 - g.x[j]);
                    u[0] = a;
                    u[1] = b;
                    u[2] = c;
                    add(g.w[i] * g.w[j] * g.w[k] * (1.0 - a) * (1.0 - a) * (1.0 - g.x[j]),
                        v0 + J * u);
                }
    } else {
        throw ValidationError("BadIndex", "quadrature implemented for n <= 3");
    }
    return {acc * scale, mass * scale};
}

// longest-edge bisection, dimension generic
std::pair<Simplex, Simplex> bisect(const Simplex& s) {
    int cols = s.dim() + 1;
    int bi = 0, bj = 1;
    double best = -1.0;
    for (int i = 0; i < cols; ++i)
        for (int j = i + 1; j < cols; ++j) {
            double e = (s.vertices.col(i) - s.vertices.col(j)).norm();
            if (e > best) {
                best = e;
                bi = i;
                bj = j;
            }
        }
    Vec mid = 0.5 * (s.vertices.col(bi) + s.vertices.col(bj));
    Simplex a = s, b = s;
    a.vertices.col(bj) = mid;
    b.vertices.col(bi) = mid;
    return {a, b};
}

double adaptive_integral(std::vector<Simplex> simplices, const std::function<double(const Vec&)>& f,
                         double rel_tol) {
    const int max_levels = 13;
    double prev = 0.0;
    for (int level = 0; level < max_levels; ++level) {
        double total = 0.0, mass = 0.0;
        for (const auto& s : simplices) {
            auto [v, m] = gauss_on_simplex(s, f);
            total += v;
            mass += m;
        }
        // tolerance relative to the L1 mass, so cancellation to ~0 converges
        double floor = std::max({std::abs(total), mass, 1e-300});
        if (level > 0 && std::abs(total - prev) <= rel_tol * floor) return total;
        prev = total;
        if (level + 1 < max_levels) {
            std::vector<Simplex> next;
            next.reserve(2 * simplices.size());
            for (const auto& s : simplices) {
                auto [a, b] = bisect(s);
                next.push_back(std::move(a));
                next.push_back(std::move(b));
            }
            simplices = std::move(next);
        }
    }
    throw ConvergenceError("QuadratureNotConverged",
                           "adaptive quadrature did not reach the requested tolerance");
}

}  // namespace

double integrate_interior(const LabelledPolytope& P, const Polynomial2& p) {
    double acc = 0.0;
    for (const auto& s : triangulate(P)) acc += integrate_simplex(s, p);
    return acc;
}

double integrate_facet(const LabelledPolytope& P, int k, const Polynomial2& p) {
    double acc = 0.0;
    for (const auto& s : facet_decomposition(P, k)) acc += integrate_simplex(s, p);
    return acc / P.facet(k).normal.norm();
}

MomentData moments(const LabelledPolytope& P) {
    int n = P.dim();
    MomentData md;
    md.W = Mat::Zero(n + 1, n + 1);
    md.Z = Vec::Zero(n + 1);
    auto tris = triangulate(P);
    for (int i = 0; i <= n; ++i)
        for (int j = i; j <= n; ++j) {
            Polynomial2 p =
                (i == 0 && j == 0) ? Polynomial2::constant(n, 1.0)
                : (i == 0)         ? Polynomial2::coordinate(n, j - 1)
                                   : Polynomial2::product(n, i - 1, j - 1);
            double v = 0.0;
            for (const auto& s : tris) v += integrate_simplex(s, p);
            md.W(i, j) = md.W(j, i) = v;
        }
    for (int k = 0; k < P.num_facets(); ++k) {
        md.Z[0] += integrate_facet(P, k, Polynomial2::constant(n, 1.0));
        for (int i = 1; i <= n; ++i)
            md.Z[i] += integrate_facet(P, k, Polynomial2::coordinate(n, i - 1));
    }
    return md;
}

double volume(const LabelledPolytope& P) {
    return integrate_interior(P, Polynomial2::constant(P.dim(), 1.0));
}

Vec barycenter(const LabelledPolytope& P) {
    int n = P.dim();
    double vol = volume(P);
    Vec b(n);
    for (int i = 0; i < n; ++i) b[i] = integrate_interior(P, Polynomial2::coordinate(n, i)) / vol;
    return b;
}

Vec boundary_barycenter(const LabelledPolytope& P) {
    int n = P.dim();
    double z0 = 0.0;
    Vec b = Vec::Zero(n);
    for (int k = 0; k < P.num_facets(); ++k) {
        z0 += integrate_facet(P, k, Polynomial2::constant(n, 1.0));
        for (int i = 0; i < n; ++i) b[i] += integrate_facet(P, k, Polynomial2::coordinate(n, i));
    }
    return b / z0;
}

Vec psi_map(const LabelledPolytope& P, const AffineFunction& f) {
    Vec acc = Vec::Zero(P.dim());
    Polynomial2 pf = Polynomial2::affine(f);
    for (int k = 0; k < P.num_facets(); ++k)
        acc += integrate_facet(P, k, pf) * P.facet(k).normal;
    return acc;
}

double integrate_exp_weighted(const LabelledPolytope& P, const Vec& a, const Vec& p,
                              const Polynomial2& g, double rel_tol) {
    auto f = [&](const Vec& x) { return std::exp(2.0 * a.dot(x - p)) * g(x); };
    return adaptive_integral(triangulate(P), f, rel_tol);
}

double integrate_function(const LabelledPolytope& P, const std::function<double(const Vec&)>& f,
                          double rel_tol) {
    return adaptive_integral(triangulate(P), f, rel_tol);
}

}  // namespace abreu
