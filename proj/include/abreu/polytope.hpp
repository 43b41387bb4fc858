#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "abreu/errors.hpp"
#include "abreu/rational.hpp"

namespace abreu {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// One labelled half-space {x : <normal,x> + offset > 0}. The normal is the
/// inward label nu_k (its scale matters), the defining affine function is
/// L_k(x) = <normal,x> + offset.
struct HalfSpace {
    Vec normal;
    double offset = 0.0;

    /// Exact values when the input was given as rationals; kept alongside the
    /// doubles so lattice arithmetic stays exact.
    std::optional<std::vector<Rational>> normal_exact;
    std::optional<Rational> offset_exact;

    HalfSpace() = default;
    HalfSpace(Vec n, double c) : normal(std::move(n)), offset(c) {}

    double value(const Vec& x) const { return normal.dot(x) + offset; }
    bool has_exact() const { return normal_exact.has_value() && offset_exact.has_value(); }
};

/// An m-simplex embedded in R^n, stored as its m+1 vertices (columns).
struct Simplex {
    Mat vertices;  // n x (m+1)

    int ambient_dim() const { return static_cast<int>(vertices.rows()); }
    int dim() const { return static_cast<int>(vertices.cols()) - 1; }

    /// Lebesgue m-volume (Euclidean measure of the affine span for m < n).
    double volume() const;
    Vec centroid() const { return vertices.rowwise().mean(); }
};

/// A compact simple convex polytope with labelled inward normals.
/// Immutable after construction; all queries are pure.
class LabelledPolytope {
public:
    /// Empty value; assign from one of the factories before use.
    LabelledPolytope() = default;

    /// Validates and builds the polytope from labelled half-spaces.
    /// Throws ValidationError with kind Empty, Unbounded, NotSimple or
    /// RedundantFacet, naming the offending facets/vertices.
    static LabelledPolytope from_halfspaces(int dim, std::vector<HalfSpace> halfspaces);

    /// Convex hull with unit inward normals (a default labelling), facets
    /// ordered lexicographically by normal. Throws DegenerateHull.
    static LabelledPolytope from_vertices(int dim, const std::vector<Vec>& points);

    int dim() const { return dim_; }
    int num_facets() const { return static_cast<int>(halfspaces_.size()); }
    int num_vertices() const { return static_cast<int>(vertices_.size()); }
    const std::vector<HalfSpace>& halfspaces() const { return halfspaces_; }
    const HalfSpace& facet(int k) const { return halfspaces_.at(k); }
    const std::vector<Vec>& vertices() const { return vertices_; }
    /// Facet indices incident to vertex v (exactly dim() of them), sorted.
    const std::vector<int>& vertex_facets(int v) const { return vertex_facets_.at(v); }
    /// Vertex indices lying on facet k, sorted.
    const std::vector<int>& facet_vertices(int k) const { return facet_vertices_.at(k); }

    double diameter() const { return diameter_; }
    double L(int k, const Vec& x) const { return halfspaces_[k].value(x); }
    bool contains(const Vec& x, double margin = 0.0) const;

    /// Same shape, new labels. The normals must describe the same facets
    /// (positively collinear with the current ones); throws FacetMismatch.
    LabelledPolytope with_labels(std::vector<HalfSpace> labels) const;

    bool has_exact_labels() const;

private:
    void finalize();  // vertices, incidence, diameter

    int dim_ = 0;
    std::vector<HalfSpace> halfspaces_;
    std::vector<Vec> vertices_;
    std::vector<std::vector<int>> vertex_facets_;
    std::vector<std::vector<int>> facet_vertices_;
    double diameter_ = 0.0;
};

/// Fan triangulation from the lexicographically smallest vertex. Simplex
/// volumes sum to vol(P); interiors are disjoint.
std::vector<Simplex> triangulate(const LabelledPolytope& P);

/// Tiles facet k with (n-1)-simplices; Euclidean areas sum to the facet area.
std::vector<Simplex> facet_decomposition(const LabelledPolytope& P, int k);

/// Relative tolerance used by the geometric predicates, scaled by diameter.
inline constexpr double kGeomTol = 1e-9;

}  // namespace abreu
