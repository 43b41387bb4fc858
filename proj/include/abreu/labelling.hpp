#pragma once

#include <optional>

#include "abreu/measure.hpp"
#include "abreu/polytope.hpp"

namespace abreu {

/// Witness that all defining functions share the value common_value at
/// preferred_point (an interior point).
struct MonotoneCertificate {
    Vec preferred_point;
    double common_value = 0.0;
    double residual = 0.0;  // scale-invariant max deviation, see monotone_point
};

/// Least-squares solve of L_k(p) = L_1(p); a certificate is returned iff the
/// residual max_k |L_k(p) - mean| / (|nu_k| diam) is <= 1e-9 and p lies in P.
std::optional<MonotoneCertificate> monotone_point(const LabelledPolytope& P);

/// The canonical normalization: nu_k / L_k(barycenter). Output is monotone
/// with preferred point the barycenter, common value 1, and constant extremal
/// affine function; it is invariant under rescaling of the input labels.
std::pair<LabelledPolytope, MonotoneCertificate> einstein_normalize(const LabelledPolytope& P);

/// p = n/((n+1) Z_0) * (Z_1,...,Z_n) for a polytope normalized to L_k(0) = 1
/// with 0 in P; equals the barycenter. Throws NormalizationRequired.
Vec preferred_point_formula(const LabelledPolytope& P);

/// Labels lambda nu_k / L_k(p): monotone with preferred point p and common
/// value lambda. Throws PointNotInterior.
LabelledPolytope cone_labels(const LabelledPolytope& P, double lambda, const Vec& p);

struct RationalityReport {
    bool is_lattice_polytope = false;
    std::optional<Rational> minimal_scale;                      // least s > 0 with s*nu integral
    std::optional<std::vector<std::vector<long long>>> scaled_normals;
};

/// Lattice data w.r.t. Z^n of the input coordinates. Labels must carry exact
/// rational values (floats are rationalized at parse time); otherwise throws
/// IrrationalInput.
RationalityReport rationality(const LabelledPolytope& P);

struct VertexDelzant {
    int vertex = 0;
    long long abs_det = 0;
    bool delzant = false;
};
struct DelzantReport {
    std::vector<VertexDelzant> vertices;
    bool all_delzant = false;
    Rational scale_applied;  // rationality scale used to make labels integral
};

/// Per-vertex |det| of the incident (integral) labels; Delzant iff every
/// determinant is +-1. The ambient lattice is fixed to Z^n of the input
/// coordinates. Throws NonIntegralLabels when no rational scaling exists.
DelzantReport delzant_check(const LabelledPolytope& P);

enum class SingularityClass { Conical, Smooth, LargeAngle };

struct FacetSingularity {
    double ratio = 1.0;                   // a_k with a_k nu_k = eta_k
    std::optional<Rational> ratio_exact;  // present when both labels are exact
    SingularityClass cls = SingularityClass::Smooth;
    double angle = 0.0;                   // 2 pi a_k
};
struct SingularityReport {
    std::vector<FacetSingularity> facets;
};

/// Cone-angle classification of the metric labelled by nu against the
/// reference (Delzant) labels eta; a_k = |eta_k| / |nu_k|. The two label sets
/// must describe the same facets (throws NotCollinear / FacetMismatch).
SingularityReport cone_angles(const LabelledPolytope& reference_eta,
                              const LabelledPolytope& candidate_nu, double smooth_tol = 1e-12);

}  // namespace abreu
