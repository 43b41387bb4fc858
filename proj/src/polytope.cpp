#include "abreu/polytope.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace abreu {

namespace {

std::string vec_str(const Vec& v) {
    std::ostringstream os;
    os << "(";
    for (int i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
    os << ")";
    return os.str();
}

bool lex_less(const Vec& a, const Vec& b, double tol) {
    for (int i = 0; i < a.size(); ++i) {
        if (a[i] < b[i] - tol) return true;
        if (a[i] > b[i] + tol) return false;
    }
    return false;
}

// Visits all k-subsets of {0,...,m-1}.
template <class F>
void for_each_subset(int m, int k, F&& f) {
    if (k > m || k < 0) return;
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        f(idx);
        int i = k - 1;
        while (i >= 0 && idx[i] == m - k + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

// Best point of {x : <nhat_k,x> + chat_k >= t for all k} by Chebyshev radius,
// solved by enumerating candidate active bases of size dim+1 (the rows are
// unit-normalized; two box rows per coordinate keep the LP bounded).
struct ChebyshevResult {
    Vec x;
    double t = -1.0;
};
ChebyshevResult chebyshev_center(int n, const std::vector<HalfSpace>& hs) {
    std::vector<Vec> nhat;
    std::vector<double> chat;
    double scale = 1.0;
    for (const auto& h : hs) {
        double nn = h.normal.norm();
        nhat.push_back(h.normal / nn);
        chat.push_back(h.offset / nn);
        scale = std::max(scale, std::abs(h.offset) / nn);
    }
    double R = 10.0 * scale + 10.0;
    for (int i = 0; i < n; ++i) {
        for (double s : {1.0, -1.0}) {
            Vec e = Vec::Zero(n);
            e[i] = s;
            nhat.push_back(e);
            chat.push_back(R);
        }
    }
    int m = static_cast<int>(nhat.size());
    ChebyshevResult best;
    best.x = Vec::Zero(n);
    best.t = -std::numeric_limits<double>::infinity();
    for_each_subset(m, n + 1, [&](const std::vector<int>& S) {
        Mat A(n + 1, n + 1);
        Vec b(n + 1);
        for (int r = 0; r <= n; ++r) {
            A.block(r, 0, 1, n) = nhat[S[r]].transpose();
            A(r, n) = -1.0;
            b[r] = -chat[S[r]];
        }
        Eigen::FullPivLU<Mat> lu(A);
        if (!lu.isInvertible()) return;
        Vec xt = lu.solve(b);
        double t = xt[n];
        if (t <= best.t) return;
        Vec x = xt.head(n);
        for (int k = 0; k < m; ++k)
            if (nhat[k].dot(x) + chat[k] < t - 1e-9 * (1.0 + R)) return;
        best.x = x;
        best.t = t;
    });
    return best;
}

// Null-space based recession-ray search: a pointed nonzero recession cone has
// an extreme ray cut out by n-1 constraints of rank n-1.
std::optional<std::pair<Vec, std::vector<int>>> recession_ray(int n,
                                                              const std::vector<HalfSpace>& hs) {
    int d = static_cast<int>(hs.size());
    Mat N(d, n);
    for (int k = 0; k < d; ++k) N.row(k) = hs[k].normal.normalized();
    // lineality first: rank-deficient normal matrix means a free direction
    Eigen::JacobiSVD<Mat> svd(N, Eigen::ComputeFullV);
    double smax = svd.singularValues()[0];
    if (svd.singularValues()[std::min<int>(n, d) - 1] < 1e-12 * smax || d < n) {
        Vec r = svd.matrixV().col(n - 1);
        return std::make_pair(r, std::vector<int>{});
    }
    if (n == 1) {
        for (double sign : {1.0, -1.0}) {
            bool ok = true;
            for (int k = 0; k < d && ok; ++k)
                if (N(k, 0) * sign < -1e-10) ok = false;
            if (ok) return std::make_pair(Vec::Constant(1, sign), std::vector<int>{});
        }
        return std::nullopt;
    }
    std::optional<std::pair<Vec, std::vector<int>>> found;
    for_each_subset(d, n - 1, [&](const std::vector<int>& S) {
        if (found) return;
        Mat A(n - 1, n);
        for (int r = 0; r + 1 < n; ++r) A.row(r) = N.row(S[r]);
        Eigen::JacobiSVD<Mat> sv(A, Eigen::ComputeFullV);
        if (n >= 2 && sv.singularValues()[n - 2] < 1e-10) return;  // not rank n-1
        Vec r = sv.matrixV().col(n - 1);
        for (double sign : {1.0, -1.0}) {
            Vec ray = sign * r;
            bool ok = true;
            for (int k = 0; k < d && ok; ++k)
                if (N.row(k).dot(ray) < -1e-10) ok = false;
            if (ok) {
                found = std::make_pair(ray, S);
                return;
            }
        }
    });
    return found;
}

}  // namespace

double Simplex::volume() const {
    int m = dim();
    if (m == 0) return 1.0;  // 0-dimensional Hausdorff measure of a point
    Mat E(ambient_dim(), m);
    for (int j = 0; j < m; ++j) E.col(j) = vertices.col(j + 1) - vertices.col(0);
    double fact = 1.0;
    for (int j = 2; j <= m; ++j) fact *= j;
    if (m == ambient_dim()) return std::abs(E.determinant()) / fact;
    return std::sqrt(std::max(0.0, (E.transpose() * E).determinant())) / fact;
}

bool LabelledPolytope::contains(const Vec& x, double margin) const {
    for (const auto& h : halfspaces_)
        if (h.value(x) <= margin * h.normal.norm()) return false;
    return true;
}

bool LabelledPolytope::has_exact_labels() const {
    return std::all_of(halfspaces_.begin(), halfspaces_.end(),
                       [](const HalfSpace& h) { return h.has_exact(); });
}

LabelledPolytope LabelledPolytope::from_halfspaces(int dim, std::vector<HalfSpace> halfspaces) {
    if (dim < 1) throw ValidationError("BadIndex", "dim must be >= 1");
    if (halfspaces.empty()) throw ValidationError("Empty", "no half-spaces given");
    for (size_t k = 0; k < halfspaces.size(); ++k) {
        if (halfspaces[k].normal.size() != dim)
            throw ValidationError("BadIndex", "normal of facet " + std::to_string(k + 1) +
                                                  " has wrong dimension");
        if (halfspaces[k].normal.norm() == 0.0)
            throw ValidationError("BadIndex",
                                  "facet " + std::to_string(k + 1) + " has zero normal");
    }

    LabelledPolytope P;
    P.dim_ = dim;
    P.halfspaces_ = std::move(halfspaces);

    auto cheb = chebyshev_center(dim, P.halfspaces_);
    if (!(cheb.t > 1e-10)) {
        throw ValidationError("Empty", "the interior {L_k > 0} is empty (best slack " +
                                           std::to_string(cheb.t) + " at " + vec_str(cheb.x) + ")");
    }
    if (auto ray = recession_ray(dim, P.halfspaces_)) {
        std::ostringstream os;
        os << "recession direction " << vec_str(ray->first);
        if (!ray->second.empty()) {
            os << " along facets {";
            for (size_t i = 0; i < ray->second.size(); ++i)
                os << (i ? "," : "") << ray->second[i] + 1;
            os << "}";
        }
        throw ValidationError("Unbounded", os.str());
    }

    P.finalize();
    return P;
}

void LabelledPolytope::finalize() {
    const int n = dim_;
    const int d = num_facets();
    // two passes: provisional tolerance from the data scale, then re-derive
    // incidence with the 1e-9 * diameter rule once vertices are known
    double scale = 0.0;
    for (const auto& h : halfspaces_)
        scale = std::max(scale, std::abs(h.offset) / h.normal.norm());
    scale = std::max(scale, 1.0);

    std::vector<Vec> verts;
    for (int pass = 0; pass < 2; ++pass) {
        double tol = kGeomTol * scale;
        verts.clear();
        for_each_subset(d, n, [&](const std::vector<int>& S) {
            Mat A(n, n);
            Vec b(n);
            for (int r = 0; r < n; ++r) {
                A.row(r) = halfspaces_[S[r]].normal.transpose();
                b[r] = -halfspaces_[S[r]].offset;
            }
            Eigen::FullPivLU<Mat> lu(A);
            lu.setThreshold(1e-10);
            if (!lu.isInvertible()) return;
            Vec v = lu.solve(b);
            for (int k = 0; k < d; ++k)
                if (halfspaces_[k].value(v) < -tol * halfspaces_[k].normal.norm()) return;
            for (const auto& w : verts)
                if ((w - v).norm() <= tol) return;
            verts.push_back(v);
        });
        if (verts.empty())
            throw ValidationError("Empty", "no vertex satisfies all constraints");
        double diam = 0.0;
        for (size_t i = 0; i < verts.size(); ++i)
            for (size_t j = i + 1; j < verts.size(); ++j)
                diam = std::max(diam, (verts[i] - verts[j]).norm());
        diameter_ = std::max(diam, 1e-300);
        scale = std::max(diameter_, 1e-12);
    }
    if (static_cast<int>(verts.size()) < n + 1)
        throw ValidationError("Empty", "interior is not full-dimensional (" +
                                           std::to_string(verts.size()) + " vertices)");

    std::sort(verts.begin(), verts.end(), [&](const Vec& a, const Vec& b) {
        return lex_less(a, b, kGeomTol * diameter_);
    });
    vertices_ = std::move(verts);

    double tol = kGeomTol * diameter_;
    vertex_facets_.assign(vertices_.size(), {});
    facet_vertices_.assign(d, {});
    for (size_t v = 0; v < vertices_.size(); ++v) {
        for (int k = 0; k < d; ++k) {
            if (std::abs(halfspaces_[k].value(vertices_[v])) <=
                tol * halfspaces_[k].normal.norm()) {
                vertex_facets_[v].push_back(k);
                facet_vertices_[k].push_back(static_cast<int>(v));
            }
        }
        if (static_cast<int>(vertex_facets_[v].size()) != n)
            throw ValidationError(
                "NotSimple", "vertex " + vec_str(vertices_[v]) + " lies on " +
                                 std::to_string(vertex_facets_[v].size()) + " facets, expected " +
                                 std::to_string(n));
    }
    for (int k = 0; k < d; ++k) {
        const auto& fv = facet_vertices_[k];
        bool ok = static_cast<int>(fv.size()) >= n;
        if (ok && n > 1) {
            Mat E(n, fv.size() - 1);
            for (size_t j = 1; j < fv.size(); ++j)
                E.col(j - 1) = vertices_[fv[j]] - vertices_[fv[0]];
            Eigen::JacobiSVD<Mat> svd(E);
            int rank = 0;
            for (int i = 0; i < svd.singularValues().size(); ++i)
                if (svd.singularValues()[i] > tol) ++rank;
            ok = rank == n - 1;
        }
        if (!ok)
            throw ValidationError("RedundantFacet",
                                  "facet " + std::to_string(k + 1) + " with normal " +
                                      vec_str(halfspaces_[k].normal) +
                                      " does not carry an (n-1)-dimensional face");
    }
}

LabelledPolytope LabelledPolytope::from_vertices(int dim, const std::vector<Vec>& points) {
    if (static_cast<int>(points.size()) < dim + 1)
        throw ValidationError("DegenerateHull", "need at least dim+1 points");
    for (const auto& p : points)
        if (p.size() != dim) throw ValidationError("BadIndex", "point of wrong dimension");

    double scale = 1.0;
    for (const auto& p : points) scale = std::max(scale, p.lpNorm<Eigen::Infinity>());
    double tol = kGeomTol * scale;

    // affine rank check
    {
        Mat E(dim, points.size() - 1);
        for (size_t j = 1; j < points.size(); ++j) E.col(j - 1) = points[j] - points[0];
        Eigen::JacobiSVD<Mat> svd(E);
        int rank = 0;
        for (int i = 0; i < svd.singularValues().size(); ++i)
            if (svd.singularValues()[i] > tol) ++rank;
        if (rank < dim)
            throw ValidationError("DegenerateHull", "points span an affine subspace of dimension " +
                                                        std::to_string(rank));
    }

    // brute-force supporting hyperplanes: every dim-subset spanning a
    // hyperplane with all points on one side gives a facet candidate
    int m = static_cast<int>(points.size());
    std::vector<HalfSpace> facets;
    Vec centroid = Vec::Zero(dim);
    for (const auto& p : points) centroid += p;
    centroid /= m;

    for_each_subset(m, dim, [&](const std::vector<int>& S) {
        Mat E(dim, dim - 1);
        for (int j = 1; j < dim; ++j) E.col(j - 1) = points[S[j]] - points[S[0]];
        // unit normal of the affine span (dim-1 rank required)
        Eigen::JacobiSVD<Mat> svd(dim > 1 ? E : Mat::Zero(dim, 1), Eigen::ComputeFullU);
        if (dim > 1 && svd.singularValues()[dim - 2] < tol) return;
        Vec nrm = dim > 1 ? Vec(svd.matrixU().col(dim - 1)) : Vec(Vec::Ones(1));
        double off = -nrm.dot(points[S[0]]);
        // orient inward (toward centroid)
        double side = nrm.dot(centroid) + off;
        if (std::abs(side) <= tol) return;
        if (side < 0) { nrm = -nrm; off = -off; }
        for (int i = 0; i < m; ++i)
            if (nrm.dot(points[i]) + off < -tol) return;  // not supporting
        for (const auto& f : facets)
            if ((f.normal - nrm).norm() <= 1e-7 && std::abs(f.offset - off) <= 1e-7 * scale)
                return;  // duplicate plane
        facets.emplace_back(nrm, off);
    });

    if (facets.empty()) throw ValidationError("DegenerateHull", "no supporting hyperplanes found");
    std::sort(facets.begin(), facets.end(), [&](const HalfSpace& a, const HalfSpace& b) {
        if (lex_less(a.normal, b.normal, 1e-12)) return true;
        if (lex_less(b.normal, a.normal, 1e-12)) return false;
        return a.offset < b.offset;
    });
    return from_halfspaces(dim, std::move(facets));
}

LabelledPolytope LabelledPolytope::with_labels(std::vector<HalfSpace> labels) const {
    if (static_cast<int>(labels.size()) != num_facets())
        throw ValidationError("FacetMismatch", "label count differs from facet count");
    for (int k = 0; k < num_facets(); ++k) {
        const Vec& nu = halfspaces_[k].normal;
        const Vec& eta = labels[k].normal;
        double r = eta.norm() / nu.norm();
        if (r <= 0.0 || (eta - r * nu).norm() > 1e-9 * eta.norm() ||
            std::abs(labels[k].offset - r * halfspaces_[k].offset) >
                1e-9 * (std::abs(labels[k].offset) + eta.norm() * diameter_))
            throw ValidationError("FacetMismatch",
                                  "label " + std::to_string(k + 1) +
                                      " does not define the same facet hyperplane");
    }
    LabelledPolytope Q(*this);
    Q.halfspaces_ = std::move(labels);
    return Q;
}

namespace {

// Recursive fan decomposition of a face given by its vertex index set.
// Faces of a simple polytope are intersections with facet hyperplanes, so
// subfaces are recovered from the incidence data.
void face_simplices(const LabelledPolytope& P, const std::vector<int>& face_verts, int face_dim,
                    std::vector<std::vector<int>>& out) {
    if (static_cast<int>(face_verts.size()) == face_dim + 1) {
        out.push_back(face_verts);
        return;
    }
    size_t entry_size = out.size();
    int apex = face_verts.front();  // vertices are stored lex-sorted
    double tol = kGeomTol * P.diameter();

    std::set<std::vector<int>> seen;
    for (int k = 0; k < P.num_facets(); ++k) {
        std::vector<int> sub;
        for (int v : face_verts) {
            const auto& inc = P.vertex_facets(v);
            if (std::binary_search(inc.begin(), inc.end(), k)) sub.push_back(v);
        }
        if (sub.size() < static_cast<size_t>(face_dim) || sub.size() == face_verts.size())
            continue;
        if (std::find(sub.begin(), sub.end(), apex) != sub.end()) continue;
        // affine dimension must be face_dim - 1
        Mat E(P.dim(), sub.size() - 1);
        for (size_t j = 1; j < sub.size(); ++j)
            E.col(j - 1) = P.vertices()[sub[j]] - P.vertices()[sub[0]];
        Eigen::JacobiSVD<Mat> svd(E);
        int rank = 0;
        for (int i = 0; i < svd.singularValues().size(); ++i)
            if (svd.singularValues()[i] > tol) ++rank;
        if (rank != face_dim - 1) continue;
        if (!seen.insert(sub).second) continue;

        size_t base = out.size();
        face_simplices(P, sub, face_dim - 1, out);
        for (size_t i = base; i < out.size(); ++i) out[i].push_back(apex);
    }
    if (out.size() == entry_size)
        throw ValidationError("NotSimple",
                              "face decomposition found no subfaces; the face lattice is "
                              "inconsistent with a simple polytope");
}

std::vector<Simplex> gather(const LabelledPolytope& P, const std::vector<int>& face_verts,
                            int face_dim) {
    std::vector<std::vector<int>> idx;
    face_simplices(P, face_verts, face_dim, idx);
    std::vector<Simplex> result;
    for (const auto& s : idx) {
        Simplex sx;
        sx.vertices.resize(P.dim(), s.size());
        for (size_t j = 0; j < s.size(); ++j) sx.vertices.col(j) = P.vertices()[s[j]];
        result.push_back(std::move(sx));
    }
    return result;
}

}  // namespace

std::vector<Simplex> triangulate(const LabelledPolytope& P) {
    std::vector<int> all(P.num_vertices());
    for (int i = 0; i < P.num_vertices(); ++i) all[i] = i;
    return gather(P, all, P.dim());
}

std::vector<Simplex> facet_decomposition(const LabelledPolytope& P, int k) {
    if (k < 0 || k >= P.num_facets())
        throw ValidationError("BadIndex", "facet index " + std::to_string(k + 1) +
                                              " out of range 1.." + std::to_string(P.num_facets()));
    return gather(P, P.facet_vertices(k), P.dim() - 1);
}

}  // namespace abreu
