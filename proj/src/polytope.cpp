#include "torick/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Dense>

#include "torick/errors.hpp"

namespace torick
{

namespace
{

double cross(const Point2& a, const Point2& b) { return a.x() * b.y() - a.y() * b.x(); }

[[noreturn]] void invalid(const std::string& what)
{
    throw Error(ErrorKind::InvalidPolytope, what);
}

// Relative slack used when checking that labels vanish on their own edge.
constexpr double kLabelSlack = 1e-9;

}  // namespace

std::string to_string(QuadType t)
{
    switch (t) {
        case QuadType::Parallelogram:
            return "Parallelogram";
        case QuadType::TrapezoidNotParallelogram:
            return "TrapezoidNotParallelogram";
        case QuadType::GenericQuadrilateral:
            return "GenericQuadrilateral";
    }
    return "?";
}

double signed_area(const Polygon& poly)
{
    double a = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        a += cross(poly[i], poly[(i + 1) % poly.size()]);
    }
    return 0.5 * a;
}

LabelledPolytope2::LabelledPolytope2(std::vector<Point2> vertices, std::vector<AffineMap2> labels)
    : vertices_(std::move(vertices)), labels_(std::move(labels))
{
    const std::size_t n = vertices_.size();
    if (n < 3) {
        invalid("fewer than three vertices");
    }
    if (labels_.size() != n) {
        invalid("number of labels (" + std::to_string(labels_.size()) +
                ") differs from number of vertices (" + std::to_string(n) + ")");
    }
    for (const auto& v : vertices_) {
        if (!std::isfinite(v.x()) || !std::isfinite(v.y())) {
            invalid("non-finite vertex coordinate");
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            diameter_ = std::max(diameter_, (vertices_[i] - vertices_[j]).norm());
        }
    }
    if (!(diameter_ > 0.0)) {
        invalid("all vertices coincide");
    }

    // Strict convexity, counterclockwise; rejects three collinear vertices.
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 a = vertex(i + 1) - vertex(i);
        const Point2 b = vertex(i + 2) - vertex(i + 1);
        if (cross(a, b) <= kParallelTolerance * a.norm() * b.norm()) {
            invalid("polygon is not strictly convex and counterclockwise at vertex " +
                    std::to_string((i + 1) % n));
        }
    }

    area_ = signed_area(vertices_);
    if (!(area_ > 0.0)) {
        invalid("polygon has non-positive area");
    }
    Point2 c{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        const double w = cross(vertex(i), vertex(i + 1));
        c += w * (vertex(i) + vertex(i + 1));
    }
    centroid_ = c / (6.0 * area_);

    for (std::size_t i = 0; i < n; ++i) {
        const AffineMap2& L = labels_[i];
        const double g = L.gradient().norm();
        if (!(g > 0.0) || !std::isfinite(L.c0)) {
            invalid("label " + std::to_string(i) + " has zero or non-finite gradient");
        }
        const double slack = kLabelSlack * g * diameter_;
        for (std::size_t j = 0; j < n; ++j) {
            const double value = L(vertices_[j]);
            const bool on_edge = (j == i) || (j == (i + 1) % n);
            if (on_edge && std::abs(value) > slack) {
                invalid("label " + std::to_string(i) + " does not vanish on its edge (value " +
                        std::to_string(value) + " at vertex " + std::to_string(j) + ")");
            }
            if (!on_edge && !(value > slack)) {
                invalid("label " + std::to_string(i) + " is not positive at vertex " +
                        std::to_string(j));
            }
        }
        if (!(L(centroid_) > 0.0)) {
            invalid("label " + std::to_string(i) + " is not positive at the centroid");
        }
    }
}

double LabelledPolytope2::facet_mass(std::size_t i) const
{
    const auto [a, b] = edge(i);
    return (b - a).norm() / labels_[i % size()].gradient().norm();
}

bool LabelledPolytope2::contains_strictly(const Point2& x) const
{
    return std::all_of(labels_.begin(), labels_.end(),
                       [&](const AffineMap2& L) { return L(x) > 0.0; });
}

LabelledPolytope2 LabelledPolytope2::translated(const Point2& t) const
{
    std::vector<Point2> v;
    v.reserve(size());
    for (const auto& p : vertices_) {
        v.push_back(p - t);
    }
    std::vector<AffineMap2> l;
    l.reserve(size());
    for (const auto& L : labels_) {
        l.push_back(L.shifted(t));
    }
    return {std::move(v), std::move(l)};
}

LabelledPolytope2 from_halfplanes(const std::vector<AffineMap2>& labels)
{
    const std::size_t n = labels.size();
    if (n < 3) {
        throw Error(ErrorKind::UnboundedRegion, "fewer than three half-planes");
    }
    for (const auto& L : labels) {
        if (!(L.gradient().norm() > 0.0)) {
            throw Error(ErrorKind::InvalidInput, "label with zero gradient");
        }
    }

    // Bounded iff the recession cone {d : grad L_i . d >= 0} is trivial. Any
    // nontrivial cone has an extreme ray orthogonal to some gradient.
    for (const auto& L : labels) {
        const Point2 g = L.gradient();
        for (const Point2 d : {Point2{-g.y(), g.x()}, Point2{g.y(), -g.x()}}) {
            const bool recedes = std::all_of(labels.begin(), labels.end(), [&](const AffineMap2& M) {
                return M.gradient().dot(d) >= -1e-12 * M.gradient().norm() * d.norm();
            });
            if (recedes) {
                throw Error(ErrorKind::UnboundedRegion, "half-planes do not bound a region");
            }
        }
    }

    // Feasible pairwise intersections.
    double scale = 0.0;
    std::vector<Point2> candidates;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            Eigen::Matrix2d A;
            A << labels[i].c1, labels[i].c2, labels[j].c1, labels[j].c2;
            const double det = A.determinant();
            if (std::abs(det) <= 1e-14 * labels[i].gradient().norm() * labels[j].gradient().norm()) {
                continue;
            }
            const Point2 x = A.inverse() * Point2{-labels[i].c0, -labels[j].c0};
            candidates.push_back(x);
            scale = std::max(scale, x.norm());
        }
    }
    scale = std::max(scale, 1.0);
    std::vector<Point2> feasible;
    for (const auto& x : candidates) {
        const bool ok = std::all_of(labels.begin(), labels.end(), [&](const AffineMap2& M) {
            return M(x) >= -1e-10 * M.gradient().norm() * scale;
        });
        if (!ok) {
            continue;
        }
        const bool dup = std::any_of(feasible.begin(), feasible.end(), [&](const Point2& y) {
            return (x - y).norm() <= 1e-12 * scale;
        });
        if (!dup) {
            feasible.push_back(x);
        }
    }
    if (feasible.size() < 3) {
        throw Error(ErrorKind::EmptyInterior, "half-planes have empty interior");
    }

    // Monotone-chain hull, collinear points dropped.
    std::sort(feasible.begin(), feasible.end(), [](const Point2& a, const Point2& b) {
        return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
    });
    std::vector<Point2> hull(2 * feasible.size());
    std::size_t k = 0;
    const double tiny = 1e-12 * scale * scale;
    for (std::size_t i = 0; i < feasible.size(); ++i) {
        while (k >= 2 && cross(hull[k - 1] - hull[k - 2], feasible[i] - hull[k - 2]) <= tiny) {
            --k;
        }
        hull[k++] = feasible[i];
    }
    for (std::size_t i = feasible.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(hull[k - 1] - hull[k - 2], feasible[i] - hull[k - 2]) <= tiny) {
            --k;
        }
        hull[k++] = feasible[i];
    }
    hull.resize(k - 1);
    if (hull.size() < 3 || !(signed_area(hull) > tiny)) {
        throw Error(ErrorKind::EmptyInterior, "half-planes have empty interior");
    }

    // Start at the lowest (then leftmost) vertex.
    const auto start = std::min_element(hull.begin(), hull.end(), [](const Point2& a, const Point2& b) {
        return a.y() < b.y() || (a.y() == b.y() && a.x() < b.x());
    });
    std::rotate(hull.begin(), start, hull.end());

    const std::size_t m = hull.size();
    std::vector<AffineMap2> ordered(m);
    std::vector<bool> used(n, false);
    for (std::size_t e = 0; e < m; ++e) {
        const Point2& a = hull[e];
        const Point2& b = hull[(e + 1) % m];
        bool found = false;
        for (std::size_t i = 0; i < n && !found; ++i) {
            const double slack = 1e-10 * labels[i].gradient().norm() * scale;
            if (std::abs(labels[i](a)) <= slack && std::abs(labels[i](b)) <= slack) {
                ordered[e] = labels[i];
                used[i] = true;
                found = true;
            }
        }
        if (!found) {
            throw Error(ErrorKind::InvalidInput, "no label vanishes on edge " + std::to_string(e));
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!used[i]) {
            throw Error(ErrorKind::RedundantLabel,
                        "label " + std::to_string(i) + " vanishes on no edge of the region");
        }
    }
    return {std::move(hull), std::move(ordered)};
}

LabelledPolytope2 hirzebruch_delzant(double p, int k)
{
    if (!(p > 0.0 && p < 1.0) || k < 1) {
        std::ostringstream os;
        os << "need 0 < p < 1 and k >= 1, got p=" << p << " k=" << k;
        throw Error(ErrorKind::ParameterOutOfRange, os.str());
    }
    const double kd = k;
    // Edge order: x2=0, x1=p, slanted, x1=0.
    return {{{0.0, 0.0}, {p, 0.0}, {p, (1.0 - p) * kd}, {0.0, kd}},
            {{0.0, 0.0, 1.0}, {p, -1.0, 0.0}, {kd, -kd, -1.0}, {0.0, 1.0, 0.0}}};
}

VertexMin min_over_vertices(const LabelledPolytope2& poly, const AffineMap2& f)
{
    VertexMin best{f(poly.vertex(0)), 0};
    for (std::size_t i = 1; i < poly.size(); ++i) {
        const double v = f(poly.vertex(i));
        if (v < best.value) {
            best = {v, i};
        }
    }
    return best;
}

QuadType classify_quadrilateral(const LabelledPolytope2& poly)
{
    if (poly.size() != 4) {
        throw Error(ErrorKind::NotAQuadrilateral,
                    "polytope has " + std::to_string(poly.size()) + " vertices");
    }
    auto parallel = [&](std::size_t i, std::size_t j) {
        const auto [a0, a1] = poly.edge(i);
        const auto [b0, b1] = poly.edge(j);
        const Point2 d = a1 - a0;
        const Point2 e = b1 - b0;
        return std::abs(cross(d, e)) <= kParallelTolerance * d.norm() * e.norm();
    };
    const int pairs = int(parallel(0, 2)) + int(parallel(1, 3));
    if (pairs == 2) {
        return QuadType::Parallelogram;
    }
    return pairs == 1 ? QuadType::TrapezoidNotParallelogram : QuadType::GenericQuadrilateral;
}

bool is_integral_delzant(const LabelledPolytope2& poly, double tol)
{
    for (const auto& L : poly.labels()) {
        const double a = std::round(L.c1);
        const double b = std::round(L.c2);
        if (std::abs(a - L.c1) > tol || std::abs(b - L.c2) > tol) {
            return false;
        }
        if (std::gcd(static_cast<long long>(std::abs(a)), static_cast<long long>(std::abs(b))) != 1) {
            return false;
        }
    }
    return true;
}

LabelledPolytope2 affine_image(const LabelledPolytope2& poly, const Eigen::Matrix2d& A,
                               const Point2& t)
{
    const double det = A.determinant();
    if (!(std::abs(det) > 0.0)) {
        throw Error(ErrorKind::InvalidInput, "affine map is not invertible");
    }
    const Eigen::Matrix2d Ainv = A.inverse();
    auto map_label = [&](const AffineMap2& L) {
        const Point2 g = Ainv.transpose() * L.gradient();
        const Point2 origin_pre = Ainv * (-t);
        return AffineMap2{L(origin_pre), g.x(), g.y()};
    };
    const std::size_t n = poly.size();
    std::vector<Point2> v(n);
    std::vector<AffineMap2> l(n);
    for (std::size_t j = 0; j < n; ++j) {
        if (det > 0.0) {
            v[j] = A * poly.vertex(j) + t;
            l[j] = map_label(poly.labels()[j]);
        } else {
            // Orientation flips: walk the vertices backwards.
            v[j] = A * poly.vertex(n - 1 - j) + t;
            l[j] = map_label(poly.labels()[(2 * n - 2 - j) % n]);
        }
    }
    return {std::move(v), std::move(l)};
}

}  // namespace torick
