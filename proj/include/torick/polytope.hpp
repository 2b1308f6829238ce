#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace torick
{

using Point2 = Eigen::Vector2d;

/// Affine function c0 + c1*x1 + c2*x2 on the plane.
struct AffineMap2 {
    double c0{0.0};
    double c1{0.0};
    double c2{0.0};

    static AffineMap2 constant(double c) { return {c, 0.0, 0.0}; }

    double operator()(const Point2& x) const { return c0 + c1 * x.x() + c2 * x.y(); }
    Point2 gradient() const { return {c1, c2}; }

    AffineMap2 operator+(const AffineMap2& o) const { return {c0 + o.c0, c1 + o.c1, c2 + o.c2}; }
    AffineMap2 operator-(const AffineMap2& o) const { return {c0 - o.c0, c1 - o.c1, c2 - o.c2}; }
    AffineMap2 operator-() const { return {-c0, -c1, -c2}; }
    AffineMap2 operator*(double s) const { return {s * c0, s * c1, s * c2}; }

    /// The map x -> this(x + t), i.e. the same function in coordinates shifted by -t.
    AffineMap2 shifted(const Point2& t) const { return {(*this)(t), c1, c2}; }

    bool operator==(const AffineMap2&) const = default;
};

inline AffineMap2 operator*(double s, const AffineMap2& a) { return a * s; }

enum class QuadType { Parallelogram, TrapezoidNotParallelogram, GenericQuadrilateral };

std::string to_string(QuadType t);

/**
 * Compact convex polygon with one affine label per facet.
 *
 * Vertices are counterclockwise. Label i vanishes on the edge from vertex i
 * to vertex i+1 (cyclic) and is positive on the interior. Label scales are
 * kept exactly as given; nothing is normalized.
 */
class LabelledPolytope2
{
public:
    /// Validates every invariant and throws Error(InvalidPolytope) naming the first violation.
    LabelledPolytope2(std::vector<Point2> vertices, std::vector<AffineMap2> labels);

    const std::vector<Point2>& vertices() const { return vertices_; }
    const std::vector<AffineMap2>& labels() const { return labels_; }
    std::size_t size() const { return vertices_.size(); }

    const Point2& vertex(std::size_t i) const { return vertices_[i % vertices_.size()]; }
    /// Edge i runs from vertex(i) to vertex(i+1).
    std::pair<Point2, Point2> edge(std::size_t i) const { return {vertex(i), vertex(i + 1)}; }

    double area() const { return area_; }
    /// Area centroid.
    Point2 centroid() const { return centroid_; }
    /// Largest vertex-to-vertex distance.
    double diameter() const { return diameter_; }

    /// dsigma mass of facet i: |edge| / |grad L_i|.
    double facet_mass(std::size_t i) const;

    bool contains_strictly(const Point2& x) const;

    /// Same polytope expressed in coordinates y = x - t.
    LabelledPolytope2 translated(const Point2& t) const;

private:
    std::vector<Point2> vertices_;
    std::vector<AffineMap2> labels_;
    double area_{0.0};
    Point2 centroid_{0.0, 0.0};
    double diameter_{0.0};
};

/// Polygon vertex list without labels (clipped pieces, fan triangles).
using Polygon = std::vector<Point2>;

double signed_area(const Polygon& poly);

/// Intersection of the half-planes {L_i >= 0}; labels are stored unchanged.
LabelledPolytope2 from_halfplanes(const std::vector<AffineMap2>& labels);

/// Delzant trapezoid of the k-th Hirzebruch surface: hull of (0,0), (p,0), (p,(1-p)k), (0,k).
LabelledPolytope2 hirzebruch_delzant(double p, int k);

struct VertexMin {
    double value;
    std::size_t index;
};

/// Minimum of an affine map over the vertices; lowest index wins ties.
VertexMin min_over_vertices(const LabelledPolytope2& poly, const AffineMap2& f);

inline bool positive_on(const LabelledPolytope2& poly, const AffineMap2& f)
{
    return min_over_vertices(poly, f).value > 0.0;
}

/// Relative parallelism tolerance for edge directions.
inline constexpr double kParallelTolerance = 1e-10;

QuadType classify_quadrilateral(const LabelledPolytope2& poly);

/// Advisory lattice check: every label gradient is a primitive integer vector (tolerance 1e-9).
bool is_integral_delzant(const LabelledPolytope2& poly, double tol = 1e-9);

/// Image of the polytope under x -> A x + t; labels follow the inverse-transpose rule.
LabelledPolytope2 affine_image(const LabelledPolytope2& poly, const Eigen::Matrix2d& A,
                               const Point2& t);

}  // namespace torick
