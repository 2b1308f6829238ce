#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "torick/polytope.hpp"

namespace torick
{

/// Weight f^{-k}; f must be positive on the integration domain.
struct WeightSpec {
    AffineMap2 f{1.0, 0.0, 0.0};
    double k{0.0};

    static WeightSpec unit() { return {}; }
};

struct QuadratureResult {
    double value{0.0};
    double est_error{0.0};
    long evaluations{0};
};

/// Same, for integrands with several components sharing the same nodes.
struct VectorQuadratureResult {
    std::vector<double> value;
    double est_error{0.0};
    long evaluations{0};
};

using PointFunction = std::function<double(const Point2&)>;
/// Writes `out.size()` components for the point.
using VectorPointFunction = std::function<void(const Point2&, std::span<double> out)>;

namespace quad
{
inline constexpr int kHighOrder = 10;
inline constexpr int kLowOrder = 6;
inline constexpr int kMaxDepth = 24;
/// Cap on the number of pieces generated by one adaptive integration.
inline constexpr std::size_t kMaxPieces = std::size_t{1} << 18;
/// Absolute floor of the relative tolerance: target = tol * max(|value|, kFloor).
inline constexpr double kFloor = 1e-12;

struct GaussRule {
    std::vector<double> nodes;    // on [0, 1]
    std::vector<double> weights;  // sum to 1
};

/// Gauss-Legendre rule of the given order mapped to [0, 1].
const GaussRule& gauss_legendre(int order);
}  // namespace quad

/// Integral of g * f^{-k} dx over the interior of P.
QuadratureResult integrate_interior(const LabelledPolytope2& poly, const PointFunction& g,
                                    const WeightSpec& w, double tol);

/// Sum over facets of the integral of g * f^{-k} dsigma, with dL_i ^ dsigma = -dx.
QuadratureResult integrate_boundary(const LabelledPolytope2& poly, const PointFunction& g,
                                    const WeightSpec& w, double tol);

/// Interior integral over a convex polygon given by its vertices (any orientation).
QuadratureResult integrate_polygon(const Polygon& poly, const PointFunction& g, const WeightSpec& w,
                                   double tol);

VectorQuadratureResult integrate_polygon(const Polygon& poly, std::size_t components,
                                         const VectorPointFunction& g, const WeightSpec& w,
                                         double tol);

/// scale * int_0^1 g(a + t(b - a)) f^{-k} dt. With scale = |b-a|/|grad L| this is the
/// dsigma integral over the segment of a facet with label L.
QuadratureResult integrate_segment(const Point2& a, const Point2& b, double scale,
                                   const PointFunction& g, const WeightSpec& w, double tol);

VectorQuadratureResult integrate_segment(const Point2& a, const Point2& b, double scale,
                                         std::size_t components, const VectorPointFunction& g,
                                         const WeightSpec& w, double tol);

VectorQuadratureResult integrate_interior(const LabelledPolytope2& poly, std::size_t components,
                                          const VectorPointFunction& g, const WeightSpec& w,
                                          double tol);

VectorQuadratureResult integrate_boundary(const LabelledPolytope2& poly, std::size_t components,
                                          const VectorPointFunction& g, const WeightSpec& w,
                                          double tol);

/// Throws NonPositiveWeight unless f > 0 at every vertex of the polygon.
void require_positive_weight(const Polygon& poly, const AffineMap2& f);

}  // namespace torick
