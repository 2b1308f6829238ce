#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "torick/futaki.hpp"
#include "torick/polytope.hpp"

namespace torick
{

/**
 * The f-twist x -> x / f(x) for f = a0 + a1 x1 + a2 x2 with a0 != 0.
 *
 * The inverse is xt -> xt / ft(xt) with ft(xt) = (1 - a1 xt1 - a2 xt2) / a0,
 * and ft(T(x)) f(x) = 1.
 */
class TwistMap
{
public:
    explicit TwistMap(const AffineMap2& f);

    Point2 forward(const Point2& x) const { return x / f_(x); }
    Point2 inverse(const Point2& xt) const { return xt / f_tilde_(xt); }

    const AffineMap2& f() const { return f_; }
    const AffineMap2& f_tilde() const { return f_tilde_; }

private:
    AffineMap2 f_;
    AffineMap2 f_tilde_;
};

/// Affine function phi~ with phi~(T(x)) = phi(x) / f(x). Throws ZeroConstantTerm if f(0) = 0.
AffineMap2 twist_affine(const AffineMap2& f, const AffineMap2& phi);

/// (T(P), L / f). Requires the origin strictly inside P and f > 0 on P.
LabelledPolytope2 twist_polytope(const LabelledPolytope2& poly, const AffineMap2& f);

/// xt -> u(T^-1(xt)) ft(xt), i.e. u(x) / f(x).
std::function<double(const Point2&)> twist_scalar(const AffineMap2& f,
                                                  std::function<double(const Point2&)> u);

/// Polytope and weight re-expressed around the area centroid, then twisted.
struct CenteredTwist {
    Point2 translation;           // y = x - translation
    LabelledPolytope2 source;     // P in y coordinates
    AffineMap2 f;                 // f in y coordinates
    LabelledPolytope2 twisted;    // twist of (source, f)
};

CenteredTwist centered_twist(const LabelledPolytope2& poly, const AffineMap2& f);

/// Hessian by central differences of step h plus one Richardson level.
Eigen::Matrix2d fd_hessian(const std::function<double(const Point2&)>& u, const Point2& x, double h);

/// Interior points drawn uniformly (rejection sampling), at least margin * diam from the boundary.
std::vector<Point2> random_interior_points(const LabelledPolytope2& poly, std::size_t n,
                                           std::uint64_t seed, double margin = 0.02);

struct HessianDetReport {
    double max_rel_deviation{0.0};
    std::size_t samples{0};
    Point2 worst_point{0.0, 0.0};
};

/// det Hess(u~)(T x) against f(x)^4 / a0^2 det Hess(u)(x) for the Guillemin
/// potential, both Hessians by finite differences.
HessianDetReport check_hessian_det_law(const LabelledPolytope2& poly, const AffineMap2& f,
                                       std::span<const Point2> samples);

struct CovarianceReport {
    AffineMap2 zeta;                 // on (P, L, f, w = 4)
    AffineMap2 zeta_twisted;         // extremal affine of the twist, computed directly
    double zeta_deviation{0.0};      // max coefficient gap between twist_affine(f, zeta) and zeta_twisted
    std::vector<double> lhs;         // F_{P,L,f,4}(phi)
    std::vector<double> rhs;         // F_{twist}(phi~) / f(0)
    double max_rel_deviation{0.0};
};

/// Compares F_{P,L,f,4}(phi) with F_{twist}(phi~) / f(0) on each crease. The
/// origin must be interior to P.
CovarianceReport check_df_covariance(const LabelledPolytope2& poly, const AffineMap2& f,
                                     std::span<const CreaseFunction> creases,
                                     double tol = kDefaultQuadTol);

/// Affine variant: both sides vanish up to quadrature error.
CovarianceReport check_df_covariance(const LabelledPolytope2& poly, const AffineMap2& f,
                                     std::span<const AffineMap2> phis, double tol = kDefaultQuadTol);

}  // namespace torick
