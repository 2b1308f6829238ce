#pragma once

#include <Eigen/Core>

#include "torick/futaki.hpp"
#include "torick/polytope.hpp"

namespace torick
{

/// Guillemin potential u = 1/2 sum_r L_r log L_r.
double guillemin_potential(const LabelledPolytope2& poly, const Point2& x);

/// Hessian of the Guillemin potential, sum_r e_r e_r^T / (2 L_r(x)). Throws NotInterior.
Eigen::Matrix2d guillemin_hessian(const LabelledPolytope2& poly, const Point2& x);

/// Closed-form inverse of guillemin_hessian. Throws SingularHessian below a 1e-300 determinant.
Eigen::Matrix2d inverse_hessian(const LabelledPolytope2& poly, const Point2& x);

/// Euclidean distance from x to the nearest facet line (negative outside).
double boundary_distance(const LabelledPolytope2& poly, const Point2& x);

/// Finite-difference step used by default: 1e-4 * diam(P).
inline double default_step(const LabelledPolytope2& poly) { return 1e-4 * poly.diameter(); }

/**
 * (f,w)-scalar curvature of the Guillemin metric,
 *     -f^(w+1) sum_ij (f^(1-w) H_ij)_{,ij},
 * by central differences of step h with one Richardson level. x must keep a
 * margin of 4h from the boundary (StepTooLarge otherwise). With f = 1 this is
 * Abreu's scalar curvature.
 */
double weighted_scalar_curvature(const LabelledPolytope2& poly, const AffineMap2& f, double w,
                                 const Point2& x, double h);

/// Integrals of S_{f,w}(u) phi f^-(w+1) dx for phi = 1, x1, x2. The step is
/// shrunk near the boundary to keep the 4h margin.
Eigen::Vector3d abreu_pairing(const LabelledPolytope2& poly, const AffineMap2& f, double w,
                              double tol = 1e-9);

/// Boundary side of the pairing: 2 int_boundary phi f^-(w-1) dsigma for phi = 1, x1, x2.
Eigen::Vector3d boundary_pairing(const LabelledPolytope2& poly, const AffineMap2& f, double w,
                                 double tol = kDefaultQuadTol);

/// Weighted L2 projection of S_{f,w}(u) onto affine functions (weight f^-(w+1) dx).
AffineMap2 scalar_curvature_projection(const LabelledPolytope2& poly, const AffineMap2& f, double w,
                                       double tol = 1e-9);

}  // namespace torick
