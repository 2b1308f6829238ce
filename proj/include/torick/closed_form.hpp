#pragma once

#include <array>
#include <span>

#include <Eigen/Core>

#include "torick/polytope.hpp"

namespace torick::closed_form
{

/**
 * Integral over the standard d-simplex {lambda_i >= 0, sum lambda_i = 1}
 * (Lebesgue measure in the first d coordinates) of
 *
 *     prod_i lambda_i^beta_i * (sum_i lambda_i f_i)^(-n)
 *
 * for d = fv.size() - 1. Requires n - |beta| >= d + 1, so the result is a
 * rational function of the vertex values f_i with no logarithms:
 *
 *     (m-d-1)!/(n-1)! * sum_{|k| = m-d-1} prod_i (k_i+beta_i)!/k_i! f_i^-(k_i+beta_i+1),
 *
 * m = n - |beta|. It is the analytic continuation of the integral to any f
 * that is nonzero at the vertices, including f changing sign inside.
 */
double simplex_moment(std::span<const int> beta, int n, std::span<const double> fv);

/// Gram data for an affine basis: interior(a,b) = int phi_a phi_b f^-(w+1) dx,
/// boundary(a) = 2 int_boundary phi_a f^-(w-1) dsigma.
struct GramMoments {
    Eigen::Matrix3d interior;
    Eigen::Vector3d boundary;
};

/// Closed-form Gram data for integer w >= 4. Throws VertexZero if f vanishes at a vertex.
GramMoments gram_moments(const LabelledPolytope2& poly, const AffineMap2& f, int w,
                         const std::array<AffineMap2, 3>& basis);

/// int_P phi f^-n dx for affine phi and integer n >= 4 (n >= 3 when phi is constant).
double interior_moment(const LabelledPolytope2& poly, const AffineMap2& f, int n,
                       const AffineMap2& phi);

}  // namespace torick::closed_form
