#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "torick/polytope.hpp"

namespace torick
{

/// Default quadrature tolerance for the weighted invariants.
inline constexpr double kDefaultQuadTol = 1e-10;
/// Default threshold on residual_a for condition (a).
inline constexpr double kDefaultTauA = 1e-7;
/// Gram matrices with a larger condition number are rejected.
inline constexpr double kMaxGramCondition = 1e12;

struct ExtremalAffine {
    AffineMap2 zeta;
    double gram_condition_number{0.0};
    /// (|c1| + |c2|) * diam / |zeta(centroid)|; zero iff zeta is constant.
    double residual_a{0.0};
};

double residual_a(const LabelledPolytope2& poly, const AffineMap2& zeta);

/// Convex piecewise affine test function max(0, ell).
struct CreaseFunction {
    AffineMap2 ell;

    double operator()(const Point2& x) const { return std::max(0.0, ell(x)); }

    /// True when the crease line ell = 0 meets the interior of the polygon.
    bool crosses(const LabelledPolytope2& poly) const;
};

/**
 * Extremal affine function zeta of (P, L, f, w): the affine function with
 * F(phi) = 0 for all affine phi. Computed by weighted L2 projection,
 * M c = b with M_ab = int psi_a psi_b f^-(w+1) dx and
 * b_a = 2 int_boundary psi_a f^-(w-1) dsigma, in a centred and scaled affine
 * basis psi.
 */
ExtremalAffine extremal_affine(const LabelledPolytope2& poly, const AffineMap2& f, double w,
                               double tol = kDefaultQuadTol);

/// Same projection from closed-form moments (integer w >= 4). Valid for any f
/// that is nonzero at the vertices; for f changing sign inside P this is the
/// rational continuation of the positive case.
ExtremalAffine extremal_affine_closed_form(const LabelledPolytope2& poly, const AffineMap2& f,
                                           int w);

/// Weighted Donaldson-Futaki invariant
/// F(phi) = 2 int_boundary phi f^-(w-1) dsigma - int_P phi zeta f^-(w+1) dx.
double df_invariant(const LabelledPolytope2& poly, const AffineMap2& f, double w,
                    const AffineMap2& phi, const AffineMap2& zeta, double tol = kDefaultQuadTol);

/// Crease version: the polygon is clipped along ell = 0 and only the side with
/// ell >= 0 contributes.
double df_invariant(const LabelledPolytope2& poly, const AffineMap2& f, double w,
                    const CreaseFunction& phi, const AffineMap2& zeta, double tol = kDefaultQuadTol);

/// Constant of condition (a): 2 int_boundary f^-(2m-1) dsigma / int_P f^-(2m+1) dx.
double ckem_constant(const LabelledPolytope2& poly, const AffineMap2& f, int m,
                     double tol = kDefaultQuadTol);

/// Part of the polygon where ell >= 0 (Sutherland-Hodgman against one half-plane).
Polygon clip_halfplane(const Polygon& poly, const AffineMap2& ell);

/// Creases crossing the interior: 20 directions (rotated by a seeded offset)
/// times offsets at jittered interior quantiles of the support function.
std::vector<CreaseFunction> sample_creases(const LabelledPolytope2& poly, std::size_t n,
                                           std::uint64_t seed);

struct CreaseScanReport {
    AffineMap2 zeta;
    std::vector<CreaseFunction> creases;
    std::vector<double> values;
    double minimum{0.0};
    std::size_t argmin{0};
    std::size_t violations{0};  // values <= 0
};

/// Evaluates F on n sampled creases; OpenMP over creases, reduction in index order.
CreaseScanReport crease_scan(const LabelledPolytope2& poly, const AffineMap2& f, double w,
                             std::size_t n, std::uint64_t seed, double tol = kDefaultQuadTol);

/// Serial reference for crease_scan; results are bitwise identical.
CreaseScanReport crease_scan_serial(const LabelledPolytope2& poly, const AffineMap2& f, double w,
                                    std::size_t n, std::uint64_t seed,
                                    double tol = kDefaultQuadTol);

}  // namespace torick
