#include "torick/futaki.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "torick/closed_form.hpp"
#include "torick/errors.hpp"
#include "torick/quadrature.hpp"

namespace torick
{

namespace
{

std::array<AffineMap2, 3> centred_basis(const LabelledPolytope2& poly)
{
    const Point2 c = poly.centroid();
    const double s = poly.diameter();
    return {AffineMap2{1.0, 0.0, 0.0}, AffineMap2{-c.x() / s, 1.0 / s, 0.0},
            AffineMap2{-c.y() / s, 0.0, 1.0 / s}};
}

double condition_number(const Eigen::Matrix3d& M)
{
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(M, Eigen::EigenvaluesOnly);
    const auto ev = es.eigenvalues().cwiseAbs();
    const double lo = ev.minCoeff();
    return lo > 0.0 ? ev.maxCoeff() / lo : std::numeric_limits<double>::infinity();
}

ExtremalAffine solve_projection(const LabelledPolytope2& poly, const Eigen::Matrix3d& M,
                                const Eigen::Vector3d& b, const std::array<AffineMap2, 3>& basis,
                                bool enforce_condition)
{
    const double cond = condition_number(M);
    if (enforce_condition && !(cond <= kMaxGramCondition)) {
        throw Error(ErrorKind::IllConditioned,
                    "Gram matrix condition number " + std::to_string(cond) + " exceeds 1e12");
    }
    Eigen::Vector3d y;
    Eigen::LLT<Eigen::Matrix3d> llt(M);
    if (llt.info() == Eigen::Success) {
        y = llt.solve(b);
    } else {
        // Indefinite only in the sign-changing closed-form case.
        y = M.fullPivLu().solve(b);
    }
    AffineMap2 zeta = basis[0] * y(0) + basis[1] * y(1) + basis[2] * y(2);
    return {zeta, cond, residual_a(poly, zeta)};
}

void require_weight(const LabelledPolytope2& poly, const AffineMap2& f)
{
    require_positive_weight(poly.vertices(), f);
}

}  // namespace

double residual_a(const LabelledPolytope2& poly, const AffineMap2& zeta)
{
    const double centre = std::abs(zeta(poly.centroid()));
    const double slope = (std::abs(zeta.c1) + std::abs(zeta.c2)) * poly.diameter();
    if (centre == 0.0) {
        return slope == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    return slope / centre;
}

bool CreaseFunction::crosses(const LabelledPolytope2& poly) const
{
    bool pos = false;
    bool neg = false;
    for (const auto& v : poly.vertices()) {
        const double s = ell(v);
        pos = pos || s > 0.0;
        neg = neg || s < 0.0;
    }
    return pos && neg;
}

ExtremalAffine extremal_affine(const LabelledPolytope2& poly, const AffineMap2& f, double w,
                               double tol)
{
    require_weight(poly, f);
    const auto basis = centred_basis(poly);

    const auto interior = integrate_interior(
        poly, 6,
        [&](const Point2& x, std::span<double> out) {
            const double p0 = basis[0](x);
            const double p1 = basis[1](x);
            const double p2 = basis[2](x);
            out[0] = p0 * p0;
            out[1] = p0 * p1;
            out[2] = p0 * p2;
            out[3] = p1 * p1;
            out[4] = p1 * p2;
            out[5] = p2 * p2;
        },
        WeightSpec{f, w + 1.0}, tol);
    const auto boundary = integrate_boundary(
        poly, 3,
        [&](const Point2& x, std::span<double> out) {
            for (int a = 0; a < 3; ++a) {
                out[a] = basis[a](x);
            }
        },
        WeightSpec{f, w - 1.0}, tol);

    const auto& m = interior.value;
    Eigen::Matrix3d M;
    M << m[0], m[1], m[2], m[1], m[3], m[4], m[2], m[4], m[5];
    const Eigen::Vector3d b = 2.0 * Eigen::Vector3d(boundary.value[0], boundary.value[1], boundary.value[2]);
    return solve_projection(poly, M, b, basis, true);
}

ExtremalAffine extremal_affine_closed_form(const LabelledPolytope2& poly, const AffineMap2& f,
                                           int w)
{
    const auto basis = centred_basis(poly);
    const auto g = closed_form::gram_moments(poly, f, w, basis);
    return solve_projection(poly, g.interior, g.boundary, basis, false);
}

double df_invariant(const LabelledPolytope2& poly, const AffineMap2& f, double w,
                    const AffineMap2& phi, const AffineMap2& zeta, double tol)
{
    require_weight(poly, f);
    const double boundary =
        integrate_boundary(poly, [&](const Point2& x) { return phi(x); }, WeightSpec{f, w - 1.0}, tol).value;
    const double interior =
        integrate_interior(poly, [&](const Point2& x) { return phi(x) * zeta(x); }, WeightSpec{f, w + 1.0}, tol)
            .value;
    return 2.0 * boundary - interior;
}

Polygon clip_halfplane(const Polygon& poly, const AffineMap2& ell)
{
    Polygon out;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& a = poly[i];
        const Point2& b = poly[(i + 1) % n];
        const double la = ell(a);
        const double lb = ell(b);
        if (la >= 0.0) {
            out.push_back(a);
        }
        if ((la > 0.0 && lb < 0.0) || (la < 0.0 && lb > 0.0)) {
            const double t = la / (la - lb);
            out.push_back(a + t * (b - a));
        }
    }
    return out;
}

double df_invariant(const LabelledPolytope2& poly, const AffineMap2& f, double w,
                    const CreaseFunction& phi, const AffineMap2& zeta, double tol)
{
    require_weight(poly, f);
    const AffineMap2& ell = phi.ell;

    // Boundary: each facet clipped to ell >= 0; the crease chord carries phi = 0.
    double boundary = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        auto [a, b] = poly.edge(i);
        const double la = ell(a);
        const double lb = ell(b);
        if (la <= 0.0 && lb <= 0.0) {
            continue;
        }
        if (la < 0.0) {
            a = a + (la / (la - lb)) * (b - a);
        } else if (lb < 0.0) {
            b = a + (la / (la - lb)) * (b - a);
        }
        const double scale = (b - a).norm() / poly.labels()[i].gradient().norm();
        boundary += integrate_segment(a, b, scale, [&](const Point2& x) { return ell(x); },
                                      WeightSpec{f, w - 1.0}, tol)
                        .value;
    }

    const Polygon piece = clip_halfplane(poly.vertices(), ell);
    double interior = 0.0;
    if (piece.size() >= 3 && signed_area(piece) > 0.0) {
        interior = integrate_polygon(piece, [&](const Point2& x) { return ell(x) * zeta(x); },
                                     WeightSpec{f, w + 1.0}, tol)
                       .value;
    }
    return 2.0 * boundary - interior;
}

double ckem_constant(const LabelledPolytope2& poly, const AffineMap2& f, int m, double tol)
{
    if (m < 1) {
        throw Error(ErrorKind::InvalidInput, "complex dimension m must be >= 1");
    }
    require_weight(poly, f);
    const auto one = [](const Point2&) { return 1.0; };
    const double num = integrate_boundary(poly, one, WeightSpec{f, 2.0 * m - 1.0}, tol).value;
    const double den = integrate_interior(poly, one, WeightSpec{f, 2.0 * m + 1.0}, tol).value;
    return 2.0 * num / den;
}

std::vector<CreaseFunction> sample_creases(const LabelledPolytope2& poly, std::size_t n,
                                           std::uint64_t seed)
{
    constexpr std::size_t kDirections = 20;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double rotation = unit(rng);

    std::vector<CreaseFunction> out;
    out.reserve(n);
    for (std::size_t c = 0; c < n; ++c) {
        const std::size_t dir = c % kDirections;
        const std::size_t slot = c / kDirections;
        const std::size_t slots = n / kDirections + (dir < n % kDirections ? 1 : 0);
        const double theta = 2.0 * std::numbers::pi * (double(dir) + rotation) / kDirections;
        const Point2 d{std::cos(theta), std::sin(theta)};
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (const auto& v : poly.vertices()) {
            lo = std::min(lo, d.dot(v));
            hi = std::max(hi, d.dot(v));
        }
        const double q = (double(slot) + 0.05 + 0.9 * unit(rng)) / double(slots);
        const double t = lo + q * (hi - lo);
        out.push_back({AffineMap2{-t, d.x(), d.y()}});
    }
    return out;
}

namespace
{

CreaseScanReport make_report(AffineMap2 zeta, std::vector<CreaseFunction> creases,
                             std::vector<double> values)
{
    CreaseScanReport r;
    r.zeta = zeta;
    r.creases = std::move(creases);
    r.values = std::move(values);
    r.minimum = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < r.values.size(); ++i) {
        if (r.values[i] < r.minimum) {
            r.minimum = r.values[i];
            r.argmin = i;
        }
        if (!(r.values[i] > 0.0)) {
            ++r.violations;
        }
    }
    return r;
}

}  // namespace

CreaseScanReport crease_scan_serial(const LabelledPolytope2& poly, const AffineMap2& f, double w,
                                    std::size_t n, std::uint64_t seed, double tol)
{
    const AffineMap2 zeta = extremal_affine(poly, f, w, tol).zeta;
    auto creases = sample_creases(poly, n, seed);
    std::vector<double> values(creases.size());
    for (std::size_t i = 0; i < creases.size(); ++i) {
        values[i] = df_invariant(poly, f, w, creases[i], zeta, tol);
    }
    return make_report(zeta, std::move(creases), std::move(values));
}

CreaseScanReport crease_scan(const LabelledPolytope2& poly, const AffineMap2& f, double w,
                             std::size_t n, std::uint64_t seed, double tol)
{
    const AffineMap2 zeta = extremal_affine(poly, f, w, tol).zeta;
    auto creases = sample_creases(poly, n, seed);
    std::vector<double> values(creases.size());
    const long count = static_cast<long>(creases.size());
    bool failed = false;
    std::string message;
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < count; ++i) {
        try {
            values[i] = df_invariant(poly, f, w, creases[i], zeta, tol);
        } catch (const std::exception& e) {
#pragma omp critical
            {
                failed = true;
                message = e.what();
            }
        }
    }
    if (failed) {
        throw Error(ErrorKind::ToleranceNotReached, "crease scan failed: " + message);
    }
    return make_report(zeta, std::move(creases), std::move(values));
}

}  // namespace torick
