#include "torick/twist.hpp"

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "torick/abreu.hpp"
#include "torick/errors.hpp"
#include "torick/quadrature.hpp"

namespace torick
{

namespace
{

AffineMap2 tilde_of(const AffineMap2& f)
{
    if (f.c0 == 0.0) {
        throw Error(ErrorKind::ZeroConstantTerm, "twist needs f(0) != 0");
    }
    return {1.0 / f.c0, -f.c1 / f.c0, -f.c2 / f.c0};
}

// 2 int_boundary |phi| f^(1-w) dsigma, the natural size of F(phi).
template <class Phi>
double df_scale(const LabelledPolytope2& poly, const AffineMap2& f, double w, const Phi& phi,
                double tol)
{
    return 2.0 * integrate_boundary(poly, [&](const Point2& x) { return std::abs(phi(x)); },
                                    WeightSpec{f, w - 1.0}, tol)
                     .value;
}

template <class Phi, class TwistPhi>
CovarianceReport covariance(const LabelledPolytope2& poly, const AffineMap2& f,
                            std::span<const Phi> phis, TwistPhi twist_phi, double tol)
{
    constexpr double kWeight = 4.0;  // m + 2 with m = 2
    const LabelledPolytope2 twisted = twist_polytope(poly, f);
    const AffineMap2 one = AffineMap2::constant(1.0);

    CovarianceReport r;
    r.zeta = extremal_affine(poly, f, kWeight, tol).zeta;
    r.zeta_twisted = extremal_affine(twisted, one, kWeight, tol).zeta;
    const AffineMap2 predicted = twist_affine(f, r.zeta);
    const double zscale = std::max({std::abs(r.zeta_twisted.c0), std::abs(r.zeta_twisted.c1),
                                    std::abs(r.zeta_twisted.c2)});
    r.zeta_deviation = std::max({std::abs(predicted.c0 - r.zeta_twisted.c0),
                                 std::abs(predicted.c1 - r.zeta_twisted.c1),
                                 std::abs(predicted.c2 - r.zeta_twisted.c2)}) /
                       zscale;

    const double a0 = f.c0;
    for (const auto& phi : phis) {
        const double lhs = df_invariant(poly, f, kWeight, phi, r.zeta, tol);
        const double rhs = df_invariant(twisted, one, kWeight, twist_phi(phi), r.zeta_twisted, tol) / a0;
        const double scale = std::max(df_scale(poly, f, kWeight, phi, tol), 1e-300);
        r.lhs.push_back(lhs);
        r.rhs.push_back(rhs);
        r.max_rel_deviation = std::max(r.max_rel_deviation, std::abs(lhs - rhs) / scale);
    }
    return r;
}

}  // namespace

TwistMap::TwistMap(const AffineMap2& f) : f_{f}, f_tilde_{tilde_of(f)} {}

AffineMap2 twist_affine(const AffineMap2& f, const AffineMap2& phi)
{
    if (f.c0 == 0.0) {
        throw Error(ErrorKind::ZeroConstantTerm, "twist needs f(0) != 0");
    }
    const double a0 = f.c0;
    return {phi.c0 / a0, phi.c1 - phi.c0 * f.c1 / a0, phi.c2 - phi.c0 * f.c2 / a0};
}

LabelledPolytope2 twist_polytope(const LabelledPolytope2& poly, const AffineMap2& f)
{
    if (!poly.contains_strictly(Point2::Zero())) {
        throw Error(ErrorKind::OriginNotInterior, "the origin must lie inside the polytope");
    }
    require_positive_weight(poly.vertices(), f);
    const TwistMap T(f);
    std::vector<Point2> v;
    std::vector<AffineMap2> l;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        v.push_back(T.forward(poly.vertex(i)));
        l.push_back(twist_affine(f, poly.labels()[i]));
    }
    return {std::move(v), std::move(l)};
}

std::function<double(const Point2&)> twist_scalar(const AffineMap2& f,
                                                  std::function<double(const Point2&)> u)
{
    const TwistMap T(f);
    return [T, u = std::move(u)](const Point2& xt) { return u(T.inverse(xt)) * T.f_tilde()(xt); };
}

CenteredTwist centered_twist(const LabelledPolytope2& poly, const AffineMap2& f)
{
    const Point2 t = poly.centroid();
    LabelledPolytope2 source = poly.translated(t);
    const AffineMap2 g = f.shifted(t);
    LabelledPolytope2 twisted = twist_polytope(source, g);
    return {t, std::move(source), g, std::move(twisted)};
}

Eigen::Matrix2d fd_hessian(const std::function<double(const Point2&)>& u, const Point2& x, double h)
{
    auto at = [&](double dx, double dy) { return u(x + Point2{dx, dy}); };
    auto raw = [&](double s) {
        const double c = at(0.0, 0.0);
        Eigen::Matrix2d H;
        H(0, 0) = (at(s, 0.0) - 2.0 * c + at(-s, 0.0)) / (s * s);
        H(1, 1) = (at(0.0, s) - 2.0 * c + at(0.0, -s)) / (s * s);
        H(0, 1) = (at(s, s) - at(s, -s) - at(-s, s) + at(-s, -s)) / (4.0 * s * s);
        H(1, 0) = H(0, 1);
        return H;
    };
    return (4.0 * raw(h) - raw(2.0 * h)) / 3.0;
}

std::vector<Point2> random_interior_points(const LabelledPolytope2& poly, std::size_t n,
                                           std::uint64_t seed, double margin)
{
    Point2 lo = poly.vertex(0);
    Point2 hi = lo;
    for (const auto& v : poly.vertices()) {
        lo = lo.cwiseMin(v);
        hi = hi.cwiseMax(v);
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(lo.x(), hi.x());
    std::uniform_real_distribution<double> uy(lo.y(), hi.y());
    const double min_dist = margin * poly.diameter();
    std::vector<Point2> out;
    out.reserve(n);
    std::size_t attempts = 0;
    while (out.size() < n) {
        if (++attempts > 1000 * (n + 10)) {
            throw Error(ErrorKind::DegeneratePolytope, "could not sample interior points");
        }
        const Point2 x{ux(rng), uy(rng)};
        if (boundary_distance(poly, x) >= min_dist) {
            out.push_back(x);
        }
    }
    return out;
}

HessianDetReport check_hessian_det_law(const LabelledPolytope2& poly, const AffineMap2& f,
                                       std::span<const Point2> samples)
{
    const LabelledPolytope2 twisted = twist_polytope(poly, f);
    const TwistMap T(f);
    const auto u = [&poly](const Point2& x) { return guillemin_potential(poly, x); };
    const auto ut = twist_scalar(f, u);
    const double h = default_step(poly);
    const double ht = default_step(twisted);
    const double a0 = f.c0;

    HessianDetReport r;
    for (const auto& x : samples) {
        if (!poly.contains_strictly(x)) {
            throw Error(ErrorKind::NotInterior, "sample point is not interior");
        }
        const double fx = f(x);
        const double lhs = fd_hessian(ut, T.forward(x), ht).determinant();
        const double rhs = std::pow(fx, 4) / (a0 * a0) * fd_hessian(u, x, h).determinant();
        const double dev = std::abs(lhs - rhs) / std::abs(rhs);
        if (dev > r.max_rel_deviation) {
            r.max_rel_deviation = dev;
            r.worst_point = x;
        }
        ++r.samples;
    }
    return r;
}

CovarianceReport check_df_covariance(const LabelledPolytope2& poly, const AffineMap2& f,
                                     std::span<const CreaseFunction> creases, double tol)
{
    return covariance<CreaseFunction>(
        poly, f, creases, [&f](const CreaseFunction& c) { return CreaseFunction{twist_affine(f, c.ell)}; },
        tol);
}

CovarianceReport check_df_covariance(const LabelledPolytope2& poly, const AffineMap2& f,
                                     std::span<const AffineMap2> phis, double tol)
{
    return covariance<AffineMap2>(poly, f, phis, [&f](const AffineMap2& p) { return twist_affine(f, p); },
                                  tol);
}

}  // namespace torick
