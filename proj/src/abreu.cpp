#include "torick/abreu.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "torick/errors.hpp"
#include "torick/quadrature.hpp"

namespace torick
{

namespace
{

void require_interior(const LabelledPolytope2& poly, const Point2& x)
{
    for (std::size_t r = 0; r < poly.size(); ++r) {
        if (!(poly.labels()[r](x) > 0.0)) {
            throw Error(ErrorKind::NotInterior,
                        "point is not interior (label " + std::to_string(r) + " <= 0)");
        }
    }
}

// sum_ij d_i d_j Q_ij at step h, Q = f^(1-w) H.
double contracted_second_difference(const LabelledPolytope2& poly, const AffineMap2& f, double w,
                                    const Point2& x, double h)
{
    auto Q = [&](double dx, double dy) -> Eigen::Matrix2d {
        const Point2 y = x + Point2{dx, dy};
        return std::pow(f(y), 1.0 - w) * inverse_hessian(poly, y);
    };
    const Eigen::Matrix2d c = Q(0.0, 0.0);
    const double d11 = (Q(h, 0.0)(0, 0) - 2.0 * c(0, 0) + Q(-h, 0.0)(0, 0)) / (h * h);
    const double d22 = (Q(0.0, h)(1, 1) - 2.0 * c(1, 1) + Q(0.0, -h)(1, 1)) / (h * h);
    const double d12 = (Q(h, h)(0, 1) - Q(h, -h)(0, 1) - Q(-h, h)(0, 1) + Q(-h, -h)(0, 1)) / (4.0 * h * h);
    return d11 + 2.0 * d12 + d22;
}

}  // namespace

double guillemin_potential(const LabelledPolytope2& poly, const Point2& x)
{
    double u = 0.0;
    for (const auto& L : poly.labels()) {
        const double l = L(x);
        if (!(l > 0.0)) {
            throw Error(ErrorKind::NotInterior, "Guillemin potential evaluated off the interior");
        }
        u += 0.5 * l * std::log(l);
    }
    return u;
}

Eigen::Matrix2d guillemin_hessian(const LabelledPolytope2& poly, const Point2& x)
{
    require_interior(poly, x);
    Eigen::Matrix2d G = Eigen::Matrix2d::Zero();
    for (const auto& L : poly.labels()) {
        const Point2 e = L.gradient();
        G += (e * e.transpose()) / (2.0 * L(x));
    }
    return G;
}

Eigen::Matrix2d inverse_hessian(const LabelledPolytope2& poly, const Point2& x)
{
    const Eigen::Matrix2d G = guillemin_hessian(poly, x);
    const double det = G(0, 0) * G(1, 1) - G(0, 1) * G(1, 0);
    if (!(det > 1e-300)) {
        throw Error(ErrorKind::SingularHessian, "Guillemin Hessian is singular");
    }
    Eigen::Matrix2d H;
    H << G(1, 1), -G(0, 1), -G(1, 0), G(0, 0);
    return H / det;
}

double boundary_distance(const LabelledPolytope2& poly, const Point2& x)
{
    double d = std::numeric_limits<double>::infinity();
    for (const auto& L : poly.labels()) {
        d = std::min(d, L(x) / L.gradient().norm());
    }
    return d;
}

double weighted_scalar_curvature(const LabelledPolytope2& poly, const AffineMap2& f, double w,
                                 const Point2& x, double h)
{
    if (!(h > 0.0)) {
        throw Error(ErrorKind::InvalidInput, "finite-difference step must be positive");
    }
    require_interior(poly, x);
    if (boundary_distance(poly, x) < 4.0 * h) {
        throw Error(ErrorKind::StepTooLarge, "point is closer than 4h to the boundary");
    }
    const double fx = f(x);
    if (!(fx > 0.0)) {
        throw Error(ErrorKind::NonPositiveWeight, "f is not positive at the evaluation point");
    }
    const double coarse = contracted_second_difference(poly, f, w, x, 2.0 * h);
    const double fine = contracted_second_difference(poly, f, w, x, h);
    const double richardson = (4.0 * fine - coarse) / 3.0;
    return -std::pow(fx, w + 1.0) * richardson;
}

Eigen::Vector3d abreu_pairing(const LabelledPolytope2& poly, const AffineMap2& f, double w, double tol)
{
    require_positive_weight(poly.vertices(), f);
    const double h0 = default_step(poly);
    const auto r = integrate_interior(
        poly, 3,
        [&](const Point2& x, std::span<double> out) {
            const double h = std::min(h0, 0.25 * boundary_distance(poly, x));
            const double s = weighted_scalar_curvature(poly, f, w, x, h);
            out[0] = s;
            out[1] = s * x.x();
            out[2] = s * x.y();
        },
        WeightSpec{f, w + 1.0}, tol);
    return {r.value[0], r.value[1], r.value[2]};
}

Eigen::Vector3d boundary_pairing(const LabelledPolytope2& poly, const AffineMap2& f, double w, double tol)
{
    const auto r = integrate_boundary(
        poly, 3,
        [](const Point2& x, std::span<double> out) {
            out[0] = 1.0;
            out[1] = x.x();
            out[2] = x.y();
        },
        WeightSpec{f, w - 1.0}, tol);
    return 2.0 * Eigen::Vector3d(r.value[0], r.value[1], r.value[2]);
}

AffineMap2 scalar_curvature_projection(const LabelledPolytope2& poly, const AffineMap2& f, double w,
                                       double tol)
{
    const auto m = integrate_interior(
        poly, 6,
        [](const Point2& x, std::span<double> out) {
            out[0] = 1.0;
            out[1] = x.x();
            out[2] = x.y();
            out[3] = x.x() * x.x();
            out[4] = x.x() * x.y();
            out[5] = x.y() * x.y();
        },
        WeightSpec{f, w + 1.0}, tol);
    Eigen::Matrix3d M;
    const auto& v = m.value;
    M << v[0], v[1], v[2], v[1], v[3], v[4], v[2], v[4], v[5];
    const Eigen::Vector3d c = M.ldlt().solve(abreu_pairing(poly, f, w, tol));
    return {c(0), c(1), c(2)};
}

}  // namespace torick
