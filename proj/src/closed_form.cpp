#include "torick/closed_form.hpp"

#include <cmath>
#include <functional>
#include <vector>

#include "torick/errors.hpp"

namespace torick::closed_form
{

namespace
{

double factorial(int n)
{
    double r = 1.0;
    for (int i = 2; i <= n; ++i) {
        r *= i;
    }
    return r;
}

// (k + b)! / k!
double rising(int k, int b)
{
    double r = 1.0;
    for (int i = 1; i <= b; ++i) {
        r *= k + i;
    }
    return r;
}

double cross(const Point2& a, const Point2& b) { return a.x() * b.y() - a.y() * b.x(); }

}  // namespace

double simplex_moment(std::span<const int> beta, int n, std::span<const double> fv)
{
    const int parts = static_cast<int>(fv.size());
    const int d = parts - 1;
    int order = 0;
    for (int b : beta) {
        order += b;
    }
    const int m = n - order;
    if (m < d + 1 || static_cast<int>(beta.size()) != parts) {
        throw Error(ErrorKind::InvalidInput, "simplex moment needs n - |beta| >= d + 1");
    }
    const int total = m - d - 1;

    // Sum over compositions k of `total` into `parts` non-negative parts.
    std::vector<int> k(parts, 0);
    double sum = 0.0;
    std::function<void(int, int)> rec = [&](int i, int left) {
        if (i == parts - 1) {
            k[i] = left;
            double term = 1.0;
            for (int j = 0; j < parts; ++j) {
                term *= rising(k[j], beta[j]) * std::pow(fv[j], -(k[j] + beta[j] + 1));
            }
            sum += term;
            return;
        }
        for (int v = 0; v <= left; ++v) {
            k[i] = v;
            rec(i + 1, left - v);
        }
    };
    rec(0, total);
    return factorial(total) / factorial(n - 1) * sum;
}

GramMoments gram_moments(const LabelledPolytope2& poly, const AffineMap2& f, int w,
                         const std::array<AffineMap2, 3>& basis)
{
    if (w < 4) {
        throw Error(ErrorKind::InvalidInput, "closed-form moments need integer w >= 4");
    }
    for (std::size_t i = 0; i < poly.size(); ++i) {
        if (f(poly.vertex(i)) == 0.0) {
            throw Error(ErrorKind::VertexZero, "f vanishes at vertex " + std::to_string(i));
        }
    }
    GramMoments g;
    g.interior.setZero();
    g.boundary.setZero();

    // Fan from vertex 0 so only vertex values of f enter.
    const Point2& v0 = poly.vertex(0);
    for (std::size_t t = 1; t + 1 < poly.size(); ++t) {
        const std::array<Point2, 3> tri{v0, poly.vertex(t), poly.vertex(t + 1)};
        const double jac = std::abs(cross(tri[1] - tri[0], tri[2] - tri[0]));
        const std::array<double, 3> fv{f(tri[0]), f(tri[1]), f(tri[2])};
        // Second-order moments E[k][l] = int lambda_k lambda_l (lambda.f)^-(w+1).
        double E[3][3];
        for (int kk = 0; kk < 3; ++kk) {
            for (int ll = 0; ll < 3; ++ll) {
                std::array<int, 3> beta{0, 0, 0};
                ++beta[kk];
                ++beta[ll];
                E[kk][ll] = simplex_moment(beta, w + 1, fv);
            }
        }
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                double s = 0.0;
                for (int kk = 0; kk < 3; ++kk) {
                    for (int ll = 0; ll < 3; ++ll) {
                        s += basis[a](tri[kk]) * basis[b](tri[ll]) * E[kk][ll];
                    }
                }
                g.interior(a, b) += jac * s;
            }
        }
    }

    for (std::size_t i = 0; i < poly.size(); ++i) {
        const auto [p, q] = poly.edge(i);
        const std::array<double, 2> fv{f(p), f(q)};
        const double e0 = simplex_moment(std::array<int, 2>{1, 0}, w - 1, fv);
        const double e1 = simplex_moment(std::array<int, 2>{0, 1}, w - 1, fv);
        const double mass = poly.facet_mass(i);
        for (int a = 0; a < 3; ++a) {
            g.boundary(a) += 2.0 * mass * (basis[a](p) * e0 + basis[a](q) * e1);
        }
    }
    return g;
}

double interior_moment(const LabelledPolytope2& poly, const AffineMap2& f, int n,
                       const AffineMap2& phi)
{
    double total = 0.0;
    const Point2& v0 = poly.vertex(0);
    for (std::size_t t = 1; t + 1 < poly.size(); ++t) {
        const std::array<Point2, 3> tri{v0, poly.vertex(t), poly.vertex(t + 1)};
        const double jac = std::abs(cross(tri[1] - tri[0], tri[2] - tri[0]));
        const std::array<double, 3> fv{f(tri[0]), f(tri[1]), f(tri[2])};
        for (int kk = 0; kk < 3; ++kk) {
            std::array<int, 3> beta{0, 0, 0};
            ++beta[kk];
            total += jac * phi(tri[kk]) * simplex_moment(beta, n, fv);
        }
    }
    return total;
}

}  // namespace torick::closed_form
