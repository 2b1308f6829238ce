#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "torick/errors.hpp"
#include "torick/families.hpp"
#include "torick/futaki.hpp"
#include "torick/quadrature.hpp"

using namespace torick;

namespace
{

LabelledPolytope2 unit_square()
{
    return from_halfplanes({{0, 1, 0}, {0, 0, 1}, {1, -1, 0}, {1, 0, -1}});
}

const AffineMap2 kOne = AffineMap2::constant(1.0);

double coeff_gap(const AffineMap2& a, const AffineMap2& b)
{
    return std::max({std::abs(a.c0 - b.c0), std::abs(a.c1 - b.c1), std::abs(a.c2 - b.c2)});
}

ErrorKind kind_of(const std::function<void()>& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::InvalidInput;
}

}  // namespace

TEST_CASE("square has constant zeta 8")
{
    for (double w : {4.0, 2.0, 6.5}) {
        const auto ea = extremal_affine(unit_square(), kOne, w);
        CHECK(std::abs(ea.zeta.c1) < 1e-9);
        CHECK(std::abs(ea.zeta.c2) < 1e-9);
        CHECK(std::abs(ea.zeta.c0 - 8.0) < 1e-8);
        CHECK(ea.residual_a < 1e-9);
        CHECK(ea.gram_condition_number >= 1.0);
    }
}

TEST_CASE("zeta matches an independent Gram solve")
{
    const std::vector<LabelledPolytope2> polys{
        hirzebruch_delzant(0.3, 2),
        LabelledPolytope2({{0, 0}, {2, 0}, {3, 2}, {0, 1}}, {{0, 0, 1}, {4, -2, 1}, {3, 1, -3}, {0, 1, 0}})};
    for (const auto& P : polys) {
        for (double w : {4.0, 3.5}) {
            const AffineMap2 f{1.0, 0.3, -0.1};
            const AffineMap2 want = oracle::zeta(P, f, w);
            const AffineMap2 got = extremal_affine(P, f, w, 1e-12).zeta;
            const double scale = std::abs(want.c0) + std::abs(want.c1) + std::abs(want.c2);
            CHECK(coeff_gap(got, want) < 1e-8 * scale);
        }
    }
}

TEST_CASE("closed-form projection agrees with quadrature")
{
    const auto P = hirzebruch_delzant(0.45, 1);
    const AffineMap2 f{0.5, 0.2, -0.3};
    for (int w : {4, 6}) {
        const auto a = extremal_affine(P, f, w, 1e-12);
        const auto b = extremal_affine_closed_form(P, f, w);
        CHECK(coeff_gap(a.zeta, b.zeta) < 1e-9 * std::abs(a.zeta.c0));
        CHECK(b.residual_a == doctest::Approx(a.residual_a).epsilon(1e-6));
    }
}

TEST_CASE("scale law")
{
    const auto P = hirzebruch_delzant(0.55, 1);
    const AffineMap2 f{0.7, -0.2, 0.15};
    const double lambda = 2.75;
    const auto a = extremal_affine(P, f, 4.0, 1e-12);
    const auto b = extremal_affine(P, lambda * f, 4.0, 1e-12);
    const AffineMap2 want = lambda * lambda * a.zeta;
    CHECK(coeff_gap(b.zeta, want) < 1e-9 * std::abs(want.c0));
    CHECK(b.residual_a == doctest::Approx(a.residual_a).epsilon(1e-6));
}

TEST_CASE("zeta is orthogonal to affine functions")
{
    const double tol = 1e-10;
    const auto P = hirzebruch_delzant(0.2, 3);
    const AffineMap2 f{0.9, 0.4, -0.05};
    const double w = 4.0;
    const auto ea = extremal_affine(P, f, w, tol);
    const AffineMap2 basis[3] = {kOne, {0, 1, 0}, {0, 0, 1}};
    for (const auto& phi : basis) {
        const double b = 2.0 * integrate_boundary(P, [&](const Point2& x) { return phi(x); }, {f, w - 1.0}, tol).value;
        CHECK(std::abs(df_invariant(P, f, w, phi, ea.zeta, tol)) < 5.0 * tol * std::max(1.0, std::abs(b)));
    }
}

TEST_CASE("crease on the square by hand")
{
    // phi = max(0, x1 - 1/2): boundary 1/8 + 1/8 + 1/2 (edges x2 = 0, x2 = 1, x1 = 1),
    // interior 1/8, so F = 2 * 3/4 - 8 * 1/8.
    const CreaseFunction phi{{-0.5, 1.0, 0.0}};
    CHECK(df_invariant(unit_square(), kOne, 4.0, phi, AffineMap2::constant(8.0)) ==
          doctest::Approx(0.5).epsilon(1e-12));
    CHECK(phi.crosses(unit_square()));
    CHECK_FALSE(CreaseFunction{{2.0, 1.0, 0.0}}.crosses(unit_square()));
}

TEST_CASE("hinge additivity")
{
    const auto P = hirzebruch_delzant(0.4, 2);
    const AffineMap2 f{0.6, 0.1, 0.05};
    const auto z = extremal_affine(P, f, 4.0, 1e-12).zeta;
    for (const AffineMap2& ell : {AffineMap2{-0.2, 1.0, 0.3}, AffineMap2{0.5, -0.4, -0.6}, AffineMap2{-0.7, 0.0, 1.0}}) {
        // max(0, l) - max(0, -l) = l, and F(l) = 0
        const double a = df_invariant(P, f, 4.0, CreaseFunction{ell}, z, 1e-12);
        const double b = df_invariant(P, f, 4.0, CreaseFunction{-ell}, z, 1e-12);
        const double c = df_invariant(P, f, 4.0, ell, z, 1e-12);
        CHECK(std::abs(a - b - c) < 1e-9 * std::max(1.0, std::abs(a)));
        CHECK(std::abs(c) < 1e-9);
    }
}

TEST_CASE("creases missing the interior")
{
    const auto P = unit_square();
    const AffineMap2 z = AffineMap2::constant(8.0);
    CHECK(df_invariant(P, kOne, 4.0, CreaseFunction{{-3.0, 1.0, 1.0}}, z) == 0.0);
    CHECK(std::abs(df_invariant(P, kOne, 4.0, CreaseFunction{{3.0, 1.0, 1.0}}, z)) < 1e-9);
}

TEST_CASE("clip_halfplane")
{
    const Polygon sq{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    const Polygon half = clip_halfplane(sq, {-0.5, 1.0, 0.0});
    CHECK(signed_area(half) == doctest::Approx(0.5).epsilon(1e-15));
    const Polygon corner = clip_halfplane(sq, {-1.5, 1.0, 1.0});
    CHECK(signed_area(corner) == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(clip_halfplane(sq, {-5.0, 1.0, 0.0}).size() < 3);
}

TEST_CASE("cKEM constant")
{
    CHECK(ckem_constant(unit_square(), kOne, 2) == doctest::Approx(8.0).epsilon(1e-12));
    const double lambda = 0.6;
    CHECK(ckem_constant(unit_square(), AffineMap2::constant(lambda), 2) ==
          doctest::Approx(8.0 * lambda * lambda).epsilon(1e-12));

    const double p = 0.2;
    const auto P = hirzebruch_delzant(p, 1);
    for (int sign : {+1, -1}) {
        const AffineMap2 f = family_f(FamilyId::FutakiOno, {p, 1, sign});
        const auto ea = extremal_affine(P, f, 4.0);
        const double c = ckem_constant(P, f, 2);
        CHECK(c > 0.0);
        CHECK(ea.zeta(P.centroid()) == doctest::Approx(c).epsilon(1e-6));
    }
    CHECK(kind_of([&] { ckem_constant(unit_square(), kOne, 0); }) == ErrorKind::InvalidInput);
}

TEST_CASE("crease scans")
{
    const auto square = crease_scan(unit_square(), kOne, 4.0, 200, 42);
    CHECK(square.creases.size() == 200);
    CHECK(square.values.size() == 200);
    CHECK(square.minimum > 0.0);
    CHECK(square.violations == 0);
    CHECK(square.values[square.argmin] == square.minimum);
    for (const auto& c : square.creases) {
        CHECK(c.crosses(unit_square()));
    }

    const auto P = hirzebruch_delzant(0.3, 2);
    const AffineMap2 f{0.8, -0.3, 0.1};
    const auto par = crease_scan(P, f, 4.0, 60, 7);
    const auto ser = crease_scan_serial(P, f, 4.0, 60, 7);
    REQUIRE(par.values.size() == ser.values.size());
    for (std::size_t i = 0; i < par.values.size(); ++i) {
        CHECK(par.values[i] == ser.values[i]);
        CHECK(par.creases[i].ell == ser.creases[i].ell);
    }
    CHECK(par.minimum == ser.minimum);
    CHECK(par.argmin == ser.argmin);

    const auto again = crease_scan(P, f, 4.0, 60, 7);
    CHECK(again.values == par.values);
    const auto other = crease_scan(P, f, 4.0, 60, 8);
    CHECK(other.values != par.values);
}

TEST_CASE("futaki error kinds")
{
    const auto P = unit_square();
    CHECK(kind_of([&] { extremal_affine(P, {0.5, -1.0, 0.0}, 4.0); }) == ErrorKind::NonPositiveWeight);
    CHECK(kind_of([&] { df_invariant(P, {0.0, 1.0, 0.0}, 4.0, kOne, kOne); }) == ErrorKind::NonPositiveWeight);
    // A sliver: the x2 direction is nearly invisible to the Gram matrix.
    const auto sliver = from_halfplanes({{0, 1, 0}, {0, 0, 1}, {1, -1, 0}, {1e-7, 0, -1}});
    CHECK(kind_of([&] { extremal_affine(sliver, kOne, 4.0); }) == ErrorKind::IllConditioned);
}
