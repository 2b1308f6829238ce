#include <doctest.h>

#include <cmath>
#include <random>

#include "torick/abreu.hpp"
#include "torick/errors.hpp"
#include "torick/families.hpp"
#include "torick/twist.hpp"

using namespace torick;

namespace
{

LabelledPolytope2 centred_square()
{
    return from_halfplanes({{0.5, 1, 0}, {0.5, 0, 1}, {0.5, -1, 0}, {0.5, 0, -1}});
}

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

TEST_CASE("twist of affine functions by hand")
{
    const AffineMap2 phi{0.3, -1.2, 2.5};
    CHECK(twist_affine(AffineMap2::constant(1.0), phi) == phi);

    const AffineMap2 f{2.0, 0.4, -0.6};
    const AffineMap2 ft = twist_affine(f, f);
    CHECK(coeff_gap(twist_affine(f, AffineMap2::constant(1.0)), AffineMap2{0.5, -0.2, 0.3}) < 1e-16);
    CHECK(coeff_gap(ft, AffineMap2::constant(1.0)) < 1e-16);
    CHECK(coeff_gap(TwistMap(f).f_tilde(), AffineMap2{0.5, -0.2, 0.3}) < 1e-16);

    const AffineMap2 x1 = twist_affine({1.0, 1.0, 0.0}, {0.0, 1.0, 0.0});
    CHECK(x1 == AffineMap2{0.0, 1.0, 0.0});
}

TEST_CASE("twist is linear and pulls back to phi / f")
{
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    const AffineMap2 f{1.5, 0.3, -0.4};
    const TwistMap T(f);
    for (int trial = 0; trial < 50; ++trial) {
        const AffineMap2 a{U(rng), U(rng), U(rng)};
        const AffineMap2 b{U(rng), U(rng), U(rng)};
        const double s = U(rng);
        const AffineMap2 lin = twist_affine(f, a + s * b);
        const AffineMap2 sum = twist_affine(f, a) + s * twist_affine(f, b);
        CHECK(coeff_gap(lin, sum) < 1e-14);

        const Point2 x{0.5 * U(rng), 0.5 * U(rng)};
        CHECK(std::abs(twist_affine(f, a)(T.forward(x)) - a(x) / f(x)) < 1e-13);
        CHECK((T.inverse(T.forward(x)) - x).norm() < 1e-14);
        CHECK(std::abs(T.f_tilde()(T.forward(x)) * f(x) - 1.0) < 1e-14);
    }
}

TEST_CASE("twisting a translated trapezoid")
{
    const auto P = hirzebruch_delzant(0.5, 1).translated({0.125, 0.125});
    const AffineMap2 f{1.0, 1.0, 0.0};
    const auto tw = twist_polytope(P, f);
    // vertex (1/2, 0) of the trapezoid becomes (3/8, -1/8), then (3/11, -1/11)
    REQUIRE(tw.size() == 4);
    CHECK((P.vertex(1) - Point2{0.375, -0.125}).norm() < 1e-16);
    CHECK((tw.vertex(1) - Point2{3.0 / 11.0, -1.0 / 11.0}).norm() < 1e-15);

    // vertex correspondence in cyclic order
    const TwistMap T(f);
    for (std::size_t i = 0; i < P.size(); ++i) {
        CHECK((tw.vertex(i) - T.forward(P.vertex(i))).norm() < 1e-15);
        CHECK(tw.labels()[i] == twist_affine(f, P.labels()[i]));
    }

    // f then f~ gives P back (f~ is f~ in twisted coordinates)
    const auto back = twist_polytope(tw, T.f_tilde());
    for (std::size_t i = 0; i < P.size(); ++i) {
        CHECK((back.vertex(i) - P.vertex(i)).norm() < 1e-10);
        CHECK(coeff_gap(back.labels()[i], P.labels()[i]) < 1e-10);
    }

    const auto same = twist_polytope(P, AffineMap2::constant(1.0));
    CHECK(same.vertices() == P.vertices());
    CHECK(same.labels() == P.labels());
}

TEST_CASE("twist error kinds")
{
    const auto P = hirzebruch_delzant(0.5, 1);
    CHECK(kind_of([&] { twist_polytope(P, AffineMap2::constant(1.0)); }) == ErrorKind::OriginNotInterior);
    CHECK(kind_of([] { twist_affine({0.0, 1.0, 1.0}, {1.0, 0.0, 0.0}); }) == ErrorKind::ZeroConstantTerm);
    CHECK(kind_of([] { TwistMap({0.0, 1.0, 0.0}); }) == ErrorKind::ZeroConstantTerm);
    CHECK(kind_of([] { twist_polytope(centred_square(), {0.2, 1.0, 0.0}); }) == ErrorKind::NonPositiveWeight);
}

TEST_CASE("twisted scalars")
{
    const AffineMap2 f{1.2, 0.3, -0.2};
    const TwistMap T(f);
    const AffineMap2 phi{0.4, 1.0, -0.7};
    const auto u = twist_scalar(f, [&](const Point2& x) { return phi(x); });
    const AffineMap2 pt = twist_affine(f, phi);
    for (const Point2& xt : {Point2{0.1, 0.2}, Point2{-0.3, 0.1}, Point2{0.0, 0.0}}) {
        CHECK(u(xt) == doctest::Approx(pt(xt)).epsilon(1e-14));
    }

    const double lambda = 2.5;
    const auto g = [](const Point2& x) { return std::sin(x.x()) + x.y() * x.y(); };
    const auto us = twist_scalar(AffineMap2::constant(lambda), g);
    for (const Point2& xt : {Point2{0.1, 0.2}, Point2{-0.3, 0.1}}) {
        CHECK(us(xt) == doctest::Approx(g(lambda * xt) / lambda).epsilon(1e-14));
    }
}

TEST_CASE("Hessian determinant law")
{
    const auto sq = centred_square();
    const auto tr = hirzebruch_delzant(0.5, 1).translated(hirzebruch_delzant(0.5, 1).centroid());
    for (const auto& P : {sq, tr}) {
        const auto pts = random_interior_points(P, 50, 21);
        CHECK(pts.size() == 50);
        for (const AffineMap2& f : {AffineMap2{1.0, 0.1, 0.0}, AffineMap2{1.0, 0.1, 0.05}}) {
            const auto rep = check_hessian_det_law(P, f, pts);
            CHECK(rep.samples == 50);
            CHECK(rep.max_rel_deviation < 1e-6);
        }
        CHECK(check_hessian_det_law(P, AffineMap2::constant(1.0), pts).max_rel_deviation < 1e-12);
    }
}

TEST_CASE("Donaldson-Futaki covariance")
{
    const double p = 0.2;
    const auto D = hirzebruch_delzant(p, 1);
    for (int sign : {+1, -1}) {
        const auto ct = centered_twist(D, family_f(FamilyId::FutakiOno, {p, 1, sign}));
        const auto creases = sample_creases(ct.source, 20, 42);
        const auto rep = check_df_covariance(ct.source, ct.f, creases);
        REQUIRE(rep.lhs.size() == 20);
        CHECK(rep.max_rel_deviation < 1e-7);
        CHECK(rep.zeta_deviation < 1e-7);
        for (std::size_t i = 0; i < rep.lhs.size(); ++i) {
            // same sign on matched creases
            CHECK((rep.lhs[i] > 0.0) == (rep.rhs[i] > 0.0));
        }

        const std::vector<AffineMap2> phis{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0.3, -0.2, 0.7}};
        const auto aff = check_df_covariance(ct.source, ct.f, phis);
        for (std::size_t i = 0; i < phis.size(); ++i) {
            CHECK(std::abs(aff.lhs[i]) < 1e-8);
            CHECK(std::abs(aff.rhs[i]) < 1e-8);
        }
    }

    // f = 1: identical integrals
    const auto sq = centred_square();
    const auto creases = sample_creases(sq, 20, 1);
    const auto id = check_df_covariance(sq, AffineMap2::constant(1.0), creases);
    CHECK(id.lhs == id.rhs);
    CHECK(id.max_rel_deviation == 0.0);
}

TEST_CASE("centred twist bookkeeping")
{
    const auto D = hirzebruch_delzant(0.3, 2);
    const AffineMap2 f{0.9, -0.4, 0.05};
    const auto ct = centered_twist(D, f);
    CHECK((ct.translation - D.centroid()).norm() < 1e-15);
    CHECK(ct.source.centroid().norm() < 1e-14);
    for (std::size_t i = 0; i < D.size(); ++i) {
        CHECK(ct.f(ct.source.vertex(i)) == doctest::Approx(f(D.vertex(i))).epsilon(1e-14));
    }
    CHECK(ct.twisted.size() == 4);
}
