#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "torick/errors.hpp"
#include "torick/polytope.hpp"

using namespace torick;

namespace
{

LabelledPolytope2 unit_square()
{
    return from_halfplanes({{0, 1, 0}, {0, 0, 1}, {1, -1, 0}, {1, 0, -1}});
}

void check_vertices(const LabelledPolytope2& P, const std::vector<Point2>& expect)
{
    REQUIRE(P.size() == expect.size());
    for (std::size_t i = 0; i < expect.size(); ++i) {
        CHECK((P.vertex(i) - expect[i]).norm() < 1e-15);
    }
}

ErrorKind kind_of(const std::function<void()>& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no torick::Error thrown");
    return ErrorKind::InvalidInput;
}

}  // namespace

TEST_CASE("from_halfplanes builds the unit square counterclockwise from the origin")
{
    check_vertices(unit_square(), {{0, 0}, {1, 0}, {1, 1}, {0, 1}});
}

TEST_CASE("from_halfplanes builds the trapezoid with p = 1/2, k = 1")
{
    const double p = 0.5;
    const auto P = from_halfplanes({{0, 1, 0}, {0, 0, 1}, {p, -1, 0}, {1, -1, -1}});
    check_vertices(P, {{0, 0}, {0.5, 0}, {0.5, 0.5}, {0, 1}});
}

TEST_CASE("from_halfplanes error kinds")
{
    // Normals (1,0), (0,1), (-1,0) do not positively span the plane.
    CHECK(kind_of([] { from_halfplanes({{0, 1, 0}, {0, 0, 1}, {-1, -1, 0}}); }) == ErrorKind::UnboundedRegion);
    CHECK(kind_of([] { from_halfplanes({{0, 1, 0}, {0, 0, 1}, {1, -1, 0}}); }) == ErrorKind::UnboundedRegion);
    CHECK(kind_of([] { from_halfplanes({{0, 1, 0}, {0, 0, 1}, {-1, -1, -1}}); }) == ErrorKind::EmptyInterior);
    CHECK(kind_of([] { from_halfplanes({{0, 1, 0}, {0, 0, 1}, {0, -1, -1}}); }) == ErrorKind::EmptyInterior);
    // x1 <= 2 never touches the unit square.
    CHECK(kind_of([] { from_halfplanes({{0, 1, 0}, {0, 0, 1}, {1, -1, 0}, {1, 0, -1}, {2, -1, 0}}); }) ==
          ErrorKind::RedundantLabel);
}

TEST_CASE("from_halfplanes keeps label scales")
{
    const auto P = from_halfplanes({{0, 3, 0}, {0, 0, 1}, {2, -2, 0}, {1, 0, -1}});
    bool found = false;
    for (const auto& L : P.labels()) {
        found = found || (L == AffineMap2{0, 3, 0});
    }
    CHECK(found);
}

TEST_CASE("hirzebruch_delzant vertices and labels")
{
    check_vertices(hirzebruch_delzant(0.5, 1), {{0, 0}, {0.5, 0}, {0.5, 0.5}, {0, 1}});
    check_vertices(hirzebruch_delzant(0.5, 2), {{0, 0}, {0.5, 0}, {0.5, 1}, {0, 2}});
    CHECK(kind_of([] { hirzebruch_delzant(1.0, 1); }) == ErrorKind::ParameterOutOfRange);
    CHECK(kind_of([] { hirzebruch_delzant(0.0, 1); }) == ErrorKind::ParameterOutOfRange);
    CHECK(kind_of([] { hirzebruch_delzant(0.5, 0); }) == ErrorKind::ParameterOutOfRange);

    const auto P = hirzebruch_delzant(0.3, 3);
    for (std::size_t i = 0; i < 4; ++i) {
        const auto [a, b] = P.edge(i);
        CHECK(std::abs(P.labels()[i](a)) < 1e-15);
        CHECK(std::abs(P.labels()[i](b)) < 1e-15);
    }
}

TEST_CASE("min_over_vertices examples")
{
    const auto sq = unit_square();
    const auto m = min_over_vertices(sq, {1, 1, 1});
    CHECK(m.value == 1.0);
    CHECK(m.index == 0);

    // f = -(2/9) x1 + 1/3 on Delta_{3/4,1}: vertex values 1/3, 1/6, 1/6, 1/3.
    const auto D = hirzebruch_delzant(0.75, 1);
    const auto md = min_over_vertices(D, {1.0 / 3.0, -2.0 / 9.0, 0.0});
    CHECK(md.value == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK(D.vertex(md.index).x() == 0.75);
    CHECK(md.index == 1);  // lowest index of the tie

    const auto mz = min_over_vertices(D, {});
    CHECK(mz.value == 0.0);
    CHECK(mz.index == 0);
}

TEST_CASE("classify_quadrilateral examples")
{
    CHECK(classify_quadrilateral(unit_square()) == QuadType::Parallelogram);
    for (double p : {0.1, 0.5, 0.9}) {
        for (int k : {1, 2, 3, 4}) {
            CHECK(classify_quadrilateral(hirzebruch_delzant(p, k)) == QuadType::TrapezoidNotParallelogram);
        }
    }
    const LabelledPolytope2 G({{0, 0}, {2, 0}, {3, 2}, {0, 1}}, {{0, 0, 1}, {4, -2, 1}, {3, 1, -3}, {0, 1, 0}});
    CHECK(classify_quadrilateral(G) == QuadType::GenericQuadrilateral);

    const auto tri = from_halfplanes({{0, 1, 0}, {0, 0, 1}, {1, -1, -1}});
    CHECK(kind_of([&] { classify_quadrilateral(tri); }) == ErrorKind::NotAQuadrilateral);
}

TEST_CASE("classification ignores the starting vertex")
{
    const LabelledPolytope2 G({{0, 0}, {2, 0}, {3, 2}, {0, 1}}, {{0, 0, 1}, {4, -2, 1}, {3, 1, -3}, {0, 1, 0}});
    for (std::size_t s = 0; s < 4; ++s) {
        std::vector<Point2> v;
        std::vector<AffineMap2> l;
        for (std::size_t i = 0; i < 4; ++i) {
            v.push_back(G.vertex(i + s));
            l.push_back(G.labels()[(i + s) % 4]);
        }
        CHECK(classify_quadrilateral(LabelledPolytope2(v, l)) == QuadType::GenericQuadrilateral);
    }
}

TEST_CASE("constructor rejects inconsistent data")
{
    // Label on the wrong edge.
    CHECK(kind_of([] {
              LabelledPolytope2({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{0, 1, 0}, {1, -1, 0}, {1, 0, -1}, {0, 0, 1}});
          }) == ErrorKind::InvalidPolytope);
    // Clockwise order.
    CHECK(kind_of([] {
              LabelledPolytope2({{0, 0}, {0, 1}, {1, 1}, {1, 0}}, {{0, 1, 0}, {1, 0, -1}, {1, -1, 0}, {0, 0, 1}});
          }) == ErrorKind::InvalidPolytope);
    // Three collinear vertices.
    CHECK(kind_of([] {
              LabelledPolytope2({{0, 0}, {1, 0}, {2, 0}, {0, 1}},
                                {{0, 0, 1}, {0, 0, 1}, {2, -1, -2}, {0, 1, 0}});
          }) == ErrorKind::InvalidPolytope);
    // Label count.
    CHECK(kind_of([] { LabelledPolytope2({{0, 0}, {1, 0}, {0, 1}}, {{0, 0, 1}, {1, -1, -1}}); }) ==
          ErrorKind::InvalidPolytope);
}

TEST_CASE("labels vanish at their edge endpoints on random half-plane polygons")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<AffineMap2> hp;
        const int n = 3 + trial % 4;
        const double phase = U(rng);
        for (int i = 0; i < n; ++i) {
            const double th = 2.0 * M_PI * (i + 0.3 * phase) / n;
            const double s = 1.0 + 0.5 * (U(rng) + 1.0);
            hp.push_back({s * (1.0 + 0.2 * U(rng)), -s * std::cos(th), -s * std::sin(th)});
        }
        const auto P = from_halfplanes(hp);
        for (std::size_t i = 0; i < P.size(); ++i) {
            const auto& L = P.labels()[i];
            const double bound = 1e-12 * L.gradient().norm() * P.diameter();
            CHECK(std::abs(L(P.vertex(i))) < bound);
            CHECK(std::abs(L(P.vertex(i + 1))) < bound);
        }
        // Round trip: re-deriving each label from its edge recovers it up to positive scale.
        for (std::size_t i = 0; i < P.size(); ++i) {
            const Point2 a = P.vertex(i);
            const Point2 b = P.vertex(i + 1);
            const Point2 nrm{-(b - a).y(), (b - a).x()};  // inward for ccw order
            const AffineMap2 rebuilt{-nrm.dot(a), nrm.x(), nrm.y()};
            const auto& L = P.labels()[i];
            const double s = L.gradient().norm() / rebuilt.gradient().norm();
            CHECK(L.gradient().dot(rebuilt.gradient()) > 0.0);
            CHECK(std::abs(L.c0 - s * rebuilt.c0) < 1e-12 * (1.0 + std::abs(L.c0)));
        }
    }
}

TEST_CASE("affine images keep vertex-minimum signs and the quadrilateral type")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    const std::vector<LabelledPolytope2> polys{
        unit_square(), hirzebruch_delzant(0.3, 2),
        LabelledPolytope2({{0, 0}, {2, 0}, {3, 2}, {0, 1}}, {{0, 0, 1}, {4, -2, 1}, {3, 1, -3}, {0, 1, 0}})};
    for (const auto& P : polys) {
        for (int t = 0; t < 10; ++t) {
            Eigen::Matrix2d A;
            A << 1.0 + 0.5 * U(rng), 0.5 * U(rng), 0.5 * U(rng), 1.0 + 0.5 * U(rng);
            if (t % 2 == 1) {
                A.col(0) *= -1.0;  // orientation reversing
            }
            const Point2 shift{U(rng), U(rng)};
            const auto Q = affine_image(P, A, shift);
            CHECK(classify_quadrilateral(Q) == classify_quadrilateral(P));
            const AffineMap2 f{U(rng), U(rng), U(rng)};
            // f o (A x + t)^-1 on Q takes the same vertex values as f on P.
            const Eigen::Matrix2d Ai = A.inverse();
            const Point2 g = Ai.transpose() * f.gradient();
            const AffineMap2 fq{f.c0 - g.dot(shift), g.x(), g.y()};
            const double mp = min_over_vertices(P, f).value;
            const double mq = min_over_vertices(Q, fq).value;
            CHECK(std::signbit(mp) == std::signbit(mq));
            CHECK(mq == doctest::Approx(mp).epsilon(1e-12));
        }
    }
}

TEST_CASE("is_integral_delzant")
{
    CHECK(is_integral_delzant(hirzebruch_delzant(0.4, 3)));
    const auto scaled = from_halfplanes({{0, 2, 0}, {0, 0, 1}, {1, -1, 0}, {1, 0, -1}});
    CHECK_FALSE(is_integral_delzant(scaled));
}

TEST_CASE("geometric queries")
{
    const auto D = hirzebruch_delzant(0.5, 1);
    CHECK(D.area() == doctest::Approx(0.375).epsilon(1e-15));
    // facet masses |edge| / |grad L| of Delta_{p,1}: p, 1 - p, p, 1
    const double mass[] = {0.5, 0.5, 0.5, 1.0};
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(D.facet_mass(i) == doctest::Approx(mass[i]).epsilon(1e-15));
    }
    CHECK(D.contains_strictly(D.centroid()));
    CHECK_FALSE(D.contains_strictly({0.0, 0.5}));
    const auto T = D.translated({0.125, 0.125});
    CHECK((T.vertex(1) - Point2(0.375, -0.125)).norm() < 1e-16);
}
