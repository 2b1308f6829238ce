#include <doctest.h>

#include <cmath>
#include <random>

#include "torick/errors.hpp"
#include "torick/families.hpp"
#include "torick/solver.hpp"

using namespace torick;

namespace
{

ErrorKind kind_of(const std::function<void()>& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::InvalidInput;
}

Polynomial from_roots(const std::vector<double>& roots, double lead = 1.0)
{
    Polynomial p({lead});
    for (double r : roots) {
        p = p * Polynomial({-r, 1.0});
    }
    return p;
}

// Sign changes on a dense grid: an independent root count for simple roots.
int dense_count(const Polynomial& p, double a, double b, int n = 2000)
{
    int count = 0;
    double prev = p(a);
    for (int i = 1; i <= n; ++i) {
        const double v = p(a + (b - a) * i / n);
        if ((prev < 0.0) != (v < 0.0)) {
            ++count;
        }
        prev = v;
    }
    return count;
}

int positive_roots_matching(const std::vector<ConditionASolution>& roots, FamilyId id, int sign)
{
    int n = 0;
    for (const auto& r : roots) {
        if (r.positive_on_polytope && r.matched_family && r.matched_family->id == id &&
            (id == FamilyId::LeBrunCalabi || r.matched_family->sign == sign)) {
            ++n;
        }
    }
    return n;
}

}  // namespace

TEST_CASE("polynomial arithmetic")
{
    const Polynomial p({1.0, -3.0, 2.0});  // 2x^2 - 3x + 1
    CHECK(p.degree() == 2);
    CHECK(p(2.0) == 3.0);
    CHECK(p.derivative().coeffs() == std::vector<double>{-3.0, 4.0});
    CHECK(Polynomial({0.0, 0.0}).degree() == -1);
    CHECK(Polynomial({1.0, 2.0, 0.0}).degree() == 1);
    CHECK((p + Polynomial({1.0})).coeffs()[0] == 2.0);
    CHECK((p - p).degree() == -1);
    CHECK((p * Polynomial({0.0, 1.0}))(2.0) == 6.0);
    const auto [q, r] = from_roots({1.0, 2.0, 3.0}).divmod(Polynomial({-1.0, 1.0}));
    CHECK(q(0.0) == doctest::Approx(6.0));
    CHECK(r.degree() <= 0);
    CHECK(std::abs(r(0.0)) < 1e-14);
    CHECK(p.max_abs_coeff() == 3.0);
    CHECK_THROWS_AS(p.divmod(Polynomial({0.0})), Error);
}

TEST_CASE("Sturm counts agree with dense sampling")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(-2.0, 2.0);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<double> roots;
        const int deg = 1 + trial % 4;
        for (int i = 0; i < deg; ++i) {
            roots.push_back(U(rng));
        }
        const Polynomial p = from_roots(roots, U(rng) > 0 ? 1.5 : -0.5);
        const double a = -1.0 - 1e-3 * trial;
        const double b = 1.3 + 1e-3 * trial;
        const int dense = dense_count(p, a, b);
        CHECK(sturm_count(p, a, b) == dense);
        CHECK(sturm_count_exact(p, a, b) == dense);
    }
    // a double root counts once
    const Polynomial d = from_roots({0.5, 0.5, 1.5});
    CHECK(sturm_count(d, 0.0, 2.0) == 2);
    CHECK(sturm_count_exact(d, 0.0, 2.0) == 2);
    CHECK(sturm_count(Polynomial({1.0, 0.0, 1.0}), -5.0, 5.0) == 0);
    CHECK_THROWS_AS(sturm_count(Polynomial({0.0}), 0.0, 1.0), Error);
}

TEST_CASE("root isolation")
{
    const Polynomial p = from_roots({0.5, 1.5}) * Polynomial({1.0, 0.0, 1.0});
    const auto r = isolate_roots(p, 0.0, 2.0);
    REQUIRE(r.size() == 2);
    CHECK(r[0] == doctest::Approx(0.5).epsilon(1e-11));
    CHECK(r[1] == doctest::Approx(1.5).epsilon(1e-11));
    CHECK(isolate_roots(p, 0.6, 1.4).empty());
}

TEST_CASE("positivity between roots")
{
    const Polynomial good = from_roots({1.0, 2.0}, -1.0);
    const auto g = positivity_between_roots(good, 1.0, 2.0);
    CHECK(g.positive);
    CHECK(g.dense_sampling_positive);
    CHECK(g.sturm_interior_roots == 0);

    const Polynomial bad = from_roots({1.0, 1.4, 1.6, 2.0}, -1.0);
    const auto b = positivity_between_roots(bad, 1.0, 2.0);
    CHECK_FALSE(b.positive);
    CHECK(b.sturm_interior_roots == 2);
    REQUIRE(b.roots.size() == 2);
    CHECK(b.roots[0] == doctest::Approx(1.4).epsilon(1e-9));
}

TEST_CASE("extremal pairs")
{
    SUBCASE("Calabi type with A''(0) <= 0 fails the coupling")
    {
        ExtremalPair pr{from_roots({3.0, 4.0}, -1.0), from_roots({1.0, 2.0}, -1.0), 3.0, 4.0, 1.0, 2.0, 1.0, 1.0,
                        1.0, 1.0};
        const auto rep = check_extremal_pair(pr, QuadType::TrapezoidNotParallelogram);
        CHECK(rep.clauses[0].pass);
        CHECK_FALSE(rep.clauses[1].pass);
        CHECK(rep.clauses[1].detail == "A''(0) <= 0");
        CHECK_FALSE(rep.pass);
    }
    SUBCASE("Calabi type with matching second derivatives passes")
    {
        // (x-3)(4-x)(x^2 + 3x + 8) has x^2 coefficient 1
        const Polynomial A = from_roots({3.0, 4.0}, -1.0) * Polynomial({8.0, 3.0, 1.0});
        REQUIRE(A.coeff(2) == doctest::Approx(1.0));
        const Polynomial B = from_roots({1.0, 2.0}, -1.0);
        const Polynomial dA = A.derivative();
        ExtremalPair pr{A, B, 3.0, 4.0, 1.0, 2.0, dA(3.0), -dA(4.0), 1.0, 1.0};
        CHECK(check_extremal_pair(pr, QuadType::TrapezoidNotParallelogram).pass);
    }
    SUBCASE("orthotoric with deg(A + B) <= 1")
    {
        const Polynomial A = from_roots({3.0, 4.0}, -1.0) * Polynomial({1.0, 0.0, 1.0});
        const Polynomial B = Polynomial({-14.0, 2.0}) - A;
        const Polynomial dA = A.derivative();
        const Polynomial dB = B.derivative();
        REQUIRE(dB(1.0) > 0.0);
        REQUIRE(dB(2.0) < 0.0);
        ExtremalPair pr{A, B, 3.0, 4.0, 1.0, 2.0, dA(3.0), -dA(4.0), dB(1.0), -dB(2.0)};
        const auto rep = check_extremal_pair(pr, QuadType::GenericQuadrilateral);
        CHECK(rep.clauses[1].pass);
        CHECK(rep.A_positivity.positive);
        CHECK(rep.B_positivity.positive);
        CHECK(rep.pass);
    }
    SUBCASE("product of the interval factor and a positive quadratic")
    {
        const Polynomial A = from_roots({3.0, 4.0}, -1.0) * Polynomial({1.0, 1.0});
        const Polynomial B = from_roots({1.0, 2.0}, -1.0);
        ExtremalPair pr{A, B, 3.0, 4.0, 1.0, 2.0, 4.0, 5.0, 1.0, 1.0};
        const auto rep = check_extremal_pair(pr, QuadType::Parallelogram);
        CHECK(rep.pass);
        for (const auto& c : rep.clauses) {
            CHECK(c.pass);
        }
        // wrong slope
        pr.r_alpha2 = 4.0;
        CHECK_FALSE(check_extremal_pair(pr, QuadType::Parallelogram).clauses[0].pass);
    }
    SUBCASE("double root inside breaks positivity")
    {
        const Polynomial A = from_roots({3.0, 4.0, 3.5, 3.5}, -1.0);
        const Polynomial B = from_roots({1.0, 2.0}, -1.0);
        ExtremalPair pr{A, B, 3.0, 4.0, 1.0, 2.0, 0.25, 0.25, 1.0, 1.0};
        const auto rep = check_extremal_pair(pr, QuadType::Parallelogram);
        CHECK(rep.clauses[0].pass);
        CHECK_FALSE(rep.A_positivity.positive);
        CHECK_FALSE(rep.pass);
    }
    SUBCASE("validation")
    {
        ExtremalPair pr{from_roots({3.0, 4.0}, -1.0), from_roots({1.0, 2.0}, -1.0), 3.0, 4.0, 2.5, 2.0, 1.0, 1.0,
                        1.0, 1.0};
        CHECK_THROWS_AS(check_extremal_pair(pr, QuadType::Parallelogram), Error);
        pr.beta1 = 1.0;
        pr.r_beta1 = -1.0;
        CHECK_THROWS_AS(check_extremal_pair(pr, QuadType::Parallelogram), Error);
    }
}

TEST_CASE("solver examples")
{
    SUBCASE("p = 1/2: the Calabi member is the only positive root")
    {
        const auto P = hirzebruch_delzant(0.5, 1);
        const auto roots = solve_condition_a(P, 4.0);
        int positive = 0;
        for (const auto& r : roots) {
            positive += r.positive_on_polytope ? 1 : 0;
        }
        CHECK(positive == 1);
        CHECK(positive_roots_matching(roots, FamilyId::LeBrunCalabi, +1) == 1);
    }
    SUBCASE("p = 0.95: Calabi and both LeBrun branches")
    {
        const auto roots = solve_condition_a(hirzebruch_delzant(0.95, 1), 4.0);
        CHECK(positive_roots_matching(roots, FamilyId::LeBrunCalabi, +1) == 1);
        CHECK(positive_roots_matching(roots, FamilyId::LeBrunB, +1) == 1);
        CHECK(positive_roots_matching(roots, FamilyId::LeBrunB, -1) == 1);
    }
    SUBCASE("p = 0.2: Calabi and both Futaki-Ono branches")
    {
        const auto roots = solve_condition_a(hirzebruch_delzant(0.2, 1), 4.0);
        CHECK(positive_roots_matching(roots, FamilyId::LeBrunCalabi, +1) == 1);
        CHECK(positive_roots_matching(roots, FamilyId::FutakiOno, +1) == 1);
        CHECK(positive_roots_matching(roots, FamilyId::FutakiOno, -1) == 1);
    }
}

TEST_CASE("solver roots are genuine and normalized")
{
    const SolverOptions opts;
    for (double p : {0.2, 0.5, 0.95}) {
        const auto P = hirzebruch_delzant(p, 1);
        for (const auto& r : solve_condition_a(P, 4.0, opts)) {
            double s = 0.0;
            for (const auto& v : P.vertices()) {
                s += r.f(v);
            }
            CHECK(std::abs(s - 1.0) < 1e-12);
            CHECK(r.residual_a < 10.0 * opts.tol);
            CHECK(r.positive_on_polytope == positive_on(P, r.f));
            if (r.positive_on_polytope) {
                CHECK(extremal_affine(P, r.f, 4.0).residual_a < 10.0 * opts.tol);
            }
        }
    }
}

TEST_CASE("solver determinism")
{
    const auto P = hirzebruch_delzant(0.3, 2);
    const auto a = solve_condition_a(P, 4.0);
    const auto b = solve_condition_a(P, 4.0);
    const auto c = solve_condition_a_serial(P, 4.0);
    REQUIRE(a.size() == b.size());
    REQUIRE(a.size() == c.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].f == b[i].f);
        CHECK(a[i].f == c[i].f);
        CHECK(a[i].start_index == c[i].start_index);
        CHECK(a[i].iterations == c[i].iterations);
    }
}

TEST_CASE("family recovery on grids")
{
    struct Fam {
        FamilyId id;
        int k;
        std::vector<int> signs;
    };
    const std::vector<Fam> fams{{FamilyId::LeBrunCalabi, 1, {+1}},
                                {FamilyId::LeBrunCalabi, 3, {+1}},
                                {FamilyId::LeBrunB, 1, {+1, -1}},
                                {FamilyId::FutakiOno, 1, {+1, -1}},
                                {FamilyId::FutakiOno, 2, {+1, -1}}};
    for (const auto& fam : fams) {
        const auto [lo, hi] = family_domain(fam.id, fam.k);
        for (double p : p_grid(lo, hi, 20)) {
            const auto P = hirzebruch_delzant(p, fam.k);
            const auto roots = solve_condition_a(P, 4.0);
            for (int sign : fam.signs) {
                INFO(to_string(fam.id), " k=", fam.k, " p=", p, " sign=", sign);
                CHECK(positive_roots_matching(roots, fam.id, sign) == 1);
                const AffineMap2 want = family_f(fam.id, {p, fam.k, sign});
                for (const auto& r : roots) {
                    if (r.matched_family && r.matched_family->id == fam.id &&
                        (fam.id == FamilyId::LeBrunCalabi || r.matched_family->sign == sign)) {
                        CHECK(r.matched_family->distance < 1e-6);
                        CHECK(std::abs(r.f.c1 - want.c1) < 1e-6);
                        CHECK(std::abs(r.f.c2 - want.c2) < 1e-6);
                    }
                }
            }
        }
    }
}

TEST_CASE("match_family")
{
    const auto P = hirzebruch_delzant(0.2, 1);
    const auto m = match_family(P, 5.0 * family_f(FamilyId::FutakiOno, {0.2, 1, -1}));
    REQUIRE(m);
    CHECK(m->id == FamilyId::FutakiOno);
    CHECK(m->sign == -1);
    CHECK(m->distance < 1e-12);
    CHECK_FALSE(match_family(P, {1.0, 0.3, 0.3}));
    const auto sq = from_halfplanes({{0, 1, 0}, {0, 0, 1}, {1, -1, 0}, {1, 0, -1}});
    CHECK_FALSE(match_family(sq, AffineMap2::constant(1.0)));
}

TEST_CASE("solver errors")
{
    const auto P = hirzebruch_delzant(0.5, 1);
    SolverOptions o;
    o.starts = 0;
    CHECK(kind_of([&] { solve_condition_a(P, 4.0, o); }) == ErrorKind::InvalidInput);
    o.starts = 8;
    o.tol = 0.0;
    CHECK(kind_of([&] { solve_condition_a(P, 4.0, o); }) == ErrorKind::InvalidInput);
}

TEST_CASE("stability verdicts")
{
    const auto D = hirzebruch_delzant(0.2, 1);
    VerdictOptions vo;
    vo.creases = 40;
    for (int sign : {+1, -1}) {
        const auto v = stability_verdict(D, family_f(FamilyId::FutakiOno, {0.2, 1, sign}), 4.0, vo);
        CHECK(v.verdict == Verdict::StableByTheorem);
        REQUIRE(v.twisted_type);
        CHECK(*v.twisted_type == QuadType::GenericQuadrilateral);
        CHECK(v.equipoised_relative < 1e-8);
        REQUIRE(v.crease);
        CHECK(v.crease->minimum > 0.0);
        CHECK((v.translation - D.centroid()).norm() < 1e-15);
    }

    const auto H = hirzebruch_delzant(0.5, 1);
    const auto calabi = stability_verdict(H, family_f(FamilyId::LeBrunCalabi, {0.5}), 4.0, vo);
    CHECK(calabi.verdict == Verdict::StableByTheorem);

    vo.creases = 0;
    const auto nc = stability_verdict(H, family_f(FamilyId::LeBrunCalabi, {0.5}), 4.0, vo);
    CHECK_FALSE(nc.crease);

    CHECK(kind_of([&] { stability_verdict(H, {1.0, 1.0, 0.0}, 4.0, vo); }) == ErrorKind::ConditionANotMet);
    CHECK(kind_of([&] { stability_verdict(H, family_f(FamilyId::LeBrunCalabi, {0.5}), 3.0, vo); }) ==
          ErrorKind::ParameterOutOfDomain);
    CHECK(to_string(Verdict::StableByTheorem) == "STABLE-BY-THEOREM");
    CHECK(to_string(Verdict::EvidenceOnly) == "EVIDENCE-ONLY");
}
