#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "torick/polytope.hpp"

namespace torick
{

/// Explicit affine families on the Hirzebruch trapezoids.
enum class FamilyId {
    LeBrunCalabi,  // f_p, any k, 0 < p < 1
    LeBrunB,       // f_p^+-, k = 1, 8/9 < p < 1
    FutakiOno,     // f_{p,k}^+-, k <= 4, 0 < p < r_k
    FOCase12,      // f_b^+-, k = 1, p != 2/3, b^2 (1-p)(2-3p)^2 >= 1 - p - p^2
};

std::string to_string(FamilyId id);
/// Accepts "lebrun-calabi", "lebrun-b", "futaki-ono", "fo-case12".
FamilyId parse_family_id(std::string_view s);

/// Distance kept from open domain endpoints.
inline constexpr double kDomainGuard = 1e-9;

/// F_k(p) = 4(1-p)^2 k^2 - 4(p-1)(p-2) p k + p^4, Horner in p.
double F_k(double p, int k);

/// Smaller root of F_k in (0, 1), bisected to 1e-14 and cached per k.
double r_k(int k);

/// E_b(p) = b^2 (1-p)(2-3p)^2 + p^2 + p - 1.
double E_b(double p, double b);

/// Open p-interval of the family for the given k. Throws ParameterOutOfDomain
/// if the family does not exist for k.
std::pair<double, double> family_domain(FamilyId id, int k, bool exploratory = false);

struct FamilyParams {
    double p{0.5};
    int k{1};
    int sign{+1};               // +1 or -1; ignored by LeBrunCalabi
    std::optional<double> b{};  // FOCase12 only
    bool exploratory{false};    // admit FutakiOno with k >= 5
};

/// Closed-form coefficients; every family is normalized so the values at the
/// four vertices of Delta_{p,k} sum to 1. For FOCase12,
///     a = (3bp^2 + (1-2b)p +- 2 sqrt(E_b)) / (2p(3p-2)),  c = (1 - (2-p)b - 2pa) / 4.
AffineMap2 family_f(FamilyId id, const FamilyParams& params);

/// Rescales f so its values at the vertices sum to 1.
AffineMap2 normalize_vertex_sum(const LabelledPolytope2& poly, const AffineMap2& f);

/// Alternating vertex sum of g in cyclic order: sum_i (-1)^i g(s_i), i = 1..4.
double alternating_sum(const LabelledPolytope2& poly, const AffineMap2& g);

/// sum_i (-1)^i / f(s_i) over the cyclic vertex order. Throws VertexZero and NotAQuadrilateral.
double equipoised_check(const LabelledPolytope2& poly, const AffineMap2& f);

using Rational = boost::multiprecision::cpp_rational;

/// V^2 + (1-p)(p F_1(p) - U^2) with U = p^2+2p-2, V = p^3-3p^2+4p-2, exactly.
Rational identity_e2(const Rational& p);

/// The seven distinct rationals used to certify the degree-6 identity.
std::vector<Rational> identity_e2_points();

struct Case12Sample {
    double p;
    double b;
};

/// Deterministic (p, b) samples satisfying the admissibility inequality,
/// including equality cases and both signs of b.
std::vector<Case12Sample> case12_samples(std::size_t n, std::uint64_t seed);

/// Vertex values of f_b^+- at (0,0), (0,1), (p,0), (p,1-p), written directly
/// as rational expressions in p, b and sqrt(E_b).
std::array<double, 4> case12_vertex_values(double p, double b, int sign);

struct Case12Entry {
    Case12Sample sample;
    double min_plus;   // min over vertices of f_b^+
    double min_minus;  // min over vertices of f_b^-
};

struct Case12Report {
    std::vector<Case12Entry> entries;
    double max_of_min_vertex_values{0.0};
    std::vector<Case12Entry> counterexamples;  // some sign positive on every vertex
};

Case12Report positivity_scan_case12(const std::vector<Case12Sample>& samples);

/// Open uniform grid p_i = lo + (hi - lo)(i + 1)/(n + 1), i < n.
std::vector<double> p_grid(double lo, double hi, std::size_t n);

/// (p, k) if the polytope is Delta_{p,k} as built by hirzebruch_delzant (to 1e-12).
std::optional<std::pair<double, int>> recognize_hirzebruch(const LabelledPolytope2& poly);

}  // namespace torick
