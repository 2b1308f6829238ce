#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "torick/families.hpp"
#include "torick/futaki.hpp"
#include "torick/polytope.hpp"

namespace torick
{

struct FamilyMatch {
    FamilyId id;
    int sign{+1};
    std::optional<double> b{};
    double distance{0.0};  // max coefficient gap after vertex-sum normalization
};

struct ConditionASolution {
    AffineMap2 f;  // vertex values sum to 1
    double residual_a{0.0};
    bool positive_on_polytope{false};
    std::optional<FamilyMatch> matched_family{};
    std::size_t start_index{0};  // first start that reached this root
    int iterations{0};
};

struct SolverOptions {
    std::size_t starts{64};
    std::uint64_t seed{42};
    double tol{1e-9};
    double fd_step{1e-6};
    int max_iterations{60};
    int max_halvings{30};
    double dedup_distance{1e-7};
    double match_tolerance{1e-6};
};

/**
 * Affine f (normalized by its vertex sum) for which the extremal affine
 * function of (P, L, f, w) is constant.
 *
 * f is parametrized by (c1, c2) and Gauss-Newton runs on the dimensionless
 * vector (zeta.c1, zeta.c2) * diam / |zeta(centroid)|. Starts: centres of
 * grid cells on {f > 0 at every vertex} where both residual components change
 * sign, points pulled toward its corners, Halton points, and a shell just
 * outside. Interior starts stay inside the region; shell starts are free.
 * For integer w >= 4 the closed-form Gram moments are used, so roots with
 * f <= 0 somewhere on P are reachable; they are kept and flagged. Roots come
 * back in order of the first start that found them.
 */
std::vector<ConditionASolution> solve_condition_a(const LabelledPolytope2& poly, double w,
                                                  const SolverOptions& opts = {});

/// Serial reference for solve_condition_a; identical root lists.
std::vector<ConditionASolution> solve_condition_a_serial(const LabelledPolytope2& poly, double w,
                                                         const SolverOptions& opts = {});

/// Nearest known family at the root (only for Delta_{p,k} polytopes).
std::optional<FamilyMatch> match_family(const LabelledPolytope2& poly, const AffineMap2& f,
                                        double tol = 1e-6);

/// Real polynomial, coefficients in ascending powers.
class Polynomial
{
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<double> coeffs);

    const std::vector<double>& coeffs() const { return c_; }
    /// Degree after dropping exact zero leading coefficients (-1 for zero).
    int degree() const;
    double operator()(double x) const;
    Polynomial derivative() const;
    double coeff(int i) const { return i < static_cast<int>(c_.size()) && i >= 0 ? c_[i] : 0.0; }
    double max_abs_coeff() const;

    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator*(const Polynomial& o) const;

    /// Quotient and remainder by o.
    std::pair<Polynomial, Polynomial> divmod(const Polynomial& o) const;

private:
    std::vector<double> c_;
};

/// Number of distinct real roots in (a, b]; a and b must not be roots.
int sturm_count(const Polynomial& p, double a, double b);
/// Same count in exact rational arithmetic on the double coefficients.
int sturm_count_exact(const Polynomial& p, double a, double b);

/// Roots in (a, b) isolated to width tol by Sturm bisection.
std::vector<double> isolate_roots(const Polynomial& p, double a, double b, double tol = 1e-12);

struct ExtremalPair {
    Polynomial A;
    Polynomial B;
    double alpha1, alpha2;
    double beta1, beta2;
    double r_alpha1, r_alpha2, r_beta1, r_beta2;

    /// Throws InvalidInput unless 0 < beta1 < beta2 < alpha1 < alpha2, slopes
    /// are positive and both degrees are at most 4.
    void validate() const;
};

struct ClauseResult {
    std::string name;
    bool pass{false};
    double deviation{0.0};
    std::string detail;
};

struct IntervalPositivity {
    bool positive{false};
    int sturm_interior_roots{0};
    bool dense_sampling_positive{false};
    bool used_exact_arithmetic{false};
    std::vector<double> roots;
};

struct ExtremalPairReport {
    std::vector<ClauseResult> clauses;  // boundary, coupling, positivity
    IntervalPositivity A_positivity;
    IntervalPositivity B_positivity;
    bool pass{false};
};

ExtremalPairReport check_extremal_pair(const ExtremalPair& pair, QuadType type);

/// Positivity of p on (lo, hi) given p(lo) = p(hi) = 0 approximately.
IntervalPositivity positivity_between_roots(const Polynomial& p, double lo, double hi);

enum class Verdict { StableByTheorem, EvidenceOnly };
std::string to_string(Verdict v);

struct VerdictOptions {
    double quad_tol{kDefaultQuadTol};
    double tau_a{kDefaultTauA};
    double tau_eq{1e-8};
    std::size_t creases{200};  // 0 skips the crease scan
    std::uint64_t seed{42};
};

struct StabilityVerdict {
    Verdict verdict{Verdict::EvidenceOnly};
    ExtremalAffine extremal;                 // on (P, f, w)
    Point2 translation{0.0, 0.0};            // origin moved to the area centroid
    std::optional<LabelledPolytope2> twisted;
    std::optional<QuadType> twisted_type;
    AffineMap2 zeta_twisted;
    double equipoised_sum{0.0};              // sum (-1)^i zeta~(s~_i)
    double equipoised_relative{0.0};         // divided by sum |zeta~(s~_i)|
    std::optional<CreaseScanReport> crease;  // on the twist with f = 1
};

/**
 * Twists (P, f) about the area centroid and tests whether the twist is an
 * equipoised quadrilateral. Throws ConditionANotMet when residual_a >= tau_a.
 */
StabilityVerdict stability_verdict(const LabelledPolytope2& poly, const AffineMap2& f, double w = 4.0,
                                   const VerdictOptions& opts = {});

}  // namespace torick
