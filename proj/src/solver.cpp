#include "torick/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

#include "torick/errors.hpp"
#include "torick/twist.hpp"

namespace torick
{

namespace
{

using Rational = boost::multiprecision::cpp_rational;

struct Residual {
    Eigen::Vector2d g;
    double residual_a;
};

class ConditionASystem
{
public:
    ConditionASystem(const LabelledPolytope2& poly, double w) : poly_{poly}, w_{w}
    {
        const double n = static_cast<double>(poly.size());
        for (const auto& v : poly.vertices()) {
            mean_ += v / n;
        }
        const double wi = std::round(w);
        closed_form_ = std::abs(w - wi) < 1e-12 && wi >= 4.0;
        diam_ = poly.diameter();
        centroid_ = poly.centroid();
    }

    /// f with vertex sum 1 and the given slopes.
    AffineMap2 affine(const Eigen::Vector2d& c) const
    {
        const double n = static_cast<double>(poly_.size());
        return {1.0 / n - c.x() * mean_.x() - c.y() * mean_.y(), c.x(), c.y()};
    }

    /// Vertex value of f as an affine function of (c1, c2).
    AffineMap2 vertex_value(std::size_t i) const
    {
        const Point2 d = poly_.vertex(i) - mean_;
        return {1.0 / static_cast<double>(poly_.size()), d.x(), d.y()};
    }

    /// Throws on any numeric failure; callers treat that as a failed trial point.
    Residual operator()(const Eigen::Vector2d& c) const
    {
        const AffineMap2 f = affine(c);
        const ExtremalAffine ea = closed_form_
                                      ? extremal_affine_closed_form(poly_, f, static_cast<int>(std::round(w_)))
                                      : extremal_affine(poly_, f, w_);
        const double zc = std::abs(ea.zeta(centroid_));
        if (!(zc > 0.0) || !std::isfinite(zc)) {
            throw Error(ErrorKind::NoConvergence, "zeta vanishes at the centroid");
        }
        Residual r{Eigen::Vector2d(ea.zeta.c1, ea.zeta.c2) * (diam_ / zc), ea.residual_a};
        if (!r.g.allFinite()) {
            throw Error(ErrorKind::NoConvergence, "non-finite residual");
        }
        return r;
    }

private:
    const LabelledPolytope2& poly_;
    double w_;
    bool closed_form_{false};
    Point2 mean_{0.0, 0.0};
    Point2 centroid_{0.0, 0.0};
    double diam_{1.0};
};

struct Trial {
    bool converged{false};
    Eigen::Vector2d c{0.0, 0.0};
    double residual_a{0.0};
    int iterations{0};
};

struct Start {
    Eigen::Vector2d c;
    bool constrained;  // keep every iterate where f > 0 at all vertices
};

// Vertex values of f (vertex sum 1) below this are treated as a boundary limit:
// there zeta blows up and the scaled residual tends to zero without a root.
constexpr double kVertexFloor = 1e-6;

Trial newton(const ConditionASystem& sys, const std::vector<AffineMap2>& vertex_values, const Start& start,
             const SolverOptions& o)
{
    Eigen::Vector2d c = start.c;
    auto admissible = [&](const Eigen::Vector2d& x) {
        if (!start.constrained) {
            return true;
        }
        return std::all_of(vertex_values.begin(), vertex_values.end(),
                           [&](const AffineMap2& A) { return A(Point2(x.x(), x.y())) > 0.0; });
    };
    Trial t;
    Residual r;
    try {
        r = sys(c);
    } catch (const Error&) {
        return t;
    }
    int polish = 0;
    for (int it = 0; it <= o.max_iterations; ++it) {
        if (r.g.norm() < o.tol) {
            // A few extra full steps so that repeated hits of one root agree
            // well inside the dedup distance.
            if (!t.converged) {
                t.converged = true;
                t.iterations = it;
            }
            t.c = c;
            t.residual_a = r.residual_a;
            if (++polish > 3 || r.g.norm() == 0.0) {
                break;
            }
        }
        if (it == o.max_iterations) {
            break;
        }
        Eigen::Matrix2d J;
        try {
            for (int j = 0; j < 2; ++j) {
                Eigen::Vector2d cj = c;
                cj(j) += o.fd_step;
                J.col(j) = (sys(cj).g - r.g) / o.fd_step;
            }
        } catch (const Error&) {
            return t;
        }
        Eigen::JacobiSVD<Eigen::Matrix2d> svd(J, Eigen::ComputeFullU | Eigen::ComputeFullV);
        svd.setThreshold(1e-12);
        const Eigen::Vector2d step = svd.solve(-r.g);
        if (!step.allFinite()) {
            return t;
        }
        double lambda = 1.0;
        bool accepted = false;
        for (int h = 0; h <= o.max_halvings; ++h, lambda *= 0.5) {
            const Eigen::Vector2d trial = c + lambda * step;
            if (!admissible(trial)) {
                continue;
            }
            try {
                const Residual rt = sys(trial);
                if (rt.g.norm() < r.g.norm()) {
                    c = trial;
                    r = rt;
                    accepted = true;
                    break;
                }
            } catch (const Error&) {
            }
        }
        if (!accepted) {
            break;
        }
    }
    if (t.converged) {
        for (const auto& A : vertex_values) {
            if (std::abs(A(Point2(t.c.x(), t.c.y()))) < kVertexFloor) {
                t.converged = false;
            }
        }
    }
    return t;
}

double radical_inverse(std::uint64_t i, std::uint64_t base)
{
    double inv = 1.0 / static_cast<double>(base);
    double f = inv;
    double r = 0.0;
    while (i > 0) {
        r += f * static_cast<double>(i % base);
        i /= base;
        f *= inv;
    }
    return r;
}

/**
 * Cells of a grid on the region (bilinear image of the unit square, nodes
 * clustered at the edges) in which both residual components change sign.
 * Returns the cell centres, best-first by the smallest corner residual.
 */
std::vector<Point2> bracketed_cells(const ConditionASystem& sys, const LabelledPolytope2& region,
                                    std::size_t limit, bool parallel)
{
    constexpr int N = 64;
    if (limit == 0 || region.size() < 3 || region.size() > 4) {
        return {};
    }
    const Point2 q0 = region.vertex(0);
    const Point2 q1 = region.vertex(1);
    const Point2 q2 = region.vertex(2);
    const Point2 q3 = region.vertex(region.size() == 4 ? 3 : 2);
    auto node = [](double i) { return 0.5 * (1.0 - std::cos(std::numbers::pi * (i + 0.5) / N)); };
    auto map = [&](double u, double v) {
        return Point2((1 - u) * (1 - v) * q0 + u * (1 - v) * q1 + u * v * q2 + (1 - u) * v * q3);
    };

    std::vector<Eigen::Vector2d> g(N * N, Eigen::Vector2d::Constant(NAN));
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (int ij = 0; ij < N * N; ++ij) {
        const Point2 c = map(node(ij / N), node(ij % N));
        try {
            g[static_cast<std::size_t>(ij)] = sys(Eigen::Vector2d(c.x(), c.y())).g;
        } catch (const Error&) {
        }
    }

    std::vector<std::pair<double, Point2>> cells;
    for (int i = 0; i + 1 < N; ++i) {
        for (int j = 0; j + 1 < N; ++j) {
            const std::array<Eigen::Vector2d, 4> corner{g[i * N + j], g[(i + 1) * N + j], g[i * N + j + 1],
                                                        g[(i + 1) * N + j + 1]};
            Eigen::Vector2d lo = corner[0];
            Eigen::Vector2d hi = corner[0];
            double best = INFINITY;
            bool finite = true;
            for (const auto& x : corner) {
                finite = finite && x.allFinite();
                lo = lo.cwiseMin(x);
                hi = hi.cwiseMax(x);
                best = std::min(best, x.norm());
            }
            if (finite && lo.x() <= 0.0 && hi.x() >= 0.0 && lo.y() <= 0.0 && hi.y() >= 0.0) {
                cells.emplace_back(best, map(0.5 * (node(i) + node(i + 1)), 0.5 * (node(j) + node(j + 1))));
            }
        }
    }
    std::stable_sort(cells.begin(), cells.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<Point2> out;
    for (std::size_t k = 0; k < cells.size() && k < limit; ++k) {
        out.push_back(cells[k].second);
    }
    return out;
}

std::vector<Start> start_points(const ConditionASystem& sys, const std::vector<AffineMap2>& hp,
                                const SolverOptions& o, bool parallel)
{
    std::optional<LabelledPolytope2> region;
    try {
        region.emplace(from_halfplanes(hp));
    } catch (const Error& e) {
        throw Error(ErrorKind::DegeneratePolytope, std::string("positivity region of f: ") + e.what());
    }

    // Roots with f almost vanishing at two vertices sit next to a corner of
    // the region, in basins a few percent of its size.
    static constexpr std::array<double, 3> kCornerPull{0.9, 0.93, 0.96};
    const std::size_t n_shell = o.starts >= 4 ? o.starts / 4 : 0;
    const std::size_t n_corner =
        o.starts >= 8 ? std::min(kCornerPull.size() * region->size(), o.starts / 4) : 0;
    const std::vector<Point2> bracketed =
        bracketed_cells(sys, *region, o.starts >= 8 ? o.starts / 4 : 0, parallel);
    const std::size_t n_in = o.starts - n_shell - n_corner - bracketed.size();

    std::mt19937_64 rng(o.seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const double sx = U(rng);
    const double sy = U(rng);
    const double s_angle = U(rng);

    Point2 lo = region->vertex(0);
    Point2 hi = lo;
    for (const auto& v : region->vertices()) {
        lo = lo.cwiseMin(v);
        hi = hi.cwiseMax(v);
    }

    std::vector<Start> out;
    out.reserve(o.starts);
    for (const auto& c : bracketed) {
        out.push_back({c, true});
    }
    const std::size_t n_head = out.size();
    out.push_back({region->centroid(), true});
    // Rotated Halton points, kept when strictly inside the region.
    for (std::uint64_t i = 1; out.size() < n_head + n_in && i < 1000 * (n_in + 10); ++i) {
        const double u = std::fmod(radical_inverse(i, 2) + sx, 1.0);
        const double v = std::fmod(radical_inverse(i, 3) + sy, 1.0);
        const Point2 c{lo.x() + u * (hi.x() - lo.x()), lo.y() + v * (hi.y() - lo.y())};
        if (region->contains_strictly(c)) {
            out.push_back({c, true});
        }
    }
    if (out.size() > n_head + n_in) {
        out.resize(n_head + n_in);
    }

    const Point2 g = region->centroid();
    for (std::size_t j = 0; j < n_corner; ++j) {
        const Point2& v = region->vertex(j % region->size());
        out.push_back({g + kCornerPull[j / region->size()] * (v - g), true});
    }

    // Shell: 20% beyond the boundary along rays from the centroid.
    for (std::size_t j = 0; j < n_shell; ++j) {
        const double th = 2.0 * std::numbers::pi * (static_cast<double>(j) + s_angle) / static_cast<double>(n_shell);
        const Point2 d{std::cos(th), std::sin(th)};
        double tmax = INFINITY;
        for (const auto& L : region->labels()) {
            const double slope = L.gradient().dot(d);
            if (slope < 0.0) {
                tmax = std::min(tmax, -L(g) / slope);
            }
        }
        out.push_back({g + 1.2 * tmax * d, false});
    }
    return out;
}

std::vector<ConditionASolution> solve_impl(const LabelledPolytope2& poly, double w,
                                           const SolverOptions& o, bool parallel)
{
    if (o.starts < 1) {
        throw Error(ErrorKind::InvalidInput, "starts must be >= 1");
    }
    if (!(o.tol > 0.0)) {
        throw Error(ErrorKind::InvalidInput, "solver tolerance must be positive");
    }
    const ConditionASystem sys(poly, w);
    std::vector<AffineMap2> vertex_values;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        vertex_values.push_back(sys.vertex_value(i));
    }
    const std::vector<Start> starts = start_points(sys, vertex_values, o, parallel);
    std::vector<Trial> trials(starts.size());
    const auto n = static_cast<long>(starts.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (long i = 0; i < n; ++i) {
        trials[static_cast<std::size_t>(i)] = newton(sys, vertex_values, starts[static_cast<std::size_t>(i)], o);
    }

    std::vector<ConditionASolution> roots;
    for (std::size_t i = 0; i < trials.size(); ++i) {
        const Trial& t = trials[i];
        if (!t.converged) {
            continue;
        }
        const AffineMap2 f = sys.affine(t.c);
        const bool dup = std::any_of(roots.begin(), roots.end(), [&](const ConditionASolution& s) {
            const AffineMap2 d = s.f - f;
            return std::sqrt(d.c0 * d.c0 + d.c1 * d.c1 + d.c2 * d.c2) < o.dedup_distance;
        });
        if (dup) {
            continue;
        }
        ConditionASolution s;
        s.f = f;
        s.residual_a = t.residual_a;
        s.positive_on_polytope = positive_on(poly, f);
        s.matched_family = match_family(poly, f, o.match_tolerance);
        s.start_index = i;
        s.iterations = t.iterations;
        roots.push_back(s);
    }
    if (roots.empty()) {
        throw Error(ErrorKind::NoConvergence, "no start converged (" + std::to_string(starts.size()) + " starts)");
    }
    return roots;
}

}  // namespace

std::vector<ConditionASolution> solve_condition_a(const LabelledPolytope2& poly, double w,
                                                  const SolverOptions& opts)
{
    return solve_impl(poly, w, opts, true);
}

std::vector<ConditionASolution> solve_condition_a_serial(const LabelledPolytope2& poly, double w,
                                                         const SolverOptions& opts)
{
    return solve_impl(poly, w, opts, false);
}

std::optional<FamilyMatch> match_family(const LabelledPolytope2& poly, const AffineMap2& f, double tol)
{
    const auto pk = recognize_hirzebruch(poly);
    if (!pk) {
        return std::nullopt;
    }
    const auto [p, k] = *pk;
    const AffineMap2 g = normalize_vertex_sum(poly, f);
    std::optional<FamilyMatch> best;
    auto consider = [&](FamilyId id, int sign, std::optional<double> b) {
        try {
            const AffineMap2 h = normalize_vertex_sum(poly, family_f(id, {p, k, sign, b}));
            const AffineMap2 d = h - g;
            const double dist = std::max({std::abs(d.c0), std::abs(d.c1), std::abs(d.c2)});
            if (dist < tol && (!best || dist < best->distance)) {
                best = FamilyMatch{id, sign, b, dist};
            }
        } catch (const Error&) {
            // outside that family's domain
        }
    };
    consider(FamilyId::LeBrunCalabi, +1, std::nullopt);
    for (int sign : {+1, -1}) {
        consider(FamilyId::LeBrunB, sign, std::nullopt);
        consider(FamilyId::FutakiOno, sign, std::nullopt);
        consider(FamilyId::FOCase12, sign, g.c2);
    }
    return best;
}

// ---------------------------------------------------------------- polynomials

Polynomial::Polynomial(std::vector<double> coeffs) : c_{std::move(coeffs)} {}

int Polynomial::degree() const
{
    for (int i = static_cast<int>(c_.size()) - 1; i >= 0; --i) {
        if (c_[i] != 0.0) {
            return i;
        }
    }
    return -1;
}

double Polynomial::operator()(double x) const
{
    double r = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
        r = r * x + *it;
    }
    return r;
}

Polynomial Polynomial::derivative() const
{
    if (c_.size() <= 1) {
        return Polynomial({0.0});
    }
    std::vector<double> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) {
        d[i - 1] = static_cast<double>(i) * c_[i];
    }
    return Polynomial(std::move(d));
}

double Polynomial::max_abs_coeff() const
{
    double m = 0.0;
    for (double v : c_) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

Polynomial Polynomial::operator+(const Polynomial& o) const
{
    std::vector<double> r(std::max(c_.size(), o.c_.size()), 0.0);
    for (std::size_t i = 0; i < r.size(); ++i) {
        r[i] = coeff(static_cast<int>(i)) + o.coeff(static_cast<int>(i));
    }
    return Polynomial(std::move(r));
}

Polynomial Polynomial::operator-(const Polynomial& o) const
{
    std::vector<double> r(std::max(c_.size(), o.c_.size()), 0.0);
    for (std::size_t i = 0; i < r.size(); ++i) {
        r[i] = coeff(static_cast<int>(i)) - o.coeff(static_cast<int>(i));
    }
    return Polynomial(std::move(r));
}

Polynomial Polynomial::operator*(const Polynomial& o) const
{
    if (c_.empty() || o.c_.empty()) {
        return Polynomial({0.0});
    }
    std::vector<double> r(c_.size() + o.c_.size() - 1, 0.0);
    for (std::size_t i = 0; i < c_.size(); ++i) {
        for (std::size_t j = 0; j < o.c_.size(); ++j) {
            r[i + j] += c_[i] * o.c_[j];
        }
    }
    return Polynomial(std::move(r));
}

namespace
{

template <class T>
void trim(std::vector<T>& c)
{
    while (!c.empty() && c.back() == 0) {
        c.pop_back();
    }
}

template <class T>
std::pair<std::vector<T>, std::vector<T>> poly_divmod(std::vector<T> num, std::vector<T> den)
{
    trim(num);
    trim(den);
    if (den.empty()) {
        throw Error(ErrorKind::InvalidInput, "polynomial division by zero");
    }
    if (num.size() < den.size()) {
        return {{}, num};
    }
    std::vector<T> q(num.size() - den.size() + 1, T(0));
    for (std::size_t s = q.size(); s-- > 0;) {
        const std::size_t i = s + den.size() - 1;
        const T t = num[i] / den.back();
        q[s] = t;
        for (std::size_t j = 0; j < den.size(); ++j) {
            num[s + j] -= t * den[j];
        }
        num[i] = T(0);
    }
    num.resize(den.size() - 1);
    trim(num);
    return {q, num};
}

template <class T>
T eval(const std::vector<T>& c, const T& x)
{
    T r(0);
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        r = r * x + *it;
    }
    return r;
}

template <class T>
std::vector<T> deriv(const std::vector<T>& c)
{
    std::vector<T> d;
    for (std::size_t i = 1; i < c.size(); ++i) {
        d.push_back(T(static_cast<int>(i)) * c[i]);
    }
    return d;
}

void truncate_leading(std::vector<double>& c, double scale)
{
    while (!c.empty() && std::abs(c.back()) <= 1e-12 * scale) {
        c.pop_back();
    }
}

template <class T>
std::vector<std::vector<T>> sturm_chain(std::vector<T> p, bool truncate)
{
    trim(p);
    std::vector<std::vector<T>> chain;
    if (p.empty()) {
        return chain;
    }
    chain.push_back(p);
    auto d = deriv(p);
    trim(d);
    if (d.empty()) {
        return chain;
    }
    chain.push_back(d);
    while (true) {
        auto [q, r] = poly_divmod(chain[chain.size() - 2], chain.back());
        if constexpr (std::is_same_v<T, double>) {
            if (truncate) {
                double scale = 0.0;
                for (double v : chain[chain.size() - 2]) {
                    scale = std::max(scale, std::abs(v));
                }
                truncate_leading(r, scale);
            }
        }
        if (r.empty()) {
            break;
        }
        for (auto& v : r) {
            v = -v;
        }
        chain.push_back(std::move(r));
    }
    return chain;
}

template <class T>
int sign_changes(const std::vector<std::vector<T>>& chain, const T& x)
{
    int changes = 0;
    int prev = 0;
    for (const auto& c : chain) {
        const T v = eval(c, x);
        const int s = v > 0 ? 1 : (v < 0 ? -1 : 0);
        if (s == 0) {
            continue;
        }
        if (prev != 0 && s != prev) {
            ++changes;
        }
        prev = s;
    }
    return changes;
}

}  // namespace

std::pair<Polynomial, Polynomial> Polynomial::divmod(const Polynomial& o) const
{
    auto [q, r] = poly_divmod(c_, o.c_);
    if (q.empty()) {
        q.push_back(0.0);
    }
    if (r.empty()) {
        r.push_back(0.0);
    }
    return {Polynomial(std::move(q)), Polynomial(std::move(r))};
}

int sturm_count(const Polynomial& p, double a, double b)
{
    const auto chain = sturm_chain(p.coeffs(), true);
    if (chain.empty()) {
        throw Error(ErrorKind::InvalidInput, "Sturm count of the zero polynomial");
    }
    return sign_changes(chain, a) - sign_changes(chain, b);
}

int sturm_count_exact(const Polynomial& p, double a, double b)
{
    std::vector<Rational> c;
    for (double v : p.coeffs()) {
        c.emplace_back(v);
    }
    const auto chain = sturm_chain(c, false);
    if (chain.empty()) {
        throw Error(ErrorKind::InvalidInput, "Sturm count of the zero polynomial");
    }
    return sign_changes(chain, Rational(a)) - sign_changes(chain, Rational(b));
}

std::vector<double> isolate_roots(const Polynomial& p, double a, double b, double tol)
{
    std::vector<double> roots;
    struct Iv {
        double lo, hi;
    };
    std::vector<Iv> stack{{a, b}};
    while (!stack.empty()) {
        Iv iv = stack.back();
        stack.pop_back();
        if (p(iv.hi) == 0.0) {
            roots.push_back(iv.hi);
            iv.hi = std::nextafter(iv.hi, iv.lo);
        }
        if (!(iv.hi > iv.lo)) {
            continue;
        }
        const int n = sturm_count(p, iv.lo, iv.hi);
        if (n <= 0) {
            continue;
        }
        if (iv.hi - iv.lo < tol) {
            roots.push_back(0.5 * (iv.lo + iv.hi));
            continue;
        }
        const double mid = 0.5 * (iv.lo + iv.hi);
        stack.push_back({mid, iv.hi});
        stack.push_back({iv.lo, mid});
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

IntervalPositivity positivity_between_roots(const Polynomial& p, double lo, double hi)
{
    IntervalPositivity r;
    // p = (x - lo)(x - hi) q + tiny remainder; p > 0 inside iff q < 0 inside.
    const Polynomial D({lo * hi, -(lo + hi), 1.0});
    const Polynomial q = p.divmod(D).first;

    constexpr int kSamples = 2000;
    r.dense_sampling_positive = true;
    for (int j = 0; j < kSamples; ++j) {
        const double x = lo + (hi - lo) * (j + 0.5) / kSamples;
        if (!(p(x) > 0.0)) {
            r.dense_sampling_positive = false;
            break;
        }
    }

    const double qlo = q(lo);
    const double qhi = q(hi);
    if (q.degree() < 0 || qlo == 0.0 || qhi == 0.0) {
        // Double root at an endpoint or q = 0: no strict positivity near the boundary.
        r.positive = false;
        return r;
    }
    if (q.degree() == 0) {
        r.sturm_interior_roots = 0;
    } else {
        r.sturm_interior_roots = sturm_count(q, lo, hi);
    }
    bool positive = r.sturm_interior_roots == 0 && qlo < 0.0;
    if (positive != r.dense_sampling_positive) {
        r.used_exact_arithmetic = true;
        r.sturm_interior_roots = q.degree() == 0 ? 0 : sturm_count_exact(q, lo, hi);
        positive = r.sturm_interior_roots == 0 && qlo < 0.0;
    }
    r.positive = positive;
    if (q.degree() > 0 && r.sturm_interior_roots > 0) {
        r.roots = isolate_roots(q, lo, hi);
    }
    return r;
}

// ------------------------------------------------------------ extremal pairs

void ExtremalPair::validate() const
{
    if (!(0.0 < beta1 && beta1 < beta2 && beta2 < alpha1 && alpha1 < alpha2)) {
        throw Error(ErrorKind::InvalidInput, "extremal pair needs 0 < beta1 < beta2 < alpha1 < alpha2");
    }
    if (!(r_alpha1 > 0.0 && r_alpha2 > 0.0 && r_beta1 > 0.0 && r_beta2 > 0.0)) {
        throw Error(ErrorKind::InvalidInput, "extremal pair slopes must be positive");
    }
    if (A.degree() > 4 || B.degree() > 4) {
        throw Error(ErrorKind::InvalidInput, "extremal pair polynomials must have degree <= 4");
    }
}

namespace
{

constexpr double kPairTol = 1e-10;

// Natural size of p(x): sum |c_j| |x|^j.
double eval_scale(const Polynomial& p, double x)
{
    double s = 0.0;
    double xp = 1.0;
    for (double c : p.coeffs()) {
        s += std::abs(c) * xp;
        xp *= std::abs(x);
    }
    return s;
}

double rel_gap(double value, double target, double scale)
{
    return std::abs(value - target) / std::max({scale, std::abs(target), 1e-300});
}

}  // namespace

ExtremalPairReport check_extremal_pair(const ExtremalPair& pr, QuadType type)
{
    pr.validate();
    ExtremalPairReport rep;

    {
        const Polynomial dA = pr.A.derivative();
        const Polynomial dB = pr.B.derivative();
        const double devs[] = {
            rel_gap(pr.A(pr.alpha1), 0.0, eval_scale(pr.A, pr.alpha1)),
            rel_gap(pr.A(pr.alpha2), 0.0, eval_scale(pr.A, pr.alpha2)),
            rel_gap(pr.B(pr.beta1), 0.0, eval_scale(pr.B, pr.beta1)),
            rel_gap(pr.B(pr.beta2), 0.0, eval_scale(pr.B, pr.beta2)),
            rel_gap(dA(pr.alpha1), pr.r_alpha1, eval_scale(dA, pr.alpha1)),
            rel_gap(dA(pr.alpha2), -pr.r_alpha2, eval_scale(dA, pr.alpha2)),
            rel_gap(dB(pr.beta1), pr.r_beta1, eval_scale(dB, pr.beta1)),
            rel_gap(dB(pr.beta2), -pr.r_beta2, eval_scale(dB, pr.beta2)),
        };
        const double dev = *std::max_element(std::begin(devs), std::end(devs));
        rep.clauses.push_back({"boundary", dev <= kPairTol, dev, ""});
    }

    {
        ClauseResult c{"coupling", false, 0.0, ""};
        const double sA = std::max(pr.A.max_abs_coeff(), 1e-300);
        const double sB = std::max(pr.B.max_abs_coeff(), 1e-300);
        switch (type) {
            case QuadType::Parallelogram:
                c.deviation = std::max(std::abs(pr.A.coeff(4)) / sA, std::abs(pr.B.coeff(4)) / sB);
                c.pass = c.deviation <= kPairTol;
                c.detail = "deg A <= 3 and deg B <= 3";
                break;
            case QuadType::TrapezoidNotParallelogram: {
                const double a2 = pr.A.coeff(2);
                const double b2 = pr.B.coeff(2);
                const double deg = std::max(std::abs(pr.B.coeff(3)), std::abs(pr.B.coeff(4))) / sB;
                const double cpl = std::abs(a2 + b2) / std::max({std::abs(a2), std::abs(b2), 1e-300});
                c.deviation = std::max(deg, cpl);
                c.pass = c.deviation <= kPairTol && a2 > 0.0;
                c.detail = a2 > 0.0 ? "deg B = 2 and B'' = -A''(0)" : "A''(0) <= 0";
                break;
            }
            case QuadType::GenericQuadrilateral: {
                const Polynomial s = pr.A + pr.B;
                const double scale = std::max(sA, sB);
                c.deviation = std::max({std::abs(s.coeff(2)), std::abs(s.coeff(3)), std::abs(s.coeff(4))}) / scale;
                c.pass = c.deviation <= kPairTol;
                c.detail = "deg(A + B) <= 1";
                break;
            }
        }
        rep.clauses.push_back(c);
    }

    rep.A_positivity = positivity_between_roots(pr.A, pr.alpha1, pr.alpha2);
    rep.B_positivity = positivity_between_roots(pr.B, pr.beta1, pr.beta2);
    rep.clauses.push_back({"positivity_A", rep.A_positivity.positive,
                           static_cast<double>(rep.A_positivity.sturm_interior_roots), ""});
    rep.clauses.push_back({"positivity_B", rep.B_positivity.positive,
                           static_cast<double>(rep.B_positivity.sturm_interior_roots), ""});

    rep.pass = std::all_of(rep.clauses.begin(), rep.clauses.end(), [](const ClauseResult& c) { return c.pass; });
    return rep;
}

// ------------------------------------------------------------------ verdict

std::string to_string(Verdict v)
{
    return v == Verdict::StableByTheorem ? "STABLE-BY-THEOREM" : "EVIDENCE-ONLY";
}

StabilityVerdict stability_verdict(const LabelledPolytope2& poly, const AffineMap2& f, double w,
                                   const VerdictOptions& o)
{
    if (w != 4.0) {
        throw Error(ErrorKind::ParameterOutOfDomain, "the twist criterion applies to w = 4 only");
    }
    StabilityVerdict v;
    v.extremal = extremal_affine(poly, f, w, o.quad_tol);
    if (!(v.extremal.residual_a < o.tau_a)) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "residual_a = %.3g is not below %.3g", v.extremal.residual_a, o.tau_a);
        throw Error(ErrorKind::ConditionANotMet, buf);
    }

    CenteredTwist ct = centered_twist(poly, f);
    v.translation = ct.translation;
    const LabelledPolytope2& tw = ct.twisted;
    v.zeta_twisted = extremal_affine(tw, AffineMap2::constant(1.0), w, o.quad_tol).zeta;

    if (tw.size() == 4) {
        v.twisted_type = classify_quadrilateral(tw);
        v.equipoised_sum = alternating_sum(tw, v.zeta_twisted);
        double mag = 0.0;
        for (const auto& s : tw.vertices()) {
            mag += std::abs(v.zeta_twisted(s));
        }
        v.equipoised_relative = std::abs(v.equipoised_sum) / std::max(mag, 1e-300);
        if (v.equipoised_relative < o.tau_eq) {
            v.verdict = Verdict::StableByTheorem;
        }
    }
    if (o.creases > 0) {
        v.crease = crease_scan(tw, AffineMap2::constant(1.0), w, o.creases, o.seed, o.quad_tol);
    }
    v.twisted.emplace(tw);
    return v;
}

}  // namespace torick
