#include "torick/families.hpp"

#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <random>

#include "torick/errors.hpp"

namespace torick
{

namespace
{

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void require_in(double p, double lo, double hi, const char* what)
{
    if (!(p > lo + kDomainGuard && p < hi - kDomainGuard)) {
        throw Error(ErrorKind::ParameterOutOfDomain,
                    std::string(what) + ": p = " + fmt(p) + " outside (" + fmt(lo) + ", " + fmt(hi) + ")");
    }
}

int require_sign(int sign)
{
    if (sign != 1 && sign != -1) {
        throw Error(ErrorKind::InvalidInput, "sign must be +1 or -1");
    }
    return sign;
}

double checked_sqrt(double d, const char* what)
{
    if (d < 0.0) {
        throw Error(ErrorKind::NegativeDiscriminant, std::string(what) + " = " + fmt(d) + " < 0");
    }
    return std::sqrt(d);
}

// Vertex values of a x1 + b x2 + c on Delta_{p,k}.
std::array<double, 4> vertex_values(double p, int k, double a, double b, double c)
{
    return {c, a * p + c, a * p + b * (1.0 - p) * k + c, b * k + c};
}

AffineMap2 normalized(double p, int k, double a, double b, double c)
{
    const auto v = vertex_values(p, k, a, b, c);
    const double s = v[0] + v[1] + v[2] + v[3];
    if (s == 0.0) {
        throw Error(ErrorKind::VertexZero, "vertex sum of f vanishes");
    }
    return {c / s, a / s, b / s};
}

}  // namespace

std::string to_string(FamilyId id)
{
    switch (id) {
        case FamilyId::LeBrunCalabi:
            return "lebrun-calabi";
        case FamilyId::LeBrunB:
            return "lebrun-b";
        case FamilyId::FutakiOno:
            return "futaki-ono";
        case FamilyId::FOCase12:
            return "fo-case12";
    }
    return "unknown";
}

FamilyId parse_family_id(std::string_view s)
{
    for (FamilyId id : {FamilyId::LeBrunCalabi, FamilyId::LeBrunB, FamilyId::FutakiOno, FamilyId::FOCase12}) {
        if (s == to_string(id)) {
            return id;
        }
    }
    throw Error(ErrorKind::InvalidInput, "unknown family id '" + std::string(s) + "'");
}

double F_k(double p, int k)
{
    const double kk = k;
    // p^4 - 4k p^3 + (4k^2 + 12k) p^2 - 8k(k + 1) p + 4k^2
    return (((p - 4.0 * kk) * p + (4.0 * kk * kk + 12.0 * kk)) * p - 8.0 * kk * (kk + 1.0)) * p +
           4.0 * kk * kk;
}

double r_k(int k)
{
    if (k < 1) {
        throw Error(ErrorKind::ParameterOutOfRange, "k must be >= 1");
    }
    static std::mutex mu;
    static std::map<int, double> cache;
    std::lock_guard lock(mu);
    if (auto it = cache.find(k); it != cache.end()) {
        return it->second;
    }
    // F_k(0) = 4k^2 > 0; find the first sign change on a fine grid, then bisect.
    constexpr int kScan = 4000;
    double lo = 0.0;
    double hi = -1.0;
    for (int i = 1; i <= kScan; ++i) {
        const double p = static_cast<double>(i) / kScan;
        if (F_k(p, k) <= 0.0) {
            hi = p;
            break;
        }
        lo = p;
    }
    if (hi < 0.0) {
        throw Error(ErrorKind::ParameterOutOfDomain, "F_k has no root in (0, 1) for k = " + std::to_string(k));
    }
    while (hi - lo > 1e-14) {
        const double mid = 0.5 * (lo + hi);
        (F_k(mid, k) > 0.0 ? lo : hi) = mid;
    }
    const double r = 0.5 * (lo + hi);
    cache.emplace(k, r);
    return r;
}

double E_b(double p, double b)
{
    const double t = 2.0 - 3.0 * p;
    return b * b * (1.0 - p) * t * t + p * p + p - 1.0;
}

std::pair<double, double> family_domain(FamilyId id, int k, bool exploratory)
{
    if (k < 1) {
        throw Error(ErrorKind::ParameterOutOfRange, "k must be >= 1");
    }
    switch (id) {
        case FamilyId::LeBrunCalabi:
            return {0.0, 1.0};
        case FamilyId::LeBrunB:
            if (k != 1) {
                throw Error(ErrorKind::ParameterOutOfDomain, "lebrun-b exists only for k = 1");
            }
            return {8.0 / 9.0, 1.0};
        case FamilyId::FutakiOno:
            if (k > 4 && !exploratory) {
                throw Error(ErrorKind::ParameterOutOfDomain,
                            "futaki-ono is established for k <= 4; k >= 5 needs the exploratory flag");
            }
            return {0.0, r_k(k)};
        case FamilyId::FOCase12:
            if (k != 1) {
                throw Error(ErrorKind::ParameterOutOfDomain, "fo-case12 exists only for k = 1");
            }
            return {0.0, 1.0};
    }
    throw Error(ErrorKind::InvalidInput, "unknown family");
}

AffineMap2 family_f(FamilyId id, const FamilyParams& prm)
{
    const double p = prm.p;
    const int k = prm.k;
    const auto [lo, hi] = family_domain(id, k, prm.exploratory);
    require_in(p, lo, hi, to_string(id).c_str());

    switch (id) {
        case FamilyId::LeBrunCalabi: {
            const double s = std::sqrt(1.0 - p);
            const double a = (p + 2.0 * s - 2.0) / (2.0 * p * p);
            const double c = -(s - 1.0) / (2.0 * p);
            return normalized(p, k, a, 0.0, c);
        }
        case FamilyId::LeBrunB: {
            const double sign = require_sign(prm.sign);
            const double d = checked_sqrt(9.0 * p * p - 8.0 * p, "9p^2 - 8p");
            const double a = (-p + sign * d) / (4.0 * p * p);
            const double c = 3.0 / 8.0 - sign * d / (8.0 * p);
            return normalized(p, k, a, 0.0, c);
        }
        case FamilyId::FutakiOno: {
            const double sign = require_sign(prm.sign);
            const double kk = k;
            const double w = checked_sqrt(F_k(p, k), "F_k(p)");
            const double D = 2.0 * (p - 1.0) * (p - 2.0) * kk - p * p * p;
            const double a = (sign * w + 2.0 * (p - 1.0) * kk - p * (p - 2.0)) / (2.0 * D);
            const double b = sign * w / (kk * D);
            const double c = 0.25 * (1.0 + (p - 2.0) * kk * b - 2.0 * p * a);
            return normalized(p, k, a, b, c);
        }
        case FamilyId::FOCase12: {
            const double sign = require_sign(prm.sign);
            if (!prm.b) {
                throw Error(ErrorKind::InvalidInput, "fo-case12 needs the parameter b");
            }
            const double t = 3.0 * p - 2.0;
            if (std::abs(t) < 3.0 * kDomainGuard) {
                throw Error(ErrorKind::ParameterOutOfDomain, "fo-case12 excludes p = 2/3");
            }
            const double b = *prm.b;
            const double e = checked_sqrt(E_b(p, b), "E_b(p)");
            // The root enters with weight 2 so that the vertex values are the
            // ones used in the positivity analysis (see case12_vertex_values).
            const double a = (3.0 * b * p * p + (1.0 - 2.0 * b) * p + 2.0 * sign * e) / (2.0 * p * t);
            const double c = 0.25 * (1.0 - (2.0 - p) * b - 2.0 * p * a);
            return normalized(p, k, a, b, c);
        }
    }
    throw Error(ErrorKind::InvalidInput, "unknown family");
}

AffineMap2 normalize_vertex_sum(const LabelledPolytope2& poly, const AffineMap2& f)
{
    double s = 0.0;
    for (const auto& v : poly.vertices()) {
        s += f(v);
    }
    if (s == 0.0) {
        throw Error(ErrorKind::VertexZero, "vertex sum of f vanishes");
    }
    return f * (1.0 / s);
}

namespace
{

void require_quadrilateral(const LabelledPolytope2& poly)
{
    if (poly.size() != 4) {
        throw Error(ErrorKind::NotAQuadrilateral,
                    "expected 4 vertices, got " + std::to_string(poly.size()));
    }
}

}  // namespace

double alternating_sum(const LabelledPolytope2& poly, const AffineMap2& g)
{
    require_quadrilateral(poly);
    double s = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        // i = 0 is s_1, which carries (-1)^1.
        s += (i % 2 == 0 ? -1.0 : 1.0) * g(poly.vertex(i));
    }
    return s;
}

double equipoised_check(const LabelledPolytope2& poly, const AffineMap2& f)
{
    require_quadrilateral(poly);
    double s = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        const double v = f(poly.vertex(i));
        if (v == 0.0) {
            throw Error(ErrorKind::VertexZero, "f vanishes at vertex " + std::to_string(i));
        }
        s += (i % 2 == 0 ? -1.0 : 1.0) / v;
    }
    return s;
}

Rational identity_e2(const Rational& p)
{
    const Rational U = p * p + 2 * p - 2;
    const Rational V = ((p - 3) * p + 4) * p - 2;
    const Rational F1 = (((p - 4) * p + 16) * p - 16) * p + 4;
    return V * V + (1 - p) * (p * F1 - U * U);
}

std::vector<Rational> identity_e2_points()
{
    return {Rational(1, 2), Rational(7, 10), Rational(1, 3), Rational(2, 5),
            Rational(3, 4), Rational(1, 7), Rational(9, 11)};
}

std::vector<Case12Sample> case12_samples(std::size_t n, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> up(0.01, 0.99);
    std::uniform_real_distribution<double> ux(0.0, 1.0);
    std::vector<Case12Sample> out;
    out.reserve(n);
    while (out.size() < n) {
        const double p = up(rng);
        if (std::abs(3.0 * p - 2.0) < 1e-3) {
            continue;
        }
        const double t = 2.0 - 3.0 * p;
        const double bmin2 = std::max(0.0, (1.0 - p - p * p) / ((1.0 - p) * t * t));
        const double bmin = std::sqrt(bmin2);
        const double sign = (out.size() % 2 == 0) ? 1.0 : -1.0;
        // Every fourth sample sits on the equality case when that case exists.
        double b = (out.size() % 4 == 0 && bmin2 > 0.0) ? bmin : bmin + 3.0 * ux(rng);
        b *= sign;
        if (E_b(p, b) < 0.0) {
            // Rounding on the equality case; step outward by one ulp-scale nudge.
            b = std::nextafter(b, sign * INFINITY);
            if (E_b(p, b) < 0.0) {
                continue;
            }
        }
        out.push_back({p, b});
    }
    return out;
}

std::array<double, 4> case12_vertex_values(double p, double b, int sign)
{
    require_sign(sign);
    const double e = checked_sqrt(E_b(p, b), "E_b(p)");
    const double d = 2.0 * (3.0 * p - 2.0);
    const double q = (1.0 - p) * (2.0 - 3.0 * p);
    return {(-(1.0 - p) + (2.0 - 3.0 * p) * b - sign * e) / d,
            (-(1.0 - p) - (2.0 - 3.0 * p) * b - sign * e) / d,
            (q * b + (2.0 * p - 1.0) + sign * e) / d,
            (-q * b + (2.0 * p - 1.0) + sign * e) / d};
}

Case12Report positivity_scan_case12(const std::vector<Case12Sample>& samples)
{
    Case12Report r;
    r.max_of_min_vertex_values = -INFINITY;
    for (const auto& s : samples) {
        const LabelledPolytope2 poly = hirzebruch_delzant(s.p, 1);
        FamilyParams prm{s.p, 1, +1, s.b};
        const double mp = min_over_vertices(poly, family_f(FamilyId::FOCase12, prm)).value;
        prm.sign = -1;
        const double mm = min_over_vertices(poly, family_f(FamilyId::FOCase12, prm)).value;
        const Case12Entry e{s, mp, mm};
        r.entries.push_back(e);
        r.max_of_min_vertex_values = std::max({r.max_of_min_vertex_values, mp, mm});
        if (mp > 0.0 || mm > 0.0) {
            r.counterexamples.push_back(e);
        }
    }
    return r;
}

std::vector<double> p_grid(double lo, double hi, std::size_t n)
{
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = lo + (hi - lo) * static_cast<double>(i + 1) / static_cast<double>(n + 1);
    }
    return out;
}

std::optional<std::pair<double, int>> recognize_hirzebruch(const LabelledPolytope2& poly)
{
    if (poly.size() != 4) {
        return std::nullopt;
    }
    const double p = poly.vertex(1).x();
    const double kd = poly.vertex(3).y();
    const int k = static_cast<int>(std::lround(kd));
    if (k < 1 || std::abs(kd - k) > 1e-12 || !(p > 0.0 && p < 1.0)) {
        return std::nullopt;
    }
    const LabelledPolytope2 ref = hirzebruch_delzant(p, k);
    for (std::size_t i = 0; i < 4; ++i) {
        if ((ref.vertex(i) - poly.vertex(i)).norm() > 1e-12) {
            return std::nullopt;
        }
        const AffineMap2 d = ref.labels()[i] - poly.labels()[i];
        if (std::max({std::abs(d.c0), std::abs(d.c1), std::abs(d.c2)}) > 1e-12) {
            return std::nullopt;
        }
    }
    return std::make_pair(p, k);
}

}  // namespace torick
