#include "torick/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include "torick/errors.hpp"

namespace torick
{

namespace quad
{

namespace
{

GaussRule compute_rule(int order)
{
    // Newton iteration on P_n, then map [-1,1] -> [0,1].
    GaussRule rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    for (int i = 0; i < order; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = 0.0;
            for (int j = 1; j <= order; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
            }
            dp = order * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) {
                break;
            }
        }
        rule.nodes[i] = 0.5 * (1.0 - z);
        rule.weights[i] = 1.0 / ((1.0 - z * z) * dp * dp);
    }
    return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int order)
{
    static std::mutex mutex;
    static std::map<int, GaussRule> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(order);
    if (it == cache.end()) {
        it = cache.emplace(order, compute_rule(order)).first;
    }
    return it->second;
}

}  // namespace quad

namespace
{

using quad::GaussRule;

struct Accumulator {
    std::vector<double> value;
    double error{0.0};
    long evaluations{0};
};

struct Triangle {
    Point2 a, b, c;
    double area() const
    {
        const Point2 u = b - a;
        const Point2 v = c - a;
        return 0.5 * std::abs(u.x() * v.y() - u.y() * v.x());
    }
};

class Engine
{
public:
    Engine(std::size_t components, const VectorPointFunction& g, const WeightSpec& w)
        : n_{components}, g_{g}, w_{w}, scratch_(components), high_(components), low_(components),
          hi_rule_{quad::gauss_legendre(quad::kHighOrder)}, lo_rule_{quad::gauss_legendre(quad::kLowOrder)}
    {
    }

    // Collapsed (Duffy) tensor rule: x = a + u(1-v)(b-a) + uv(c-a), jacobian 2|T| u.
    void triangle_rule(const Triangle& t, const GaussRule& rule, std::vector<double>& out, long& evals)
    {
        std::fill(out.begin(), out.end(), 0.0);
        const double jac = 2.0 * t.area();
        const Point2 ab = t.b - t.a;
        const Point2 ac = t.c - t.a;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double u = rule.nodes[i];
            for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
                const double v = rule.nodes[j];
                const Point2 x = t.a + u * (1.0 - v) * ab + u * v * ac;
                const double wt = jac * rule.weights[i] * rule.weights[j] * u * weight(x);
                eval(x);
                for (std::size_t c = 0; c < n_; ++c) {
                    out[c] += wt * scratch_[c];
                }
                ++evals;
            }
        }
    }

    void segment_rule(const Point2& a, const Point2& b, double scale, const GaussRule& rule,
                      std::vector<double>& out, long& evals)
    {
        std::fill(out.begin(), out.end(), 0.0);
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const Point2 x = a + rule.nodes[i] * (b - a);
            const double wt = scale * rule.weights[i] * weight(x);
            eval(x);
            for (std::size_t c = 0; c < n_; ++c) {
                out[c] += wt * scratch_[c];
            }
            ++evals;
        }
    }

    /**
     * Globally adaptive refinement: the piece with the largest error estimate
     * |Q_high - Q_low| (max over components) is split until the summed
     * estimate meets tol * max_c |I_c|. Ties go to the oldest piece, so the
     * result is deterministic.
     */
    template <class Piece, class Rule, class Split>
    void adapt(const std::vector<Piece>& initial, double tol, Accumulator& acc, Rule rule, Split split)
    {
        struct Item {
            Piece piece;
            std::vector<double> value;
            double error;
            int depth;
            long id;
        };
        std::vector<Item> items;
        auto cmp = [&items](long i, long j) {
            const Item& a = items[static_cast<std::size_t>(i)];
            const Item& b = items[static_cast<std::size_t>(j)];
            return a.error != b.error ? a.error < b.error : a.id > b.id;
        };
        std::vector<long> heap;
        std::vector<bool> live;
        std::vector<double> total(n_, 0.0);
        double total_error = 0.0;

        auto push = [&](const Piece& pc, int depth) {
            rule(pc, hi_rule_, high_, acc.evaluations);
            rule(pc, lo_rule_, low_, acc.evaluations);
            const double err = max_diff();
            const long id = static_cast<long>(items.size());
            items.push_back({pc, high_, err, depth, id});
            live.push_back(true);
            for (std::size_t c = 0; c < n_; ++c) {
                total[c] += high_[c];
            }
            total_error += err;
            heap.push_back(id);
            std::push_heap(heap.begin(), heap.end(), cmp);
        };
        auto target = [&] {
            double m = 0.0;
            for (double v : total) {
                m = std::max(m, std::abs(v));
            }
            return tol * std::max(m, quad::kFloor);
        };

        for (const auto& pc : initial) {
            push(pc, 0);
        }
        while (!heap.empty() && total_error > target()) {
            std::pop_heap(heap.begin(), heap.end(), cmp);
            const long top = heap.back();
            heap.pop_back();
            const Item parent = items[static_cast<std::size_t>(top)];
            if (parent.error == 0.0) {
                break;
            }
            if (parent.depth >= quad::kMaxDepth || !std::isfinite(parent.error)) {
                throw_depth();
            }
            if (items.size() >= quad::kMaxPieces) {
                throw Error(ErrorKind::ToleranceNotReached,
                            "more than " + std::to_string(quad::kMaxPieces) + " pieces");
            }
            live[static_cast<std::size_t>(top)] = false;
            for (std::size_t c = 0; c < n_; ++c) {
                total[c] -= parent.value[c];
            }
            total_error -= parent.error;
            for (const Piece& child : split(parent.piece)) {
                push(child, parent.depth + 1);
            }
            // Refresh the running sums now and then to keep cancellation out.
            if (items.size() % 4096 == 0) {
                resum(items, live, total, total_error);
            }
        }
        resum(items, live, total, total_error);
        for (std::size_t c = 0; c < n_; ++c) {
            acc.value[c] += total[c];
        }
        acc.error += total_error;
    }

    void triangles(const std::vector<Triangle>& tris, double tol, Accumulator& acc)
    {
        adapt(
            tris, tol, acc,
            [this](const Triangle& t, const GaussRule& r, std::vector<double>& out, long& ev) {
                triangle_rule(t, r, out, ev);
            },
            [](const Triangle& t) {
                const Point2 ab = 0.5 * (t.a + t.b);
                const Point2 bc = 0.5 * (t.b + t.c);
                const Point2 ca = 0.5 * (t.c + t.a);
                return std::array<Triangle, 4>{Triangle{t.a, ab, ca}, Triangle{ab, t.b, bc},
                                               Triangle{ca, bc, t.c}, Triangle{ab, bc, ca}};
            });
    }

    struct Piece1 {
        Point2 a, b;
        double scale;
    };

    void segments(const std::vector<Piece1>& segs, double tol, Accumulator& acc)
    {
        adapt(
            segs, tol, acc,
            [this](const Piece1& s, const GaussRule& r, std::vector<double>& out, long& ev) {
                segment_rule(s.a, s.b, s.scale, r, out, ev);
            },
            [](const Piece1& s) {
                const Point2 m = 0.5 * (s.a + s.b);
                return std::array<Piece1, 2>{Piece1{s.a, m, 0.5 * s.scale}, Piece1{m, s.b, 0.5 * s.scale}};
            });
    }

private:
    double weight(const Point2& x) const
    {
        if (w_.k == 0.0) {
            return 1.0;
        }
        return std::pow(w_.f(x), -w_.k);
    }

    void eval(const Point2& x)
    {
        g_(x, std::span<double>(scratch_));
    }

    double max_diff() const
    {
        double e = 0.0;
        for (std::size_t c = 0; c < n_; ++c) {
            e = std::max(e, std::abs(high_[c] - low_[c]));
        }
        return std::isfinite(e) ? e : std::numeric_limits<double>::infinity();
    }

    template <class Items>
    void resum(const Items& items, const std::vector<bool>& live, std::vector<double>& total,
               double& total_error) const
    {
        std::fill(total.begin(), total.end(), 0.0);
        total_error = 0.0;
        for (std::size_t i = 0; i < items.size(); ++i) {
            if (live[i]) {
                for (std::size_t c = 0; c < n_; ++c) {
                    total[c] += items[i].value[c];
                }
                total_error += items[i].error;
            }
        }
    }

    [[noreturn]] static void throw_depth()
    {
        throw Error(ErrorKind::ToleranceNotReached,
                    "maximum refinement depth " + std::to_string(quad::kMaxDepth) + " exceeded");
    }

    std::size_t n_;
    const VectorPointFunction& g_;
    const WeightSpec& w_;
    std::vector<double> scratch_, high_, low_;
    const GaussRule& hi_rule_;
    const GaussRule& lo_rule_;
};

void check_tol(double tol)
{
    if (!(tol > 0.0)) {
        throw Error(ErrorKind::InvalidInput, "quadrature tolerance must be positive");
    }
}

std::vector<Triangle> fan(const Polygon& poly)
{
    Point2 c{0.0, 0.0};
    for (const auto& p : poly) {
        c += p;
    }
    c /= double(poly.size());
    std::vector<Triangle> tris;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        Triangle t{c, poly[i], poly[(i + 1) % poly.size()]};
        if (t.area() > 0.0) {
            tris.push_back(t);
        }
    }
    return tris;
}

VectorQuadratureResult finish(Accumulator& acc)
{
    return {std::move(acc.value), acc.error, acc.evaluations};
}

VectorPointFunction lift(const PointFunction& g)
{
    return [&g](const Point2& x, std::span<double> out) { out[0] = g(x); };
}

QuadratureResult scalar(VectorQuadratureResult r)
{
    return {r.value[0], r.est_error, r.evaluations};
}

using Segment = Engine::Piece1;

VectorQuadratureResult integrate_segments(const std::vector<Segment>& segs, std::size_t components,
                                          const VectorPointFunction& g, const WeightSpec& w,
                                          double tol)
{
    Engine engine(components, g, w);
    Accumulator acc{std::vector<double>(components, 0.0), 0.0, 0};
    std::vector<Segment> live;
    for (const auto& s : segs) {
        if (s.scale > 0.0) {
            live.push_back(s);
        }
    }
    engine.segments(live, tol, acc);
    return finish(acc);
}

}  // namespace

void require_positive_weight(const Polygon& poly, const AffineMap2& f)
{
    for (std::size_t i = 0; i < poly.size(); ++i) {
        if (!(f(poly[i]) > 0.0)) {
            std::ostringstream os;
            os << "weight f = " << f(poly[i]) << " at vertex " << i << " is not positive";
            throw Error(ErrorKind::NonPositiveWeight, os.str());
        }
    }
}

VectorQuadratureResult integrate_polygon(const Polygon& poly, std::size_t components,
                                         const VectorPointFunction& g, const WeightSpec& w,
                                         double tol)
{
    check_tol(tol);
    if (w.k != 0.0) {
        require_positive_weight(poly, w.f);
    }
    Accumulator acc{std::vector<double>(components, 0.0), 0.0, 0};
    const auto tris = fan(poly);
    if (tris.empty()) {
        return finish(acc);
    }
    Engine engine(components, g, w);
    engine.triangles(tris, tol, acc);
    return finish(acc);
}

QuadratureResult integrate_polygon(const Polygon& poly, const PointFunction& g, const WeightSpec& w,
                                   double tol)
{
    return scalar(integrate_polygon(poly, 1, lift(g), w, tol));
}

VectorQuadratureResult integrate_segment(const Point2& a, const Point2& b, double scale,
                                         std::size_t components, const VectorPointFunction& g,
                                         const WeightSpec& w, double tol)
{
    check_tol(tol);
    if (w.k != 0.0) {
        require_positive_weight({a, b}, w.f);
    }
    return integrate_segments({{a, b, scale}}, components, g, w, tol);
}

QuadratureResult integrate_segment(const Point2& a, const Point2& b, double scale,
                                   const PointFunction& g, const WeightSpec& w, double tol)
{
    return scalar(integrate_segment(a, b, scale, 1, lift(g), w, tol));
}

VectorQuadratureResult integrate_interior(const LabelledPolytope2& poly, std::size_t components,
                                          const VectorPointFunction& g, const WeightSpec& w,
                                          double tol)
{
    // Fan from the area centroid rather than the vertex mean.
    check_tol(tol);
    if (w.k != 0.0) {
        require_positive_weight(poly.vertices(), w.f);
    }
    Accumulator acc{std::vector<double>(components, 0.0), 0.0, 0};
    Engine engine(components, g, w);
    std::vector<Triangle> tris;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        tris.push_back({poly.centroid(), poly.vertex(i), poly.vertex(i + 1)});
    }
    engine.triangles(tris, tol, acc);
    return finish(acc);
}

QuadratureResult integrate_interior(const LabelledPolytope2& poly, const PointFunction& g,
                                    const WeightSpec& w, double tol)
{
    return scalar(integrate_interior(poly, 1, lift(g), w, tol));
}

VectorQuadratureResult integrate_boundary(const LabelledPolytope2& poly, std::size_t components,
                                          const VectorPointFunction& g, const WeightSpec& w,
                                          double tol)
{
    check_tol(tol);
    if (w.k != 0.0) {
        require_positive_weight(poly.vertices(), w.f);
    }
    std::vector<Segment> segs;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const auto [a, b] = poly.edge(i);
        segs.push_back({a, b, poly.facet_mass(i)});
    }
    return integrate_segments(segs, components, g, w, tol);
}

QuadratureResult integrate_boundary(const LabelledPolytope2& poly, const PointFunction& g,
                                    const WeightSpec& w, double tol)
{
    return scalar(integrate_boundary(poly, 1, lift(g), w, tol));
}

}  // namespace torick
