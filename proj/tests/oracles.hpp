// Independent test-side oracles. These deliberately re-derive the geometric
// predicates with different code paths (rotated frames, brute enumeration)
// so the library implementations are checked against something they do not
// share.
#ifndef SOURCESEEK_TEST_ORACLES_HPP
#define SOURCESEEK_TEST_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "sourceseek/geometry.hpp"
#include "sourceseek/rng.hpp"

namespace oracles {

using seeker::Rng;
using seeker::Vec2;
using seeker::geom::Polygon;

inline double seg_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 ab = b - a;
    const double len2 = ab.squaredNorm();
    if (len2 == 0.0) return (p - a).norm();
    const double t = std::clamp(ab.dot(p - a) / len2, 0.0, 1.0);
    return (p - (a + t * ab)).norm();
}

inline bool on_boundary(const Vec2& p, const Polygon& poly, double eps = 1e-6) {
    const auto& v = poly.vertices;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (seg_distance(p, v[i], v[(i + 1) % v.size()]) <= eps) return true;
    return false;
}

// Even-odd crossing count in a frame rotated by `angle` around p.
inline bool even_odd_rotated(const Vec2& p, const Polygon& poly, double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    auto rot = [&](const Vec2& q) {
        const Vec2 d = q - p;
        return Vec2(c * d.x() + s * d.y(), -s * d.x() + c * d.y());
    };
    bool inside = false;
    const auto& v = poly.vertices;
    for (std::size_t i = 0, n = v.size(); i < n; ++i) {
        const Vec2 a = rot(v[i]);
        const Vec2 b = rot(v[(i + 1) % n]);
        if ((a.y() > 0.0) != (b.y() > 0.0)) {
            const double xint = a.x() - a.y() * (b.x() - a.x()) / (b.y() - a.y());
            if (xint > 0.0) inside = !inside;
        }
    }
    return inside;
}

inline bool inside_closed(const Vec2& p, const Polygon& poly, double angle = 0.5891) {
    return on_boundary(p, poly) || even_odd_rotated(p, poly, angle);
}

inline bool strictly_inside(const Vec2& p, const Polygon& poly, double angle = 0.5891) {
    return !on_boundary(p, poly) && even_odd_rotated(p, poly, angle);
}

// All parameters t where a + t(b-a) meets segment cd, brute solved.
inline void seg_params(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d,
                       std::vector<double>& ts) {
    const Vec2 r = b - a, s = d - c;
    const double denom = r.x() * s.y() - r.y() * s.x();
    const Vec2 ca = c - a;
    const double rlen = r.norm();
    if (rlen == 0.0) return;
    if (std::abs(denom) > 1e-12 * std::max(1.0, rlen * s.norm())) {
        const double t = (ca.x() * s.y() - ca.y() * s.x()) / denom;
        const double u = (ca.x() * r.y() - ca.y() * r.x()) / denom;
        const double tol_t = 1e-6 / rlen;
        const double tol_u = s.norm() > 0 ? 1e-6 / s.norm() : 0.0;
        if (t >= -tol_t && t <= 1 + tol_t && u >= -tol_u && u <= 1 + tol_u)
            ts.push_back(std::clamp(t, 0.0, 1.0));
        return;
    }
    if (std::abs(r.x() * ca.y() - r.y() * ca.x()) / rlen > 1e-6) return;
    double tc = r.dot(ca) / (rlen * rlen);
    double td = r.dot(d - a) / (rlen * rlen);
    if (tc > td) std::swap(tc, td);
    if (std::max(0.0, tc) <= std::min(1.0, td) + 1e-9) {
        ts.push_back(std::clamp(tc, 0.0, 1.0));
        ts.push_back(std::clamp(td, 0.0, 1.0));
    }
}

// Independent open-segment-vs-open-region test via span midpoints.
inline bool crosses_interior(const Vec2& a, const Vec2& b, const Polygon& poly) {
    if ((b - a).norm() <= 1e-6) return strictly_inside(a, poly);
    std::vector<double> ts{0.0, 1.0};
    const auto& v = poly.vertices;
    for (std::size_t i = 0; i < v.size(); ++i)
        seg_params(a, b, v[i], v[(i + 1) % v.size()], ts);
    std::sort(ts.begin(), ts.end());
    for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
        if (ts[i + 1] - ts[i] < 1e-9) continue;
        if (strictly_inside(a + 0.5 * (ts[i] + ts[i + 1]) * (b - a), poly)) return true;
    }
    return false;
}

// Does the closed axis-aligned square of half-width r centered at q meet the
// closed polygon region? This is exact membership in (polygon [+] square).
inline bool square_meets_polygon(const Vec2& q, double r, const Polygon& poly) {
    const Vec2 c0(q.x() - r, q.y() - r), c1(q.x() + r, q.y() - r),
        c2(q.x() + r, q.y() + r), c3(q.x() - r, q.y() + r);
    if (inside_closed(q, poly)) return true;
    auto in_square = [&](const Vec2& p) {
        return p.x() >= c0.x() - 1e-12 && p.x() <= c1.x() + 1e-12 &&
               p.y() >= c0.y() - 1e-12 && p.y() <= c2.y() + 1e-12;
    };
    for (const Vec2& p : poly.vertices)
        if (in_square(p)) return true;
    const Vec2 sq[4] = {c0, c1, c2, c3};
    const auto& v = poly.vertices;
    for (int e = 0; e < 4; ++e)
        for (std::size_t i = 0; i < v.size(); ++i) {
            std::vector<double> ts;
            seg_params(sq[e], sq[(e + 1) % 4], v[i], v[(i + 1) % v.size()], ts);
            if (!ts.empty()) return true;
        }
    return false;
}

// Minimum over all simple paths, ordered by (length, hops, lexicographic
// node sequence). Exhaustive DFS: only usable on tiny graphs.
struct BestPath {
    bool found = false;
    double length = std::numeric_limits<double>::infinity();
    std::vector<int> sequence;
};

inline void enumerate_paths(const std::vector<std::vector<std::pair<int, double>>>& adj,
                            int cur, int goal, double len, std::vector<int>& seq,
                            std::vector<bool>& visited, BestPath& best) {
    if (cur == goal) {
        const bool better =
            !best.found || len < best.length ||
            (len == best.length && (seq.size() < best.sequence.size() ||
                                    (seq.size() == best.sequence.size() &&
                                     seq < best.sequence)));
        if (better) {
            best.found = true;
            best.length = len;
            best.sequence = seq;
        }
        return;
    }
    for (const auto& [nxt, w] : adj[cur]) {
        if (visited[nxt]) continue;
        visited[nxt] = true;
        seq.push_back(nxt);
        enumerate_paths(adj, nxt, goal, len + w, seq, visited, best);
        seq.pop_back();
        visited[nxt] = false;
    }
}

inline BestPath brute_force_shortest(const seeker::geom::PathGraph& g, int start,
                                     int goal) {
    std::vector<std::vector<std::pair<int, double>>> adj(g.nodes.size());
    for (const auto& e : g.edges) {
        adj[e.u].emplace_back(e.v, e.length);
        adj[e.v].emplace_back(e.u, e.length);
    }
    BestPath best;
    std::vector<int> seq{start};
    std::vector<bool> visited(g.nodes.size(), false);
    visited[start] = true;
    enumerate_paths(adj, start, goal, 0.0, seq, visited, best);
    return best;
}

// Star-shaped simple polygon: sorted angles, varying radii. Concave when the
// radii differ enough.
inline Polygon star_polygon(Rng& rng, const Vec2& center, double r_min, double r_max,
                            int sides) {
    std::vector<double> angles(sides);
    for (int i = 0; i < sides; ++i)
        angles[i] = 2.0 * 3.14159265358979323846 * (i + 0.2 + 0.6 * rng.uniform01()) /
                    sides;
    std::vector<Vec2> pts;
    for (int i = 0; i < sides; ++i) {
        const double r = rng.uniform(r_min, r_max);
        pts.emplace_back(center.x() + r * std::cos(angles[i]),
                         center.y() + r * std::sin(angles[i]));
    }
    return seeker::geom::make_polygon(std::move(pts));
}

inline Polygon convex_polygon(Rng& rng, const Vec2& center, double radius, int sides) {
    return star_polygon(rng, center, radius, radius, sides);
}

} // namespace oracles

#endif
