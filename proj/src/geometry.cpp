#include "sourceseek/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <queue>

namespace seeker::geom {

namespace {

constexpr double kPi = 3.14159265358979323846;

double edge_scale(const Vec2& a, const Vec2& b, const Vec2& c) {
    return (b - a).norm() + (c - b).norm();
}

// Disjoint bounding boxes (with tolerance) cannot intersect; cheap reject.
bool bbox_disjoint(const Vec2& a, const Vec2& b, const Polygon& poly) {
    double lo_x = std::min(a.x(), b.x()) - kGeomEps;
    double hi_x = std::max(a.x(), b.x()) + kGeomEps;
    double lo_y = std::min(a.y(), b.y()) - kGeomEps;
    double hi_y = std::max(a.y(), b.y()) + kGeomEps;
    double p_lo_x = std::numeric_limits<double>::infinity(), p_hi_x = -p_lo_x;
    double p_lo_y = p_lo_x, p_hi_y = -p_lo_x;
    for (const Vec2& v : poly.vertices) {
        p_lo_x = std::min(p_lo_x, v.x());
        p_hi_x = std::max(p_hi_x, v.x());
        p_lo_y = std::min(p_lo_y, v.y());
        p_hi_y = std::max(p_hi_y, v.y());
    }
    return hi_x < p_lo_x || lo_x > p_hi_x || hi_y < p_lo_y || lo_y > p_hi_y;
}

// Sign of orient() with a distance-based tolerance: zero when c lies within
// kGeomEps of the line through a-b.
int orient_sign(const Vec2& a, const Vec2& b, const Vec2& c) {
    const double len = (b - a).norm();
    const double v = orient(a, b, c);
    if (std::abs(v) <= kGeomEps * std::max(len, 1.0)) return 0;
    return v > 0 ? 1 : -1;
}

// Appends every parameter t in [0,1] at which a + t(b-a) meets segment cd.
// A collinear overlap contributes both overlap endpoints.
void append_intersection_params(const Vec2& a, const Vec2& b, const Vec2& c,
                                const Vec2& d, std::vector<double>& ts) {
    const Vec2 r = b - a;
    const Vec2 s = d - c;
    const double rlen = r.norm();
    const double slen = s.norm();
    if (rlen <= kGeomEps) return;
    const double denom = r.x() * s.y() - r.y() * s.x();
    const Vec2 ca = c - a;
    if (std::abs(denom) > 1e-12 * std::max(rlen * slen, 1.0)) {
        const double t = (ca.x() * s.y() - ca.y() * s.x()) / denom;
        const double u = (ca.x() * r.y() - ca.y() * r.x()) / denom;
        const double tol_t = kGeomEps / rlen;
        const double tol_u = slen > kGeomEps ? kGeomEps / slen : 0.0;
        if (t >= -tol_t && t <= 1.0 + tol_t && u >= -tol_u && u <= 1.0 + tol_u) {
            ts.push_back(std::clamp(t, 0.0, 1.0));
        }
        return;
    }
    // parallel: collinear only when cd lies on the ab line
    const double h = std::abs(r.x() * ca.y() - r.y() * ca.x()) / rlen;
    if (h > kGeomEps) return;
    double tc = r.dot(ca) / (rlen * rlen);
    double td = r.dot(d - a) / (rlen * rlen);
    if (tc > td) std::swap(tc, td);
    const double lo = std::max(0.0, tc);
    const double hi = std::min(1.0, td);
    if (lo <= hi + kGeomEps / rlen) {
        ts.push_back(std::clamp(lo, 0.0, 1.0));
        ts.push_back(std::clamp(hi, 0.0, 1.0));
    }
}

// Even-odd crossing count; boundary handling is the caller's business.
bool even_odd_inside(const Vec2& p, const Polygon& poly) {
    bool inside = false;
    const auto& v = poly.vertices;
    const std::size_t n = v.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2& a = v[j];
        const Vec2& b = v[i];
        if ((a.y() > p.y()) != (b.y() > p.y())) {
            const double xint =
                a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
            if (p.x() < xint) inside = !inside;
        }
    }
    return inside;
}

void drop_redundant_vertices(std::vector<Vec2>& v) {
    // coincident neighbours
    std::vector<Vec2> out;
    for (const Vec2& p : v) {
        if (out.empty() || (p - out.back()).norm() > kGeomEps) out.push_back(p);
    }
    while (out.size() > 1 && (out.front() - out.back()).norm() <= kGeomEps)
        out.pop_back();
    // collinear middles (same heading only)
    bool changed = true;
    while (changed && out.size() > 3) {
        changed = false;
        for (std::size_t i = 0; i < out.size(); ++i) {
            const Vec2& a = out[(i + out.size() - 1) % out.size()];
            const Vec2& b = out[i];
            const Vec2& c = out[(i + 1) % out.size()];
            if (orient_sign(a, c, b) == 0 && (b - a).dot(c - b) > 0.0) {
                out.erase(out.begin() + static_cast<std::ptrdiff_t>(i));
                changed = true;
                break;
            }
        }
    }
    v = std::move(out);
}

} // namespace

double orient(const Vec2& a, const Vec2& b, const Vec2& c) {
    return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}

double signed_area(const Polygon& poly) {
    const auto& v = poly.vertices;
    double s = 0.0;
    for (std::size_t i = 0, n = v.size(); i < n; ++i) {
        const Vec2& a = v[i];
        const Vec2& b = v[(i + 1) % n];
        s += a.x() * b.y() - b.x() * a.y();
    }
    return 0.5 * s;
}

double perimeter(const Polygon& poly) {
    const auto& v = poly.vertices;
    double s = 0.0;
    for (std::size_t i = 0, n = v.size(); i < n; ++i)
        s += (v[(i + 1) % n] - v[i]).norm();
    return s;
}

namespace {

double point_segment_distance2(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 ab = b - a;
    const double len2 = ab.squaredNorm();
    if (len2 <= kGeomEps * kGeomEps) return (p - a).squaredNorm();
    const double t = std::clamp(ab.dot(p - a) / len2, 0.0, 1.0);
    return (p - (a + t * ab)).squaredNorm();
}

} // namespace

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
    return std::sqrt(point_segment_distance2(p, a, b));
}

bool point_on_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
    return point_segment_distance2(p, a, b) <= kGeomEps * kGeomEps;
}

bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
    const int d1 = orient_sign(c, d, a);
    const int d2 = orient_sign(c, d, b);
    const int d3 = orient_sign(a, b, c);
    const int d4 = orient_sign(a, b, d);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
        ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
        return true;
    return (d1 == 0 && point_on_segment(a, c, d)) ||
           (d2 == 0 && point_on_segment(b, c, d)) ||
           (d3 == 0 && point_on_segment(c, a, b)) ||
           (d4 == 0 && point_on_segment(d, a, b));
}

bool point_on_boundary(const Vec2& p, const Polygon& poly) {
    if (bbox_disjoint(p, p, poly)) return false;
    const auto& v = poly.vertices;
    for (std::size_t i = 0, n = v.size(); i < n; ++i)
        if (point_on_segment(p, v[i], v[(i + 1) % n])) return true;
    return false;
}

bool point_in_polygon(const Vec2& p, const Polygon& poly) {
    if (point_on_boundary(p, poly)) return true;
    return even_odd_inside(p, poly);
}

bool point_strictly_inside(const Vec2& p, const Polygon& poly) {
    if (point_on_boundary(p, poly)) return false;
    return even_odd_inside(p, poly);
}

bool segment_intersects_polygon(const Vec2& a, const Vec2& b, const Polygon& poly) {
    if (bbox_disjoint(a, b, poly)) return false;
    if (point_in_polygon(a, poly) || point_in_polygon(b, poly)) return true;
    const auto& v = poly.vertices;
    for (std::size_t i = 0, n = v.size(); i < n; ++i)
        if (segments_intersect(a, b, v[i], v[(i + 1) % n])) return true;
    return false;
}

bool segment_crosses_interior(const Vec2& a, const Vec2& b, const Polygon& poly) {
    if (bbox_disjoint(a, b, poly)) return false;
    const double len = (b - a).norm();
    if (len <= kGeomEps) return point_strictly_inside(a, poly);

    static thread_local std::vector<double> ts;
    ts.assign({0.0, 1.0});
    const auto& v = poly.vertices;
    for (std::size_t i = 0, n = v.size(); i < n; ++i)
        append_intersection_params(a, b, v[i], v[(i + 1) % n], ts);
    std::sort(ts.begin(), ts.end());
    const double tol = std::max(1e-12, kGeomEps / len);
    for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
        if (ts[i + 1] - ts[i] <= tol) continue;
        const Vec2 mid = a + 0.5 * (ts[i] + ts[i + 1]) * (b - a);
        if (point_strictly_inside(mid, poly)) return true;
    }
    return false;
}

double polygon_diameter(const Polygon& poly) {
    const auto& v = poly.vertices;
    double best = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = i + 1; j < v.size(); ++j)
            best = std::max(best, (v[i] - v[j]).norm());
    return best;
}

double distance_to_boundary(const Vec2& p, const Polygon& poly) {
    const auto& v = poly.vertices;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0, n = v.size(); i < n; ++i)
        best = std::min(best, point_segment_distance(p, v[i], v[(i + 1) % n]));
    return best;
}

Vec2 closest_boundary_point(const Vec2& p, const Polygon& poly) {
    const auto& v = poly.vertices;
    double best = std::numeric_limits<double>::infinity();
    Vec2 out = v.front();
    for (std::size_t i = 0, n = v.size(); i < n; ++i) {
        const Vec2& a = v[i];
        const Vec2& b = v[(i + 1) % n];
        const Vec2 ab = b - a;
        const double len2 = ab.squaredNorm();
        const double t = len2 > 0 ? std::clamp(ab.dot(p - a) / len2, 0.0, 1.0) : 0.0;
        const Vec2 q = a + t * ab;
        const double d = (p - q).norm();
        if (d < best) {
            best = d;
            out = q;
        }
    }
    return out;
}

bool polygons_overlap(const Polygon& a, const Polygon& b) {
    for (const Vec2& p : a.vertices)
        if (point_in_polygon(p, b)) return true;
    for (const Vec2& p : b.vertices)
        if (point_in_polygon(p, a)) return true;
    const auto& va = a.vertices;
    const auto& vb = b.vertices;
    for (std::size_t i = 0; i < va.size(); ++i)
        for (std::size_t j = 0; j < vb.size(); ++j)
            if (segments_intersect(va[i], va[(i + 1) % va.size()], vb[j],
                                   vb[(j + 1) % vb.size()]))
                return true;
    return false;
}

bool is_simple(const Polygon& poly) {
    const auto& v = poly.vertices;
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a = v[i];
        const Vec2& b = v[(i + 1) % n];
        for (std::size_t j = i + 1; j < n; ++j) {
            const Vec2& c = v[j];
            const Vec2& d = v[(j + 1) % n];
            const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
            if (adjacent) {
                // neighbours may only touch at the shared vertex
                if (j == i + 1) {
                    if (point_on_segment(a, c, d) && (a - c).norm() > kGeomEps &&
                        (a - d).norm() > kGeomEps)
                        return false;
                    if (point_on_segment(d, a, b) && (d - a).norm() > kGeomEps &&
                        (d - b).norm() > kGeomEps)
                        return false;
                } else {
                    if (point_on_segment(b, c, d) && (b - c).norm() > kGeomEps &&
                        (b - d).norm() > kGeomEps)
                        return false;
                    if (point_on_segment(c, a, b) && (c - a).norm() > kGeomEps &&
                        (c - b).norm() > kGeomEps)
                        return false;
                }
                continue;
            }
            if (segments_intersect(a, b, c, d)) return false;
        }
    }
    return true;
}

bool is_convex(const Polygon& poly) {
    const auto& v = poly.vertices;
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a = v[(i + n - 1) % n];
        const Vec2& b = v[i];
        const Vec2& c = v[(i + 1) % n];
        if (orient(a, b, c) < -kGeomEps * edge_scale(a, b, c)) return false;
    }
    return true;
}

Polygon make_polygon(std::vector<Vec2> vertices) {
    for (const Vec2& p : vertices)
        if (!p.allFinite()) throw InvalidPolygon("polygon vertex is not finite");
    drop_redundant_vertices(vertices);
    if (vertices.size() < 3)
        throw InvalidPolygon("polygon needs at least 3 distinct vertices");
    Polygon poly{std::move(vertices)};
    const double area = signed_area(poly);
    if (std::abs(area) <= 0.5 * kGeomEps * perimeter(poly))
        throw InvalidPolygon("polygon is degenerate (zero area)");
    if (area < 0.0) std::reverse(poly.vertices.begin(), poly.vertices.end());
    if (!is_simple(poly)) throw InvalidPolygon("polygon is self-intersecting");
    return poly;
}

std::vector<Polygon> triangulate(const Polygon& poly) {
    const auto& v = poly.vertices;
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<Polygon> tris;

    auto triangle_blocks = [&](const Vec2& a, const Vec2& b, const Vec2& c,
                               const Vec2& p) {
        // closed-triangle membership; a point on the ear chord blocks it
        return orient_sign(a, b, p) >= 0 && orient_sign(b, c, p) >= 0 &&
               orient_sign(c, a, p) >= 0;
    };

    while (idx.size() > 3) {
        bool clipped = false;
        for (std::size_t k = 0; k < idx.size() && !clipped; ++k) {
            const std::size_t m = idx.size();
            const Vec2& a = v[idx[(k + m - 1) % m]];
            const Vec2& b = v[idx[k]];
            const Vec2& c = v[idx[(k + 1) % m]];
            const int s = orient_sign(a, b, c);
            if (s == 0) {
                if (point_on_segment(b, a, c)) { // straight corner, drop it
                    idx.erase(idx.begin() + static_cast<std::ptrdiff_t>(k));
                    clipped = true;
                }
                continue;
            }
            if (s < 0) continue; // reflex
            bool blocked = false;
            for (std::size_t t = 0; t < m && !blocked; ++t) {
                if (t == k || t == (k + m - 1) % m || t == (k + 1) % m) continue;
                blocked = triangle_blocks(a, b, c, v[idx[t]]);
            }
            if (!blocked) {
                tris.push_back(Polygon{{a, b, c}});
                idx.erase(idx.begin() + static_cast<std::ptrdiff_t>(k));
                clipped = true;
            }
        }
        if (!clipped)
            throw InvalidPolygon("triangulation failed; polygon is degenerate");
    }
    tris.push_back(Polygon{{v[idx[0]], v[idx[1]], v[idx[2]]}});
    return tris;
}

namespace {

// Exact Minkowski sum of a convex CCW polygon with the axis-aligned square
// of half-width r: merge both edge cycles by direction angle.
Polygon convex_minkowski_square(const Polygon& poly, double r) {
    const auto& v = poly.vertices;
    const std::size_t n = v.size();

    std::size_t start = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (v[i].y() < v[start].y() - kGeomEps ||
            (std::abs(v[i].y() - v[start].y()) <= kGeomEps && v[i].x() < v[start].x()))
            start = i;
    }

    auto unwrapped_angles = [](const std::vector<Vec2>& edges) {
        std::vector<double> ang(edges.size());
        double prev = 0.0;
        for (std::size_t i = 0; i < edges.size(); ++i) {
            double a = std::atan2(edges[i].y(), edges[i].x());
            if (a < -1e-12) a += 2.0 * kPi;
            while (i > 0 && a < prev - 1e-12) a += 2.0 * kPi;
            ang[i] = a;
            prev = a;
        }
        return ang;
    };

    std::vector<Vec2> pe(n);
    for (std::size_t i = 0; i < n; ++i)
        pe[i] = v[(start + i + 1) % n] - v[(start + i) % n];
    const std::vector<Vec2> se = {{2 * r, 0}, {0, 2 * r}, {-2 * r, 0}, {0, -2 * r}};
    const std::vector<double> pa = unwrapped_angles(pe);
    const std::vector<double> sa = unwrapped_angles(se);

    std::vector<Vec2> out;
    Vec2 cur = v[start] + Vec2(-r, -r);
    out.push_back(cur);
    std::size_t i = 0, j = 0;
    while (i < pe.size() || j < se.size()) {
        Vec2 e;
        if (j >= se.size() || (i < pe.size() && pa[i] <= sa[j])) {
            e = pe[i++];
        } else {
            e = se[j++];
        }
        cur += e;
        out.push_back(cur);
    }
    out.pop_back(); // closes back onto the start
    drop_redundant_vertices(out);
    return Polygon{std::move(out)};
}

struct DirEdge {
    Vec2 a;
    Vec2 b;
};

std::int64_t quant(double x) {
    return static_cast<std::int64_t>(std::llround(x / (4.0 * kGeomEps)));
}

std::pair<std::int64_t, std::int64_t> qkey(const Vec2& p) {
    return {quant(p.x()), quant(p.y())};
}

// Boundary of the union of CCW convex pieces, assuming the union is simply
// connected (true for Minkowski sums of a simple polygon with a square).
Polygon union_boundary(const std::vector<Polygon>& pieces) {
    const double delta = 16.0 * kGeomEps;
    std::vector<DirEdge> kept;

    for (std::size_t pi = 0; pi < pieces.size(); ++pi) {
        const auto& v = pieces[pi].vertices;
        for (std::size_t e = 0; e < v.size(); ++e) {
            const Vec2& a = v[e];
            const Vec2& b = v[(e + 1) % v.size()];
            const double len = (b - a).norm();
            if (len <= kGeomEps) continue;
            std::vector<double> ts{0.0, 1.0};
            for (std::size_t pj = 0; pj < pieces.size(); ++pj) {
                if (pj == pi) continue;
                const auto& w = pieces[pj].vertices;
                for (std::size_t f = 0; f < w.size(); ++f)
                    append_intersection_params(a, b, w[f], w[(f + 1) % w.size()], ts);
            }
            std::sort(ts.begin(), ts.end());
            const Vec2 dir = (b - a) / len;
            const Vec2 right(dir.y(), -dir.x()); // interior is left of a CCW edge
            for (std::size_t s = 0; s + 1 < ts.size(); ++s) {
                if ((ts[s + 1] - ts[s]) * len <= 4.0 * kGeomEps) continue;
                const Vec2 mid = a + 0.5 * (ts[s] + ts[s + 1]) * (b - a);
                const Vec2 probe = mid + delta * right;
                bool covered = false;
                for (const Polygon& q : pieces) {
                    if (point_in_polygon(probe, q)) {
                        covered = true;
                        break;
                    }
                }
                if (!covered)
                    kept.push_back({a + ts[s] * (b - a), a + ts[s + 1] * (b - a)});
            }
        }
    }
    if (kept.empty()) throw InvalidPolygon("union boundary extraction failed");

    // collapse duplicates from coincident collinear boundaries
    std::map<std::array<std::int64_t, 4>, std::size_t> seen;
    std::vector<DirEdge> edges;
    for (const DirEdge& e : kept) {
        const auto ka = qkey(e.a);
        const auto kb = qkey(e.b);
        const std::array<std::int64_t, 4> key{ka.first, ka.second, kb.first, kb.second};
        if (seen.emplace(key, edges.size()).second) edges.push_back(e);
    }

    std::multimap<std::pair<std::int64_t, std::int64_t>, std::size_t> by_start;
    for (std::size_t i = 0; i < edges.size(); ++i) by_start.emplace(qkey(edges[i].a), i);

    std::vector<bool> used(edges.size(), false);
    std::vector<std::vector<Vec2>> loops;
    for (std::size_t s = 0; s < edges.size(); ++s) {
        if (used[s]) continue;
        std::vector<Vec2> loop;
        std::size_t cur = s;
        for (std::size_t guard = 0; guard <= edges.size(); ++guard) {
            used[cur] = true;
            loop.push_back(edges[cur].a);
            const Vec2 in_dir = (edges[cur].b - edges[cur].a).normalized();
            const auto range = by_start.equal_range(qkey(edges[cur].b));
            std::size_t next = edges.size();
            double best_turn = std::numeric_limits<double>::infinity();
            for (auto it = range.first; it != range.second; ++it) {
                const std::size_t cand = it->second;
                if (used[cand] && cand != s) continue;
                const Vec2 out_dir = (edges[cand].b - edges[cand].a).normalized();
                // turn angle in (-pi, pi]; pick the most clockwise branch
                double turn = std::atan2(in_dir.x() * out_dir.y() - in_dir.y() * out_dir.x(),
                                         in_dir.dot(out_dir));
                if (turn > kPi - 1e-9) turn = -kPi; // a full reverse is last resort
                if (turn < best_turn) {
                    best_turn = turn;
                    next = cand;
                }
            }
            if (next == edges.size()) break;
            if (next == s) break; // closed
            cur = next;
        }
        if (loop.size() >= 3) loops.push_back(std::move(loop));
    }
    if (loops.empty()) throw InvalidPolygon("union boundary extraction failed");

    std::size_t best = 0;
    double best_area = -1.0;
    for (std::size_t i = 0; i < loops.size(); ++i) {
        const double a = std::abs(signed_area(Polygon{loops[i]}));
        if (a > best_area) {
            best_area = a;
            best = i;
        }
    }
    std::vector<Vec2> out = std::move(loops[best]);
    drop_redundant_vertices(out);
    if (out.size() < 3) throw InvalidPolygon("union boundary extraction failed");
    Polygon result{std::move(out)};
    if (signed_area(result) < 0.0)
        std::reverse(result.vertices.begin(), result.vertices.end());
    return result;
}

} // namespace

std::optional<double> segment_boundary_hit(const Vec2& a, const Vec2& b,
                                           const Polygon& poly) {
    std::vector<double> ts;
    const auto& v = poly.vertices;
    for (std::size_t i = 0, n = v.size(); i < n; ++i)
        append_intersection_params(a, b, v[i], v[(i + 1) % n], ts);
    if (ts.empty()) return std::nullopt;
    return *std::min_element(ts.begin(), ts.end());
}

Vec2 confine_to_rect(const Vec2& x_old, const Vec2& v, const Rect& rect) {
    const Vec2 target = x_old + v;
    if (rect.contains(target)) return target;
    double t = 1.0;
    if (v.x() > 0.0)
        t = std::min(t, (rect.hi.x() - x_old.x()) / v.x());
    else if (v.x() < 0.0)
        t = std::min(t, (rect.lo.x() - x_old.x()) / v.x());
    if (v.y() > 0.0)
        t = std::min(t, (rect.hi.y() - x_old.y()) / v.y());
    else if (v.y() < 0.0)
        t = std::min(t, (rect.lo.y() - x_old.y()) / v.y());
    t = std::max(t, 0.0);
    return rect.clamp(x_old + t * v);
}

Polygon inflate_polygon(const Polygon& poly, double r) {
    if (r < 0.0) throw InvalidConfig("inflation radius must be >= 0");
    if (r == 0.0) return poly;
    if (is_convex(poly)) return convex_minkowski_square(poly, r);
    std::vector<Polygon> pieces;
    for (const Polygon& tri : triangulate(poly))
        pieces.push_back(convex_minkowski_square(tri, r));
    return union_boundary(pieces);
}

PathGraph build_visibility_graph(const Vec2& start, const Vec2& goal,
                                 const std::vector<Polygon>& obstacles) {
    for (const Polygon& obs : obstacles) {
        if (point_strictly_inside(start, obs))
            throw StartInsideObstacle("visibility graph start lies inside an obstacle");
        if (point_strictly_inside(goal, obs))
            throw GoalInsideObstacle("visibility graph goal lies inside an obstacle");
    }

    PathGraph g;
    g.nodes.push_back(start);
    g.nodes.push_back(goal);
    for (const Polygon& obs : obstacles)
        for (const Vec2& p : obs.vertices) g.nodes.push_back(p);

    struct Box {
        double lx, hx, ly, hy;
    };
    std::vector<Box> boxes;
    boxes.reserve(obstacles.size());
    for (const Polygon& obs : obstacles) {
        Box b{1e300, -1e300, 1e300, -1e300};
        for (const Vec2& p : obs.vertices) {
            b.lx = std::min(b.lx, p.x());
            b.hx = std::max(b.hx, p.x());
            b.ly = std::min(b.ly, p.y());
            b.hy = std::max(b.hy, p.y());
        }
        boxes.push_back(b);
    }

    const int n = static_cast<int>(g.nodes.size());
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const Vec2& a = g.nodes[i];
            const Vec2& b = g.nodes[j];
            const double lx = std::min(a.x(), b.x()) - kGeomEps;
            const double hx = std::max(a.x(), b.x()) + kGeomEps;
            const double ly = std::min(a.y(), b.y()) - kGeomEps;
            const double hy = std::max(a.y(), b.y()) + kGeomEps;
            bool blocked = false;
            if ((b - a).norm() <= kGeomEps) {
                for (const Polygon& obs : obstacles)
                    if (point_strictly_inside(a, obs)) {
                        blocked = true;
                        break;
                    }
            } else {
                for (std::size_t o = 0; o < obstacles.size(); ++o) {
                    const Box& bb = boxes[o];
                    if (hx < bb.lx || lx > bb.hx || hy < bb.ly || ly > bb.hy) continue;
                    if (segment_crosses_interior(a, b, obstacles[o])) {
                        blocked = true;
                        break;
                    }
                }
            }
            if (!blocked) g.edges.push_back({i, j, (b - a).norm()});
        }
    }
    return g;
}

PlannedPath shortest_path(const PathGraph& graph, int start_index, int goal_index) {
    const int n = static_cast<int>(graph.nodes.size());
    if (start_index < 0 || start_index >= n || goal_index < 0 || goal_index >= n)
        throw InvalidConfig("shortest_path: node index out of range");

    std::vector<std::vector<std::pair<int, double>>> adj(n);
    for (const auto& e : graph.edges) {
        adj[e.u].emplace_back(e.v, e.length);
        adj[e.v].emplace_back(e.u, e.length);
    }

    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(n, kInf);
    std::vector<int> hops(n, std::numeric_limits<int>::max());
    std::vector<int> parent(n, -1);

    auto sequence_of = [&](int node, int extra) {
        std::vector<int> seq;
        if (extra >= 0) seq.push_back(extra);
        for (int c = node; c != -1; c = parent[c]) seq.push_back(c);
        std::reverse(seq.begin(), seq.end());
        return seq;
    };

    using QItem = std::tuple<double, int, int>; // dist, hops, node
    std::priority_queue<QItem, std::vector<QItem>, std::greater<>> pq;
    dist[start_index] = 0.0;
    hops[start_index] = 0;
    pq.emplace(0.0, 0, start_index);

    while (!pq.empty()) {
        const auto [d, h, u] = pq.top();
        pq.pop();
        if (d > dist[u] || (d == dist[u] && h > hops[u])) continue;
        for (const auto& [v, w] : adj[u]) {
            const double nd = d + w;
            const int nh = h + 1;
            bool better = false;
            if (nd < dist[v]) {
                better = true;
            } else if (nd == dist[v]) {
                if (nh < hops[v]) {
                    better = true;
                } else if (nh == hops[v] && parent[v] != u) {
                    better = sequence_of(u, v) < sequence_of(v, -1);
                }
            }
            if (better) {
                dist[v] = nd;
                hops[v] = nh;
                parent[v] = u;
                pq.emplace(nd, nh, v);
            }
        }
    }

    if (!(dist[goal_index] < kInf))
        throw NoPath("no path between the requested graph nodes");

    PlannedPath path;
    for (int c = goal_index; c != -1; c = parent[c])
        path.waypoints.push_back(graph.nodes[c]);
    std::reverse(path.waypoints.begin(), path.waypoints.end());
    path.length = 0.0;
    for (std::size_t i = 0; i + 1 < path.waypoints.size(); ++i)
        path.length += (path.waypoints[i + 1] - path.waypoints[i]).norm();
    return path;
}

} // namespace seeker::geom
