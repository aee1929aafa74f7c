#ifndef SOURCESEEK_GEOMETRY_HPP
#define SOURCESEEK_GEOMETRY_HPP

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "sourceseek/errors.hpp"

namespace seeker {

/// All coordinates are millimeters.
using Vec2 = Eigen::Vector2d;

/// Coincidence tolerance in mm. Two points closer than this are treated as
/// the same point by every intersection predicate.
inline constexpr double kGeomEps = 1e-6;

/// Axis-aligned rectangle (the arena).
struct Rect {
    Vec2 lo{0.0, 0.0};
    Vec2 hi{0.0, 0.0};

    double width() const { return hi.x() - lo.x(); }
    double height() const { return hi.y() - lo.y(); }
    bool contains(const Vec2& p) const {
        return p.x() >= lo.x() && p.x() <= hi.x() && p.y() >= lo.y() && p.y() <= hi.y();
    }
    Vec2 clamp(const Vec2& p) const {
        return {std::min(std::max(p.x(), lo.x()), hi.x()),
                std::min(std::max(p.y(), lo.y()), hi.y())};
    }
};

namespace geom {

/// Simple polygon, counterclockwise vertex order. Use make_polygon to get a
/// validated, normalized instance.
struct Polygon {
    std::vector<Vec2> vertices;
};

/// Validates (finite coordinates, >= 3 vertices, nonzero area, simple) and
/// normalizes orientation to counterclockwise. Throws InvalidPolygon.
Polygon make_polygon(std::vector<Vec2> vertices);

double signed_area(const Polygon& poly);
double perimeter(const Polygon& poly);
bool is_simple(const Polygon& poly);
bool is_convex(const Polygon& poly);

/// Cross product of (b-a) x (c-a); > 0 when c lies left of a->b.
double orient(const Vec2& a, const Vec2& b, const Vec2& c);

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b);
bool point_on_segment(const Vec2& p, const Vec2& a, const Vec2& b);

/// Closed segments; any contact (crossing, touch, collinear overlap) counts.
bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d);

bool point_on_boundary(const Vec2& p, const Polygon& poly);
/// Closed-region membership: boundary counts as inside.
bool point_in_polygon(const Vec2& p, const Polygon& poly);
/// Open-region membership: boundary excluded.
bool point_strictly_inside(const Vec2& p, const Polygon& poly);

/// Closed segment vs closed polygon region (crossing, touching or fully
/// contained all count).
bool segment_intersects_polygon(const Vec2& a, const Vec2& b, const Polygon& poly);

/// True iff the open segment passes through the polygon interior. Contact
/// limited to the boundary (grazing along an edge, touching a vertex) does
/// not count. This is the visibility test.
bool segment_crosses_interior(const Vec2& a, const Vec2& b, const Polygon& poly);

/// Max pairwise vertex distance (attained at vertices for polygons).
double polygon_diameter(const Polygon& poly);

double distance_to_boundary(const Vec2& p, const Polygon& poly);
Vec2 closest_boundary_point(const Vec2& p, const Polygon& poly);

bool polygons_overlap(const Polygon& a, const Polygon& b);

/// Smallest t in [0,1] at which a + t(b-a) touches the polygon boundary.
std::optional<double> segment_boundary_hit(const Vec2& a, const Vec2& b,
                                           const Polygon& poly);

/// x_old must lie inside the rect. Returns x_old + v when that stays inside,
/// otherwise the boundary point in the direction of v (largest t in (0,1]
/// that keeps the point inside).
Vec2 confine_to_rect(const Vec2& x_old, const Vec2& v, const Rect& rect);

/// Fan triangulation by ear clipping; works for any simple polygon.
std::vector<Polygon> triangulate(const Polygon& poly);

/// Minkowski sum of the polygon with an axis-aligned square of half-width r
/// centered at the origin (the square robot footprint). Exact for convex
/// input; concave input is triangulated, each piece is summed exactly and
/// the union boundary is extracted.
Polygon inflate_polygon(const Polygon& poly, double r);

/// Undirected weighted graph over waypoint candidates.
struct PathGraph {
    struct Edge {
        int u = 0;
        int v = 0;
        double length = 0.0;
    };
    std::vector<Vec2> nodes; // nodes[0] = start, nodes[1] = goal
    std::vector<Edge> edges; // stored once with u < v
};

/// Nodes are start, goal and every obstacle vertex; an edge exists iff the
/// open segment between its endpoints crosses no obstacle interior (grazing
/// along obstacle edges is admitted). Throws StartInsideObstacle /
/// GoalInsideObstacle when an endpoint lies strictly inside an obstacle.
PathGraph build_visibility_graph(const Vec2& start, const Vec2& goal,
                                 const std::vector<Polygon>& obstacles);

struct PlannedPath {
    std::vector<Vec2> waypoints;
    double length = 0.0;
};

/// Dijkstra with deterministic tie-breaking: shortest length, then fewest
/// waypoints, then lexicographically smallest node-index sequence.
/// Throws NoPath when the goal is unreachable.
PlannedPath shortest_path(const PathGraph& graph, int start_index, int goal_index);

} // namespace geom
} // namespace seeker

#endif
