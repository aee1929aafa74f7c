#include "sourceseek/avoidance.hpp"

#include <algorithm>
#include <cmath>

namespace seeker::avoid {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Deterministic tiny offset for coincident endpoints; the force formula
// divides by the pair distance.
Vec2 coincidence_offset(int seeker, int sweep) {
    const std::uint64_t h =
        splitmix64(0xc01dc01dull ^ (static_cast<std::uint64_t>(seeker) << 32) ^
                   static_cast<std::uint64_t>(sweep));
    const double angle = 2.0 * kPi * (static_cast<double>(h >> 11) * 0x1.0p-53);
    return 1e-3 * Vec2(std::cos(angle), std::sin(angle));
}

// Push a point that ended up strictly inside `poly` back outside, preferably
// along `dir` (the net force direction), falling back to the nearest
// boundary point.
Vec2 project_out(const Vec2& p, const Vec2& dir, const geom::Polygon& poly,
                 double reach) {
    if (dir.norm() > kGeomEps) {
        const Vec2 u = dir.normalized();
        const int steps = 64;
        for (int s = 1; s <= steps; ++s) {
            const Vec2 q = p + u * (reach * s / steps);
            if (!geom::point_strictly_inside(q, poly)) return q;
        }
    }
    const Vec2 b = geom::closest_boundary_point(p, poly);
    Vec2 out_dir = b - p;
    if (out_dir.norm() <= kGeomEps) out_dir = Vec2(1.0, 0.0);
    return b + out_dir.normalized() * 1e-3;
}

} // namespace

Obstacle make_obstacle(geom::Polygon shape) {
    Obstacle o;
    o.diameter = geom::polygon_diameter(shape);
    o.shape = std::move(shape);
    return o;
}

World make_world(std::vector<geom::Polygon> shapes, const Rect& arena,
                 StaticStrategy strategy, const DynamicConfig& dynamic) {
    if (arena.width() <= 0.0 || arena.height() <= 0.0)
        throw InvalidConfig("world arena must have positive extent");
    if (dynamic.robot_radius <= 0.0)
        throw InvalidConfig("robot_radius must be > 0");
    if (dynamic.force_scale <= 0.0 || dynamic.force_scale > 1.0)
        throw InvalidConfig("force_scale must lie in (0, 1]");
    if (dynamic.max_force_iterations < 1)
        throw InvalidConfig("max_force_iterations must be >= 1");

    World w;
    w.arena = arena;
    w.static_strategy = strategy;
    w.dynamic = dynamic;
    for (auto& shape : shapes) {
        for (const Vec2& p : shape.vertices)
            if (!arena.contains(p))
                throw InvalidConfig("obstacle polygon lies outside the arena");
        w.inflated.push_back(geom::inflate_polygon(shape, dynamic.robot_radius));
        w.obstacles.push_back(make_obstacle(std::move(shape)));
    }
    for (std::size_t i = 0; i < w.obstacles.size() && !w.overlapping_obstacles; ++i)
        for (std::size_t j = i + 1; j < w.obstacles.size(); ++j)
            if (geom::polygons_overlap(w.obstacles[i].shape, w.obstacles[j].shape)) {
                w.overlapping_obstacles = true;
                break;
            }
    return w;
}

std::optional<int> check_static_collision(const Vec2& x_from, const Vec2& x_to,
                                          const World& world) {
    for (std::size_t i = 0; i < world.obstacles.size(); ++i)
        if (geom::segment_intersects_polygon(x_from, x_to, world.obstacles[i].shape))
            return static_cast<int>(i);
    return std::nullopt;
}

Vec2 strategy_random_step(const Vec2& x, const Obstacle& obstacle, const World& world,
                          Rng& rng, int max_retries) {
    for (int attempt = 0; attempt < max_retries; ++attempt) {
        const double angle = rng.uniform(0.0, 2.0 * kPi);
        const Vec2 step = obstacle.diameter * Vec2(std::cos(angle), std::sin(angle));
        const Vec2 end = geom::confine_to_rect(x, step, world.arena);
        bool clear = true;
        for (const Obstacle& obs : world.obstacles) {
            if (geom::segment_intersects_polygon(x, end, obs.shape)) {
                clear = false;
                break;
            }
        }
        if (clear) return end;
    }
    return x; // stay put this iteration
}

BugTraversal bug1_traverse(const Vec2& x, const Vec2& intended, int obstacle_index,
                           const World& world, const field::SignalField& field,
                           double sample_step_mm) {
    const geom::Polygon& boundary = world.inflated.at(static_cast<std::size_t>(obstacle_index));
    const auto& v = boundary.vertices;
    const std::size_t n = v.size();

    BugTraversal out;

    if (geom::point_in_polygon(x, boundary)) {
        out.contact = geom::closest_boundary_point(x, boundary);
    } else if (auto t = geom::segment_boundary_hit(x, intended, boundary)) {
        out.contact = x + *t * (intended - x);
    } else {
        out.contact = geom::closest_boundary_point(x, boundary);
    }
    const double approach = (x - out.contact).norm();

    // locate the edge the contact sits on
    std::size_t contact_edge = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const double d =
            geom::point_segment_distance(out.contact, v[i], v[(i + 1) % n]);
        if (d < best_dist) {
            best_dist = d;
            contact_edge = i;
        }
    }

    // closed walk: contact -> following corners CCW -> contact
    std::vector<Vec2> walk{out.contact};
    for (std::size_t i = 1; i <= n; ++i) walk.push_back(v[(contact_edge + i) % n]);
    walk.push_back(out.contact);

    const double step = std::max(sample_step_mm, 10.0 * kGeomEps);

    struct Sample {
        Vec2 point;
        double cost;
        double arc; // distance from contact along the walk
    };
    std::vector<Sample> samples;
    std::vector<std::pair<Vec2, double>> vertex_arcs; // corners passed

    auto try_sample = [&](const Vec2& p, double arc) {
        if (field.arena.contains(p))
            samples.push_back({p, field::cost(field, p), arc});
    };

    try_sample(out.contact, 0.0);

    double arc = 0.0;
    for (std::size_t s = 0; s + 1 < walk.size(); ++s) {
        const Vec2& p0 = walk[s];
        const Vec2& p1 = walk[s + 1];
        const double len = (p1 - p0).norm();
        for (double d = step; d < len - 10.0 * kGeomEps; d += step)
            try_sample(p0 + (p1 - p0) * (d / len), arc + d);
        arc += len;
        if (s + 2 < walk.size()) { // every corner; the final contact is not resampled
            vertex_arcs.emplace_back(p1, arc);
            try_sample(p1, arc);
        }
    }
    const double perim = arc; // equals the polygon perimeter

    // minimum-cost sample; ties resolved by earliest arc position
    std::size_t best = 0;
    for (std::size_t i = 1; i < samples.size(); ++i)
        if (samples[i].cost < samples[best].cost) best = i;

    out.best_point = samples[best].point;
    const double s_best = samples[best].arc;
    const bool forward = s_best <= perim - s_best;
    const double return_arc = forward ? s_best : perim - s_best;

    out.return_path.waypoints.push_back(out.contact);
    if (forward) {
        for (const auto& [corner, carc] : vertex_arcs) {
            if (carc < s_best - 10.0 * kGeomEps)
                out.return_path.waypoints.push_back(corner);
        }
    } else {
        for (auto it = vertex_arcs.rbegin(); it != vertex_arcs.rend(); ++it) {
            if (it->second > s_best + 10.0 * kGeomEps)
                out.return_path.waypoints.push_back(it->first);
        }
    }
    out.return_path.waypoints.push_back(out.best_point);
    out.return_path.length = 0.0;
    for (std::size_t i = 0; i + 1 < out.return_path.waypoints.size(); ++i)
        out.return_path.length +=
            (out.return_path.waypoints[i + 1] - out.return_path.waypoints[i]).norm();

    for (const Sample& s : samples) out.boundary_samples.emplace_back(s.point, s.cost);
    out.traveled = approach + perim + return_arc;
    return out;
}

RepelResult repel_endpoints(std::vector<Vec2> endpoints, const DynamicConfig& dyn,
                            const Rect& arena, const std::vector<Obstacle>& obstacles) {
    const std::size_t n = endpoints.size();
    const double min_sep = 2.0 * dyn.robot_radius;

    auto all_separated = [&] {
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q)
                if ((endpoints[p] - endpoints[q]).norm() < min_sep - kGeomEps)
                    return false;
        return true;
    };

    RepelResult out;
    for (int sweep = 0; sweep < dyn.max_force_iterations; ++sweep) {
        if (all_separated()) break;
        out.sweeps = sweep + 1;

        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q)
                if ((endpoints[p] - endpoints[q]).norm() <= kGeomEps)
                    endpoints[q] += coincidence_offset(static_cast<int>(q), sweep);

        // simultaneous sweep: all forces from the pre-sweep positions
        std::vector<Vec2> force(n, Vec2::Zero());
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t j = 0; j < n; ++j) {
                if (j == k) continue;
                const Vec2 d = endpoints[k] - endpoints[j];
                const double dist = d.norm();
                if (dist >= min_sep) continue;
                force[k] += d * ((min_sep - dist) / dist);
            }
        }
        for (std::size_t k = 0; k < n; ++k) {
            if (force[k].norm() <= 0.0) continue;
            endpoints[k] =
                geom::confine_to_rect(endpoints[k], dyn.force_scale * force[k], arena);
            for (const Obstacle& obs : obstacles) {
                if (geom::point_strictly_inside(endpoints[k], obs.shape)) {
                    endpoints[k] = arena.clamp(project_out(
                        endpoints[k], force[k], obs.shape, obs.diameter + min_sep));
                }
            }
        }
    }
    out.separated = all_separated();
    out.endpoints = std::move(endpoints);
    return out;
}

geom::Polygon seeker_rectangle(const Vec2& center, double R) {
    if (R <= 0.0) throw InvalidConfig("seeker_rectangle: R must be > 0");
    return geom::Polygon{{{center.x() - R, center.y() - R},
                          {center.x() + R, center.y() - R},
                          {center.x() + R, center.y() + R},
                          {center.x() - R, center.y() + R}}};
}

std::vector<SeekerMove> plan_sequential_moves(const std::vector<Vec2>& current,
                                              const std::vector<Vec2>& targets,
                                              const World& world,
                                              const DynamicConfig& dyn) {
    const std::size_t n = current.size();
    const double R = dyn.robot_radius;
    std::vector<Vec2> effective = current;
    std::vector<SeekerMove> moves(n);

    // Static obstacles inflated by R; reuse the world cache when radii match.
    const std::vector<geom::Polygon>* statics = &world.inflated;
    std::vector<geom::Polygon> rebuilt;
    if (std::abs(world.dynamic.robot_radius - R) > kGeomEps) {
        for (const Obstacle& o : world.obstacles)
            rebuilt.push_back(geom::inflate_polygon(o.shape, R));
        statics = &rebuilt;
    }

    // footprint squares, rebuilt only when a seeker's position changes
    std::vector<geom::Polygon> squares(n);
    for (std::size_t j = 0; j < n; ++j)
        squares[j] = seeker_rectangle(effective[j], 2.0 * R);

    for (std::size_t k = 0; k < n; ++k) {
        Vec2 target = targets[k];

        for (const geom::Polygon& s : *statics) {
            if (geom::point_strictly_inside(target, s)) {
                // a robot center cannot sit within R of a static obstacle;
                // pull the target to the inflated boundary
                const Vec2 b = geom::closest_boundary_point(target, s);
                Vec2 dir = b - target;
                if (dir.norm() <= kGeomEps) dir = Vec2(1.0, 0.0);
                target = world.arena.clamp(b + dir.normalized() * (10.0 * kGeomEps));
            }
        }
        std::vector<const geom::Polygon*> blockers;
        for (const geom::Polygon& s : *statics)
            if (!geom::point_strictly_inside(current[k], s)) blockers.push_back(&s);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == k) continue;
            // the square over-approximates the disc; drop it when it would
            // swallow this seeker's own start or target
            if (geom::point_strictly_inside(current[k], squares[j]) ||
                geom::point_strictly_inside(target, squares[j]))
                continue;
            blockers.push_back(&squares[j]);
        }

        SeekerMove& mv = moves[k];
        const double direct_len = (target - current[k]).norm();
        bool direct_clear = true;
        if (direct_len > kGeomEps) {
            for (const geom::Polygon* b : blockers)
                if (geom::segment_crosses_interior(current[k], target, *b)) {
                    direct_clear = false;
                    break;
                }
        }
        if (direct_clear) {
            mv.path.waypoints = {current[k], target};
            mv.path.length = direct_len;
            mv.reached = true;
        } else {
            try {
                std::vector<geom::Polygon> obstacle_set;
                obstacle_set.reserve(blockers.size());
                for (const geom::Polygon* b : blockers) obstacle_set.push_back(*b);
                const geom::PathGraph g =
                    geom::build_visibility_graph(current[k], target, obstacle_set);
                mv.path = geom::shortest_path(g, 0, 1);
                mv.reached = true;
            } catch (const Error&) {
                mv.path.waypoints = {current[k]};
                mv.path.length = 0.0;
                mv.reached = false;
            }
        }
        effective[k] = mv.path.waypoints.back();
        if ((effective[k] - current[k]).norm() > kGeomEps)
            squares[k] = seeker_rectangle(effective[k], 2.0 * R);
    }
    return moves;
}

} // namespace seeker::avoid
