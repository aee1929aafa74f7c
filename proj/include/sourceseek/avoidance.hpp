#ifndef SOURCESEEK_AVOIDANCE_HPP
#define SOURCESEEK_AVOIDANCE_HPP

#include <optional>
#include <utility>
#include <vector>

#include "sourceseek/field.hpp"
#include "sourceseek/geometry.hpp"
#include "sourceseek/rng.hpp"

namespace seeker::avoid {

enum class StaticStrategy { RandomStep, BugOne };

struct Obstacle {
    geom::Polygon shape;
    double diameter = 0.0; // max pairwise vertex distance, cached
};

Obstacle make_obstacle(geom::Polygon shape);

struct DynamicConfig {
    double robot_radius = 20.0;    // R, mm
    double force_scale = 0.5;      // t in the repulsive sweep
    int max_force_iterations = 200;
};

/// Obstacle world a run executes in. Construction validates the obstacles,
/// caches their R-inflated copies and flags overlapping obstacle pairs.
struct World {
    std::vector<Obstacle> obstacles;
    Rect arena;
    StaticStrategy static_strategy = StaticStrategy::RandomStep;
    DynamicConfig dynamic;
    std::vector<geom::Polygon> inflated; // obstacles grown by robot_radius
    bool overlapping_obstacles = false;
};

World make_world(std::vector<geom::Polygon> shapes, const Rect& arena,
                 StaticStrategy strategy, const DynamicConfig& dynamic);

/// Index of the first obstacle (in index order) whose closed region the step
/// from x_from to x_to touches; empty when the step is clear.
std::optional<int> check_static_collision(const Vec2& x_from, const Vec2& x_to,
                                          const World& world);

/// Random-step avoidance: repeatedly propose a step of obstacle-diameter
/// length in a uniformly random direction (confined to the arena) until both
/// the endpoint and the swept segment are clear of every obstacle. Falls
/// back to staying put after max_retries failed draws.
Vec2 strategy_random_step(const Vec2& x, const Obstacle& obstacle, const World& world,
                          Rng& rng, int max_retries = 100);

struct BugTraversal {
    Vec2 contact;                                       // first boundary point reached
    std::vector<std::pair<Vec2, double>> boundary_samples; // (point, cost)
    Vec2 best_point;                                    // minimum-cost sample
    geom::PlannedPath return_path;                      // shorter arc back to best
    double traveled = 0.0; // approach + full perimeter + return arc
};

/// Bug-style avoidance: walk to the inflated boundary, circumnavigate it
/// once sampling the cost at every vertex and at sample_step_mm intervals,
/// then return to the best sample along the shorter boundary arc.
BugTraversal bug1_traverse(const Vec2& x, const Vec2& intended, int obstacle_index,
                           const World& world, const field::SignalField& field,
                           double sample_step_mm);

struct RepelResult {
    std::vector<Vec2> endpoints;
    bool separated = false; // all pairwise distances >= 2R
    int sweeps = 0;
};

/// Repulsive endpoint rearrangement: simultaneous force sweeps
/// (force = d (2R - |d|) / |d| per too-close pair, displacement scaled by
/// force_scale) until every pair is separated or the iteration cap is hit.
/// Endpoints are re-confined to the arena and pushed out of obstacles after
/// each sweep.
RepelResult repel_endpoints(std::vector<Vec2> endpoints, const DynamicConfig& dyn,
                            const Rect& arena, const std::vector<Obstacle>& obstacles);

/// Axis-aligned square of half-width R centered at `center`; the footprint a
/// stationary seeker presents to the others.
geom::Polygon seeker_rectangle(const Vec2& center, double R);

struct SeekerMove {
    geom::PlannedPath path;
    bool reached = false; // false: target unreachable, seeker stays put
};

/// Seekers move one at a time in ascending index order; each plans against
/// the static obstacles inflated by R plus every other seeker's rectangle
/// inflated by R (moved seekers at their new positions). Direct segments are
/// used when clear, otherwise a visibility-graph shortest path.
std::vector<SeekerMove> plan_sequential_moves(const std::vector<Vec2>& current,
                                              const std::vector<Vec2>& targets,
                                              const World& world,
                                              const DynamicConfig& dyn);

} // namespace seeker::avoid

#endif
