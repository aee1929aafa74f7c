#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "sourceseek/avoidance.hpp"
#include "sourceseek/swarm.hpp"

using namespace seeker;
using geom::Polygon;

namespace {

field::SignalField zero_noise_field() {
    field::FieldSpec spec;
    spec.arena = Rect{{0, 0}, {5000, 5000}};
    field::EmDecayParams em;
    em.source = Vec2(2500, 2500);
    spec.model = em;
    spec.noise = field::NoiseParams{0.0, 50.0, 1};
    return field::make_signal_field(spec);
}

avoid::World square_world(avoid::StaticStrategy strategy) {
    const Polygon block =
        geom::make_polygon({{1800, 2300}, {2200, 2300}, {2200, 2700}, {1800, 2700}});
    return avoid::make_world({block}, Rect{{0, 0}, {5000, 5000}}, strategy,
                             avoid::DynamicConfig{20.0, 0.5, 200});
}

} // namespace

TEST_CASE("seeker_rectangle") {
    const Polygon sq = avoid::seeker_rectangle(Vec2(0, 0), 20.0);
    REQUIRE(sq.vertices.size() == 4);
    CHECK(std::abs(geom::signed_area(sq)) == doctest::Approx(1600.0)); // (2R)^2
    CHECK(geom::point_in_polygon(Vec2(19, 19), sq));
    CHECK_FALSE(geom::point_in_polygon(Vec2(29, 0.1), sq)); // beyond R sqrt(2)
    CHECK_THROWS_AS(avoid::seeker_rectangle(Vec2(0, 0), 0.0), InvalidConfig);
}

TEST_CASE("make_world validation") {
    const Polygon block = geom::make_polygon({{100, 100}, {200, 100}, {200, 200}, {100, 200}});
    const avoid::World w = avoid::make_world({block}, Rect{{0, 0}, {1000, 1000}},
                                             avoid::StaticStrategy::RandomStep,
                                             avoid::DynamicConfig{20.0, 0.5, 200});
    CHECK(w.obstacles.size() == 1);
    CHECK(w.obstacles[0].diameter == doctest::Approx(std::sqrt(2.0) * 100.0));
    CHECK(w.inflated.size() == 1);
    CHECK_FALSE(w.overlapping_obstacles);

    CHECK_THROWS_AS(avoid::make_world({block}, Rect{{0, 0}, {150, 150}},
                                      avoid::StaticStrategy::RandomStep,
                                      avoid::DynamicConfig{}),
                    InvalidConfig); // pokes outside the arena

    const Polygon other =
        geom::make_polygon({{150, 150}, {250, 150}, {250, 250}, {150, 250}});
    const avoid::World w2 = avoid::make_world({block, other}, Rect{{0, 0}, {1000, 1000}},
                                              avoid::StaticStrategy::RandomStep,
                                              avoid::DynamicConfig{20.0, 0.5, 200});
    CHECK(w2.overlapping_obstacles);
}

TEST_CASE("check_static_collision") {
    const avoid::World w = square_world(avoid::StaticStrategy::RandomStep);
    CHECK_FALSE(avoid::check_static_collision(Vec2(100, 100), Vec2(200, 200), w));
    // endpoint lands inside obstacle 0
    auto hit = avoid::check_static_collision(Vec2(1500, 2500), Vec2(1900, 2500), w);
    REQUIRE(hit.has_value());
    CHECK(*hit == 0);
    // crossing with both endpoints outside
    hit = avoid::check_static_collision(Vec2(1500, 2500), Vec2(2500, 2500), w);
    REQUIRE(hit.has_value());
    CHECK(*hit == 0);
}

TEST_CASE("strategy_random_step properties") {
    const avoid::World w = square_world(avoid::StaticStrategy::RandomStep);
    const Vec2 x(1700, 2500); // next to the block, far from walls
    Rng rng(41);
    const double diameter = w.obstacles[0].diameter;
    int accepted_full_length = 0;
    for (int i = 0; i < 1000; ++i) {
        const Vec2 out = avoid::strategy_random_step(x, w.obstacles[0], w, rng);
        for (const auto& obs : w.obstacles) {
            CHECK_FALSE(geom::point_in_polygon(out, obs.shape));
            CHECK_FALSE(geom::segment_intersects_polygon(x, out, obs.shape));
        }
        CHECK(w.arena.contains(out));
        if (std::abs((out - x).norm() - diameter) < 1e-9) ++accepted_full_length;
    }
    // far from walls the step is almost never truncated
    CHECK(accepted_full_length > 950);
}

TEST_CASE("strategy_random_step stays put when boxed in") {
    // obstacle ring so tight that every draw collides: tiny arena, fat block
    const Polygon block =
        geom::make_polygon({{40, 40}, {160, 40}, {160, 160}, {40, 160}});
    const avoid::World w =
        avoid::make_world({block}, Rect{{0, 0}, {200, 200}},
                          avoid::StaticStrategy::RandomStep,
                          avoid::DynamicConfig{10.0, 0.5, 200});
    Rng rng(43);
    const Vec2 x(20, 20);
    const Vec2 out = avoid::strategy_random_step(x, w.obstacles[0], w, rng, 100);
    // either a clear step or the stay-put fallback; never inside the block
    CHECK_FALSE(geom::point_strictly_inside(out, block));
}

TEST_CASE("bug1_traverse on the zero-noise field") {
    const field::SignalField f = zero_noise_field();
    const avoid::World w = square_world(avoid::StaticStrategy::BugOne);
    const Vec2 x(1500, 2500);
    const Vec2 intended(1900, 2500);

    const avoid::BugTraversal bug = avoid::bug1_traverse(x, intended, 0, w, f, 100.0);

    // contact is the first inflated-boundary point along the step
    CHECK(bug.contact.x() == doctest::Approx(1780.0));
    CHECK(bug.contact.y() == doctest::Approx(2500.0));

    // the best sample attains the minimum recorded cost exactly
    double min_cost = 1e18;
    for (const auto& [pt, c] : bug.boundary_samples) min_cost = std::min(min_cost, c);
    CHECK(field::cost(f, bug.best_point) == min_cost);

    // zero noise: minimum cost equals minimum distance to the source
    const Vec2 source(2500, 2500);
    double min_dist = 1e18;
    for (const auto& [pt, c] : bug.boundary_samples)
        min_dist = std::min(min_dist, (pt - source).norm());
    CHECK((bug.best_point - source).norm() == doctest::Approx(min_dist));

    // the winner sits on the source-facing (east) side of the inflated block
    CHECK(bug.best_point.x() == doctest::Approx(2220.0));

    // full circumnavigation is mandatory
    const double perim = geom::perimeter(w.inflated[0]);
    CHECK(bug.traveled >= perim);
    const double approach = (x - bug.contact).norm();
    CHECK(bug.traveled == doctest::Approx(approach + perim + bug.return_path.length)
                              .epsilon(1e-9));

    // convex obstacle: the return arc takes the shorter way around
    CHECK(bug.return_path.length <= perim / 2.0 + 100.0 + 1e-9);

    // every sample sits on the inflated boundary
    for (const auto& [pt, c] : bug.boundary_samples)
        CHECK(geom::distance_to_boundary(pt, w.inflated[0]) < 1e-6);
}

TEST_CASE("repel_endpoints hand-traced two-seeker example") {
    const avoid::DynamicConfig dyn{20.0, 1.0, 200};
    const Rect arena{{-1000, -1000}, {1000, 1000}};
    const auto res =
        avoid::repel_endpoints({Vec2(0, 0), Vec2(30, 0)}, dyn, arena, {});
    REQUIRE(res.endpoints.size() == 2);
    CHECK(res.separated);
    CHECK(res.sweeps == 1);
    CHECK(res.endpoints[0].x() == doctest::Approx(-10.0).epsilon(1e-12));
    CHECK(res.endpoints[0].y() == doctest::Approx(0.0));
    CHECK(res.endpoints[1].x() == doctest::Approx(40.0).epsilon(1e-12));
    CHECK(res.endpoints[1].y() == doctest::Approx(0.0));
    CHECK((res.endpoints[0] - res.endpoints[1]).norm() >= 40.0);
}

TEST_CASE("repel_endpoints no-op when already separated") {
    const avoid::DynamicConfig dyn{20.0, 0.5, 200};
    const Rect arena{{0, 0}, {5000, 5000}};
    const std::vector<Vec2> pts{Vec2(100, 100), Vec2(200, 200), Vec2(400, 100)};
    const auto res = avoid::repel_endpoints(pts, dyn, arena, {});
    CHECK(res.separated);
    CHECK(res.sweeps == 0);
    for (std::size_t i = 0; i < pts.size(); ++i)
        CHECK((res.endpoints[i] - pts[i]).norm() == 0.0);
}

TEST_CASE("repel_endpoints separates coincident endpoints") {
    const avoid::DynamicConfig dyn{20.0, 0.5, 200};
    const Rect arena{{0, 0}, {5000, 5000}};
    const auto res = avoid::repel_endpoints(
        {Vec2(2500, 2500), Vec2(2500, 2500), Vec2(2500, 2500)}, dyn, arena, {});
    CHECK(res.separated);
    for (std::size_t p = 0; p < 3; ++p)
        for (std::size_t q = p + 1; q < 3; ++q)
            CHECK((res.endpoints[p] - res.endpoints[q]).norm() >= 40.0 - 1e-6);
}

TEST_CASE("repel_endpoints random feasible instances") {
    const double R = 20.0;
    const Rect arena{{0, 0}, {1000, 1000}}; // 50 R per side
    Rng rng(47);
    for (int t = 0; t < 200; ++t) {
        const int n = 2 + static_cast<int>(rng.index(11));
        std::vector<Vec2> pts;
        for (int i = 0; i < n; ++i)
            pts.emplace_back(rng.uniform(0, 1000), rng.uniform(0, 1000));
        const auto res = avoid::repel_endpoints(pts, avoid::DynamicConfig{R, 0.5, 200},
                                                arena, {});
        CHECK(res.separated);
        for (int p = 0; p < n; ++p) {
            CHECK(arena.contains(res.endpoints[p]));
            for (int q = p + 1; q < n; ++q)
                CHECK((res.endpoints[p] - res.endpoints[q]).norm() >= 2 * R - 1e-6);
        }
    }
}

TEST_CASE("repel_endpoints pushes endpoints out of obstacles") {
    const Polygon block =
        geom::make_polygon({{2300, 2300}, {2700, 2300}, {2700, 2700}, {2300, 2700}});
    const std::vector<avoid::Obstacle> obstacles{avoid::make_obstacle(block)};
    const avoid::DynamicConfig dyn{20.0, 0.5, 200};
    const Rect arena{{0, 0}, {5000, 5000}};
    // crowd next to the obstacle wall so the sweep pushes someone in
    const auto res = avoid::repel_endpoints(
        {Vec2(2290, 2500), Vec2(2260, 2500), Vec2(2290, 2530)}, dyn, arena, obstacles);
    for (const Vec2& p : res.endpoints)
        CHECK_FALSE(geom::point_strictly_inside(p, block));
}

TEST_CASE("plan_sequential_moves without conflicts uses direct segments") {
    const avoid::World w = square_world(avoid::StaticStrategy::RandomStep);
    const std::vector<Vec2> current{Vec2(100, 100), Vec2(400, 100)};
    const std::vector<Vec2> targets{Vec2(150, 200), Vec2(450, 200)};
    const auto moves = avoid::plan_sequential_moves(current, targets, w, w.dynamic);
    REQUIRE(moves.size() == 2);
    for (std::size_t k = 0; k < 2; ++k) {
        CHECK(moves[k].reached);
        REQUIRE(moves[k].path.waypoints.size() == 2);
        CHECK((moves[k].path.waypoints.back() - targets[k]).norm() == 0.0);
        CHECK(moves[k].path.length ==
              doctest::Approx((targets[k] - current[k]).norm()));
    }
}

TEST_CASE("plan_sequential_moves detours around a blocking seeker") {
    const avoid::World w =
        avoid::make_world({}, Rect{{0, 0}, {5000, 5000}},
                          avoid::StaticStrategy::RandomStep,
                          avoid::DynamicConfig{20.0, 0.5, 200});
    // seeker 1 sits squarely on seeker 0's straight segment
    const std::vector<Vec2> current{Vec2(1000, 1000), Vec2(1250, 1000)};
    const std::vector<Vec2> targets{Vec2(1500, 1000), Vec2(1250, 1000)};
    const auto moves = avoid::plan_sequential_moves(current, targets, w, w.dynamic);
    REQUIRE(moves.size() == 2);
    CHECK(moves[0].reached);
    CHECK(moves[0].path.waypoints.size() > 2); // detour via rectangle corners
    const double straight = (targets[0] - current[0]).norm();
    CHECK(moves[0].path.length > straight);

    // path edges clear the inflated footprint of the stationary seeker
    const Polygon blocker = avoid::seeker_rectangle(Vec2(1250, 1000), 40.0);
    for (std::size_t i = 0; i + 1 < moves[0].path.waypoints.size(); ++i)
        CHECK_FALSE(oracles::crosses_interior(moves[0].path.waypoints[i],
                                              moves[0].path.waypoints[i + 1], blocker));
    // triangle inequality with equality iff direct
    CHECK(moves[1].path.length == 0.0);
}

TEST_CASE("plan_sequential_moves reports unreachable targets") {
    // goal buried inside four walls of seekers: planner flags and stays put
    const avoid::World w =
        avoid::make_world({}, Rect{{0, 0}, {5000, 5000}},
                          avoid::StaticStrategy::RandomStep,
                          avoid::DynamicConfig{200.0, 0.5, 50});
    // a target deep inside another seeker's footprint square and far walls
    const std::vector<Vec2> current{Vec2(1000, 1000), Vec2(1900, 1000)};
    const std::vector<Vec2> targets{Vec2(1900, 1001), Vec2(1900, 1000)};
    const auto moves = avoid::plan_sequential_moves(current, targets, w, w.dynamic);
    // seeker 0's target coincides with seeker 1's position: the footprint is
    // dropped (start/goal inside) or the move fails; either way no crash and
    // seeker 1 never moves
    CHECK((moves[1].path.waypoints.back() - targets[1]).norm() == 0.0);
}

TEST_CASE("step in an obstacle world keeps seekers out of obstacles") {
    const field::SignalField f = zero_noise_field();
    for (const auto strategy :
         {avoid::StaticStrategy::RandomStep, avoid::StaticStrategy::BugOne}) {
        const avoid::World w = square_world(strategy);
        swarm::SwarmConfig cfg;
        cfg.variant = swarm::InertiaWeight{3.0, 0.95, 2.0, 2.0};
        cfg.swarm_size = 5;
        cfg.seed = 17;
        swarm::SwarmState st = swarm::init_swarm(cfg, f, &w);
        double prev = st.gbest_cost;
        for (int i = 0; i < 30; ++i) {
            st = swarm::step(std::move(st), cfg, f, &w);
            CHECK(st.gbest_cost <= prev);
            prev = st.gbest_cost;
            for (const auto& p : st.particles) {
                CHECK(cfg.arena.contains(p.position));
                for (const auto& obs : w.obstacles)
                    CHECK_FALSE(geom::point_strictly_inside(p.position, obs.shape));
            }
        }
    }
}

TEST_CASE("obstacle-free world behaves like no world at all") {
    const field::SignalField f = zero_noise_field();
    const avoid::World w =
        avoid::make_world({}, Rect{{0, 0}, {5000, 5000}},
                          avoid::StaticStrategy::RandomStep,
                          avoid::DynamicConfig{20.0, 0.5, 200});
    swarm::SwarmConfig cfg;
    cfg.variant = swarm::InertiaWeight{2.0, 0.95, 2.0, 2.0};
    cfg.swarm_size = 5;
    cfg.seed = 23;
    swarm::SwarmState a = swarm::init_swarm(cfg, f, &w);
    swarm::SwarmState b = swarm::init_swarm(cfg, f);
    // seekers start well separated with overwhelming probability, so the
    // pipelines agree until two of them converge within 2R
    for (int i = 0; i < 5; ++i) {
        a = swarm::step(std::move(a), cfg, f, &w);
        b = swarm::step(std::move(b), cfg, f);
    }
    for (int k = 0; k < cfg.swarm_size; ++k)
        CHECK((a.particles[k].position - b.particles[k].position).norm() < 1e-9);
}
