#include "sourceseek/swarm.hpp"

#include <algorithm>
#include <cmath>

namespace seeker::swarm {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

SpsoDefaults spso_defaults(int dimension) {
    if (dimension < 1) throw InvalidConfig("spso_defaults: dimension must be >= 1");
    return {10 + static_cast<int>(std::floor(2.0 * std::sqrt(dimension))),
            1.0 / (2.0 * std::log(2.0)), 0.5 + std::log(2.0)};
}

double constriction_factor(double phi) {
    if (phi <= 4.0)
        throw PhiOutOfRange("constriction_factor requires phi > 4");
    return 2.0 / std::abs(2.0 - phi - std::sqrt(phi * phi - 4.0 * phi));
}

Vec2 update_velocity_inertia(const Particle& p, const Vec2& gbest, double omega,
                             double c1, double c2, Rng& rng) {
    // draw order: u1.x, u1.y, u2.x, u2.y
    const Vec2 u1(rng.uniform(0.0, c1), rng.uniform(0.0, c1));
    const Vec2 u2(rng.uniform(0.0, c2), rng.uniform(0.0, c2));
    return omega * p.velocity + u1.cwiseProduct(p.pbest_position - p.position) +
           u2.cwiseProduct(gbest - p.position);
}

Vec2 update_velocity_constriction(const Particle& p, const Vec2& gbest, double K,
                                  double c1, double c2, Rng& rng) {
    const Vec2 u1(rng.uniform(0.0, c1), rng.uniform(0.0, c1));
    const Vec2 u2(rng.uniform(0.0, c2), rng.uniform(0.0, c2));
    return K * (p.velocity + u1.cwiseProduct(p.pbest_position - p.position) +
                u2.cwiseProduct(gbest - p.position));
}

Vec2 update_velocity_spso(const Particle& p, const Vec2& lbest, double omega,
                          double c, Rng& rng) {
    const Vec2 u1(rng.uniform(0.0, c), rng.uniform(0.0, c));
    const Vec2 u2(rng.uniform(0.0, c), rng.uniform(0.0, c));
    return omega * p.velocity + u1.cwiseProduct(p.pbest_position - p.position) +
           u2.cwiseProduct(lbest - p.position);
}

double damp_inertia(double omega, double lambda) { return lambda * omega; }

Vec2 clamp_velocity(const Vec2& v, double v_max) {
    const double mag = v.norm();
    if (mag <= v_max) return v;
    return v * (v_max / mag);
}

Vec2 confine_position(const Vec2& x_old, const Vec2& v, const Rect& arena) {
    return geom::confine_to_rect(x_old, v, arena);
}

Vec2 compute_lbest(const SwarmState& state, int k) {
    const int n = static_cast<int>(state.particles.size());
    int best = -1;
    double best_cost = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
        if (!state.informs(j, k)) continue;
        if (state.particles[j].pbest_cost < best_cost) {
            best_cost = state.particles[j].pbest_cost;
            best = j;
        }
    }
    return state.particles[best].pbest_position;
}

InformantMatrix regenerate_informants(int n, const Topology& topology, Rng& rng) {
    InformantMatrix m(n, n);
    m.setConstant(false);
    for (int k = 0; k < n; ++k) {
        m(k, k) = true;
        for (int d = 0; d < topology.k_informants; ++d)
            m(k, static_cast<int>(rng.index(static_cast<std::size_t>(n)))) = true;
    }
    return m;
}

InformantMatrix initial_informants(int n, const Topology& topology, Rng& rng) {
    InformantMatrix m(n, n);
    switch (topology.kind) {
    case Topology::Kind::Ring:
        m.setConstant(false);
        for (int k = 0; k < n; ++k) {
            m(k, k) = true;
            m(k, (k + 1) % n) = true;
            m(k, (k + n - 1) % n) = true;
        }
        return m;
    case Topology::Kind::FullyConnected:
        m.setConstant(true);
        return m;
    case Topology::Kind::AdaptiveRandom:
        return regenerate_informants(n, topology, rng);
    }
    throw InvalidConfig("unknown topology");
}

void validate(const SwarmConfig& config) {
    if (config.swarm_size < 1) throw InvalidConfig("swarm_size must be >= 1");
    if (config.v_max <= 0.0) throw InvalidConfig("v_max must be > 0");
    if (config.stagnation_window < 1)
        throw InvalidConfig("stagnation_window must be >= 1");
    if (config.max_iterations < 1) throw InvalidConfig("max_iterations must be >= 1");
    if (config.arena.width() <= 0.0 || config.arena.height() <= 0.0)
        throw InvalidConfig("arena must have positive extent");
    if (const auto* cf = std::get_if<Constriction>(&config.variant)) {
        if (cf->phi <= 4.0) throw InvalidConfig("constriction requires phi > 4");
        if (std::abs(cf->c1 + cf->c2 - cf->phi) > 1e-9)
            throw InvalidConfig("constriction requires c1 + c2 = phi");
    }
    if (const auto* sp = std::get_if<Spso>(&config.variant)) {
        if (sp->topology.kind == Topology::Kind::AdaptiveRandom &&
            (sp->topology.k_informants < 1 ||
             sp->topology.k_informants > config.swarm_size))
            throw InvalidConfig("adaptive topology requires 1 <= K <= swarm_size");
    }
}

SwarmState init_swarm(const SwarmConfig& config, const field::SignalField& field,
                      const avoid::World* world) {
    validate(config);
    if (!field.arena.contains(config.arena.lo) || !field.arena.contains(config.arena.hi))
        throw InvalidConfig("swarm arena must lie inside the field arena");

    SwarmState state;
    state.iter_rng = Rng(derive_stream(config.seed, kStreamIteration));
    state.avoid_rng = Rng(derive_stream(config.seed, kStreamAvoidance));
    state.topo_rng = Rng(derive_stream(config.seed, kStreamTopology));
    Rng init_rng(derive_stream(config.seed, kStreamInit));

    const int n = config.swarm_size;
    state.particles.resize(n);

    auto placeable = [&](const Vec2& p) {
        if (!world) return true;
        for (const auto& obs : world->obstacles)
            if (geom::point_in_polygon(p, obs.shape)) return false;
        for (const auto& infl : world->inflated)
            if (geom::point_strictly_inside(p, infl)) return false;
        return true;
    };

    for (int k = 0; k < n; ++k) {
        Particle& p = state.particles[k];
        // draw order per particle: x, y (re-drawn until placeable), angle,
        // magnitude
        Vec2 pos;
        int attempts = 0;
        do {
            pos = Vec2(init_rng.uniform(config.arena.lo.x(), config.arena.hi.x()),
                       init_rng.uniform(config.arena.lo.y(), config.arena.hi.y()));
            if (++attempts > 10000)
                throw InvalidConfig("arena too crowded to place seekers");
        } while (!placeable(pos));
        const double angle = init_rng.uniform(0.0, 2.0 * kPi);
        const double mag = init_rng.uniform(0.0, config.v_max);
        p.position = pos;
        p.velocity = mag * Vec2(std::cos(angle), std::sin(angle));
        p.pbest_position = pos;
        p.pbest_cost = field::cost(field, pos);
        if (p.pbest_cost < state.gbest_cost) {
            state.gbest_cost = p.pbest_cost;
            state.gbest_position = pos;
        }
    }

    if (const auto* sp = std::get_if<Spso>(&config.variant)) {
        state.informs = initial_informants(n, sp->topology, state.topo_rng);
        state.omega = sp->omega;
    } else {
        Topology full{Topology::Kind::FullyConnected, 0};
        state.informs = initial_informants(n, full, state.topo_rng);
        if (const auto* iw = std::get_if<InertiaWeight>(&config.variant))
            state.omega = iw->omega1;
        else
            state.omega = constriction_factor(std::get<Constriction>(config.variant).phi);
    }
    return state;
}

SwarmState step(SwarmState state, const SwarmConfig& config,
                const field::SignalField& field, const avoid::World* world,
                StepTrace* trace) {
    const int n = config.swarm_size;
    if (trace) trace->measurements.assign(static_cast<std::size_t>(n), {});

    const double old_gbest = state.gbest_cost;
    std::vector<Vec2> start(n);
    std::vector<Vec2> endpoints(n);
    std::vector<double> traveled(n, 0.0);
    // a Bug traversal executes atomically but takes ceil(traveled / v_max)
    // iterations of physical time; the slowest seeker sets the pace
    int iteration_cost = 1;

    for (int k = 0; k < n; ++k) {
        Particle& p = state.particles[k];
        start[k] = p.position;
        Vec2 v;
        if (const auto* iw = std::get_if<InertiaWeight>(&config.variant)) {
            v = update_velocity_inertia(p, state.gbest_position, state.omega, iw->c1,
                                        iw->c2, state.iter_rng);
        } else if (const auto* cf = std::get_if<Constriction>(&config.variant)) {
            const double K = constriction_factor(cf->phi);
            v = update_velocity_constriction(p, state.gbest_position, K, cf->c1,
                                             cf->c2, state.iter_rng);
        } else {
            const auto& sp = std::get<Spso>(config.variant);
            const Vec2 lbest = compute_lbest(state, k);
            v = update_velocity_spso(p, lbest, sp.omega, sp.c, state.iter_rng);
        }
        v = clamp_velocity(v, config.v_max);
        p.velocity = v;
        p.mode = Mode::Regular;
        endpoints[k] = confine_position(p.position, v, config.arena);
    }

    if (world) {
        // static obstacle avoidance
        for (int k = 0; k < n; ++k) {
            Particle& p = state.particles[k];
            const auto hit = avoid::check_static_collision(p.position, endpoints[k], *world);
            if (!hit) continue;
            p.mode = Mode::Avoiding;
            if (world->static_strategy == avoid::StaticStrategy::RandomStep) {
                const Vec2 dest = avoid::strategy_random_step(
                    p.position, world->obstacles[static_cast<std::size_t>(*hit)],
                    *world, state.avoid_rng);
                p.velocity = dest - p.position; // the random step is the new velocity
                endpoints[k] = dest;
            } else {
                const auto bug = avoid::bug1_traverse(p.position, endpoints[k], *hit,
                                                      *world, field, config.v_max);
                traveled[k] += bug.traveled;
                iteration_cost = std::max(
                    iteration_cost,
                    static_cast<int>(std::ceil(bug.traveled / config.v_max)));
                for (const auto& [pt, c] : bug.boundary_samples) {
                    if (trace)
                        trace->measurements[static_cast<std::size_t>(k)].emplace_back(pt, c);
                    if (c < p.pbest_cost) {
                        p.pbest_cost = c;
                        p.pbest_position = pt;
                    }
                }
                // the whole traversal executes within this iteration
                p.position = bug.best_point;
                endpoints[k] = bug.best_point;
            }
        }

        // endpoint separation, then one-at-a-time collision-free motion
        auto rep = avoid::repel_endpoints(std::move(endpoints), world->dynamic,
                                          config.arena, world->obstacles);
        if (!rep.separated) ++state.separation_failures;
        endpoints = std::move(rep.endpoints);

        std::vector<Vec2> current(n);
        for (int k = 0; k < n; ++k) current[k] = state.particles[k].position;
        const auto moves =
            avoid::plan_sequential_moves(current, endpoints, *world, world->dynamic);
        for (int k = 0; k < n; ++k) {
            const auto& mv = moves[static_cast<std::size_t>(k)];
            if (!mv.reached) ++state.blocked_moves;
            traveled[k] += mv.path.length;
            Particle& p = state.particles[k];
            p.position = mv.path.waypoints.back();
            if (p.mode == Mode::Avoiding &&
                world->static_strategy == avoid::StaticStrategy::BugOne) {
                // net displacement, clamped, stands in for the last step
                p.velocity = clamp_velocity(p.position - start[k], config.v_max);
            }
        }
    } else {
        for (int k = 0; k < n; ++k) {
            traveled[k] = (endpoints[k] - state.particles[k].position).norm();
            state.particles[k].position = endpoints[k];
        }
    }

    for (int k = 0; k < n; ++k) {
        Particle& p = state.particles[k];
        const double c = field::cost(field, p.position);
        if (trace)
            trace->measurements[static_cast<std::size_t>(k)].emplace_back(p.position, c);
        if (c < p.pbest_cost) {
            p.pbest_cost = c;
            p.pbest_position = p.position;
        }
        state.total_distance += traveled[k];
    }

    // gbest: strictly better only, so the first-achieved value survives ties
    for (int k = 0; k < n; ++k) {
        if (state.particles[k].pbest_cost < state.gbest_cost) {
            state.gbest_cost = state.particles[k].pbest_cost;
            state.gbest_position = state.particles[k].pbest_position;
        }
    }

    const bool improved = state.gbest_cost < old_gbest;
    state.stagnation_count = improved ? 0 : state.stagnation_count + iteration_cost;
    // a traversal that runs past the iteration cap still ends the run at the cap
    state.iteration = std::min(state.iteration + iteration_cost,
                               std::max(config.max_iterations, state.iteration + 1));

    if (const auto* iw = std::get_if<InertiaWeight>(&config.variant))
        for (int c = 0; c < iteration_cost; ++c)
            state.omega = damp_inertia(state.omega, iw->lambda);
    if (const auto* sp = std::get_if<Spso>(&config.variant)) {
        if (sp->topology.kind == Topology::Kind::AdaptiveRandom && !improved)
            state.informs = regenerate_informants(n, sp->topology, state.topo_rng);
    }
    return state;
}

bool has_terminated(const SwarmState& state, const SwarmConfig& config) {
    return state.stagnation_count >= config.stagnation_window ||
           state.iteration >= config.max_iterations;
}

} // namespace seeker::swarm
