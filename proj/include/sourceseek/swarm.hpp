#ifndef SOURCESEEK_SWARM_HPP
#define SOURCESEEK_SWARM_HPP

#include <Eigen/Core>
#include <cstdint>
#include <limits>
#include <variant>
#include <vector>

#include "sourceseek/avoidance.hpp"
#include "sourceseek/field.hpp"
#include "sourceseek/rng.hpp"

namespace seeker::swarm {

enum class Mode { Regular, Avoiding };

struct Particle {
    Vec2 position{0.0, 0.0};
    Vec2 velocity{0.0, 0.0}; // mm per iteration
    Vec2 pbest_position{0.0, 0.0};
    double pbest_cost = std::numeric_limits<double>::infinity();
    Mode mode = Mode::Regular;
};

/// Velocity update v' = w_i v + U(0,c1)(Pbest - x) + U(0,c2)(Gbest - x),
/// with w damped geometrically once per iteration.
struct InertiaWeight {
    double omega1 = 3.0;
    double lambda = 0.95;
    double c1 = 2.0;
    double c2 = 2.0;
};

/// Velocity update v' = K [v + U(0,c1)(Pbest - x) + U(0,c2)(Gbest - x)]
/// with K = constriction_factor(phi) and phi = c1 + c2 > 4.
struct Constriction {
    double phi = 4.1;
    double c1 = 2.05;
    double c2 = 2.05;
};

struct Topology {
    enum class Kind { Ring, FullyConnected, AdaptiveRandom };
    Kind kind = Kind::FullyConnected;
    int k_informants = 3; // K, AdaptiveRandom only
};

/// Standard PSO 2006: Gbest replaced by the best informant's Pbest.
struct Spso {
    double omega = 0.7213475204444817; // 1 / (2 ln 2)
    double c = 1.1931471805599454;     // 1/2 + ln 2
    Topology topology{};
};

using Variant = std::variant<InertiaWeight, Constriction, Spso>;

struct SwarmConfig {
    Variant variant = InertiaWeight{};
    int swarm_size = 5;
    double v_max = 500.0; // mm per iteration
    Rect arena{{0.0, 0.0}, {5000.0, 5000.0}};
    int stagnation_window = 20;
    int max_iterations = 200;
    std::uint64_t seed = 0;
};

/// informs(k, j) is true iff particle k informs particle j of its Pbest.
using InformantMatrix = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

struct SwarmState {
    std::vector<Particle> particles;
    Vec2 gbest_position{0.0, 0.0};
    double gbest_cost = std::numeric_limits<double>::infinity();
    int iteration = 0;
    int stagnation_count = 0;
    InformantMatrix informs;
    double total_distance = 0.0; // mm, all seekers, all iterations
    double omega = 0.0;          // current inertia weight
    Rng iter_rng{0};
    Rng avoid_rng{0};
    Rng topo_rng{0};
    int separation_failures = 0; // repulsion sweeps that hit the cap
    int blocked_moves = 0;       // sequential moves that could not reach the target
};

/// Per-seeker field measurements made during one step(), in measurement
/// order (boundary samples from a Bug traversal first, final position last).
struct StepTrace {
    std::vector<std::vector<std::pair<Vec2, double>>> measurements;
};

struct SpsoDefaults {
    int swarm_size;
    double omega;
    double c;
};

/// Canonical SPSO 2006 parameters: n = 10 + floor(2 sqrt(D)),
/// omega = 1/(2 ln 2), c = 1/2 + ln 2.
SpsoDefaults spso_defaults(int dimension);

/// K = 2 / |2 - phi - sqrt(phi^2 - 4 phi)|; requires phi > 4.
double constriction_factor(double phi);

Vec2 update_velocity_inertia(const Particle& p, const Vec2& gbest, double omega,
                             double c1, double c2, Rng& rng);
Vec2 update_velocity_constriction(const Particle& p, const Vec2& gbest, double K,
                                  double c1, double c2, Rng& rng);
Vec2 update_velocity_spso(const Particle& p, const Vec2& lbest, double omega,
                          double c, Rng& rng);

/// Geometric damping w_{i+1} = lambda * w_i.
double damp_inertia(double omega, double lambda);

/// Rescale to magnitude v_max when longer, direction unchanged.
Vec2 clamp_velocity(const Vec2& v, double v_max);

/// Constraint 1: an exiting step stops at the arena boundary in the
/// direction of v.
Vec2 confine_position(const Vec2& x_old, const Vec2& v, const Rect& arena);

/// Best Pbest among particle k's informants (k always informs itself);
/// ties resolved by lowest particle index.
Vec2 compute_lbest(const SwarmState& state, int k);

InformantMatrix initial_informants(int n, const Topology& topology, Rng& rng);
/// AdaptiveRandom refresh: each row keeps its diagonal and gains K
/// uniformly random columns (with replacement).
InformantMatrix regenerate_informants(int n, const Topology& topology, Rng& rng);

void validate(const SwarmConfig& config);

/// Uniform positions over the arena (re-drawn until clear of obstacles when
/// a world is given), uniform velocity direction with magnitude uniform on
/// [0, v_max]. Deterministic given config.seed.
SwarmState init_swarm(const SwarmConfig& config, const field::SignalField& field,
                      const avoid::World* world = nullptr);

/// One synchronous PSO iteration: velocity update per variant, clamping,
/// confinement, static avoidance, repulsive endpoint separation, sequential
/// collision-free motion, measurement and best updates.
SwarmState step(SwarmState state, const SwarmConfig& config,
                const field::SignalField& field, const avoid::World* world = nullptr,
                StepTrace* trace = nullptr);

/// Stagnation window exhausted or iteration cap reached.
bool has_terminated(const SwarmState& state, const SwarmConfig& config);

} // namespace seeker::swarm

#endif
