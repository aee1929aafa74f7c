#include "sourceseek/config.hpp"

#include <fstream>
#include <set>

namespace seeker::config {

using nlohmann::json;

namespace {

void check_keys(const json& j, const std::set<std::string>& allowed,
                const std::string& path) {
    if (!j.is_object()) throw ConfigError(path + ": expected an object");
    for (const auto& [key, value] : j.items())
        if (!allowed.count(key))
            throw ConfigError("unknown config key '" + path + "." + key + "'");
}

template <typename T>
T get_or(const json& j, const std::string& key, const std::string& path, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("config key '" + path + "." + key + "' has the wrong type");
    }
}

geom::Polygon parse_polygon(const json& j, const std::string& path) {
    if (!j.is_array())
        throw ConfigError(path + ": expected an array of [x_mm, y_mm] pairs");
    std::vector<Vec2> pts;
    for (const auto& v : j) {
        if (!v.is_array() || v.size() != 2)
            throw ConfigError(path + ": each vertex must be [x_mm, y_mm]");
        pts.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());
    }
    try {
        return geom::make_polygon(std::move(pts));
    } catch (const InvalidPolygon& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

} // namespace

harness::ExperimentConfig default_config() {
    harness::ExperimentConfig c;
    c.field_spec.arena = Rect{{0.0, 0.0}, {5000.0, 5000.0}};
    field::EmDecayParams em;
    em.source = Vec2(2500.0, 2500.0);
    c.field_spec.model = em;
    c.field_spec.noise = field::NoiseParams{};
    c.swarm_config = swarm::SwarmConfig{};
    c.swarm_config.arena = c.field_spec.arena;
    c.num_runs = 1000;
    c.master_seed = 1;
    c.success_threshold = 28.5;
    return c;
}

harness::ExperimentConfig from_json(const json& j) {
    check_keys(j, {"arena", "field", "swarm", "world", "experiment"}, "config");
    harness::ExperimentConfig c = default_config();

    Rect arena{{0.0, 0.0}, {5000.0, 5000.0}};
    if (j.contains("arena")) {
        const json& a = j.at("arena");
        check_keys(a, {"width_mm", "height_mm"}, "arena");
        arena.hi = Vec2(get_or(a, "width_mm", "arena", 5000.0),
                        get_or(a, "height_mm", "arena", 5000.0));
        if (arena.width() <= 0.0 || arena.height() <= 0.0)
            throw ConfigError("arena: width_mm and height_mm must be > 0");
    }
    c.field_spec.arena = arena;
    c.swarm_config.arena = arena;
    const Vec2 center = 0.5 * (arena.lo + arena.hi);

    if (j.contains("field")) {
        const json& f = j.at("field");
        check_keys(f,
                   {"model", "alpha", "c", "power", "source_x_mm", "source_y_mm",
                    "sigma_db", "grid_mm", "seed", "calibration_db", "emission_rate",
                    "diffusivity", "start_time_s", "sample_time_s"},
                   "field");
        const std::string model = get_or<std::string>(f, "model", "field", "em");
        const Vec2 source(get_or(f, "source_x_mm", "field", center.x()),
                          get_or(f, "source_y_mm", "field", center.y()));
        if (model == "em") {
            field::EmDecayParams em;
            em.exponent = get_or(f, "alpha", "field", 2.0);
            em.medium_constant = get_or(f, "c", "field", 1.0);
            em.power = get_or(f, "power", "field", 1.0);
            em.source = source;
            c.field_spec.model = em;
        } else if (model == "vapor") {
            field::VaporParams vp;
            vp.emission_rate = get_or(f, "emission_rate", "field", 1.0);
            vp.diffusivity = get_or(f, "diffusivity", "field", 1.0);
            vp.start_time = get_or(f, "start_time_s", "field", 0.0);
            vp.source = source;
            c.field_spec.model = vp;
            c.field_spec.vapor_time_s = get_or(f, "sample_time_s", "field", 1e12);
        } else if (model == "acoustic") {
            field::AcousticParams ac;
            ac.power = get_or(f, "power", "field", 1.0);
            ac.source = source;
            c.field_spec.model = ac;
        } else {
            throw ConfigError("field.model must be em, vapor or acoustic");
        }
        c.field_spec.noise.sigma_db = get_or(f, "sigma_db", "field", 3.0);
        c.field_spec.noise.grid_mm = get_or(f, "grid_mm", "field", 400.0);
        c.field_spec.noise.seed = get_or<std::uint64_t>(f, "seed", "field", 1);
        if (f.contains("calibration_db"))
            c.field_spec.calibration_db = f.at("calibration_db").get<double>();
    } else {
        field::EmDecayParams em;
        em.source = center;
        c.field_spec.model = em;
    }

    if (j.contains("swarm")) {
        const json& s = j.at("swarm");
        check_keys(s,
                   {"variant", "omega1", "lambda", "c1", "c2", "phi", "omega", "c",
                    "topology", "k_informants", "n", "v_max_mm", "stagnation_window",
                    "max_iterations"},
                   "swarm");
        const std::string variant = get_or<std::string>(s, "variant", "swarm", "inertia");
        if (variant == "inertia") {
            swarm::InertiaWeight iw;
            iw.omega1 = get_or(s, "omega1", "swarm", 3.0);
            iw.lambda = get_or(s, "lambda", "swarm", 0.95);
            iw.c1 = get_or(s, "c1", "swarm", 2.0);
            iw.c2 = get_or(s, "c2", "swarm", 2.0);
            c.swarm_config.variant = iw;
            c.swarm_config.swarm_size = get_or(s, "n", "swarm", 5);
        } else if (variant == "constriction") {
            swarm::Constriction cf;
            cf.phi = get_or(s, "phi", "swarm", 4.1);
            cf.c1 = get_or(s, "c1", "swarm", cf.phi / 2.0);
            cf.c2 = get_or(s, "c2", "swarm", cf.phi / 2.0);
            c.swarm_config.variant = cf;
            c.swarm_config.swarm_size = get_or(s, "n", "swarm", 5);
        } else if (variant == "spso") {
            const auto d = swarm::spso_defaults(2);
            swarm::Spso sp;
            sp.omega = get_or(s, "omega", "swarm", d.omega);
            sp.c = get_or(s, "c", "swarm", d.c);
            const std::string topo =
                get_or<std::string>(s, "topology", "swarm", "fully_connected");
            if (topo == "ring") {
                sp.topology.kind = swarm::Topology::Kind::Ring;
            } else if (topo == "fully_connected") {
                sp.topology.kind = swarm::Topology::Kind::FullyConnected;
            } else if (topo == "adaptive_random") {
                sp.topology.kind = swarm::Topology::Kind::AdaptiveRandom;
            } else {
                throw ConfigError(
                    "swarm.topology must be ring, fully_connected or adaptive_random");
            }
            sp.topology.k_informants = get_or(s, "k_informants", "swarm", 3);
            c.swarm_config.variant = sp;
            c.swarm_config.swarm_size = get_or(s, "n", "swarm", d.swarm_size);
        } else {
            throw ConfigError("swarm.variant must be inertia, constriction or spso");
        }
        c.swarm_config.v_max = get_or(s, "v_max_mm", "swarm", 500.0);
        c.swarm_config.stagnation_window = get_or(s, "stagnation_window", "swarm", 20);
        c.swarm_config.max_iterations = get_or(s, "max_iterations", "swarm", 200);
    }

    if (j.contains("world") && !j.at("world").is_null()) {
        const json& w = j.at("world");
        check_keys(w,
                   {"static_strategy", "robot_radius_mm", "force_scale",
                    "max_force_iterations", "obstacles"},
                   "world");
        const std::string strategy =
            get_or<std::string>(w, "static_strategy", "world", "random_step");
        avoid::StaticStrategy st;
        if (strategy == "random_step") {
            st = avoid::StaticStrategy::RandomStep;
        } else if (strategy == "bug1") {
            st = avoid::StaticStrategy::BugOne;
        } else {
            throw ConfigError("world.static_strategy must be random_step or bug1");
        }
        avoid::DynamicConfig dyn;
        dyn.robot_radius = get_or(w, "robot_radius_mm", "world", 20.0);
        dyn.force_scale = get_or(w, "force_scale", "world", 0.5);
        dyn.max_force_iterations = get_or(w, "max_force_iterations", "world", 200);
        std::vector<geom::Polygon> shapes;
        if (w.contains("obstacles")) {
            const json& obs = w.at("obstacles");
            if (!obs.is_array()) throw ConfigError("world.obstacles must be an array");
            for (std::size_t i = 0; i < obs.size(); ++i)
                shapes.push_back(parse_polygon(
                    obs.at(i), "world.obstacles[" + std::to_string(i) + "]"));
        }
        try {
            c.world = avoid::make_world(std::move(shapes), arena, st, dyn);
        } catch (const InvalidConfig& e) {
            throw ConfigError(std::string("world: ") + e.what());
        }
    }

    if (j.contains("experiment")) {
        const json& e = j.at("experiment");
        check_keys(e, {"num_runs", "master_seed", "success_threshold", "set_label"},
                   "experiment");
        c.num_runs = get_or(e, "num_runs", "experiment", 1000);
        c.master_seed = get_or<std::uint64_t>(e, "master_seed", "experiment", 1);
        c.success_threshold = get_or(e, "success_threshold", "experiment", 28.5);
        c.set_label = get_or<std::string>(e, "set_label", "experiment", "");
        if (c.num_runs < 1) throw ConfigError("experiment.num_runs must be >= 1");
    }

    try {
        swarm::validate(c.swarm_config);
    } catch (const InvalidConfig& e) {
        throw ConfigError(std::string("swarm: ") + e.what());
    }
    return c;
}

json to_json(const harness::ExperimentConfig& c) {
    json j;
    j["arena"] = {{"width_mm", c.field_spec.arena.width()},
                  {"height_mm", c.field_spec.arena.height()}};

    json f;
    if (const auto* em = std::get_if<field::EmDecayParams>(&c.field_spec.model)) {
        f["model"] = "em";
        f["alpha"] = em->exponent;
        f["c"] = em->medium_constant;
        f["power"] = em->power;
        f["source_x_mm"] = em->source.x();
        f["source_y_mm"] = em->source.y();
    } else if (const auto* vp = std::get_if<field::VaporParams>(&c.field_spec.model)) {
        f["model"] = "vapor";
        f["emission_rate"] = vp->emission_rate;
        f["diffusivity"] = vp->diffusivity;
        f["start_time_s"] = vp->start_time;
        f["sample_time_s"] = c.field_spec.vapor_time_s;
        f["source_x_mm"] = vp->source.x();
        f["source_y_mm"] = vp->source.y();
    } else {
        const auto& ac = std::get<field::AcousticParams>(c.field_spec.model);
        f["model"] = "acoustic";
        f["power"] = ac.power;
        f["source_x_mm"] = ac.source.x();
        f["source_y_mm"] = ac.source.y();
    }
    f["sigma_db"] = c.field_spec.noise.sigma_db;
    f["grid_mm"] = c.field_spec.noise.grid_mm;
    f["seed"] = c.field_spec.noise.seed;
    if (c.field_spec.calibration_db) f["calibration_db"] = *c.field_spec.calibration_db;
    j["field"] = f;

    json s;
    if (const auto* iw = std::get_if<swarm::InertiaWeight>(&c.swarm_config.variant)) {
        s["variant"] = "inertia";
        s["omega1"] = iw->omega1;
        s["lambda"] = iw->lambda;
        s["c1"] = iw->c1;
        s["c2"] = iw->c2;
    } else if (const auto* cf = std::get_if<swarm::Constriction>(&c.swarm_config.variant)) {
        s["variant"] = "constriction";
        s["phi"] = cf->phi;
        s["c1"] = cf->c1;
        s["c2"] = cf->c2;
    } else {
        const auto& sp = std::get<swarm::Spso>(c.swarm_config.variant);
        s["variant"] = "spso";
        s["omega"] = sp.omega;
        s["c"] = sp.c;
        switch (sp.topology.kind) {
        case swarm::Topology::Kind::Ring:
            s["topology"] = "ring";
            break;
        case swarm::Topology::Kind::FullyConnected:
            s["topology"] = "fully_connected";
            break;
        case swarm::Topology::Kind::AdaptiveRandom:
            s["topology"] = "adaptive_random";
            break;
        }
        s["k_informants"] = sp.topology.k_informants;
    }
    s["n"] = c.swarm_config.swarm_size;
    s["v_max_mm"] = c.swarm_config.v_max;
    s["stagnation_window"] = c.swarm_config.stagnation_window;
    s["max_iterations"] = c.swarm_config.max_iterations;
    j["swarm"] = s;

    if (c.world) {
        json w;
        w["static_strategy"] =
            c.world->static_strategy == avoid::StaticStrategy::RandomStep ? "random_step"
                                                                          : "bug1";
        w["robot_radius_mm"] = c.world->dynamic.robot_radius;
        w["force_scale"] = c.world->dynamic.force_scale;
        w["max_force_iterations"] = c.world->dynamic.max_force_iterations;
        json obs = json::array();
        for (const auto& o : c.world->obstacles) {
            json poly = json::array();
            for (const Vec2& p : o.shape.vertices) poly.push_back({p.x(), p.y()});
            obs.push_back(poly);
        }
        w["obstacles"] = obs;
        j["world"] = w;
    }

    j["experiment"] = {{"num_runs", c.num_runs},
                       {"master_seed", c.master_seed},
                       {"success_threshold", c.success_threshold},
                       {"set_label", c.set_label}};
    return j;
}

harness::ExperimentConfig load_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        j = json::parse(is);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    return from_json(j);
}

void save_file(const harness::ExperimentConfig& config, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot write config file: " + path);
    os << to_json(config).dump(2) << '\n';
}

} // namespace seeker::config
