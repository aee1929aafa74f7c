#include "sourceseek/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "sourceseek/io.hpp"

namespace seeker::harness {

std::uint64_t run_seed(std::uint64_t master_seed, int run_index) {
    return master_seed ^ splitmix64(static_cast<std::uint64_t>(run_index));
}

RunRecord run_single(const ExperimentConfig& config, int run_index) {
    const field::SignalField f = field::make_signal_field(config.field_spec);
    return run_single(config, run_index, f);
}

RunRecord run_single(const ExperimentConfig& config, int run_index,
                     const field::SignalField& field) {
    swarm::SwarmConfig sc = config.swarm_config;
    sc.seed = run_seed(config.master_seed, run_index);
    const avoid::World* world = config.world ? &*config.world : nullptr;

    RunRecord rec;
    rec.run_index = run_index;
    int iteration = 0;
    try {
        swarm::SwarmState state = swarm::init_swarm(sc, field, world);
        rec.trajectories.assign(static_cast<std::size_t>(sc.swarm_size), {});
        for (int k = 0; k < sc.swarm_size; ++k) {
            const auto& p = state.particles[static_cast<std::size_t>(k)];
            rec.trajectories[static_cast<std::size_t>(k)].push_back(
                {0, p.position, p.pbest_cost});
        }
        swarm::StepTrace trace;
        while (!swarm::has_terminated(state, sc)) {
            state = swarm::step(std::move(state), sc, field, world, &trace);
            iteration = state.iteration;
            for (int k = 0; k < sc.swarm_size; ++k)
                for (const auto& [pt, c] : trace.measurements[static_cast<std::size_t>(k)])
                    rec.trajectories[static_cast<std::size_t>(k)].push_back(
                        {state.iteration, pt, c});
        }
        rec.gbest_cost = state.gbest_cost;
        rec.gbest_position = state.gbest_position;
        rec.iterations = state.iteration;
        rec.total_distance = state.total_distance;
        rec.terminated_by = state.stagnation_count >= sc.stagnation_window
                                ? Termination::Stagnation
                                : Termination::MaxIterations;
    } catch (const RunFailed&) {
        throw;
    } catch (const Error& e) {
        throw RunFailed(run_index, iteration, e.what());
    }
    return rec;
}

BatchResult run_batch(const ExperimentConfig& config, int threads) {
    if (config.num_runs < 1) throw InvalidConfig("num_runs must be >= 1");
    const field::SignalField field = field::make_signal_field(config.field_spec);

    const int n = config.num_runs;
    std::vector<std::optional<RunRecord>> slots(static_cast<std::size_t>(n));
    std::vector<std::pair<int, std::string>> failures;
    std::mutex failures_mutex;
    std::atomic<int> next{0};

    auto worker = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= n) break;
            try {
                slots[static_cast<std::size_t>(i)] = run_single(config, i, field);
            } catch (const RunFailed& e) {
                std::lock_guard<std::mutex> lock(failures_mutex);
                failures.emplace_back(i, e.what());
            }
        }
    };

    threads = std::max(1, threads);
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::sort(failures.begin(), failures.end());
    BatchResult out;
    for (auto& slot : slots)
        if (slot) out.records.push_back(std::move(*slot));
    for (auto& [idx, msg] : failures) out.failures.push_back(msg);
    return out;
}

SummaryStats summarize(const std::vector<RunRecord>& records,
                       double success_threshold) {
    if (records.empty()) throw EmptyRecords("summarize: no records");
    SummaryStats s;
    const double n = static_cast<double>(records.size());
    int successes = 0;
    for (const RunRecord& r : records) {
        s.avg_gbest += r.gbest_cost;
        s.avg_iterations += r.iterations;
        s.avg_total_distance += r.total_distance;
        if (r.gbest_cost <= success_threshold) ++successes;
    }
    s.avg_gbest /= n;
    s.avg_iterations /= n;
    s.avg_total_distance /= n;
    if (records.size() > 1) {
        double ss = 0.0;
        for (const RunRecord& r : records) {
            const double d = r.gbest_cost - s.avg_gbest;
            ss += d * d;
        }
        s.std_gbest = std::sqrt(ss / (n - 1.0));
    }
    s.success_rate = successes / n;
    return s;
}

std::string summary_csv_header() {
    return "set_label,variant,omega1,lambda,phi,K,c1,c2,v_max_mm,swarm_size,"
           "topology,strategy,num_runs,avgGbest,stdGbest,avgI,avgTotalD_mm,"
           "success_rate";
}

namespace {

std::string topology_label(const swarm::Topology& t) {
    switch (t.kind) {
    case swarm::Topology::Kind::Ring:
        return "ring";
    case swarm::Topology::Kind::FullyConnected:
        return "fully_connected";
    case swarm::Topology::Kind::AdaptiveRandom:
        return "adaptive_random_k" + std::to_string(t.k_informants);
    }
    return "";
}

} // namespace

std::string summary_csv_row(const ExperimentConfig& config, const SummaryStats& stats,
                            int num_records) {
    const auto& sc = config.swarm_config;
    std::string variant, omega1, lambda, phi, K, c1, c2, topology, strategy;
    if (const auto* iw = std::get_if<swarm::InertiaWeight>(&sc.variant)) {
        variant = "inertia";
        omega1 = io::fmt(iw->omega1);
        lambda = io::fmt(iw->lambda);
        c1 = io::fmt(iw->c1);
        c2 = io::fmt(iw->c2);
    } else if (const auto* cf = std::get_if<swarm::Constriction>(&sc.variant)) {
        variant = "constriction";
        phi = io::fmt(cf->phi);
        K = io::fmt(swarm::constriction_factor(cf->phi));
        c1 = io::fmt(cf->c1);
        c2 = io::fmt(cf->c2);
    } else {
        const auto& sp = std::get<swarm::Spso>(sc.variant);
        variant = "spso";
        omega1 = io::fmt(sp.omega);
        c1 = io::fmt(sp.c);
        c2 = io::fmt(sp.c);
        topology = topology_label(sp.topology);
    }
    if (config.world) {
        strategy = config.world->static_strategy == avoid::StaticStrategy::RandomStep
                       ? "random_step"
                       : "bug1";
    }
    std::ostringstream os;
    os << config.set_label << ',' << variant << ',' << omega1 << ',' << lambda << ','
       << phi << ',' << K << ',' << c1 << ',' << c2 << ',' << io::fmt(sc.v_max) << ','
       << sc.swarm_size << ',' << topology << ',' << strategy << ',' << num_records
       << ',' << io::fmt(stats.avg_gbest) << ',' << io::fmt(stats.std_gbest) << ','
       << io::fmt(stats.avg_iterations) << ',' << io::fmt(stats.avg_total_distance)
       << ',' << io::fmt(stats.success_rate);
    return os.str();
}

std::string run_record_line(const RunRecord& rec) {
    std::ostringstream os;
    os << "run=" << rec.run_index << " gbest_cost=" << io::fmt(rec.gbest_cost)
       << " gbest_x_mm=" << io::fmt(rec.gbest_position.x())
       << " gbest_y_mm=" << io::fmt(rec.gbest_position.y())
       << " iterations=" << rec.iterations
       << " total_distance_mm=" << io::fmt(rec.total_distance) << " terminated_by="
       << (rec.terminated_by == Termination::Stagnation ? "stagnation"
                                                        : "max_iterations");
    return os.str();
}

RunRecord parse_run_line(const std::string& line) {
    RunRecord rec;
    std::istringstream is(line);
    std::string token;
    bool saw_run = false;
    while (is >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos)
            throw IoError("malformed run line token: " + token);
        const std::string key = token.substr(0, eq);
        const std::string value = token.substr(eq + 1);
        if (key == "run") {
            rec.run_index = std::stoi(value);
            saw_run = true;
        } else if (key == "gbest_cost") {
            rec.gbest_cost = std::stod(value);
        } else if (key == "gbest_x_mm") {
            rec.gbest_position.x() = std::stod(value);
        } else if (key == "gbest_y_mm") {
            rec.gbest_position.y() = std::stod(value);
        } else if (key == "iterations") {
            rec.iterations = std::stoi(value);
        } else if (key == "total_distance_mm") {
            rec.total_distance = std::stod(value);
        } else if (key == "terminated_by") {
            rec.terminated_by = value == "stagnation" ? Termination::Stagnation
                                                      : Termination::MaxIterations;
        } else {
            throw IoError("unknown run line key: " + key);
        }
    }
    if (!saw_run) throw IoError("run line is missing the run index");
    return rec;
}

void export_records(const ExperimentConfig& config, const BatchResult& batch,
                    const SummaryStats& stats, const std::string& out_dir,
                    bool write_trajectories) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);

    auto open = [&](const std::string& name) {
        std::ofstream os(fs::path(out_dir) / name);
        if (!os) throw IoError("cannot write " + (fs::path(out_dir) / name).string());
        return os;
    };

    {
        auto os = open("summary.csv");
        os << summary_csv_header() << '\n'
           << summary_csv_row(config, stats, static_cast<int>(batch.records.size()))
           << '\n';
    }
    {
        auto os = open("runs.txt");
        for (const RunRecord& r : batch.records) os << run_record_line(r) << '\n';
        for (const std::string& f : batch.failures) os << "# failed: " << f << '\n';
    }
    if (write_trajectories) {
        auto os = open("trajectories.csv");
        os << "run,iteration,seeker,x_mm,y_mm,cost\n";
        for (const RunRecord& r : batch.records)
            for (std::size_t k = 0; k < r.trajectories.size(); ++k)
                for (const TrajPoint& tp : r.trajectories[k])
                    os << r.run_index << ',' << tp.iteration << ',' << k << ','
                       << io::fmt(tp.position.x()) << ',' << io::fmt(tp.position.y())
                       << ',' << io::fmt(tp.cost) << '\n';
    }
}

} // namespace seeker::harness
