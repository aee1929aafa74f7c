#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <vector>

#include "sourceseek/config.hpp"
#include "sourceseek/harness.hpp"
#include "sourceseek/io.hpp"

namespace fs = std::filesystem;
using namespace seeker;

namespace {

std::string default_out_dir() {
    if (const char* env = std::getenv("SOURCESEEK_OUT")) return env;
    return "out";
}

harness::ExperimentConfig load_config(const std::string& path) {
    return path.empty() ? config::default_config() : config::load_file(path);
}

void warn_world(const harness::ExperimentConfig& cfg) {
    if (cfg.world && cfg.world->overlapping_obstacles)
        std::cerr << "warning: obstacle polygons overlap each other\n";
}

void echo_config(const harness::ExperimentConfig& cfg, const std::string& out_dir) {
    fs::create_directories(out_dir);
    config::save_file(cfg, (fs::path(out_dir) / "config_effective.json").string());
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot write " + path.string());
    return os;
}

void write_trajectory_csv(std::ostream& os, const harness::RunRecord& rec) {
    os << "run,iteration,seeker,x_mm,y_mm,cost\n";
    for (std::size_t k = 0; k < rec.trajectories.size(); ++k)
        for (const auto& tp : rec.trajectories[k])
            os << rec.run_index << ',' << tp.iteration << ',' << k << ','
               << io::fmt(tp.position.x()) << ',' << io::fmt(tp.position.y()) << ','
               << io::fmt(tp.cost) << '\n';
}

int cmd_run(const std::string& config_path, const std::string& out_dir,
            std::optional<std::uint64_t> seed, bool quiet) {
    harness::ExperimentConfig cfg = load_config(config_path);
    if (seed) cfg.master_seed = *seed;
    warn_world(cfg);
    echo_config(cfg, out_dir);

    const harness::RunRecord rec = harness::run_single(cfg, 0);
    {
        auto os = open_out(fs::path(out_dir) / "run.txt");
        os << harness::run_record_line(rec) << '\n';
    }
    {
        auto os = open_out(fs::path(out_dir) / "trajectory.csv");
        write_trajectory_csv(os, rec);
    }
    if (!quiet) {
        std::cout << "gbest_cost " << io::fmt(rec.gbest_cost) << "\n"
                  << "gbest_position " << io::fmt(rec.gbest_position.x()) << ' '
                  << io::fmt(rec.gbest_position.y()) << "\n"
                  << "iterations " << rec.iterations << "\n"
                  << "total_distance_mm " << io::fmt(rec.total_distance) << "\n";
    }
    return 0;
}

int cmd_batch(const std::string& config_path, const std::string& out_dir,
              std::optional<std::uint64_t> seed, std::optional<int> runs, int threads,
              bool trajectories, bool quiet) {
    harness::ExperimentConfig cfg = load_config(config_path);
    if (seed) cfg.master_seed = *seed;
    if (runs) cfg.num_runs = *runs;
    warn_world(cfg);
    echo_config(cfg, out_dir);

    const harness::BatchResult batch = harness::run_batch(cfg, threads);
    if (batch.records.empty()) {
        std::cerr << "error: every run failed (" << batch.failures.size() << ")\n";
        return 1;
    }
    const harness::SummaryStats stats =
        harness::summarize(batch.records, cfg.success_threshold);
    harness::export_records(cfg, batch, stats, out_dir, trajectories);
    if (!quiet) {
        std::cout << harness::summary_csv_header() << "\n"
                  << harness::summary_csv_row(cfg, stats,
                                              static_cast<int>(batch.records.size()))
                  << "\n";
    }
    if (!batch.failures.empty()) {
        std::cerr << batch.failures.size() << " of " << cfg.num_runs
                  << " runs failed\n";
        return 1;
    }
    return 0;
}

int cmd_field(const std::string& config_path, const std::string& out_dir,
              double resolution_mm, bool quiet) {
    harness::ExperimentConfig cfg = load_config(config_path);
    echo_config(cfg, out_dir);
    const field::SignalField f = field::make_signal_field(cfg.field_spec);
    const fs::path path = fs::path(out_dir) / "field.csv";
    auto os = open_out(path);
    io::write_field_csv(os, f, resolution_mm);
    if (!quiet) std::cout << "wrote " << path.string() << "\n";
    return 0;
}

int cmd_plan(const std::string& config_path, const std::string& out_dir,
             const std::vector<double>& start, const std::vector<double>& goal,
             bool quiet) {
    harness::ExperimentConfig cfg = load_config(config_path);
    warn_world(cfg);
    echo_config(cfg, out_dir);

    const Vec2 s(start.at(0), start.at(1));
    const Vec2 g(goal.at(0), goal.at(1));
    std::vector<geom::Polygon> obstacles;
    if (cfg.world) obstacles = cfg.world->inflated;

    const geom::PathGraph graph = geom::build_visibility_graph(s, g, obstacles);
    const geom::PlannedPath path = geom::shortest_path(graph, 0, 1);
    {
        auto os = open_out(fs::path(out_dir) / "graph.csv");
        io::write_graph_csv(os, graph);
    }
    {
        auto os = open_out(fs::path(out_dir) / "path.csv");
        io::write_path_csv(os, path);
    }
    if (!quiet) {
        std::cout << "path_length_mm " << io::fmt(path.length) << "\n"
                  << "waypoints " << path.waypoints.size() << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-robot signal source seeking: PSO variants, obstacle "
                 "avoidance and a Monte Carlo experiment harness"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = default_out_dir();
    std::optional<std::uint64_t> seed;
    std::optional<int> runs;
    int threads = 1;
    bool quiet = false;
    bool trajectories = false;
    double resolution_mm = 100.0;
    std::vector<double> start{0.0, 0.0};
    std::vector<double> goal{0.0, 0.0};

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "Config file (JSON)");
        sub->add_option("--out", out_dir, "Output directory");
        sub->add_flag("--quiet", quiet, "Suppress stdout reporting");
    };

    CLI::App* run = app.add_subcommand("run", "Execute one seeded run");
    add_common(run);
    run->add_option("--seed", seed, "Master seed override");

    CLI::App* batch = app.add_subcommand("batch", "Execute a Monte Carlo batch");
    add_common(batch);
    batch->add_option("--seed", seed, "Master seed override");
    batch->add_option("--runs", runs, "Number of runs override");
    batch->add_option("--threads", threads, "Worker threads (output is identical)");
    batch->add_flag("--trajectories", trajectories, "Also export trajectories.csv");

    CLI::App* fieldcmd = app.add_subcommand("field", "Export the RSSI field as CSV");
    add_common(fieldcmd);
    fieldcmd->add_option("--resolution-mm", resolution_mm, "Lattice spacing");

    CLI::App* plan = app.add_subcommand("plan", "Visibility-graph path planning");
    add_common(plan);
    plan->add_option("--start", start, "Start point: X_MM Y_MM")->expected(2);
    plan->add_option("--goal", goal, "Goal point: X_MM Y_MM")->expected(2);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(config_path, out_dir, seed, quiet);
        if (batch->parsed())
            return cmd_batch(config_path, out_dir, seed, runs, threads, trajectories,
                             quiet);
        if (fieldcmd->parsed())
            return cmd_field(config_path, out_dir, resolution_mm, quiet);
        if (plan->parsed()) return cmd_plan(config_path, out_dir, start, goal, quiet);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
