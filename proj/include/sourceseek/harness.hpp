#ifndef SOURCESEEK_HARNESS_HPP
#define SOURCESEEK_HARNESS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sourceseek/swarm.hpp"

namespace seeker::harness {

struct ExperimentConfig {
    field::FieldSpec field_spec;
    swarm::SwarmConfig swarm_config; // its seed is replaced per run
    std::optional<avoid::World> world;
    int num_runs = 1000;
    std::uint64_t master_seed = 1;
    double success_threshold = 28.5; // cost units; the source reads 28
    std::string set_label;
};

enum class Termination { Stagnation, MaxIterations };

/// One measured field value: where a seeker sampled and what it cost.
struct TrajPoint {
    int iteration = 0;
    Vec2 position{0.0, 0.0};
    double cost = 0.0;
};

struct RunRecord {
    int run_index = 0;
    double gbest_cost = 0.0;
    Vec2 gbest_position{0.0, 0.0};
    int iterations = 0;
    double total_distance = 0.0; // mm
    /// Per seeker, every position at which the field was measured, in order
    /// (initial position, then per iteration any boundary samples followed
    /// by the end-of-iteration position).
    std::vector<std::vector<TrajPoint>> trajectories;
    Termination terminated_by = Termination::Stagnation;
};

struct SummaryStats {
    double avg_gbest = 0.0;
    double std_gbest = 0.0; // sample standard deviation (n - 1)
    double avg_iterations = 0.0;
    double avg_total_distance = 0.0;
    double success_rate = 0.0; // fraction with gbest_cost <= threshold
};

/// Per-run seed: master_seed XOR splitmix64(run_index). Order-independent,
/// so parallel batches reproduce serial ones.
std::uint64_t run_seed(std::uint64_t master_seed, int run_index);

/// Full init + step loop until termination. Throws RunFailed on fatal
/// avoidance errors, carrying run index and iteration.
RunRecord run_single(const ExperimentConfig& config, int run_index);
RunRecord run_single(const ExperimentConfig& config, int run_index,
                     const field::SignalField& field);

struct BatchResult {
    std::vector<RunRecord> records;        // sorted by run_index
    std::vector<std::string> failures;     // one message per failed run
};

/// num_runs independent runs; per-run failures are collected, not fatal.
/// Output is identical for any thread count.
BatchResult run_batch(const ExperimentConfig& config, int threads = 1);

SummaryStats summarize(const std::vector<RunRecord>& records,
                       double success_threshold);

std::string summary_csv_header();
std::string summary_csv_row(const ExperimentConfig& config, const SummaryStats& stats,
                            int num_records);

/// Self-describing key=value line with every RunRecord scalar field.
std::string run_record_line(const RunRecord& rec);
/// Inverse of run_record_line for the scalar fields (trajectories excluded).
RunRecord parse_run_line(const std::string& line);

/// Writes summary.csv, runs.txt and (optionally) trajectories.csv into
/// out_dir. Throws IoError when a file cannot be written.
void export_records(const ExperimentConfig& config, const BatchResult& batch,
                    const SummaryStats& stats, const std::string& out_dir,
                    bool write_trajectories);

} // namespace seeker::harness

#endif
