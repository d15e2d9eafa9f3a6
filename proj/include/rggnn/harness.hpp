#ifndef RGGNN_HARNESS_HPP
#define RGGNN_HARNESS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "rggnn/bounds.hpp"
#include "rggnn/channel.hpp"
#include "rggnn/config.hpp"
#include "rggnn/geometry.hpp"
#include "rggnn/policy.hpp"

namespace rggnn::harness {

struct DatasetSpec {
    std::vector<int> scales;   ///< target node counts; realized B = round(sqrt(scale))
    int graphs_per_scale = 20;
    double sigma = 0.05;
    double spacing = 1.0;
    double radius = 1.2;
    std::uint64_t master_seed = 1;
};

struct ManifestEntry {
    int scale_index = 0;
    int graph_index = 0;
    int nominal_n = 0;   ///< B^2 before isolated-node removal
    int realized_n = 0;  ///< after removal
    std::uint64_t seed = 0;
    std::string file;
};

struct Dataset {
    DatasetSpec spec;
    std::vector<std::vector<geo::GeometricGraph>> graphs;  ///< per scale
    std::vector<ManifestEntry> manifest;
};

/// RGG datasets as perturbed grids with isolated nodes removed.
Dataset generate_dataset(const DatasetSpec& spec);

void save_dataset(const Dataset& ds, const std::string& dir);

/// Throws DatasetNotFound when the directory or manifest is missing.
Dataset load_dataset(const std::string& dir);

struct ExperimentConfig {
    DatasetSpec dataset;
    channel::ChannelModel model;
    policy::AllocationProblem problem;  ///< pmax is derived per scale
    double budget_fraction = 0.3;       ///< Pmax = fraction * n * p0
    int gnn_layers = 3;
    int gnn_taps = 5;
    gnn::Nonlinearity nonlinearity = gnn::Nonlinearity::LeakyReLU;
    double leaky_slope = 0.25;
    int train_scale_index = 0;
    std::vector<int> eval_scale_indices;
    int trials = 3;
    int train_graphs = 10;  ///< head of each scale is the training split
    bool in_distribution = true;
    bool with_wmmse = true;
    int wmmse_iters = 50;
    std::uint64_t master_seed = 1;
};

struct TransferResult {
    std::vector<policy::MetricsRecord> records;
    gnn::GnnParams transferred;
    policy::TrainingTrace transfer_trace;
};

/// Budget for one scale: fraction * nominal_n * p0.
double scale_budget(const ExperimentConfig& cfg, int nominal_n);

/// Trains one policy on the training split of one scale. The initialization
/// and training seeds depend only on (master_seed, scale_index), so a
/// transferred model and the same-scale in-distribution model coincide.
gnn::GnnParams train_single_scale(const ExperimentConfig& cfg, const Dataset& ds,
                                  int scale_index, policy::TrainingTrace* trace_out);

/// Trains the transferred model (and optionally per-scale models) on the
/// training split and evaluates everything on held-out graphs of every eval
/// scale. Writes metrics/trace/histogram/transfer-curve CSVs under out_dir.
TransferResult run_transfer_experiment(const ExperimentConfig& cfg, const Dataset& ds,
                                       const std::string& out_dir);

struct BoundsSuiteConfig {
    std::vector<int> sides = {8, 12, 16};
    int instances = 100;          ///< randomized constant-free RGG<->DGG checks
    int seeds_per_instance = 20;
    double sigma_max_ratio = 0.1; ///< sigma <= ratio * spacing
    int max_order = 3;
    double spacing = 1.0;
    double radius = 1.2;
    int grid_instances = 10;      ///< randomized Prop-1 / Thm-1 instances each
    int grid_trials = 200;
    std::uint64_t master_seed = 1;
};

/// Degenerate block + randomized suites; returns every report and writes
/// bounds.csv under out_dir when non-empty.
std::vector<bounds::BoundReport> run_bounds_suite(const BoundsSuiteConfig& cfg,
                                                  const std::string& out_dir);

struct AlphaConfig {
    std::vector<int> sides = {8, 12, 16, 20};
    int seeds_per_size = 50;
    double sigma = 0.05;
    double spacing = 1.0;
    double radius = 1.2;
    std::uint64_t master_seed = 1;
};

bounds::AlphaFit run_alpha(const AlphaConfig& cfg, const std::string& out_dir);

std::string bounds_csv(const std::vector<bounds::BoundReport>& reports);

/// Aligned text table of the same reports, for terminal output.
std::string bounds_summary(const std::vector<bounds::BoundReport>& reports);

std::string alpha_csv(const bounds::AlphaFit& fit);

// Config-file bindings; every key mirrors a struct field above.
DatasetSpec dataset_from_config(const Config& cfg);
channel::ChannelModel channel_from_config(const Config& cfg);
ExperimentConfig experiment_from_config(const Config& cfg);
BoundsSuiteConfig bounds_suite_from_config(const Config& cfg);
AlphaConfig alpha_from_config(const Config& cfg);

} // namespace rggnn::harness

#endif // RGGNN_HARNESS_HPP
