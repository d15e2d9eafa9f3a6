#ifndef RGGNN_POLICY_HPP
#define RGGNN_POLICY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "rggnn/channel.hpp"
#include "rggnn/gnn.hpp"

namespace rggnn::policy {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Binary power-allocation problem: on-power p0, expected total budget Pmax,
/// primal/dual steps and batching for the Lagrangian training loop.
struct AllocationProblem {
    double p0 = 1.0;
    double pmax = 0.0;
    double dual_step = 1e-3;    ///< mu_lambda
    double primal_step = 1e-2;  ///< mu_H
    int batch = 8;
    int iters = 200;
    double grad_clip = 0.0;     ///< <= 0 leaves the ascent step unclipped
};

/// One Bernoulli draw from the policy: probabilities, sampled allocation,
/// achieved rates and the log-pmf of the drawn bits.
struct PolicySample {
    VectorXd probs;
    std::vector<std::uint8_t> bits;
    VectorXd allocation;
    VectorXd rates;
    double sum_rate = 0.0;
    double total_power = 0.0;
    double log_prob = 0.0;
    bool clamped = false;  ///< some q_i hit the [1e-6, 1-1e-6] clamp
};

struct DualState {
    double lambda = 0.0;
};

struct StepDiagnostics {
    double mean_sum_rate = 0.0;
    double mean_violation = 0.0;  ///< per-node: (mean total power - Pmax)/n
    double lambda = 0.0;
    double grad_norm = 0.0;
    bool aborted = false;  ///< non-finite gradient; primal update skipped
};

struct TrainingTrace {
    std::vector<StepDiagnostics> steps;
};

/// Draws a Bernoulli allocation from the GNN policy. Requires sigmoid output
/// squash; probabilities are clamped away from {0,1} before sampling.
PolicySample sample_policy(const gnn::GnnParams& params, const channel::ChannelRealization& real,
                           const channel::ChannelModel& model, const VectorXd& x, double p0,
                           std::uint64_t seed);

/// sum_rate - lambda * (total_power - Pmax).
double lagrangian(const PolicySample& sample, double lambda, double pmax);

/// grad_H log P(bits | q(H)) via the GNN tape; the score function of the
/// Bernoulli policy.
gnn::GnnGrad sample_score_gradient(const gnn::GnnParams& params,
                                   const channel::ChannelRealization& real, const VectorXd& x,
                                   const std::vector<std::uint8_t>& bits);

struct BatchItem {
    const channel::ChannelRealization* real = nullptr;
    VectorXd x;
};

/// One primal-dual update: REINFORCE ascent on the taps with a batch-mean
/// baseline, projected ascent on the multiplier.
StepDiagnostics reinforce_step(gnn::GnnParams& params, DualState& dual,
                               const std::vector<BatchItem>& batch,
                               const channel::ChannelModel& model,
                               const AllocationProblem& problem, std::uint64_t seed);

/// Trains over freshly drawn channel realizations, cycling through the graph
/// dataset. Deterministic per seed.
TrainingTrace train(gnn::GnnParams& params, const AllocationProblem& problem,
                    const std::vector<geo::GeometricGraph>& graphs,
                    const channel::ChannelModel& model, std::uint64_t seed);

/// WMMSE baseline output: continuous powers v^2 in [0,p0]^n, the derived
/// Bernoulli probabilities and the per-iteration sum-rate surrogate.
struct WmmseResult {
    VectorXd powers;  ///< v^2
    VectorXd probs;   ///< v^2 / p0
    std::vector<double> surrogate;
};

WmmseResult wmmse_policy(const channel::ChannelRealization& real,
                         const channel::ChannelModel& model, double p0, double pmax, int iters);

enum class PolicyKind { Gnn, Wmmse };

struct MetricsRecord {
    double scale = 0.0;  ///< nominal node count n_k
    std::string policy_id;
    double sum_rate_mean = 0.0;
    double sum_rate_std = 0.0;
    double violation_mean = 0.0;
    double violation_std = 0.0;
    int trials = 0;
};

/// Monte-Carlo evaluation: per trial, Bernoulli-samples the policy on a fresh
/// channel draw for every graph; reports mean and std across trials of the
/// per-graph averages. Violations are per-node against the scale's budget.
MetricsRecord evaluate_policy(PolicyKind kind, const gnn::GnnParams& params,
                              const std::vector<geo::GeometricGraph>& graphs,
                              const channel::ChannelModel& model, const AllocationProblem& problem,
                              int nominal_n, int trials, std::uint64_t seed,
                              const std::string& policy_id, int wmmse_iters = 50,
                              std::vector<double>* per_graph_sum_rates = nullptr);

/// Deterministic tap initialization, uniform in [-0.5, 0.5].
gnn::GnnParams init_params(int layers, int taps, gnn::Nonlinearity nl, double leaky_slope,
                           std::uint64_t seed);

/// Near-identity hidden layers plus an output layer biased so that the
/// initial activation probability sits close to `on_fraction` for unit-mean
/// inputs. Keeps the dual variable small from the first iteration.
gnn::GnnParams init_params_warm(int layers, int taps, gnn::Nonlinearity nl, double leaky_slope,
                                double on_fraction, std::uint64_t seed);

} // namespace rggnn::policy

#endif // RGGNN_POLICY_HPP
