#ifndef RGGNN_CHANNEL_HPP
#define RGGNN_CHANNEL_HPP

#include <cstdint>

#include <Eigen/Dense>

#include "rggnn/geometry.hpp"

namespace rggnn::channel {

using Eigen::MatrixXd;
using Eigen::VectorXd;

enum class Fading { None, Rayleigh };

struct ChannelModel {
    double pathloss_exponent = 2.2;    ///< gamma
    Fading fading = Fading::Rayleigh;
    double noise_power = 1.0;          ///< eta^2
    double sparsify_radius = 0.0;      ///< <= 0 disables sparsification
    double direct_link_distance = 0.5; ///< d0, meters
};

/// One fast-fading draw over a geometric graph. gains(i,j) is the cross-link
/// power gain transmitter i -> receiver j (zero diagonal); direct(i) the
/// intended-link gain. gso is the symmetrized, spectral-norm-normalized
/// cross-gain matrix fed to the GNN.
struct ChannelRealization {
    int n = 0;
    MatrixXd gains;
    VectorXd direct;
    MatrixXd gso;
    std::uint64_t seed = 0;
    bool capped = false;  ///< some pairwise distance hit the d_min floor
};

/// lambda_max(|A|) for symmetric A; dense below crossover, else power method.
double spectral_norm_sym(const MatrixXd& a);

ChannelRealization draw_channel(const geo::GeometricGraph& graph, const ChannelModel& model,
                                std::uint64_t seed);

/// r_i = log(1 + direct_i p_i / (eta^2 + sum_{k != i} gains(k,i) p_k)).
/// Natural log; throws InvalidPower on negative entries.
VectorXd rates(const ChannelRealization& real, const ChannelModel& model, const VectorXd& p);

/// Default GNN input: direct gains scaled to unit mean.
VectorXd policy_input(const ChannelRealization& real);

} // namespace rggnn::channel

#endif // RGGNN_CHANNEL_HPP
