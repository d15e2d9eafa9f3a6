#include "rggnn/channel.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "rggnn/rng.hpp"

namespace rggnn::channel {

double spectral_norm_sym(const MatrixXd& a) {
    const int n = static_cast<int>(a.rows());
    if (n == 0) return 0.0;
    if (n <= 256) {
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(a, Eigen::EigenvaluesOnly);
        return std::max(std::abs(es.eigenvalues()(0)), std::abs(es.eigenvalues()(n - 1)));
    }
    // Power iteration on A^2; the Rayleigh quotient is a lower bound on
    // lambda_max(A^2), so convergence is pushed to stagnation.
    Rng rng(0x9e3779b9ULL);
    VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = rng.uniform(-1.0, 1.0);
    v.normalize();
    double lambda = 0.0;
    int stagnant = 0;
    for (int it = 0; it < 20000; ++it) {
        VectorXd u = a * (a * v);
        const double norm = u.norm();
        if (norm == 0.0) return 0.0;
        u /= norm;
        const double next = u.dot(a * (a * u));
        if (std::abs(next - lambda) <= 1e-15 * std::max(1.0, next)) {
            if (++stagnant >= 3) { lambda = next; break; }
        } else {
            stagnant = 0;
        }
        lambda = next;
        v = u;
    }
    return std::sqrt(lambda);
}

ChannelRealization draw_channel(const geo::GeometricGraph& graph, const ChannelModel& model,
                                std::uint64_t seed) {
    if (graph.n == 0) throw EmptyGraph("draw_channel: empty graph");
    if (!(model.pathloss_exponent > 0.0) || !(model.noise_power > 0.0) ||
        !(model.direct_link_distance > 0.0))
        throw Error("draw_channel: model parameters must be positive");
    const int n = graph.n;
    const double gamma = model.pathloss_exponent;
    const double d_min = graph.spec.spacing / 10.0;

    ChannelRealization real;
    real.n = n;
    real.seed = seed;
    real.gains = MatrixXd::Zero(n, n);
    real.direct.resize(n);

    Rng rng(seed);
    const double d0 = model.direct_link_distance;
    for (int i = 0; i < n; ++i) {
        const double f_ii = model.fading == Fading::Rayleigh ? rng.exponential() : 1.0;
        real.direct(i) = std::pow(d0, -gamma) * f_ii;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const double f = model.fading == Fading::Rayleigh ? rng.exponential() : 1.0;
            double d = (graph.positions.row(i) - graph.positions.row(j)).norm();
            if (d < d_min) {
                d = d_min;
                real.capped = true;
            }
            if (model.sparsify_radius > 0.0 && d > model.sparsify_radius) continue;
            real.gains(i, j) = std::pow(d, -gamma) * f;
        }
    }

    MatrixXd sym = 0.5 * (real.gains + real.gains.transpose());
    const double norm = spectral_norm_sym(sym);
    if (norm > 0.0)
        real.gso = sym / (norm * (1.0 + 1e-12));
    else
        real.gso = sym;
    return real;
}

VectorXd rates(const ChannelRealization& real, const ChannelModel& model, const VectorXd& p) {
    if (p.size() != real.n) throw DimensionError("rates: power vector length mismatch");
    for (Eigen::Index i = 0; i < p.size(); ++i)
        if (!(p(i) >= 0.0)) throw InvalidPower("rates: negative or non-finite power");

    VectorXd r(real.n);
    for (int i = 0; i < real.n; ++i) {
        double interference = 0.0;
        for (int k = 0; k < real.n; ++k) {
            if (k == i) continue;
            interference += real.gains(k, i) * p(k);
        }
        r(i) = std::log1p(real.direct(i) * p(i) / (model.noise_power + interference));
    }
    return r;
}

VectorXd policy_input(const ChannelRealization& real) {
    const double mean = real.direct.mean();
    if (mean <= 0.0) return VectorXd::Ones(real.n);
    return real.direct / mean;
}

} // namespace rggnn::channel
