#ifndef RGGNN_SPECTRAL_HPP
#define RGGNN_SPECTRAL_HPP

#include <Eigen/Dense>

#include "rggnn/gnn.hpp"

namespace rggnn::spectral {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// S = V diag(lambda) V^T with orthonormal V and ascending eigenvalues.
struct SpectralDecomposition {
    VectorXd eigenvalues;
    MatrixXd eigenvectors;
};

/// Dense symmetric eigendecomposition. Inputs must be symmetric to 1e-12
/// (relative to the largest entry); otherwise throws AsymmetricGso.
SpectralDecomposition decompose(const MatrixXd& gso);

/// hat h(lambda_i) = sum_k h_k lambda_i^k, evaluated per eigenvalue.
VectorXd frequency_response(const gnn::FilterTaps& taps, const VectorXd& lambdas);

/// Scalar frequency response.
double frequency_response_at(const gnn::FilterTaps& taps, double lambda);

/// lambda * d/dlambda [hat h](lambda).
double lambda_times_derivative(const gnn::FilterTaps& taps, double lambda);

/// Both measurements of the integral Lipschitz constant over a domain.
struct LipschitzEstimate {
    double pairwise = 0.0;    ///< max over sampled a != b of |h(a)-h(b)|(a+b)/(2|a-b|)
    double derivative = 0.0;  ///< sup over the domain of |lambda h'(lambda)|
};

/// Samples `samples` points of (lo, hi] (hi inclusive) for the pairwise
/// quotient and a refined grid for the derivative form. Domain must be
/// strictly positive.
LipschitzEstimate integral_lipschitz_constant(const gnn::FilterTaps& taps, double lo, double hi,
                                              int samples);

/// Default Lipschitz domain (delta, lambda_max] with delta = 1e-3 * lambda_max.
inline constexpr double kDefaultDomainFloorRatio = 1e-3;

/// Derivative-form constant on the default domain for a normalized GSO with
/// |lambda| <= lambda_max; negative eigenvalues fold into |lambda|.
double filter_lipschitz_constant(const gnn::FilterTaps& taps, double lambda_max = 1.0);

} // namespace rggnn::spectral

#endif // RGGNN_SPECTRAL_HPP
