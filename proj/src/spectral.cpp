#include "rggnn/spectral.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "rggnn/errors.hpp"

namespace rggnn::spectral {

SpectralDecomposition decompose(const MatrixXd& gso) {
    if (gso.rows() != gso.cols()) throw AsymmetricGso("decompose: GSO must be square");
    const double scale = std::max(1.0, gso.cwiseAbs().maxCoeff());
    const double asym = (gso - gso.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * scale) throw AsymmetricGso("decompose: GSO is not symmetric");

    Eigen::SelfAdjointEigenSolver<MatrixXd> es(gso);
    if (es.info() != Eigen::Success) throw Error("decompose: eigensolver failed");
    return {es.eigenvalues(), es.eigenvectors()};
}

VectorXd frequency_response(const gnn::FilterTaps& taps, const VectorXd& lambdas) {
    VectorXd out(lambdas.size());
    for (Eigen::Index i = 0; i < lambdas.size(); ++i)
        out(i) = frequency_response_at(taps, lambdas(i));
    return out;
}

double frequency_response_at(const gnn::FilterTaps& taps, double lambda) {
    double acc = 0.0;
    for (std::size_t k = taps.h.size(); k-- > 0;) acc = acc * lambda + taps.h[k];
    return acc;
}

double lambda_times_derivative(const gnn::FilterTaps& taps, double lambda) {
    // lambda h'(lambda) = sum_k k h_k lambda^k
    double acc = 0.0;
    double pow = 1.0;
    for (std::size_t k = 0; k < taps.h.size(); ++k) {
        if (k > 0) pow *= lambda;
        acc += static_cast<double>(k) * taps.h[k] * pow;
    }
    return acc;
}

LipschitzEstimate integral_lipschitz_constant(const gnn::FilterTaps& taps, double lo, double hi,
                                              int samples) {
    if (!(lo > 0.0) || !(hi > lo)) throw DomainError("integral Lipschitz: domain must be within (0, inf)");
    if (samples < 2) throw DomainError("integral Lipschitz: need at least 2 samples");

    LipschitzEstimate est;
    std::vector<double> pts(samples);
    for (int i = 0; i < samples; ++i)
        pts[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(samples - 1);
    std::vector<double> vals(samples);
    for (int i = 0; i < samples; ++i) vals[i] = frequency_response_at(taps, pts[i]);

    for (int i = 0; i < samples; ++i)
        for (int j = i + 1; j < samples; ++j) {
            const double a = pts[i], b = pts[j];
            const double q = std::abs(vals[i] - vals[j]) * (a + b) / (2.0 * std::abs(a - b));
            if (q > est.pairwise) est.pairwise = q;
        }

    const int fine = 16 * samples;
    for (int i = 0; i <= fine; ++i) {
        const double lam = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(fine);
        est.derivative = std::max(est.derivative, std::abs(lambda_times_derivative(taps, lam)));
    }
    return est;
}

double filter_lipschitz_constant(const gnn::FilterTaps& taps, double lambda_max) {
    const double hi = std::abs(lambda_max);
    if (hi <= 0.0) return 0.0;
    const double lo = kDefaultDomainFloorRatio * hi;
    double sup = 0.0;
    const int grid = 4096;
    for (int i = 0; i <= grid; ++i) {
        const double lam = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(grid);
        sup = std::max(sup, std::abs(lambda_times_derivative(taps, lam)));
    }
    return sup;
}

} // namespace rggnn::spectral
