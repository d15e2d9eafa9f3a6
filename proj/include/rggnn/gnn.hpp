#ifndef RGGNN_GNN_HPP
#define RGGNN_GNN_HPP

#include <cmath>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "rggnn/errors.hpp"

namespace rggnn::gnn {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Polynomial filter coefficients h_0..h_K.
struct FilterTaps {
    std::vector<double> h;

    FilterTaps() = default;
    explicit FilterTaps(std::vector<double> taps) : h(std::move(taps)) {}

    int order() const { return static_cast<int>(h.size()) - 1; }
};

enum class Nonlinearity { ReLU, LeakyReLU, AbsValue };
enum class OutputSquash { None, Sigmoid };

/// Size-independent GNN parameters: one tap vector per layer plus the
/// pointwise nonlinearity shared by all layers.
struct GnnParams {
    std::vector<FilterTaps> layers;
    Nonlinearity nonlinearity = Nonlinearity::ReLU;
    double leaky_slope = 0.25;
    OutputSquash squash = OutputSquash::None;

    int depth() const { return static_cast<int>(layers.size()); }
};

/// Gradient of a scalar loss w.r.t. every tap; mirrors GnnParams::layers.
struct GnnGrad {
    std::vector<std::vector<double>> dh;

    double squared_norm() const {
        double s = 0.0;
        for (const auto& layer : dh)
            for (double v : layer) s += v * v;
        return s;
    }
    double norm() const { return std::sqrt(squared_norm()); }
};

inline GnnGrad zero_grad_like(const GnnParams& params) {
    GnnGrad g;
    g.dh.reserve(params.layers.size());
    for (const auto& l : params.layers) g.dh.emplace_back(l.h.size(), 0.0);
    return g;
}

inline double activate(Nonlinearity nl, double slope, double z) {
    switch (nl) {
        case Nonlinearity::ReLU: return z > 0.0 ? z : 0.0;
        case Nonlinearity::LeakyReLU: return z > 0.0 ? z : slope * z;
        case Nonlinearity::AbsValue: return std::abs(z);
    }
    return z;
}

inline double activate_deriv(Nonlinearity nl, double slope, double z) {
    switch (nl) {
        case Nonlinearity::ReLU: return z > 0.0 ? 1.0 : 0.0;
        case Nonlinearity::LeakyReLU: return z > 0.0 ? 1.0 : slope;
        case Nonlinearity::AbsValue: return z >= 0.0 ? 1.0 : -1.0;
    }
    return 1.0;
}

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

/// y = sum_k h_k S^k x by iterated mat-vec; S^k is never materialized.
template <class Mat>
VectorXd filter_apply(const FilterTaps& taps, const Mat& gso, const VectorXd& x) {
    if (gso.rows() != gso.cols()) throw DimensionError("filter_apply: GSO must be square");
    if (gso.rows() != x.size()) throw DimensionError("filter_apply: signal length mismatch");
    if (taps.h.empty()) throw DimensionError("filter_apply: empty tap vector");

    VectorXd power = x;  // S^0 x
    VectorXd y = taps.h[0] * power;
    for (std::size_t k = 1; k < taps.h.size(); ++k) {
        power = gso * power;
        y += taps.h[k] * power;
    }
    return y;
}

/// Forward-pass cache: everything gnn_backward needs for exact gradients.
/// Single-use; the referenced GSO must outlive the tape.
template <class Mat>
struct GnnTape {
    struct Layer {
        std::vector<VectorXd> powers;  ///< S^k x_{l-1}, k = 0..K
        VectorXd preact;               ///< z_l = sum_k h_lk S^k x_{l-1}
        VectorXd postact;              ///< x_l = sigma(z_l)
    };
    const Mat* gso = nullptr;
    GnnParams params;
    std::vector<Layer> layers;
    VectorXd output;  ///< post-squash
    bool consumed = false;
};

/// Layered forward pass x_l = sigma(sum_k h_lk S^k x_{l-1}); optional final
/// sigmoid squash into (0,1)^n. Returns the output and the gradient tape.
template <class Mat>
std::pair<VectorXd, GnnTape<Mat>> gnn_forward(const GnnParams& params, const Mat& gso,
                                              const VectorXd& x) {
    if (params.layers.empty()) throw DimensionError("gnn_forward: no layers");
    GnnTape<Mat> tape;
    tape.gso = &gso;
    tape.params = params;
    tape.layers.resize(params.layers.size());

    VectorXd cur = x;
    for (std::size_t l = 0; l < params.layers.size(); ++l) {
        const FilterTaps& taps = params.layers[l];
        if (taps.h.empty()) throw DimensionError("gnn_forward: empty tap vector");
        auto& cache = tape.layers[l];
        cache.powers.reserve(taps.h.size());
        cache.powers.push_back(cur);
        VectorXd z = taps.h[0] * cur;
        for (std::size_t k = 1; k < taps.h.size(); ++k) {
            cache.powers.push_back(gso * cache.powers.back());
            z += taps.h[k] * cache.powers.back();
        }
        cache.preact = z;
        cache.postact = z.unaryExpr([&](double v) {
            return activate(params.nonlinearity, params.leaky_slope, v);
        });
        cur = cache.postact;
    }
    if (params.squash == OutputSquash::Sigmoid)
        cur = cur.unaryExpr([](double v) { return sigmoid(v); });
    tape.output = cur;
    return {cur, std::move(tape)};
}

/// Forward pass without tape bookkeeping, for evaluation-only paths.
template <class Mat>
VectorXd gnn_apply(const GnnParams& params, const Mat& gso, const VectorXd& x) {
    if (params.layers.empty()) throw DimensionError("gnn_apply: no layers");
    VectorXd cur = x;
    for (const FilterTaps& taps : params.layers) {
        cur = filter_apply(taps, gso, cur).unaryExpr([&](double v) {
            return activate(params.nonlinearity, params.leaky_slope, v);
        });
    }
    if (params.squash == OutputSquash::Sigmoid)
        cur = cur.unaryExpr([](double v) { return sigmoid(v); });
    return cur;
}

/// Exact reverse-mode gradient of a scalar loss through the taped forward
/// pass. Consumes the tape; a second call on the same tape throws.
template <class Mat>
GnnGrad gnn_backward(GnnTape<Mat>& tape, const VectorXd& dloss_doutput) {
    if (tape.consumed) throw TapeMismatch("gnn_backward: tape already consumed");
    if (tape.layers.empty() || tape.gso == nullptr)
        throw TapeMismatch("gnn_backward: tape not produced by gnn_forward");
    if (dloss_doutput.size() != tape.output.size())
        throw TapeMismatch("gnn_backward: upstream gradient has wrong length");
    tape.consumed = true;

    const GnnParams& params = tape.params;
    const Mat& gso = *tape.gso;
    GnnGrad grad = zero_grad_like(params);

    VectorXd g = dloss_doutput;
    if (params.squash == OutputSquash::Sigmoid) {
        // dq/dz = q(1-q) with q the squashed output.
        g = g.cwiseProduct(
            tape.output.unaryExpr([](double q) { return q * (1.0 - q); }));
    }
    for (int l = params.depth() - 1; l >= 0; --l) {
        const auto& cache = tape.layers[l];
        const FilterTaps& taps = params.layers[l];
        VectorXd gz = g.cwiseProduct(cache.preact.unaryExpr([&](double z) {
            return activate_deriv(params.nonlinearity, params.leaky_slope, z);
        }));
        for (std::size_t k = 0; k < taps.h.size(); ++k)
            grad.dh[l][k] = cache.powers[k].dot(gz);
        if (l > 0) {
            // dL/dx_{l-1} = sum_k h_lk (S^T)^k gz; S symmetric here.
            VectorXd power = gz;
            VectorXd gin = taps.h[0] * power;
            for (std::size_t k = 1; k < taps.h.size(); ++k) {
                power = gso * power;
                gin += taps.h[k] * power;
            }
            g = gin;
        }
    }
    return grad;
}

// --- Grid (2D convolution) path -------------------------------------------

/// x_B(n1,n2) = x[n1 + n2*B]; throws unless x.size() == B^2.
MatrixXd reshape_signal(const VectorXd& x, int b);

/// Inverse of reshape_signal.
VectorXd flatten_field(const MatrixXd& field);

/// Circular 2D convolution with a centered odd-side mask.
MatrixXd conv2d_circular(const MatrixXd& mask, const MatrixXd& field);

/// Zero-padded (plane) 2D convolution; values outside the canvas read as 0.
MatrixXd conv2d_linear(const MatrixXd& mask, const MatrixXd& field);

/// y = sum_k h_k (L (*))^k x_B with circular convolution; the torus-DGG
/// equivalent of filter_apply after the 2D index reform.
MatrixXd grid_filter_apply(const FilterTaps& taps, const MatrixXd& mask, const MatrixXd& field);

/// Same polynomial but with zero-padded plane convolution; used by the
/// windowed-signal bound checks.
MatrixXd plane_filter_apply(const FilterTaps& taps, const MatrixXd& mask, const MatrixXd& field);

// --- Multi-feature forward (bound verification only) ------------------------

/// GNN with F features per layer: banks[l][fin][fout] are the taps mapping
/// input feature fin to output feature fout at layer l.
struct MultiGnnParams {
    std::vector<std::vector<std::vector<FilterTaps>>> banks;
    Nonlinearity nonlinearity = Nonlinearity::ReLU;
    double leaky_slope = 0.25;

    int depth() const { return static_cast<int>(banks.size()); }
};

/// X_l[:,g] = sigma(sum_f filter(banks[l][f][g], S, X_{l-1}[:,f])).
template <class Mat>
MatrixXd multi_gnn_apply(const MultiGnnParams& params, const Mat& gso, const MatrixXd& xin) {
    MatrixXd cur = xin;
    for (const auto& bank : params.banks) {
        const int fin = static_cast<int>(bank.size());
        if (fin != cur.cols())
            throw DimensionError("multi_gnn_apply: feature count mismatch");
        const int fout = static_cast<int>(bank.front().size());
        MatrixXd next = MatrixXd::Zero(cur.rows(), fout);
        for (int g = 0; g < fout; ++g) {
            VectorXd z = VectorXd::Zero(cur.rows());
            for (int f = 0; f < fin; ++f)
                z += filter_apply(bank[f][g], gso, VectorXd(cur.col(f)));
            next.col(g) = z.unaryExpr([&](double v) {
                return activate(params.nonlinearity, params.leaky_slope, v);
            });
        }
        cur = next;
    }
    return cur;
}

} // namespace rggnn::gnn

#endif // RGGNN_GNN_HPP
