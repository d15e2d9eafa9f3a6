#include "rggnn/gnn.hpp"

namespace rggnn::gnn {

MatrixXd reshape_signal(const VectorXd& x, int b) {
    if (b <= 0 || x.size() != static_cast<Eigen::Index>(b) * b)
        throw DimensionError("reshape_signal: length is not B^2");
    MatrixXd field(b, b);
    for (int n2 = 0; n2 < b; ++n2)
        for (int n1 = 0; n1 < b; ++n1) field(n1, n2) = x(n1 + n2 * b);
    return field;
}

VectorXd flatten_field(const MatrixXd& field) {
    if (field.rows() != field.cols()) throw DimensionError("flatten_field: field must be square");
    const int b = static_cast<int>(field.rows());
    VectorXd x(static_cast<Eigen::Index>(b) * b);
    for (int n2 = 0; n2 < b; ++n2)
        for (int n1 = 0; n1 < b; ++n1) x(n1 + n2 * b) = field(n1, n2);
    return x;
}

namespace {

inline int wrap(int v, int b) {
    v %= b;
    return v < 0 ? v + b : v;
}

void check_mask(const MatrixXd& mask) {
    if (mask.rows() != mask.cols() || mask.rows() % 2 == 0)
        throw DimensionError("conv2d: mask must be square with odd side");
}

} // namespace

MatrixXd conv2d_circular(const MatrixXd& mask, const MatrixXd& field) {
    check_mask(mask);
    const int b = static_cast<int>(field.rows());
    if (field.cols() != b) throw DimensionError("conv2d_circular: field must be square");
    const int reach = static_cast<int>(mask.rows()) / 2;

    MatrixXd out = MatrixXd::Zero(b, b);
    for (int n1 = 0; n1 < b; ++n1)
        for (int n2 = 0; n2 < b; ++n2) {
            double acc = 0.0;
            for (int k1 = -reach; k1 <= reach; ++k1)
                for (int k2 = -reach; k2 <= reach; ++k2) {
                    const double w = mask(reach + k1, reach + k2);
                    if (w == 0.0) continue;
                    acc += w * field(wrap(n1 - k1, b), wrap(n2 - k2, b));
                }
            out(n1, n2) = acc;
        }
    return out;
}

MatrixXd conv2d_linear(const MatrixXd& mask, const MatrixXd& field) {
    check_mask(mask);
    const int rows = static_cast<int>(field.rows());
    const int cols = static_cast<int>(field.cols());
    const int reach = static_cast<int>(mask.rows()) / 2;

    MatrixXd out = MatrixXd::Zero(rows, cols);
    for (int n1 = 0; n1 < rows; ++n1)
        for (int n2 = 0; n2 < cols; ++n2) {
            double acc = 0.0;
            for (int k1 = -reach; k1 <= reach; ++k1) {
                const int s1 = n1 - k1;
                if (s1 < 0 || s1 >= rows) continue;
                for (int k2 = -reach; k2 <= reach; ++k2) {
                    const int s2 = n2 - k2;
                    if (s2 < 0 || s2 >= cols) continue;
                    const double w = mask(reach + k1, reach + k2);
                    if (w != 0.0) acc += w * field(s1, s2);
                }
            }
            out(n1, n2) = acc;
        }
    return out;
}

MatrixXd grid_filter_apply(const FilterTaps& taps, const MatrixXd& mask, const MatrixXd& field) {
    if (taps.h.empty()) throw DimensionError("grid_filter_apply: empty tap vector");
    MatrixXd power = field;  // (L*)^0 x
    MatrixXd y = taps.h[0] * power;
    for (std::size_t k = 1; k < taps.h.size(); ++k) {
        power = conv2d_circular(mask, power);
        y += taps.h[k] * power;
    }
    return y;
}

MatrixXd plane_filter_apply(const FilterTaps& taps, const MatrixXd& mask, const MatrixXd& field) {
    if (taps.h.empty()) throw DimensionError("plane_filter_apply: empty tap vector");
    MatrixXd power = field;
    MatrixXd y = taps.h[0] * power;
    for (std::size_t k = 1; k < taps.h.size(); ++k) {
        power = conv2d_linear(mask, power);
        y += taps.h[k] * power;
    }
    return y;
}

} // namespace rggnn::gnn
