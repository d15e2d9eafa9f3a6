#include "rggnn/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include <Eigen/Eigenvalues>

#include "rggnn/rng.hpp"

namespace rggnn::geo {

namespace {

void validate(const GridSpec& spec) {
    if (spec.side < 2) throw Error("GridSpec: side must be >= 2");
    if (spec.spacing <= 0.0) throw Error("GridSpec: spacing must be positive");
    if (spec.radius <= 0.0) throw Error("GridSpec: radius must be positive");
    if (spec.radius < spec.spacing)
        throw EdgelessGraph("GridSpec: radius below spacing leaves the grid edgeless");
}

double torus_distance(const Eigen::RowVector2d& p, const Eigen::RowVector2d& q, double extent) {
    double dx = std::abs(p.x() - q.x());
    double dy = std::abs(p.y() - q.y());
    dx = std::min(dx, extent - dx);
    dy = std::min(dy, extent - dy);
    return std::hypot(dx, dy);
}

/// Radius-rule adjacency from positions, weight 1/deg_norm, Euclidean metric.
SpMat radius_adjacency(const Eigen::MatrixX2d& pos, double radius, int deg_norm) {
    const int n = static_cast<int>(pos.rows());
    const double w = 1.0 / static_cast<double>(deg_norm);
    const double r2 = radius * radius;
    std::vector<Eigen::Triplet<double>> trips;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double dx = pos(i, 0) - pos(j, 0);
            const double dy = pos(i, 1) - pos(j, 1);
            if (dx * dx + dy * dy <= r2) {
                trips.emplace_back(i, j, w);
                trips.emplace_back(j, i, w);
            }
        }
    }
    SpMat adj(n, n);
    adj.setFromTriplets(trips.begin(), trips.end());
    adj.makeCompressed();
    return adj;
}

} // namespace

int lattice_neighborhood_size(const GridSpec& spec) {
    const int reach = static_cast<int>(std::floor(spec.radius / spec.spacing));
    int count = 0;
    for (int k1 = -reach; k1 <= reach; ++k1)
        for (int k2 = -reach; k2 <= reach; ++k2) {
            if (k1 == 0 && k2 == 0) continue;
            if (std::hypot(k1, k2) * spec.spacing <= spec.radius) ++count;
        }
    return count;
}

GeometricGraph make_grid(const GridSpec& spec) {
    validate(spec);
    const int b = spec.side;
    const int n = b * b;
    GeometricGraph g;
    g.n = n;
    g.kind = GraphKind::Dgg;
    g.spec = spec;
    g.sigma = 0.0;
    g.deg_norm = lattice_neighborhood_size(spec);

    // Node i sits at lattice cell (i % B, i / B); matches the 2D signal reform.
    g.positions.resize(n, 2);
    for (int i = 0; i < n; ++i) {
        g.positions(i, 0) = static_cast<double>(i % b) * spec.spacing;
        g.positions(i, 1) = static_cast<double>(i / b) * spec.spacing;
    }

    const double w = 1.0 / static_cast<double>(g.deg_norm);
    const double extent = static_cast<double>(b) * spec.spacing;
    std::vector<Eigen::Triplet<double>> trips;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double d = spec.torus
                                 ? torus_distance(g.positions.row(i), g.positions.row(j), extent)
                                 : (g.positions.row(i) - g.positions.row(j)).norm();
            if (d <= spec.radius) {
                trips.emplace_back(i, j, w);
                trips.emplace_back(j, i, w);
            }
        }
    }
    g.adjacency.resize(n, n);
    g.adjacency.setFromTriplets(trips.begin(), trips.end());
    g.adjacency.makeCompressed();
    return g;
}

GeometricGraph perturb_to_rgg(const GeometricGraph& grid, double sigma, std::uint64_t seed) {
    if (grid.kind != GraphKind::Dgg) throw Error("perturb_to_rgg: input must be a DGG");
    if (sigma < 0.0) throw Error("perturb_to_rgg: sigma must be nonnegative");

    GeometricGraph g;
    g.n = grid.n;
    g.kind = GraphKind::Rgg;
    g.spec = grid.spec;
    g.sigma = sigma;
    g.seed = seed;
    g.deg_norm = grid.deg_norm;
    g.parent = std::make_shared<GeometricGraph>(grid);

    Rng rng(seed);
    g.positions = grid.positions;
    for (int i = 0; i < g.n; ++i) {
        g.positions(i, 0) += rng.normal(0.0, sigma);
        g.positions(i, 1) += rng.normal(0.0, sigma);
    }
    g.adjacency = radius_adjacency(g.positions, g.spec.radius, g.deg_norm);
    return g;
}

GeometricGraph uniform_rgg(const GridSpec& spec, std::uint64_t seed) {
    validate(spec);
    const int n = spec.nodes();
    GeometricGraph g;
    g.n = n;
    g.kind = GraphKind::Rgg;
    g.spec = spec;
    g.sigma = 0.0;
    g.seed = seed;
    g.deg_norm = lattice_neighborhood_size(spec);

    Rng rng(seed);
    const double extent = static_cast<double>(spec.side) * spec.spacing;
    g.positions.resize(n, 2);
    for (int i = 0; i < n; ++i) {
        g.positions(i, 0) = rng.uniform(0.0, extent);
        g.positions(i, 1) = rng.uniform(0.0, extent);
    }
    g.adjacency = radius_adjacency(g.positions, spec.radius, g.deg_norm);
    return g;
}

GeometricGraph drop_isolated(const GeometricGraph& g) {
    std::vector<int> keep;
    keep.reserve(g.n);
    for (int i = 0; i < g.n; ++i)
        if (g.degree(i) > 0) keep.push_back(i);
    if (keep.empty()) throw EmptyGraph("drop_isolated: every node is isolated");
    if (static_cast<int>(keep.size()) == g.n) {
        GeometricGraph out = g;
        out.original_indices.resize(g.n);
        for (int i = 0; i < g.n; ++i) out.original_indices[i] = i;
        return out;
    }

    const int m = static_cast<int>(keep.size());
    std::vector<int> to_new(g.n, -1);
    for (int i = 0; i < m; ++i) to_new[keep[i]] = i;

    GeometricGraph out;
    out.n = m;
    out.kind = g.kind;
    out.spec = g.spec;
    out.sigma = g.sigma;
    out.seed = g.seed;
    out.deg_norm = g.deg_norm;
    out.original_indices = keep;
    out.positions.resize(m, 2);
    for (int i = 0; i < m; ++i) out.positions.row(i) = g.positions.row(keep[i]);

    std::vector<Eigen::Triplet<double>> trips;
    for (int col = 0; col < g.n; ++col) {
        if (to_new[col] < 0) continue;
        for (SpMat::InnerIterator it(g.adjacency, col); it; ++it) {
            const int r = to_new[static_cast<int>(it.row())];
            if (r >= 0) trips.emplace_back(r, to_new[col], it.value());
        }
    }
    out.adjacency.resize(m, m);
    out.adjacency.setFromTriplets(trips.begin(), trips.end());
    out.adjacency.makeCompressed();
    return out;
}

double spectral_norm_of_square(const SpMat& w) {
    const int n = static_cast<int>(w.rows());
    if (w.nonZeros() == 0) return 0.0;
    if (n <= 600) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(w),
                                                          Eigen::EigenvaluesOnly);
        const auto& ev = es.eigenvalues();
        const double lo = std::abs(ev(0));
        const double hi = std::abs(ev(n - 1));
        const double smax = std::max(lo, hi);
        return smax * smax;
    }
    // Power iteration on W^2 (PSD): dominant eigenvalue is ||W^2||.
    Rng rng(0x5eed5eedULL);
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = rng.uniform(-1.0, 1.0);
    v.normalize();
    double lambda = 0.0;
    for (int it = 0; it < 20000; ++it) {
        Eigen::VectorXd u = w * (w * v);
        const double norm = u.norm();
        if (norm == 0.0) return 0.0;
        u /= norm;
        const double next = u.dot(w * (w * u));
        if (std::abs(next - lambda) <= 1e-13 * std::max(1.0, std::abs(next))) return next;
        lambda = next;
        v = u;
    }
    return lambda;
}

Discrepancy discrepancy(const GeometricGraph& rgg) {
    if (!rgg.parent) throw MissingParent("discrepancy: RGG has no parent DGG");
    const GeometricGraph& dgg = *rgg.parent;
    if (dgg.n != rgg.n) throw DimensionError("discrepancy: node counts differ");

    SpMat diff = rgg.adjacency - dgg.adjacency;
    diff.prune(0.0, 0.0);
    Discrepancy d;
    d.w = Eigen::MatrixXd(diff);
    d.spectral_norm_w2 = spectral_norm_of_square(diff);
    return d;
}

Eigen::MatrixXd mask_matrix(const GeometricGraph& grid) {
    if (grid.kind != GraphKind::Dgg || !grid.spec.torus)
        throw BoundaryNotCirculant("mask_matrix: needs a toroidal DGG");
    const GridSpec& spec = grid.spec;
    const int reach = static_cast<int>(std::floor(spec.radius / spec.spacing));
    const int side = 2 * reach + 1;
    const double w = 1.0 / static_cast<double>(grid.deg_norm);
    Eigen::MatrixXd mask = Eigen::MatrixXd::Zero(side, side);
    for (int k1 = -reach; k1 <= reach; ++k1)
        for (int k2 = -reach; k2 <= reach; ++k2) {
            if (k1 == 0 && k2 == 0) continue;
            if (std::hypot(k1, k2) * spec.spacing <= spec.radius)
                mask(reach + k1, reach + k2) = w;
        }
    return mask;
}

double mask_l1_norm(const Eigen::MatrixXd& mask) { return mask.cwiseAbs().sum(); }

int mask_side_statistic(const GridSpec& spec) {
    const double rho = spec.spacing * spec.spacing;
    return static_cast<int>(std::ceil(std::sqrt(M_PI * spec.radius * spec.radius / rho + 1.0)));
}

} // namespace rggnn::geo
