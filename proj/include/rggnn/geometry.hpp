#ifndef RGGNN_GEOMETRY_HPP
#define RGGNN_GEOMETRY_HPP

#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "rggnn/errors.hpp"

namespace rggnn::geo {

using SpMat = Eigen::SparseMatrix<double>;

/// Lattice specification for a deterministic B x B grid graph.
struct GridSpec {
    int side = 0;          ///< B; the grid has n = B^2 nodes
    double spacing = 1.0;  ///< a, meters per lattice step
    double radius = 1.0;   ///< r_c, connection radius in meters
    bool torus = false;    ///< periodic boundary

    int nodes() const { return side * side; }
};

enum class GraphKind { Dgg, Rgg };

/// A spatial graph: node positions plus the normalized adjacency used as GSO.
/// Immutable after construction; safe to share read-only across threads.
struct GeometricGraph {
    int n = 0;
    Eigen::MatrixX2d positions;  ///< meters
    SpMat adjacency;             ///< symmetric, zero diagonal, entries 1/deg_norm
    GraphKind kind = GraphKind::Dgg;
    GridSpec spec;               ///< generating lattice (also kept by RGGs)
    double sigma = 0.0;          ///< perturbation std (0 for DGGs)
    std::uint64_t seed = 0;
    int deg_norm = 0;            ///< lattice neighborhood size used for normalization
    std::shared_ptr<const GeometricGraph> parent;  ///< DGG an RGG was perturbed from
    std::vector<int> original_indices;             ///< set by drop_isolated

    int degree(int i) const {
        int d = 0;
        for (SpMat::InnerIterator it(adjacency, i); it; ++it) ++d;
        return d;
    }
};

/// W_n = S_n - S_{D_n} together with the spectral norm of its square.
struct Discrepancy {
    Eigen::MatrixXd w;
    double spectral_norm_w2 = 0.0;  ///< ||W_n^2||_2 = sigma_max(W_n)^2
};

/// Number of nonzero lattice offsets v with ||v||*a <= r_c. This is the
/// neighborhood size of an interior (or toroidal) grid node and the
/// normalization constant for every adjacency this module produces.
int lattice_neighborhood_size(const GridSpec& spec);

/// Builds the deterministic grid graph. Positions are {0..B-1}^2 * a;
/// edges follow the radius rule under the torus metric when spec.torus.
/// Throws EdgelessGraph if r_c < a.
GeometricGraph make_grid(const GridSpec& spec);

/// Gaussian-perturbs the node positions of a DGG and recomputes edges by the
/// plain Euclidean radius rule. Node order is preserved, no nodes are removed,
/// and the result is deterministic in (grid, sigma, seed).
GeometricGraph perturb_to_rgg(const GeometricGraph& grid, double sigma, std::uint64_t seed);

/// Uniform-placement RGG over the same box as the spec lattice; exposed for
/// completeness, not used by the experiment pipeline.
GeometricGraph uniform_rgg(const GridSpec& spec, std::uint64_t seed);

/// Restriction to nodes of degree >= 1. original_indices records the source
/// node of each kept row. Throws EmptyGraph when everything is isolated.
GeometricGraph drop_isolated(const GeometricGraph& g);

/// W_n = S_n - S_{D_n} for an RGG against its parent.
Discrepancy discrepancy(const GeometricGraph& rgg);

/// Centered 2D convolution stencil equivalent to one hop of a toroidal DGG.
/// Odd side 2*floor(r_c/a)+1; entry at offset (k1,k2) is the adjacency weight
/// toward the neighbor displaced by (k1,k2). Throws BoundaryNotCirculant for
/// non-torus grids.
Eigen::MatrixXd mask_matrix(const GeometricGraph& grid);

/// Sum of absolute mask entries; the operator 1-norm of the convolution.
double mask_l1_norm(const Eigen::MatrixXd& mask);

/// The mask-size statistic M = ceil(sqrt(pi r_c^2 / rho + 1)) with rho = a^2,
/// reported alongside the centered mask's actual side.
int mask_side_statistic(const GridSpec& spec);

/// sigma_max(W)^2 for symmetric W; dense solve below crossover, otherwise
/// power iteration on W^2.
double spectral_norm_of_square(const SpMat& w);

} // namespace rggnn::geo

#endif // RGGNN_GEOMETRY_HPP
