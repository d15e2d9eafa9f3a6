#include "rggnn/bounds.hpp"

#include <cmath>

#include "rggnn/rng.hpp"

namespace rggnn::bounds {

namespace {

struct Welford {
    double mean = 0.0;
    double m2 = 0.0;
    int count = 0;

    void add(double x) {
        ++count;
        const double d = x - mean;
        mean += d / count;
        m2 += d * (x - mean);
    }
    double stderr_mean() const {
        if (count < 2) return 0.0;
        return std::sqrt(m2 / (count - 1) / count);
    }
};

int mask_reach(const MatrixXd& mask) { return static_cast<int>(mask.rows()) / 2; }

int network_reach(const gnn::GnnParams& params, int reach_per_hop) {
    int total = 0;
    for (const auto& taps : params.layers) total += taps.order() * reach_per_hop;
    return total;
}

/// iid standard normal field.
MatrixXd draw_field(int rows, int cols, Rng& rng) {
    MatrixXd f(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) f(i, j) = rng.normal();
    return f;
}

MatrixXd window(const MatrixXd& field, int off, int side) {
    MatrixXd out = MatrixXd::Zero(field.rows(), field.cols());
    out.block(off, off, side, side) = field.block(off, off, side, side);
    return out;
}

double max_order(const gnn::GnnParams& params) {
    int k = 0;
    for (const auto& taps : params.layers) k = std::max(k, taps.order());
    return k;
}

double ensemble_loss(const RggEnsemble& ens, const gnn::GnnParams& student,
                     const gnn::GnnParams& teacher, const VectorXd& x, Welford* stats) {
    Welford local;
    Welford& w = stats ? *stats : local;
    for (int s = 0; s < ens.seeds; ++s) {
        const auto rgg =
            geo::perturb_to_rgg(ens.grid, ens.sigma, derive_seed(ens.master_seed, 0x566, s));
        const VectorXd y = gnn::gnn_apply(student, rgg.adjacency, x);
        const VectorXd g = gnn::gnn_apply(teacher, rgg.adjacency, x);
        w.add((y - g).squaredNorm() / rgg.n);
    }
    return w.mean;
}

} // namespace

std::string to_string(BoundName name) {
    switch (name) {
        case BoundName::Prop1GridFilter: return "Prop1_GridFilter";
        case BoundName::Thm1GridGnn: return "Thm1_GridGNN";
        case BoundName::PropA2FilterRggDgg: return "PropA2_FilterRggDgg";
        case BoundName::PropA2GnnRggDgg: return "PropA2_GnnRggDgg";
        case BoundName::Thm2LossRggDgg: return "Thm2_LossRggDgg";
        case BoundName::Thm3CrossScale: return "Thm3_CrossScale";
    }
    return "unknown";
}

bool bound_holds(double lhs, double lhs_stderr, double rhs) {
    return lhs + 2.0 * lhs_stderr <= rhs * (1.0 + 1e-9) + 1e-300;
}

double h_k_constant(const std::vector<gnn::FilterTaps>& layers, double mask_l1_norm) {
    double acc = 0.0;
    for (const auto& taps : layers) {
        double pw = 1.0;
        for (std::size_t k = 0; k < taps.h.size(); ++k) {
            if (k > 0) pw *= mask_l1_norm;
            acc += std::abs(taps.h[k]) * pw;
        }
    }
    return acc;
}

double c_m_constant(int n, int k_order, int mask_side, double h_k) {
    const double k = k_order, m = mask_side;
    return h_k * h_k / n * (2.0 * std::sqrt(static_cast<double>(n)) * k * m + k * k * m * m);
}

double c_k_constant(const gnn::FilterTaps& taps, double mask_l1_norm) {
    double acc = 0.0;
    double pw = 1.0;
    for (std::size_t k = 1; k < taps.h.size(); ++k) {
        pw *= mask_l1_norm;
        acc += std::abs(taps.h[k]) * pw;
    }
    return acc;
}

BoundReport verify_prop1(int b1, int b2, const gnn::FilterTaps& taps, const MatrixXd& mask,
                         int trials, std::uint64_t seed) {
    if (b1 > b2) throw Error("verify_prop1: requires B1 <= B2");
    const int reach = mask_reach(mask);
    const int k_order = taps.order();
    const int pad = k_order * reach;
    const int canvas = b2 + 2 * pad;

    Rng rng(seed);
    Welford lhs;
    for (int t = 0; t < trials; ++t) {
        MatrixXd f = MatrixXd::Zero(canvas, canvas);
        f.block(pad, pad, b2, b2) = draw_field(b2, b2, rng);
        const MatrixXd y1 = gnn::plane_filter_apply(taps, mask, window(f, pad, b1));
        const MatrixXd y2 = gnn::plane_filter_apply(taps, mask, f);
        lhs.add((y1 - y2).block(pad, pad, b1, b1).squaredNorm());
    }

    const double ck = c_k_constant(taps, geo::mask_l1_norm(mask));
    BoundReport rep;
    rep.name = BoundName::Prop1GridFilter;
    rep.n = b1 * b1;
    rep.m = b2 * b2;
    rep.order = k_order;
    rep.lhs = lhs.mean;
    rep.lhs_stderr = lhs.stderr_mean();
    rep.rhs = ck * ck * static_cast<double>(b2 * b2 - b1 * b1);  // E[f(0,0)^2] = 1
    rep.out_of_regime = b1 + static_cast<int>(mask.rows()) * k_order < b2;
    rep.holds = bound_holds(rep.lhs, rep.lhs_stderr, rep.rhs);
    return rep;
}

MatrixXd plane_gnn_apply(const gnn::GnnParams& params, const MatrixXd& mask,
                         const MatrixXd& field) {
    if (params.squash != gnn::OutputSquash::None)
        throw Error("plane_gnn_apply: bound checks run without output squash");
    MatrixXd cur = field;
    for (const auto& taps : params.layers) {
        cur = gnn::plane_filter_apply(taps, mask, cur).unaryExpr([&](double v) {
            return gnn::activate(params.nonlinearity, params.leaky_slope, v);
        });
    }
    return cur;
}

BoundReport verify_thm1(const gnn::GnnParams& student, const gnn::GnnParams& teacher, int b1,
                        int b2, const MatrixXd& mask, int trials, std::uint64_t seed) {
    if (b1 > b2) throw Error("verify_thm1: requires B1 <= B2");
    const int reach = mask_reach(mask);
    const int pad = std::max(network_reach(student, reach), network_reach(teacher, reach));
    const int canvas = b2 + 2 * pad;

    Rng rng(seed);
    Welford loss1, loss2;
    for (int t = 0; t < trials; ++t) {
        const MatrixXd f = draw_field(canvas, canvas, rng);
        const MatrixXd g = plane_gnn_apply(teacher, mask, f);
        const MatrixXd y1 = plane_gnn_apply(student, mask, window(f, pad, b1));
        const MatrixXd y2 = plane_gnn_apply(student, mask, window(f, pad, b2));
        loss1.add((y1 - g).block(pad, pad, b1, b1).squaredNorm() / (b1 * b1));
        loss2.add((y2 - g).block(pad, pad, b2, b2).squaredNorm() / (b2 * b2));
    }

    const int n = b1 * b1;
    const int k_order = static_cast<int>(max_order(student));
    const double hk = h_k_constant(student.layers, geo::mask_l1_norm(mask));
    const double cm = c_m_constant(n, k_order, static_cast<int>(mask.rows()), hk);

    BoundReport rep;
    rep.name = BoundName::Thm1GridGnn;
    rep.n = n;
    rep.m = b2 * b2;
    rep.order = k_order;
    rep.lhs = loss2.mean;
    rep.lhs_stderr = loss2.stderr_mean();
    rep.rhs = loss1.mean + cm + std::sqrt(loss1.mean * cm);  // E[f(0,0)^2] = 1
    rep.holds = bound_holds(rep.lhs, rep.lhs_stderr, rep.rhs);
    return rep;
}

BoundReport verify_filter_rgg_dgg(const RggEnsemble& ens, const gnn::FilterTaps& taps,
                                  const VectorXd& x) {
    Welford diff2, w2;
    for (int s = 0; s < ens.seeds; ++s) {
        const auto rgg =
            geo::perturb_to_rgg(ens.grid, ens.sigma, derive_seed(ens.master_seed, 0x566, s));
        const VectorXd yr = gnn::filter_apply(taps, rgg.adjacency, x);
        const VectorXd yd = gnn::filter_apply(taps, ens.grid.adjacency, x);
        diff2.add((yr - yd).squaredNorm());
        w2.add(geo::discrepancy(rgg).spectral_norm_w2);
    }

    const double c = spectral::filter_lipschitz_constant(taps, 1.0);
    BoundReport rep;
    rep.name = BoundName::PropA2FilterRggDgg;
    rep.n = ens.grid.n;
    rep.sigma = ens.sigma;
    rep.order = taps.order();
    rep.lhs = diff2.mean;
    rep.lhs_stderr = diff2.stderr_mean();
    rep.rhs = ens.grid.n * c * c * w2.mean * x.squaredNorm();
    rep.holds = bound_holds(rep.lhs, rep.lhs_stderr, rep.rhs);
    return rep;
}

BoundReport verify_gnn_rgg_dgg(const RggEnsemble& ens, const gnn::GnnParams& params,
                               const VectorXd& x) {
    if (params.squash != gnn::OutputSquash::None)
        throw Error("verify_gnn_rgg_dgg: bound checks run without output squash");
    Welford diff2, w2;
    for (int s = 0; s < ens.seeds; ++s) {
        const auto rgg =
            geo::perturb_to_rgg(ens.grid, ens.sigma, derive_seed(ens.master_seed, 0x566, s));
        const VectorXd yr = gnn::gnn_apply(params, rgg.adjacency, x);
        const VectorXd yd = gnn::gnn_apply(params, ens.grid.adjacency, x);
        diff2.add((yr - yd).squaredNorm());
        w2.add(geo::discrepancy(rgg).spectral_norm_w2);
    }

    double c = 0.0;
    for (const auto& taps : params.layers)
        c = std::max(c, spectral::filter_lipschitz_constant(taps, 1.0));

    BoundReport rep;
    rep.name = BoundName::PropA2GnnRggDgg;
    rep.n = ens.grid.n;
    rep.sigma = ens.sigma;
    rep.order = static_cast<int>(max_order(params));
    rep.lhs = diff2.mean;
    rep.lhs_stderr = diff2.stderr_mean();
    rep.rhs = ens.grid.n * c * c * w2.mean * x.squaredNorm();  // F = 1
    rep.holds = bound_holds(rep.lhs, rep.lhs_stderr, rep.rhs);
    return rep;
}

BoundReport verify_gnn_rgg_dgg_multi(const RggEnsemble& ens, const gnn::MultiGnnParams& params,
                                     const MatrixXd& xin) {
    Welford diff2, w2;
    for (int s = 0; s < ens.seeds; ++s) {
        const auto rgg =
            geo::perturb_to_rgg(ens.grid, ens.sigma, derive_seed(ens.master_seed, 0x566, s));
        const MatrixXd yr = gnn::multi_gnn_apply(params, rgg.adjacency, xin);
        const MatrixXd yd = gnn::multi_gnn_apply(params, ens.grid.adjacency, xin);
        diff2.add((yr - yd).squaredNorm());
        w2.add(geo::discrepancy(rgg).spectral_norm_w2);
    }

    double c = 0.0;
    int features = static_cast<int>(xin.cols());
    int k_order = 0;
    for (const auto& bank : params.banks) {
        features = std::max(features, static_cast<int>(bank.front().size()));
        for (const auto& row : bank)
            for (const auto& taps : row) {
                c = std::max(c, spectral::filter_lipschitz_constant(taps, 1.0));
                k_order = std::max(k_order, taps.order());
            }
    }
    const double fl = std::pow(static_cast<double>(features), params.depth());

    BoundReport rep;
    rep.name = BoundName::PropA2GnnRggDgg;
    rep.n = ens.grid.n;
    rep.sigma = ens.sigma;
    rep.order = k_order;
    rep.notes = "F=" + std::to_string(features) + " L=" + std::to_string(params.depth());
    rep.lhs = diff2.mean;
    rep.lhs_stderr = diff2.stderr_mean();
    rep.rhs = fl * ens.grid.n * c * c * w2.mean * xin.squaredNorm();
    rep.holds = bound_holds(rep.lhs, rep.lhs_stderr, rep.rhs);
    return rep;
}

BoundReport verify_thm2_loss(const RggEnsemble& ens, const gnn::GnnParams& student,
                             const gnn::GnnParams& teacher, const VectorXd& x) {
    const int n = ens.grid.n;
    const VectorXd target = gnn::gnn_apply(teacher, ens.grid.adjacency, x);
    const VectorXd yd = gnn::gnn_apply(student, ens.grid.adjacency, x);
    const double loss_dgg = (yd - target).squaredNorm() / n;

    Welford loss_rgg, w2;
    for (int s = 0; s < ens.seeds; ++s) {
        const auto rgg =
            geo::perturb_to_rgg(ens.grid, ens.sigma, derive_seed(ens.master_seed, 0x566, s));
        const VectorXd yr = gnn::gnn_apply(student, rgg.adjacency, x);
        loss_rgg.add((yr - target).squaredNorm() / n);
        w2.add(geo::discrepancy(rgg).spectral_norm_w2);
    }

    double c = 0.0;
    for (const auto& taps : student.layers)
        c = std::max(c, spectral::filter_lipschitz_constant(taps, 1.0));

    const double eps = loss_rgg.mean;
    BoundReport rep;
    rep.name = BoundName::Thm2LossRggDgg;
    rep.n = n;
    rep.sigma = ens.sigma;
    rep.order = static_cast<int>(max_order(student));
    rep.lhs = std::abs(loss_dgg - loss_rgg.mean);
    rep.lhs_stderr = loss_rgg.stderr_mean();
    rep.rhs = c * c * w2.mean * x.squaredNorm() +
              2.0 * std::sqrt(eps) * c * std::sqrt(w2.mean) * x.norm();
    rep.holds = bound_holds(rep.lhs, rep.lhs_stderr, rep.rhs);
    return rep;
}

AlphaFit fit_alpha(const std::vector<double>& node_counts, const std::vector<double>& means) {
    if (node_counts.size() != means.size() || node_counts.size() < 3)
        throw Error("fit_alpha: need at least 3 matching sizes");
    AlphaFit fit;
    fit.mean_w2 = means;
    for (double n : node_counts) fit.sizes.push_back(static_cast<int>(n));
    for (double m : means)
        if (m <= 0.0) fit.infinite_alpha = true;
    if (fit.infinite_alpha) return fit;

    const std::size_t k = means.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < k; ++i) {
        const double lx = std::log(node_counts[i]);
        const double ly = std::log(means[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / k;
    fit.alpha = -slope;

    double ss_res = 0, ss_tot = 0;
    const double mean_y = sy / k;
    for (std::size_t i = 0; i < k; ++i) {
        const double lx = std::log(node_counts[i]);
        const double ly = std::log(means[i]);
        ss_res += (ly - slope * lx - intercept) * (ly - slope * lx - intercept);
        ss_tot += (ly - mean_y) * (ly - mean_y);
    }
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

AlphaFit estimate_alpha(const std::vector<int>& sides, const geo::GridSpec& base, double sigma,
                        int seeds_per_size, std::uint64_t master_seed) {
    if (sides.size() < 3) throw Error("estimate_alpha: need at least 3 sizes");
    std::vector<double> ns, means;
    for (std::size_t i = 0; i < sides.size(); ++i) {
        geo::GridSpec spec = base;
        spec.side = sides[i];
        const auto grid = geo::make_grid(spec);
        Welford w2;
        for (int s = 0; s < seeds_per_size; ++s) {
            const auto rgg =
                geo::perturb_to_rgg(grid, sigma, derive_seed(master_seed, 0xA1FA, i, s));
            w2.add(geo::discrepancy(rgg).spectral_norm_w2);
        }
        ns.push_back(grid.n);
        means.push_back(w2.mean);
    }
    return fit_alpha(ns, means);
}

BoundReport verify_thm3(const RggEnsemble& ens_n, const RggEnsemble& ens_m,
                        const gnn::GnnParams& student, const gnn::GnnParams& teacher,
                        const VectorXd& x_n, const VectorXd& x_m) {
    const double loss_n = ensemble_loss(ens_n, student, teacher, x_n, nullptr);
    Welford stats_m;
    const double loss_m = ensemble_loss(ens_m, student, teacher, x_m, &stats_m);

    const double n = ens_n.grid.n, m = ens_m.grid.n;
    const double eps = loss_n;
    const double rate = std::sqrt(eps) * (x_n.norm() / std::sqrt(n) + x_m.norm() / std::sqrt(m)) +
                        x_n.squaredNorm() / n + x_m.squaredNorm() / m;

    BoundReport rep;
    rep.name = BoundName::Thm3CrossScale;
    rep.n = ens_n.grid.n;
    rep.m = ens_m.grid.n;
    rep.sigma = ens_n.sigma;
    rep.order = static_cast<int>(max_order(student));
    rep.lhs = std::abs(loss_n - loss_m);
    rep.lhs_stderr = stats_m.stderr_mean();
    rep.rhs = rate;  // explicit leading constant 1
    rep.holds = bound_holds(rep.lhs, rep.lhs_stderr, rep.rhs);
    rep.notes = std::string("holds@10=") +
                (bound_holds(rep.lhs, rep.lhs_stderr, 10.0 * rate) ? "true" : "false");
    return rep;
}

} // namespace rggnn::bounds
