// Acceptance suite: one pass/fail line per criterion, sized for CI.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "rggnn/harness.hpp"
#include "rggnn/io.hpp"
#include "rggnn/rng.hpp"
#include "test_helpers.hpp"

using namespace rggnn;
using Eigen::MatrixXd;
using Eigen::VectorXd;
namespace fs = std::filesystem;

namespace {

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

void report(int criterion, const std::string& what, bool ok, double seconds) {
    std::printf("[%s] criterion %d: %s (%.1f s)\n", ok ? "PASS" : "FAIL", criterion, what.c_str(),
                seconds);
    std::fflush(stdout);
    CHECK_MESSAGE(ok, "criterion ", criterion, " failed: ", what);
}

} // namespace

TEST_CASE("criterion 1: grid/convolution equivalence") {
    Stopwatch watch;
    Rng rng(1001);
    double worst = 0.0;
    for (int b : {4, 8, 16, 22}) {
        const auto grid = geo::make_grid({b, 1.0, 1.5, true});
        const auto mask = geo::mask_matrix(grid);
        for (int order = 1; order <= 5; ++order) {
            const auto taps = test_helpers::random_taps(rng, order);
            const VectorXd x = test_helpers::random_vector(rng, grid.n);
            const VectorXd via_graph = gnn::filter_apply(taps, grid.adjacency, x);
            const VectorXd via_grid = gnn::flatten_field(
                gnn::grid_filter_apply(taps, mask, gnn::reshape_signal(x, b)));
            worst = std::max(worst, (via_grid - via_graph).cwiseAbs().maxCoeff());
        }
    }
    const double elapsed = watch.seconds();
    const bool ok = worst <= 1e-9 && elapsed < 10.0;
    report(1, "graph filter vs 2D circular convolution, max err " + io::format_double(worst), ok,
           elapsed);
}

TEST_CASE("criterion 2: spectral consistency") {
    Stopwatch watch;
    Rng rng(1002);
    double worst = 0.0;
    for (int rep = 0; rep < 50; ++rep) {
        const int n = 8 + static_cast<int>(rng.index(57));  // <= 64
        const MatrixXd s = test_helpers::random_symmetric(rng, n, 0.5);
        const VectorXd x = test_helpers::random_vector(rng, n);
        const auto taps = test_helpers::random_taps(rng, 1 + rng.index(4));

        const auto dec = spectral::decompose(s);
        const VectorXd hhat = spectral::frequency_response(taps, dec.eigenvalues);
        const VectorXd via_spectrum =
            dec.eigenvectors * hhat.asDiagonal() * (dec.eigenvectors.transpose() * x);
        const VectorXd via_poly = gnn::filter_apply(taps, s, x);
        worst = std::max(worst, (via_spectrum - via_poly).cwiseAbs().maxCoeff());
    }
    const double elapsed = watch.seconds();
    const bool ok = worst <= 1e-9 && elapsed < 10.0;
    report(2, "polynomial route vs eigenbasis route on 50 GSOs, max err " +
                  io::format_double(worst),
           ok, elapsed);
}

namespace {

struct EnumOracle {
    double expected = 0.0;
    gnn::GnnGrad grad;
    std::vector<double> lagr, prob;
    std::vector<gnn::GnnGrad> score;
};

EnumOracle enumerate(const gnn::GnnParams& params, const channel::ChannelRealization& real,
                     const channel::ChannelModel& model, const VectorXd& x, double p0,
                     double lambda, double pmax) {
    const int n = real.n;
    const VectorXd q = gnn::gnn_apply(params, real.gso, x);
    EnumOracle e;
    VectorXd de_dq = VectorXd::Zero(n);
    for (int b = 0; b < (1 << n); ++b) {
        std::vector<std::uint8_t> bits(n);
        VectorXd p = VectorXd::Zero(n);
        double prob = 1.0;
        for (int i = 0; i < n; ++i) {
            bits[i] = (b >> i) & 1;
            p(i) = bits[i] ? p0 : 0.0;
            prob *= bits[i] ? q(i) : 1.0 - q(i);
        }
        const double lagr = channel::rates(real, model, p).sum() - lambda * (p.sum() - pmax);
        e.expected += prob * lagr;
        e.lagr.push_back(lagr);
        e.prob.push_back(prob);
        for (int i = 0; i < n; ++i) {
            double rest = 1.0;
            for (int j = 0; j < n; ++j)
                if (j != i) rest *= bits[j] ? q(j) : 1.0 - q(j);
            de_dq(i) += lagr * (bits[i] ? 1.0 : -1.0) * rest;
        }
        e.score.push_back(policy::sample_score_gradient(params, real, x, bits));
    }
    auto [out, tape] = gnn::gnn_forward(params, real.gso, x);
    e.grad = gnn::gnn_backward(tape, de_dq);
    return e;
}

double grad_gap(const gnn::GnnGrad& a, const gnn::GnnGrad& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t l = 0; l < a.dh.size(); ++l)
        for (std::size_t k = 0; k < a.dh[l].size(); ++k) {
            num += (a.dh[l][k] - b.dh[l][k]) * (a.dh[l][k] - b.dh[l][k]);
            den += a.dh[l][k] * a.dh[l][k];
        }
    return std::sqrt(num / std::max(den, 1e-300));
}

} // namespace

TEST_CASE("criterion 3: gradient exactness") {
    Stopwatch watch;
    Rng rng(1003);

    // backward vs central finite differences on 20 random instances
    double worst_fd = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
        const int n = 6 + static_cast<int>(rng.index(7));
        const MatrixXd s = test_helpers::random_symmetric(rng, n, 0.4);
        const VectorXd x = test_helpers::random_vector(rng, n);
        const VectorXd target = test_helpers::random_vector(rng, n);
        gnn::GnnParams params;
        const int depth = 1 + rng.index(2);
        for (int l = 0; l < depth; ++l)
            params.layers.push_back(test_helpers::random_taps(rng, 1 + rng.index(3)));
        params.nonlinearity = gnn::Nonlinearity::LeakyReLU;
        params.leaky_slope = 0.2;

        auto [y, tape] = gnn::gnn_forward(params, s, x);
        const auto grad = gnn::gnn_backward(tape, y - target);
        const double step = 1e-5;
        for (std::size_t l = 0; l < params.layers.size(); ++l)
            for (std::size_t k = 0; k < params.layers[l].h.size(); ++k) {
                auto plus = params;
                auto minus = params;
                plus.layers[l].h[k] += step;
                minus.layers[l].h[k] -= step;
                const double lp = 0.5 * (gnn::gnn_apply(plus, s, x) - target).squaredNorm();
                const double lm = 0.5 * (gnn::gnn_apply(minus, s, x) - target).squaredNorm();
                const double fd = (lp - lm) / (2.0 * step);
                const double denom =
                    std::max({std::abs(grad.dh[l][k]), std::abs(fd), 1e-8});
                worst_fd = std::max(worst_fd, std::abs(grad.dh[l][k] - fd) / denom);
            }
    }

    // REINFORCE vs enumeration on a 6-node line (64 outcomes)
    geo::GeometricGraph line;
    line.n = 6;
    line.positions.resize(6, 2);
    for (int i = 0; i < 6; ++i) {
        line.positions(i, 0) = i;
        line.positions(i, 1) = 0.0;
    }
    line.spec = {2, 1.0, 1.0, false};
    line.deg_norm = 4;
    line.adjacency.resize(6, 6);
    channel::ChannelModel model;
    model.pathloss_exponent = 2.0;
    model.fading = channel::Fading::None;
    model.noise_power = 1.0;
    model.direct_link_distance = 0.5;
    const auto real = channel::draw_channel(line, model, 5);
    const auto params = policy::init_params(2, 3, gnn::Nonlinearity::LeakyReLU, 0.25, 7);
    const VectorXd x = channel::policy_input(real);
    const auto oracle = enumerate(params, real, model, x, 1.0, 0.1, 1.8);

    gnn::GnnGrad score_expected = gnn::zero_grad_like(params);
    for (std::size_t b = 0; b < oracle.prob.size(); ++b)
        for (std::size_t l = 0; l < score_expected.dh.size(); ++l)
            for (std::size_t k = 0; k < score_expected.dh[l].size(); ++k)
                score_expected.dh[l][k] +=
                    oracle.prob[b] * oracle.lagr[b] * oracle.score[b].dh[l][k];
    const double exact_gap = grad_gap(oracle.grad, score_expected);

    const VectorXd q = gnn::gnn_apply(params, real.gso, x);
    Rng mc_rng(1004);
    gnn::GnnGrad mc = gnn::zero_grad_like(params);
    const int draws = 100000;
    for (int d = 0; d < draws; ++d) {
        int outcome = 0;
        for (int i = 0; i < 6; ++i)
            if (mc_rng.bernoulli(q(i))) outcome |= 1 << i;
        for (std::size_t l = 0; l < mc.dh.size(); ++l)
            for (std::size_t k = 0; k < mc.dh[l].size(); ++k)
                mc.dh[l][k] += oracle.lagr[outcome] * oracle.score[outcome].dh[l][k] / draws;
    }
    const double mc_gap = grad_gap(oracle.grad, mc);

    const double elapsed = watch.seconds();
    const bool ok = worst_fd <= 1e-4 && exact_gap <= 1e-10 && mc_gap <= 0.02 && elapsed < 120.0;
    report(3,
           "backward FD err " + io::format_double(worst_fd) + ", estimator-expectation gap " +
               io::format_double(exact_gap) + ", MC gap " + io::format_double(mc_gap),
           ok, elapsed);
}

TEST_CASE("criterion 4: bound verification suite") {
    Stopwatch watch;
    harness::BoundsSuiteConfig cfg;  // defaults: 100 instances, B in {8,12,16}, sigma <= 0.1a
    const auto reports = harness::run_bounds_suite(cfg, "");
    int held = 0, rggdgg = 0, rggdgg_held = 0, grid_held = 0, grid_total = 0, out_of_regime = 0;
    for (const auto& r : reports) {
        held += r.holds;
        out_of_regime += r.out_of_regime;
        const bool is_rggdgg = r.name == bounds::BoundName::PropA2FilterRggDgg ||
                               r.name == bounds::BoundName::PropA2GnnRggDgg;
        if (is_rggdgg) {
            ++rggdgg;
            rggdgg_held += r.holds;
        }
        if (r.name == bounds::BoundName::Prop1GridFilter ||
            r.name == bounds::BoundName::Thm1GridGnn) {
            ++grid_total;
            grid_held += r.holds;
        }
    }
    const double elapsed = watch.seconds();
    const bool ok = held == static_cast<int>(reports.size()) && rggdgg >= 100 &&
                    rggdgg_held == rggdgg && grid_held == grid_total && out_of_regime == 0 &&
                    elapsed < 600.0;
    report(4,
           std::to_string(held) + "/" + std::to_string(reports.size()) + " reports hold (" +
               std::to_string(rggdgg_held) + "/" + std::to_string(rggdgg) + " RGG-DGG)",
           ok, elapsed);
}

TEST_CASE("criterion 5: alpha fit pipeline") {
    Stopwatch watch;
    std::vector<double> ns{64, 144, 256, 400};
    std::vector<double> planted2, planted07;
    for (double n : ns) {
        planted2.push_back(std::pow(n, -2.0));
        planted07.push_back(5.0 * std::pow(n, -0.7));
    }
    const auto fit2 = bounds::fit_alpha(ns, planted2);
    const auto fit07 = bounds::fit_alpha(ns, planted07);
    const bool planted_ok =
        std::abs(fit2.alpha - 2.0) <= 1e-6 && std::abs(fit07.alpha - 0.7) <= 1e-6;

    harness::AlphaConfig cfg;  // B in {8,12,16,20}, sigma 0.05, 50 seeds
    const auto fit = harness::run_alpha(cfg, "");
    // regression pin of the measured ensemble (reported, not asserted vs theory)
    const bool pinned_ok = !fit.infinite_alpha &&
                           std::abs(fit.alpha - -0.72187216364600648) < 1e-9;

    const double elapsed = watch.seconds();
    const bool ok = planted_ok && pinned_ok;
    report(5,
           "planted slopes exact; measured alpha = " + io::format_double(fit.alpha) +
               " (R^2 = " + io::format_double(fit.r_squared) + ")",
           ok, elapsed);
}

namespace {

struct DeskExperiment {
    harness::ExperimentConfig cfg;
    harness::TransferResult result;
    double seconds = 0.0;
};

const DeskExperiment& desk_experiment() {
    static DeskExperiment desk = [] {
        Stopwatch watch;
        DeskExperiment d;
        d.cfg.dataset.scales = {100, 196, 289, 400};
        d.cfg.dataset.graphs_per_scale = 30;
        d.cfg.dataset.sigma = 0.05;
        d.cfg.dataset.master_seed = 2718;
        d.cfg.model.fading = channel::Fading::Rayleigh;
        d.cfg.problem.iters = 2000;
        d.cfg.problem.batch = 8;
        d.cfg.problem.primal_step = 2e-2;
        d.cfg.problem.dual_step = 1e-3;
        d.cfg.problem.grad_clip = 10.0;
        d.cfg.train_scale_index = 0;
        d.cfg.eval_scale_indices = {0, 1, 2, 3};
        d.cfg.trials = 3;
        d.cfg.train_graphs = 10;
        d.cfg.master_seed = 2718;
        const auto ds = harness::generate_dataset(d.cfg.dataset);
        const auto tmp = fs::temp_directory_path() / "rggnn_acceptance_desk";
        fs::remove_all(tmp);
        d.result = harness::run_transfer_experiment(d.cfg, ds, tmp.string());
        d.seconds = watch.seconds();
        return d;
    }();
    return desk;
}

const policy::MetricsRecord* find_record(const std::vector<policy::MetricsRecord>& records,
                                         const std::string& id, double scale) {
    for (const auto& r : records)
        if (r.policy_id == id && r.scale == scale) return &r;
    return nullptr;
}

} // namespace

TEST_CASE("criterion 6: policy ordering against WMMSE") {
    const auto& desk = desk_experiment();
    Stopwatch watch;
    const auto* gnn_rec = find_record(desk.result.records, "gnn_transfer", 100);
    const auto* wmmse_rec = find_record(desk.result.records, "wmmse", 100);
    REQUIRE(gnn_rec != nullptr);
    REQUIRE(wmmse_rec != nullptr);

    const bool ordering = gnn_rec->sum_rate_mean >= wmmse_rec->sum_rate_mean;
    const bool feasible = gnn_rec->violation_mean <= 0.05;
    const double elapsed = desk.seconds + watch.seconds();
    const bool ok = ordering && feasible && elapsed < 1200.0;
    report(6,
           "GNN " + io::format_double(gnn_rec->sum_rate_mean) + " vs WMMSE " +
               io::format_double(wmmse_rec->sum_rate_mean) + ", violation " +
               io::format_double(gnn_rec->violation_mean),
           ok, elapsed);
}

TEST_CASE("criterion 7: transferability across scales") {
    const auto& desk = desk_experiment();
    Stopwatch watch;
    bool ok = true;
    std::string detail;
    for (double scale : {100.0, 196.0, 289.0, 400.0}) {
        const auto* transfer = find_record(desk.result.records, "gnn_transfer", scale);
        const auto* indist = find_record(desk.result.records, "gnn_indist", scale);
        REQUIRE(transfer != nullptr);
        REQUIRE(indist != nullptr);
        const double rel = transfer->sum_rate_mean / std::max(indist->sum_rate_mean, 1e-12);
        ok = ok && rel >= 0.85 && transfer->violation_mean <= 0.05;
        detail += " n=" + std::to_string(static_cast<int>(scale)) + ":" +
                  io::format_double(rel);
    }
    const double elapsed = desk.seconds + watch.seconds();
    ok = ok && elapsed < 1800.0;
    report(7, "transfer/in-distribution ratios" + detail, ok, elapsed);
}

TEST_CASE("criterion 8: WMMSE surrogate monotonicity and feasibility") {
    Stopwatch watch;
    channel::ChannelModel model;
    model.pathloss_exponent = 2.2;
    model.fading = channel::Fading::Rayleigh;
    model.noise_power = 1.0;
    model.direct_link_distance = 0.5;
    const auto grid = geo::make_grid({3, 1.0, 1.2, false});

    bool monotone = true, feasible = true;
    for (int rep = 0; rep < 100; ++rep) {
        const auto real = channel::draw_channel(grid, model, derive_seed(1008, rep));
        const double pmax = (0.2 + 0.05 * (rep % 10)) * grid.n;
        const auto res = policy::wmmse_policy(real, model, 1.0, pmax, 30);
        feasible = feasible && res.powers.sum() <= pmax + 1e-9;
        for (std::size_t i = 1; i < res.surrogate.size(); ++i)
            monotone = monotone && res.surrogate[i] >= res.surrogate[i - 1] - 1e-9;
    }
    const double elapsed = watch.seconds();
    const bool ok = monotone && feasible && elapsed < 60.0;
    report(8, "100 random fixtures monotone and within budget", ok, elapsed);
}

namespace {

int run_cli(const std::string& args, std::string* output = nullptr,
            const std::string& env_prefix = "") {
    const char* cli = std::getenv("RGGNN_CLI");
    REQUIRE_MESSAGE(cli != nullptr, "RGGNN_CLI must point at the CLI binary");
    const std::string cmd = (env_prefix.empty() ? "" : env_prefix + " ") + std::string(cli) +
                            " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string text;
    char buf[512];
    while (fgets(buf, sizeof(buf), pipe)) text += buf;
    const int status = pclose(pipe);
    if (output) *output = text;
    return WEXITSTATUS(status);
}

} // namespace

TEST_CASE("criterion 9: CLI determinism and contract") {
    Stopwatch watch;
    const auto tmp = fs::temp_directory_path() / "rggnn_acceptance_cli";
    fs::remove_all(tmp);
    fs::create_directories(tmp);

    const std::string config_path = (tmp / "desk.cfg").string();
    io::write_text(config_path,
                   "[dataset]\n"
                   "scales = 16, 25\n"
                   "graphs_per_scale = 4\n"
                   "sigma = 0.05\n"
                   "master_seed = 7\n"
                   "[problem]\n"
                   "iters = 5\n"
                   "batch = 2\n"
                   "grad_clip = 10\n"
                   "[gnn]\n"
                   "layers = 2\n"
                   "taps = 3\n"
                   "[experiment]\n"
                   "train_scale_index = 0\n"
                   "eval_scale_indices = 0, 1\n"
                   "trials = 2\n"
                   "train_graphs = 2\n"
                   "[bounds]\n"
                   "instances = 4\n"
                   "seeds_per_instance = 5\n"
                   "grid_instances = 1\n"
                   "grid_trials = 30\n"
                   "[alpha]\n"
                   "sides = 6, 8, 10\n"
                   "seeds_per_size = 5\n");

    std::string help;
    const int help_code = run_cli("--help", &help);
    bool contract = help_code == 0;
    for (const char* sub : {"generate", "train", "eval", "transfer", "bounds", "alpha"})
        contract = contract && help.find(sub) != std::string::npos;
    contract = contract && run_cli("transfer --no-such-flag", nullptr) == 2;
    contract =
        contract && run_cli("transfer --config " + (tmp / "absent.cfg").string(), nullptr) == 2;

    bool identical = true;
    for (const char* run : {"a", "b"}) {
        const std::string out = (tmp / run).string();
        identical = identical && run_cli("generate --config " + config_path + " --out " + out) == 0;
        identical = identical && run_cli("transfer --config " + config_path + " --out " + out) == 0;
        identical = identical && run_cli("bounds --config " + config_path + " --out " + out) == 0;
        identical = identical && run_cli("alpha --config " + config_path + " --out " + out) == 0;
    }
    for (const char* name :
         {"metrics.csv", "trace_transfer.csv", "transfer_curve.csv", "bounds.csv", "alpha.csv"}) {
        const auto a = tmp / "a" / name;
        const auto b = tmp / "b" / name;
        identical = identical && fs::exists(a) && fs::exists(b) &&
                    io::read_text(a.string()) == io::read_text(b.string());
    }
    // bounds.csv carries the versioned schema
    const std::string bounds_text = io::read_text((tmp / "a" / "bounds.csv").string());
    contract = contract && bounds_text.rfind(io::kBoundsSchema, 0) == 0;

    // RGGNN_OUT is honored when --out is absent
    const std::string env_out = (tmp / "env_out").string();
    contract = contract &&
               run_cli("alpha --config " + config_path, nullptr, "RGGNN_OUT=" + env_out) == 0 &&
               fs::exists(fs::path(env_out) / "alpha.csv");

    const double elapsed = watch.seconds();
    const bool ok = contract && identical;
    report(9, "reruns byte-identical; help lists all six subcommands", ok, elapsed);
    fs::remove_all(tmp);
}
