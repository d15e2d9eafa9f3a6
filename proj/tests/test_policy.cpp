#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "rggnn/io.hpp"
#include "rggnn/policy.hpp"
#include "rggnn/rng.hpp"
#include "test_helpers.hpp"

using namespace rggnn;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

geo::GeometricGraph small_grid(int side) { return geo::make_grid({side, 1.0, 1.2, false}); }

channel::ChannelModel quiet_model() {
    channel::ChannelModel m;
    m.pathloss_exponent = 2.0;
    m.fading = channel::Fading::None;
    m.noise_power = 1.0;
    m.direct_link_distance = 0.5;
    return m;
}

gnn::GnnParams biased_policy(int layers, double bias) {
    // Constant-tap layers drive the sigmoid toward 0 or 1.
    gnn::GnnParams p;
    for (int l = 0; l < layers; ++l) p.layers.push_back(gnn::FilterTaps({bias}));
    p.nonlinearity = gnn::Nonlinearity::LeakyReLU;
    p.leaky_slope = 1.0;  // identity, keeps the bias sign through depth
    p.squash = gnn::OutputSquash::Sigmoid;
    return p;
}

/// Enumerates all 2^n allocations: exact E[Lagrangian] plus its exact
/// parameter gradient via the product rule on the outcome probabilities.
struct Enumeration {
    double expected = 0.0;
    gnn::GnnGrad grad;                ///< sum_b L(b) dP(b)/dH, product-rule route
    gnn::GnnGrad estimator_expected;  ///< sum_b P(b) L(b) grad log P(b), score route
    std::vector<double> lagr;         ///< per outcome
    std::vector<double> prob;
    std::vector<gnn::GnnGrad> score;
};

Enumeration enumerate_policy(const gnn::GnnParams& params,
                             const channel::ChannelRealization& real,
                             const channel::ChannelModel& model, const VectorXd& x, double p0,
                             double lambda, double pmax) {
    const int n = real.n;
    const VectorXd q = gnn::gnn_apply(params, real.gso, x);

    Enumeration e;
    e.grad = gnn::zero_grad_like(params);
    e.estimator_expected = gnn::zero_grad_like(params);
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
        const double lagr =
            channel::rates(real, model, p).sum() - lambda * (p.sum() - pmax);
        e.expected += prob * lagr;
        e.lagr.push_back(lagr);
        e.prob.push_back(prob);

        // product rule: dP/dq_i = (2 b_i - 1) prod_{j != i} (b_j q_j + (1-b_j)(1-q_j))
        for (int i = 0; i < n; ++i) {
            double rest = 1.0;
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                rest *= bits[j] ? q(j) : 1.0 - q(j);
            }
            de_dq(i) += lagr * (bits[i] ? 1.0 : -1.0) * rest;
        }

        auto s = policy::sample_score_gradient(params, real, x, bits);
        for (std::size_t l = 0; l < s.dh.size(); ++l)
            for (std::size_t k = 0; k < s.dh[l].size(); ++k)
                e.estimator_expected.dh[l][k] += prob * lagr * s.dh[l][k];
        e.score.push_back(std::move(s));
    }

    auto [out, tape] = gnn::gnn_forward(params, real.gso, x);
    e.grad = gnn::gnn_backward(tape, de_dq);
    return e;
}

double grad_rel_gap(const gnn::GnnGrad& a, const gnn::GnnGrad& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t l = 0; l < a.dh.size(); ++l)
        for (std::size_t k = 0; k < a.dh[l].size(); ++k) {
            num += (a.dh[l][k] - b.dh[l][k]) * (a.dh[l][k] - b.dh[l][k]);
            den += a.dh[l][k] * a.dh[l][k];
        }
    return std::sqrt(num / std::max(den, 1e-300));
}

} // namespace

TEST_CASE("sample_policy: saturated policy switches everyone on") {
    const auto g = small_grid(3);
    const auto model = quiet_model();
    const auto real = channel::draw_channel(g, model, 1);
    const auto params = biased_policy(2, 50.0);  // q clamped to 1 - 1e-6
    const auto s =
        policy::sample_policy(params, real, model, channel::policy_input(real), 1.5, 7);
    CHECK(s.clamped);
    CHECK(s.total_power == doctest::Approx(9 * 1.5));
    for (double q : s.probs) CHECK(q == doctest::Approx(1.0 - 1e-6));
    CHECK(s.log_prob <= 0.0);
}

TEST_CASE("sample_policy: fair coin log-probability") {
    geo::GeometricGraph pair;
    pair.n = 2;
    pair.positions.resize(2, 2);
    pair.positions << 0, 0, 1, 0;
    pair.spec = {2, 1.0, 1.0, false};
    pair.deg_norm = 4;
    pair.adjacency.resize(2, 2);

    const auto model = quiet_model();
    const auto real = channel::draw_channel(pair, model, 3);
    // zero taps -> sigmoid(0) = 0.5 exactly
    gnn::GnnParams params;
    params.layers = {gnn::FilterTaps({0.0, 0.0})};
    params.squash = gnn::OutputSquash::Sigmoid;
    for (std::uint64_t seed : {1, 2, 3, 4}) {
        const auto s = policy::sample_policy(params, real, model, VectorXd::Ones(2), 1.0, seed);
        CHECK(s.log_prob == doctest::Approx(2.0 * std::log(0.5)).epsilon(1e-15));
    }
}

TEST_CASE("sample_policy: pinned 4-node draw") {
    const auto g = small_grid(2);
    const auto model = quiet_model();
    const auto real = channel::draw_channel(g, model, 11);
    const auto params = policy::init_params(2, 3, gnn::Nonlinearity::LeakyReLU, 0.25, 5);
    const auto s =
        policy::sample_policy(params, real, model, channel::policy_input(real), 1.0, 13);
    // regression fixture: recorded from this exact seed stream
    CHECK(s.bits == std::vector<std::uint8_t>{0, 1, 1, 1});
    CHECK(s.sum_rate == doctest::Approx(2.7583207504420768).epsilon(1e-12));
    CHECK(s.total_power == 3.0);
}

TEST_CASE("lagrangian: multiplier and budget edge cases") {
    policy::PolicySample s;
    s.sum_rate = 5.0;
    s.total_power = 3.0;
    CHECK(policy::lagrangian(s, 0.0, 2.0) == 5.0);
    CHECK(policy::lagrangian(s, 7.3, 3.0) == 5.0);  // on budget
    CHECK(policy::lagrangian(s, 0.1, 2.0) == doctest::Approx(5.0 - 0.1 * 1.0).epsilon(1e-15));
    CHECK_THROWS(policy::lagrangian(s, -0.5, 2.0));
}

TEST_CASE("reinforce_step: multiplier stays at zero when on budget") {
    const auto g = small_grid(2);
    const auto model = quiet_model();
    const auto real = channel::draw_channel(g, model, 2);
    auto params = biased_policy(1, -50.0);  // everyone off, no power used

    policy::AllocationProblem prob;
    prob.p0 = 1.0;
    prob.pmax = 2.0;
    prob.primal_step = 0.0;
    prob.dual_step = 0.1;
    policy::DualState dual;

    std::vector<policy::BatchItem> batch{{&real, channel::policy_input(real)}};
    for (int i = 0; i < 5; ++i) {
        const auto diag = policy::reinforce_step(params, dual, batch, model, prob, 100 + i);
        CHECK(diag.lambda == 0.0);
        CHECK(dual.lambda == 0.0);
    }
}

TEST_CASE("reinforce gradient: enumeration oracle identities" * doctest::timeout(300)) {
    const auto g = small_grid(2);  // n = 4 -> 16 outcomes
    const auto model = quiet_model();
    const auto real = channel::draw_channel(g, model, 5);
    auto params = policy::init_params(2, 3, gnn::Nonlinearity::LeakyReLU, 0.25, 7);
    const VectorXd x = channel::policy_input(real);
    const double p0 = 1.0, lambda = 0.15, pmax = 1.2;

    const auto oracle = enumerate_policy(params, real, model, x, p0, lambda, pmax);

    // score route == product-rule route
    CHECK(grad_rel_gap(oracle.grad, oracle.estimator_expected) <= 1e-10);

    // central finite differences of the exact expectation
    gnn::GnnGrad fd = gnn::zero_grad_like(params);
    const double step = 1e-5;
    for (std::size_t l = 0; l < params.layers.size(); ++l)
        for (std::size_t k = 0; k < params.layers[l].h.size(); ++k) {
            auto plus = params;
            auto minus = params;
            plus.layers[l].h[k] += step;
            minus.layers[l].h[k] -= step;
            const double ep =
                enumerate_policy(plus, real, model, x, p0, lambda, pmax).expected;
            const double em =
                enumerate_policy(minus, real, model, x, p0, lambda, pmax).expected;
            fd.dh[l][k] = (ep - em) / (2.0 * step);
        }
    CHECK(grad_rel_gap(oracle.grad, fd) <= 1e-6);

    // Monte-Carlo score estimator over 1e5 draws
    const VectorXd q = gnn::gnn_apply(params, real.gso, x);
    Rng rng(99);
    gnn::GnnGrad mc = gnn::zero_grad_like(params);
    const int draws = 100000;
    for (int d = 0; d < draws; ++d) {
        int outcome = 0;
        for (int i = 0; i < real.n; ++i)
            if (rng.bernoulli(q(i))) outcome |= 1 << i;
        const auto& s = oracle.score[outcome];
        for (std::size_t l = 0; l < mc.dh.size(); ++l)
            for (std::size_t k = 0; k < mc.dh[l].size(); ++k)
                mc.dh[l][k] += oracle.lagr[outcome] * s.dh[l][k] / draws;
    }
    CHECK(grad_rel_gap(oracle.grad, mc) <= 0.02);
}

TEST_CASE("train: frozen primal leaves parameters untouched") {
    const auto g = small_grid(3);
    auto model = quiet_model();
    model.fading = channel::Fading::Rayleigh;

    policy::AllocationProblem prob;
    prob.p0 = 1.0;
    prob.pmax = 0.3 * 9;
    prob.primal_step = 0.0;
    prob.dual_step = 0.05;
    prob.batch = 4;
    prob.iters = 20;

    auto params = policy::init_params(2, 3, gnn::Nonlinearity::LeakyReLU, 0.25, 3);
    const auto before = params;
    const auto trace = policy::train(params, prob, {g}, model, 17);

    for (std::size_t l = 0; l < params.layers.size(); ++l)
        CHECK(params.layers[l].h == before.layers[l].h);

    // the multiplier follows the projected recursion on the observed violations
    double lambda = 0.0;
    for (const auto& step : trace.steps) {
        lambda = std::max(0.0, lambda + prob.dual_step * step.mean_violation * g.n);
        CHECK(step.lambda == doctest::Approx(lambda).epsilon(1e-12));
        CHECK(step.lambda >= 0.0);
    }
}

TEST_CASE("train: deterministic traces and convergent budget" * doctest::timeout(600)) {
    const auto g = small_grid(4);  // n = 16
    auto model = quiet_model();
    model.fading = channel::Fading::Rayleigh;

    policy::AllocationProblem prob;
    prob.p0 = 1.0;
    prob.pmax = 0.3 * 16;
    prob.primal_step = 2e-2;
    prob.dual_step = 2e-2;
    prob.batch = 8;
    prob.iters = 500;
    prob.grad_clip = 10.0;

    auto params_a = policy::init_params(3, 5, gnn::Nonlinearity::LeakyReLU, 0.25, 3);
    auto params_b = params_a;
    const auto trace_a = policy::train(params_a, prob, {g}, model, 17);
    const auto trace_b = policy::train(params_b, prob, {g}, model, 17);

    REQUIRE(trace_a.steps.size() == trace_b.steps.size());
    for (std::size_t i = 0; i < trace_a.steps.size(); ++i) {
        CHECK(trace_a.steps[i].mean_sum_rate == trace_b.steps[i].mean_sum_rate);
        CHECK(trace_a.steps[i].lambda == trace_b.steps[i].lambda);
    }
    for (std::size_t l = 0; l < params_a.layers.size(); ++l)
        CHECK(params_a.layers[l].h == params_b.layers[l].h);

    // tail violation within 5% of the budget
    double tail = 0.0;
    const int tail_len = 125;
    for (std::size_t i = trace_a.steps.size() - tail_len; i < trace_a.steps.size(); ++i)
        tail += trace_a.steps[i].mean_violation * g.n;
    tail /= tail_len;
    CHECK(std::abs(tail) <= 0.05 * prob.pmax);
}

TEST_CASE("train: rejects budgets outside (0, n*p0]") {
    const auto g = small_grid(3);
    auto model = quiet_model();
    policy::AllocationProblem prob;
    prob.p0 = 1.0;
    prob.pmax = 10.0;  // above n*p0 = 9
    prob.iters = 1;
    auto params = policy::init_params(1, 2, gnn::Nonlinearity::LeakyReLU, 0.25, 1);
    CHECK_THROWS(policy::train(params, prob, {g}, model, 1));
    prob.pmax = 0.0;
    CHECK_THROWS(policy::train(params, prob, {g}, model, 1));
}

TEST_CASE("draw_channel: rejects non-positive model parameters") {
    const auto g = small_grid(2);
    auto model = quiet_model();
    model.noise_power = 0.0;
    CHECK_THROWS(channel::draw_channel(g, model, 1));
}

TEST_CASE("wmmse: single user takes full power") {
    geo::GeometricGraph one;
    one.n = 1;
    one.positions = Eigen::MatrixX2d::Zero(1, 2);
    one.spec = {2, 1.0, 1.0, false};
    one.deg_norm = 4;
    one.adjacency.resize(1, 1);

    const auto model = quiet_model();
    const auto real = channel::draw_channel(one, model, 1);
    const auto res = policy::wmmse_policy(real, model, 2.0, 10.0, 25);
    CHECK(res.powers(0) == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(res.probs(0) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("wmmse: symmetric pair stays symmetric") {
    geo::GeometricGraph pair;
    pair.n = 2;
    pair.positions.resize(2, 2);
    pair.positions << 0, 0, 1, 0;
    pair.spec = {2, 1.0, 1.0, false};
    pair.deg_norm = 4;
    pair.adjacency.resize(2, 2);

    const auto model = quiet_model();
    const auto real = channel::draw_channel(pair, model, 1);
    const auto res = policy::wmmse_policy(real, model, 1.0, 0.8, 50);
    CHECK(res.powers(0) == doctest::Approx(res.powers(1)).epsilon(1e-12));
    CHECK(res.powers.sum() <= 0.8 + 1e-9);
}

TEST_CASE("wmmse: three-user fixture is monotone and pinned") {
    const auto g = small_grid(2);
    auto model = quiet_model();
    model.fading = channel::Fading::Rayleigh;
    const auto real = channel::draw_channel(g, model, 21);
    const auto res = policy::wmmse_policy(real, model, 1.0, 1.2, 50);

    for (std::size_t i = 1; i < res.surrogate.size(); ++i)
        CHECK(res.surrogate[i] >= res.surrogate[i - 1] - 1e-9);
    CHECK(res.powers.sum() <= 1.2 + 1e-9);
    // regression pins for this seed: budget active, power split across two users
    CHECK(res.powers.sum() == doctest::Approx(1.2).epsilon(1e-9));
    CHECK(res.powers(2) == doctest::Approx(0.7380556843208711).epsilon(1e-9));
    CHECK(res.powers(1) == doctest::Approx(0.46194431567912869).epsilon(1e-9));
}

TEST_CASE("wmmse: budget feasibility and monotonicity on random fixtures" *
          doctest::timeout(600)) {
    auto model = quiet_model();
    model.fading = channel::Fading::Rayleigh;
    const auto g = small_grid(3);
    for (int rep = 0; rep < 100; ++rep) {
        const auto real = channel::draw_channel(g, model, derive_seed(2025, rep));
        const double pmax = 0.2 + 0.05 * (rep % 10);
        const auto res = policy::wmmse_policy(real, model, 1.0, pmax * g.n, 30);
        CHECK(res.powers.sum() <= pmax * g.n + 1e-9);
        CHECK(res.powers.maxCoeff() <= 1.0 + 1e-12);
        CHECK(res.powers.minCoeff() >= 0.0);
        for (std::size_t i = 1; i < res.surrogate.size(); ++i)
            CHECK(res.surrogate[i] >= res.surrogate[i - 1] - 1e-9);
    }
}

TEST_CASE("evaluate_policy: forced all-off policy") {
    const auto g = small_grid(3);
    const auto model = quiet_model();
    policy::AllocationProblem prob;
    prob.p0 = 1.0;
    prob.pmax = 0.3 * 9;
    const auto params = biased_policy(1, -60.0);
    const auto rec = policy::evaluate_policy(policy::PolicyKind::Gnn, params, {g}, model, prob,
                                             9, 3, 77, "off");
    CHECK(rec.sum_rate_mean == 0.0);
    CHECK(rec.sum_rate_std == 0.0);
    CHECK(rec.violation_mean == doctest::Approx(-prob.pmax / 9).epsilon(1e-12));
}

TEST_CASE("evaluate_policy: deterministic policy has zero variance across trials") {
    const auto g = small_grid(3);
    auto model = quiet_model();
    model.fading = channel::Fading::Rayleigh;
    policy::AllocationProblem prob;
    prob.p0 = 1.0;
    prob.pmax = 0.3 * 9;
    const auto params = biased_policy(1, 60.0);  // q ~ 1: always on
    const auto rec = policy::evaluate_policy(policy::PolicyKind::Gnn, params, {g}, model, prob,
                                             9, 4, 78, "on");
    CHECK(rec.sum_rate_std == 0.0);
    CHECK(rec.violation_std == 0.0);
    CHECK(rec.violation_mean == doctest::Approx((9.0 - prob.pmax) / 9).epsilon(1e-12));
}

TEST_CASE("property: whole-policy permutation equivariance") {
    const auto g = small_grid(3);
    auto model = quiet_model();
    model.fading = channel::Fading::Rayleigh;
    const auto real = channel::draw_channel(g, model, 31);
    const auto params = policy::init_params(2, 3, gnn::Nonlinearity::LeakyReLU, 0.25, 11);
    const VectorXd x = channel::policy_input(real);
    const VectorXd q = gnn::gnn_apply(params, real.gso, x);

    Rng rng(32);
    std::vector<int> perm(g.n);
    for (int i = 0; i < g.n; ++i) perm[i] = i;
    for (int i = g.n - 1; i > 0; --i) std::swap(perm[i], perm[rng.index(i + 1)]);

    channel::ChannelRealization permuted = real;
    for (int i = 0; i < g.n; ++i) {
        permuted.direct(perm[i]) = real.direct(i);
        for (int j = 0; j < g.n; ++j) permuted.gso(perm[i], perm[j]) = real.gso(i, j);
    }
    VectorXd xp(g.n);
    for (int i = 0; i < g.n; ++i) xp(perm[i]) = x(i);

    const VectorXd qp = gnn::gnn_apply(params, permuted.gso, xp);
    for (int i = 0; i < g.n; ++i) CHECK(qp(perm[i]) == doctest::Approx(q(i)).epsilon(1e-10));
}

TEST_CASE("checkpoint round trip preserves every tap digit") {
    const auto params = policy::init_params(3, 5, gnn::Nonlinearity::LeakyReLU, 0.3, 77);
    io::save_params(params, "test_params.gnnp");
    const auto loaded = io::load_params("test_params.gnnp");
    std::remove("test_params.gnnp");
    REQUIRE(loaded.layers.size() == params.layers.size());
    for (std::size_t l = 0; l < params.layers.size(); ++l)
        CHECK(loaded.layers[l].h == params.layers[l].h);
    CHECK(loaded.leaky_slope == params.leaky_slope);
    CHECK(loaded.squash == params.squash);
}
