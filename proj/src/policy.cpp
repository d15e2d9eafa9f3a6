#include "rggnn/policy.hpp"

#include <cassert>
#include <cmath>

#include "rggnn/rng.hpp"

namespace rggnn::policy {

namespace {

constexpr double kProbFloor = 1e-6;

VectorXd clamp_probs(const VectorXd& q, bool* clamped) {
    VectorXd out = q;
    for (Eigen::Index i = 0; i < out.size(); ++i) {
        if (out(i) < kProbFloor) {
            out(i) = kProbFloor;
            if (clamped) *clamped = true;
        } else if (out(i) > 1.0 - kProbFloor) {
            out(i) = 1.0 - kProbFloor;
            if (clamped) *clamped = true;
        }
    }
    return out;
}

void axpy(gnn::GnnGrad& acc, double alpha, const gnn::GnnGrad& g) {
    for (std::size_t l = 0; l < acc.dh.size(); ++l)
        for (std::size_t k = 0; k < acc.dh[l].size(); ++k) acc.dh[l][k] += alpha * g.dh[l][k];
}

bool finite(const gnn::GnnGrad& g) {
    for (const auto& layer : g.dh)
        for (double v : layer)
            if (!std::isfinite(v)) return false;
    return true;
}

} // namespace

PolicySample sample_policy(const gnn::GnnParams& params, const channel::ChannelRealization& real,
                           const channel::ChannelModel& model, const VectorXd& x, double p0,
                           std::uint64_t seed) {
    if (params.squash != gnn::OutputSquash::Sigmoid)
        throw Error("sample_policy: policy GNN must use sigmoid output squash");

    PolicySample s;
    s.probs = clamp_probs(gnn::gnn_apply(params, real.gso, x), &s.clamped);

    Rng rng(seed);
    const int n = real.n;
    s.bits.resize(n);
    s.allocation = VectorXd::Zero(n);
    s.log_prob = 0.0;
    for (int i = 0; i < n; ++i) {
        const bool on = rng.bernoulli(s.probs(i));
        s.bits[i] = on ? 1 : 0;
        s.allocation(i) = on ? p0 : 0.0;
        s.log_prob += on ? std::log(s.probs(i)) : std::log(1.0 - s.probs(i));
    }
    s.rates = channel::rates(real, model, s.allocation);
    s.sum_rate = s.rates.sum();
    s.total_power = s.allocation.sum();
    return s;
}

double lagrangian(const PolicySample& sample, double lambda, double pmax) {
    if (lambda < 0.0) throw Error("lagrangian: multiplier must be nonnegative");
    return sample.sum_rate - lambda * (sample.total_power - pmax);
}

gnn::GnnGrad sample_score_gradient(const gnn::GnnParams& params,
                                   const channel::ChannelRealization& real, const VectorXd& x,
                                   const std::vector<std::uint8_t>& bits) {
    auto [q_raw, tape] = gnn::gnn_forward(params, real.gso, x);
    VectorXd q = clamp_probs(q_raw, nullptr);
    if (static_cast<Eigen::Index>(bits.size()) != q.size())
        throw DimensionError("sample_score_gradient: bit vector length mismatch");
    // d log P / d q_i = b_i/q_i - (1-b_i)/(1-q_i)
    VectorXd upstream(q.size());
    for (Eigen::Index i = 0; i < q.size(); ++i)
        upstream(i) = bits[i] ? 1.0 / q(i) : -1.0 / (1.0 - q(i));
    return gnn::gnn_backward(tape, upstream);
}

StepDiagnostics reinforce_step(gnn::GnnParams& params, DualState& dual,
                               const std::vector<BatchItem>& batch,
                               const channel::ChannelModel& model,
                               const AllocationProblem& problem, std::uint64_t seed) {
    if (batch.empty()) throw Error("reinforce_step: empty batch");
    const int m = static_cast<int>(batch.size());

    std::vector<PolicySample> samples;
    samples.reserve(m);
    std::vector<double> lagr(m);
    double mean_lagr = 0.0, mean_power = 0.0, mean_rate = 0.0;
    for (int j = 0; j < m; ++j) {
        samples.push_back(sample_policy(params, *batch[j].real, model, batch[j].x, problem.p0,
                                        derive_seed(seed, 0xA110C, j)));
        lagr[j] = lagrangian(samples[j], dual.lambda, problem.pmax);
        mean_lagr += lagr[j] / m;
        mean_power += samples[j].total_power / m;
        mean_rate += samples[j].sum_rate / m;
    }

    gnn::GnnGrad grad = gnn::zero_grad_like(params);
    for (int j = 0; j < m; ++j) {
        gnn::GnnGrad score =
            sample_score_gradient(params, *batch[j].real, batch[j].x, samples[j].bits);
        axpy(grad, (lagr[j] - mean_lagr) / m, score);
    }

    StepDiagnostics diag;
    diag.mean_sum_rate = mean_rate;
    diag.mean_violation = (mean_power - problem.pmax) / batch.front().real->n;
    diag.grad_norm = grad.norm();

    if (!finite(grad)) {
        diag.aborted = true;
    } else {
        double scale = problem.primal_step;
        if (problem.grad_clip > 0.0 && diag.grad_norm > problem.grad_clip)
            scale *= problem.grad_clip / diag.grad_norm;
        for (std::size_t l = 0; l < params.layers.size(); ++l)
            for (std::size_t k = 0; k < params.layers[l].h.size(); ++k)
                params.layers[l].h[k] += scale * grad.dh[l][k];
    }

    dual.lambda = std::max(0.0, dual.lambda + problem.dual_step * (mean_power - problem.pmax));
    assert(dual.lambda >= 0.0);
    diag.lambda = dual.lambda;
    return diag;
}

TrainingTrace train(gnn::GnnParams& params, const AllocationProblem& problem,
                    const std::vector<geo::GeometricGraph>& graphs,
                    const channel::ChannelModel& model, std::uint64_t seed) {
    if (graphs.empty()) throw Error("train: empty graph dataset");
    for (const auto& g : graphs)
        if (!(problem.pmax > 0.0 && problem.pmax <= g.n * problem.p0))
            throw Error("train: Pmax must lie in (0, n*p0] for every attached graph");
    TrainingTrace trace;
    trace.steps.reserve(problem.iters);
    DualState dual;

    for (int iter = 0; iter < problem.iters; ++iter) {
        std::vector<channel::ChannelRealization> reals;
        reals.reserve(problem.batch);
        std::vector<BatchItem> batch;
        batch.reserve(problem.batch);
        for (int j = 0; j < problem.batch; ++j) {
            const auto& g =
                graphs[(static_cast<std::size_t>(iter) * problem.batch + j) % graphs.size()];
            reals.push_back(channel::draw_channel(g, model, derive_seed(seed, 0xC4A2, iter, j)));
        }
        for (int j = 0; j < problem.batch; ++j)
            batch.push_back({&reals[j], channel::policy_input(reals[j])});
        trace.steps.push_back(
            reinforce_step(params, dual, batch, model, problem, derive_seed(seed, 0x57E9, iter)));
    }
    return trace;
}

WmmseResult wmmse_policy(const channel::ChannelRealization& real,
                         const channel::ChannelModel& model, double p0, double pmax, int iters) {
    if (iters < 1) throw Error("wmmse_policy: iters must be >= 1");
    const int n = real.n;
    const double eta2 = model.noise_power;
    const VectorXd amp_direct = real.direct.cwiseSqrt();

    // The algorithm runs on amplitudes; inputs are power gains.
    VectorXd v = VectorXd::Constant(n, std::sqrt(std::min(p0, pmax / n)));
    VectorXd u(n), w(n);
    WmmseResult out;
    out.surrogate.reserve(iters);

    for (int it = 0; it < iters; ++it) {
        VectorXd v2 = v.cwiseAbs2();
        for (int i = 0; i < n; ++i) {
            double denom = eta2 + real.direct(i) * v2(i);
            for (int k = 0; k < n; ++k)
                if (k != i) denom += real.gains(k, i) * v2(k);
            u(i) = amp_direct(i) * v(i) / denom;
        }
        for (int i = 0; i < n; ++i) w(i) = 1.0 / (1.0 - u(i) * amp_direct(i) * v(i));

        VectorXd num(n), base(n);
        for (int i = 0; i < n; ++i) {
            num(i) = w(i) * u(i) * amp_direct(i);
            double d = w(i) * u(i) * u(i) * real.direct(i);
            for (int j = 0; j < n; ++j)
                if (j != i) d += w(j) * u(j) * u(j) * real.gains(i, j);
            base(i) = d;
        }

        auto v_of_mu = [&](double mu) {
            VectorXd out_v(n);
            for (int i = 0; i < n; ++i)
                out_v(i) = std::min(std::sqrt(p0), num(i) / (base(i) + mu));
            return out_v;
        };

        VectorXd cand = v_of_mu(0.0);
        if (cand.squaredNorm() > pmax) {
            double lo = 0.0, hi = 1.0;
            int doublings = 0;
            while (v_of_mu(hi).squaredNorm() > pmax) {
                hi *= 2.0;
                if (++doublings > 200) throw BisectionError("wmmse: cannot bracket multiplier");
            }
            for (int h = 0; h < 100; ++h) {
                const double mid = 0.5 * (lo + hi);
                if (v_of_mu(mid).squaredNorm() > pmax)
                    lo = mid;
                else
                    hi = mid;
            }
            cand = v_of_mu(hi);  // feasible endpoint
            if (cand.squaredNorm() > pmax + 1e-9)
                throw BisectionError("wmmse: bisection failed to reach the budget");
        }
        v = cand;

        out.surrogate.push_back(channel::rates(real, model, v.cwiseAbs2()).sum());
        assert(it == 0 || out.surrogate[it] >= out.surrogate[it - 1] - 1e-9);
    }

    out.powers = v.cwiseAbs2();
    out.probs = out.powers / p0;
    return out;
}

MetricsRecord evaluate_policy(PolicyKind kind, const gnn::GnnParams& params,
                              const std::vector<geo::GeometricGraph>& graphs,
                              const channel::ChannelModel& model, const AllocationProblem& problem,
                              int nominal_n, int trials, std::uint64_t seed,
                              const std::string& policy_id, int wmmse_iters,
                              std::vector<double>* per_graph_sum_rates) {
    if (trials < 1) throw Error("evaluate_policy: trials must be >= 1");
    MetricsRecord rec;
    rec.scale = nominal_n;
    rec.policy_id = policy_id;
    rec.trials = trials;

    // The channel set is fixed per graph; trials only re-sample allocations,
    // so a deterministic policy has zero variance across trials.
    std::vector<channel::ChannelRealization> reals;
    reals.reserve(graphs.size());
    for (std::size_t g = 0; g < graphs.size(); ++g)
        reals.push_back(channel::draw_channel(graphs[g], model, derive_seed(seed, 0xE7A1, g)));

    std::vector<double> trial_rate(trials, 0.0), trial_viol(trials, 0.0);
    for (int t = 0; t < trials; ++t) {
        double acc_rate = 0.0, acc_viol = 0.0;
        for (std::size_t g = 0; g < graphs.size(); ++g) {
            const auto& real = reals[g];
            VectorXd q;
            if (kind == PolicyKind::Gnn) {
                q = gnn::gnn_apply(params, real.gso, channel::policy_input(real));
            } else {
                q = wmmse_policy(real, model, problem.p0, problem.pmax, wmmse_iters).probs;
            }
            Rng rng(derive_seed(seed, 0xB175, t, g));
            VectorXd p = VectorXd::Zero(real.n);
            for (int i = 0; i < real.n; ++i)
                if (rng.bernoulli(std::min(1.0, std::max(0.0, q(i))))) p(i) = problem.p0;
            const double sum_rate = channel::rates(real, model, p).sum();
            acc_rate += sum_rate;
            acc_viol += (p.sum() - problem.pmax) / nominal_n;
            if (per_graph_sum_rates) per_graph_sum_rates->push_back(sum_rate);
        }
        trial_rate[t] = acc_rate / graphs.size();
        trial_viol[t] = acc_viol / graphs.size();
    }

    auto mean_std = [&](const std::vector<double>& xs, double* m, double* s) {
        double mu = 0.0;
        for (double x : xs) mu += x;
        mu /= xs.size();
        double var = 0.0;
        for (double x : xs) var += (x - mu) * (x - mu);
        var /= xs.size();
        *m = mu;
        *s = std::sqrt(var);
    };
    mean_std(trial_rate, &rec.sum_rate_mean, &rec.sum_rate_std);
    mean_std(trial_viol, &rec.violation_mean, &rec.violation_std);
    return rec;
}

gnn::GnnParams init_params(int layers, int taps, gnn::Nonlinearity nl, double leaky_slope,
                           std::uint64_t seed) {
    if (layers < 1 || taps < 1) throw Error("init_params: need at least one layer and one tap");
    gnn::GnnParams params;
    params.nonlinearity = nl;
    params.leaky_slope = leaky_slope;
    params.squash = gnn::OutputSquash::Sigmoid;
    Rng rng(seed);
    for (int l = 0; l < layers; ++l) {
        std::vector<double> h(taps);
        for (double& v : h) v = rng.uniform(-0.5, 0.5);
        params.layers.emplace_back(std::move(h));
    }
    return params;
}

gnn::GnnParams init_params_warm(int layers, int taps, gnn::Nonlinearity nl, double leaky_slope,
                                double on_fraction, std::uint64_t seed) {
    if (layers < 1 || taps < 1) throw Error("init_params_warm: need at least one layer and tap");
    if (!(on_fraction > 0.0 && on_fraction < 1.0))
        throw Error("init_params_warm: on_fraction must lie in (0, 1)");
    gnn::GnnParams params;
    params.nonlinearity = nl;
    params.leaky_slope = leaky_slope;
    params.squash = gnn::OutputSquash::Sigmoid;
    Rng rng(seed);
    const double logit = std::log(on_fraction / (1.0 - on_fraction));
    for (int l = 0; l < layers; ++l) {
        std::vector<double> h(taps, 0.0);
        h[0] = (l + 1 < layers) ? 1.0 : logit;
        for (double& v : h) v += rng.uniform(-0.05, 0.05);
        params.layers.emplace_back(std::move(h));
    }
    return params;
}

} // namespace rggnn::policy
