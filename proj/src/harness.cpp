#include "rggnn/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "rggnn/io.hpp"
#include "rggnn/rng.hpp"

namespace fs = std::filesystem;

namespace rggnn::harness {

namespace {

int nearest_side(int target_nodes) {
    return std::max(2, static_cast<int>(std::lround(std::sqrt(static_cast<double>(target_nodes)))));
}

std::string graph_filename(int scale_index, int graph_index) {
    return "g" + std::to_string(scale_index) + "_" + std::to_string(graph_index) + ".graph";
}

} // namespace

Dataset generate_dataset(const DatasetSpec& spec) {
    if (spec.scales.empty()) throw Error("generate_dataset: no scales");
    if (spec.graphs_per_scale < 1) throw Error("generate_dataset: graphs_per_scale must be >= 1");

    Dataset ds;
    ds.spec = spec;
    ds.graphs.resize(spec.scales.size());
    for (std::size_t si = 0; si < spec.scales.size(); ++si) {
        geo::GridSpec grid_spec;
        grid_spec.side = nearest_side(spec.scales[si]);
        grid_spec.spacing = spec.spacing;
        grid_spec.radius = spec.radius;
        grid_spec.torus = false;  // experiment graphs keep physical boundaries
        const auto grid = geo::make_grid(grid_spec);
        for (int gi = 0; gi < spec.graphs_per_scale; ++gi) {
            const std::uint64_t seed = derive_seed(spec.master_seed, si, gi);
            auto rgg = geo::perturb_to_rgg(grid, spec.sigma, seed);
            rgg.parent.reset();  // the pipeline never computes discrepancies
            auto pruned = geo::drop_isolated(rgg);
            ManifestEntry entry;
            entry.scale_index = static_cast<int>(si);
            entry.graph_index = gi;
            entry.nominal_n = grid.n;
            entry.realized_n = pruned.n;
            entry.seed = seed;
            entry.file = graph_filename(static_cast<int>(si), gi);
            ds.manifest.push_back(entry);
            ds.graphs[si].push_back(std::move(pruned));
        }
    }
    return ds;
}

void save_dataset(const Dataset& ds, const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create dataset directory: " + dir);

    std::ostringstream man;
    man << "rggnn-manifest v1\n";
    man << "scales";
    for (int s : ds.spec.scales) man << " " << s;
    man << "\n";
    man << "graphs_per_scale " << ds.spec.graphs_per_scale << "\n";
    man << "sigma " << io::format_double(ds.spec.sigma) << "\n";
    man << "spacing " << io::format_double(ds.spec.spacing) << "\n";
    man << "radius " << io::format_double(ds.spec.radius) << "\n";
    man << "master_seed " << ds.spec.master_seed << "\n";
    man << "entries " << ds.manifest.size() << "\n";
    for (const auto& e : ds.manifest) {
        man << e.scale_index << " " << e.graph_index << " " << e.nominal_n << " " << e.realized_n
            << " " << e.seed << " " << e.file << "\n";
    }
    io::write_text((fs::path(dir) / "manifest.txt").string(), man.str());

    std::size_t idx = 0;
    for (std::size_t si = 0; si < ds.graphs.size(); ++si)
        for (const auto& g : ds.graphs[si]) {
            io::save_graph(g, (fs::path(dir) / ds.manifest[idx].file).string());
            ++idx;
        }
}

Dataset load_dataset(const std::string& dir) {
    const fs::path manifest_path = fs::path(dir) / "manifest.txt";
    if (!fs::exists(manifest_path))
        throw DatasetNotFound("no dataset manifest at " + manifest_path.string());

    std::istringstream in(io::read_text(manifest_path.string()));
    std::string tok;
    in >> tok;
    if (tok != "rggnn-manifest") throw IoError("bad manifest header");
    in >> tok;  // version

    Dataset ds;
    in >> tok;  // "scales"
    std::string line;
    std::getline(in, line);
    {
        std::istringstream ls(line);
        int v;
        while (ls >> v) ds.spec.scales.push_back(v);
    }
    in >> tok >> ds.spec.graphs_per_scale;
    in >> tok >> ds.spec.sigma;
    in >> tok >> ds.spec.spacing;
    in >> tok >> ds.spec.radius;
    in >> tok >> ds.spec.master_seed;
    std::size_t entries = 0;
    in >> tok >> entries;

    ds.graphs.resize(ds.spec.scales.size());
    for (std::size_t i = 0; i < entries; ++i) {
        ManifestEntry e;
        in >> e.scale_index >> e.graph_index >> e.nominal_n >> e.realized_n >> e.seed >> e.file;
        if (!in) throw IoError("truncated manifest");
        if (e.scale_index < 0 || e.scale_index >= static_cast<int>(ds.graphs.size()))
            throw IoError("manifest entry references an unknown scale");
        ds.manifest.push_back(e);
        ds.graphs[e.scale_index].push_back(
            io::load_graph((fs::path(dir) / e.file).string()));
    }
    return ds;
}

double scale_budget(const ExperimentConfig& cfg, int nominal_n) {
    return cfg.budget_fraction * nominal_n * cfg.problem.p0;
}

namespace {

struct Split {
    std::vector<geo::GeometricGraph> train;
    std::vector<geo::GeometricGraph> eval;
};

Split split_scale(const ExperimentConfig& cfg, const Dataset& ds, int scale_index) {
    const auto& all = ds.graphs[scale_index];
    if (cfg.train_graphs >= static_cast<int>(all.size()))
        throw Error("experiment: train_graphs leaves no held-out graphs at scale index " +
                    std::to_string(scale_index));
    Split s;
    s.train.assign(all.begin(), all.begin() + cfg.train_graphs);
    s.eval.assign(all.begin() + cfg.train_graphs, all.end());
    return s;
}

int nominal_n_of_scale(const Dataset& ds, int scale_index) {
    for (const auto& e : ds.manifest)
        if (e.scale_index == scale_index) return e.nominal_n;
    throw Error("experiment: scale index missing from manifest");
}

std::string histogram_csv(std::vector<double> values, int bins) {
    std::ostringstream out;
    out << "# rggnn-hist v1\nbin_lo,bin_hi,count\n";
    if (values.empty()) return out.str();
    const auto [mn_it, mx_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *mn_it, hi = *mx_it;
    if (hi <= lo) {
        out << io::format_double(lo) << "," << io::format_double(hi) << "," << values.size()
            << "\n";
        return out.str();
    }
    std::vector<int> counts(bins, 0);
    for (double v : values) {
        int b = static_cast<int>((v - lo) / (hi - lo) * bins);
        counts[std::min(b, bins - 1)]++;
    }
    for (int b = 0; b < bins; ++b) {
        const double blo = lo + (hi - lo) * b / bins;
        const double bhi = lo + (hi - lo) * (b + 1) / bins;
        out << io::format_double(blo) << "," << io::format_double(bhi) << "," << counts[b] << "\n";
    }
    return out.str();
}

} // namespace

gnn::GnnParams train_single_scale(const ExperimentConfig& cfg, const Dataset& ds,
                                  int scale_index, policy::TrainingTrace* trace_out) {
    const Split split = split_scale(cfg, ds, scale_index);
    policy::AllocationProblem problem = cfg.problem;
    problem.pmax = scale_budget(cfg, nominal_n_of_scale(ds, scale_index));

    auto params = policy::init_params_warm(cfg.gnn_layers, cfg.gnn_taps, cfg.nonlinearity,
                                           cfg.leaky_slope, cfg.budget_fraction,
                                           derive_seed(cfg.master_seed, 0x1217, scale_index));
    auto trace = policy::train(params, problem, split.train, cfg.model,
                               derive_seed(cfg.master_seed, 0x7124, scale_index));
    if (trace_out) *trace_out = std::move(trace);
    return params;
}

TransferResult run_transfer_experiment(const ExperimentConfig& cfg, const Dataset& ds,
                                       const std::string& out_dir) {
    if (cfg.train_scale_index < 0 ||
        cfg.train_scale_index >= static_cast<int>(ds.spec.scales.size()))
        throw Error("experiment: train scale index out of range");
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory: " + out_dir);

    TransferResult result;
    result.transferred =
        train_single_scale(cfg, ds, cfg.train_scale_index, &result.transfer_trace);
    io::write_text((fs::path(out_dir) / "trace_transfer.csv").string(),
                   io::trace_csv(result.transfer_trace));
    io::save_params(result.transferred, (fs::path(out_dir) / "transferred.gnnp").string());

    std::vector<int> eval_scales = cfg.eval_scale_indices;
    if (eval_scales.empty())
        for (std::size_t i = 0; i < ds.spec.scales.size(); ++i)
            eval_scales.push_back(static_cast<int>(i));

    struct CurveRow {
        int nominal_n;
        policy::MetricsRecord transfer, indist;
    };
    std::vector<CurveRow> curve;

    for (int scale : eval_scales) {
        const Split split = split_scale(cfg, ds, scale);
        const int nominal_n = nominal_n_of_scale(ds, scale);
        policy::AllocationProblem problem = cfg.problem;
        problem.pmax = scale_budget(cfg, nominal_n);
        const std::uint64_t eval_seed = derive_seed(cfg.master_seed, 0xE7A1, scale);

        std::vector<double> transfer_rates;
        auto rec_transfer = policy::evaluate_policy(
            policy::PolicyKind::Gnn, result.transferred, split.eval, cfg.model, problem, nominal_n,
            cfg.trials, eval_seed, "gnn_transfer", cfg.wmmse_iters, &transfer_rates);
        result.records.push_back(rec_transfer);
        io::write_text((fs::path(out_dir) /
                        ("hist_gnn_transfer_" + std::to_string(nominal_n) + ".csv"))
                           .string(),
                       histogram_csv(transfer_rates, 20));

        CurveRow row;
        row.nominal_n = nominal_n;
        row.transfer = rec_transfer;

        if (cfg.in_distribution) {
            auto indist = train_single_scale(cfg, ds, scale, nullptr);
            std::vector<double> indist_rates;
            auto rec_indist = policy::evaluate_policy(
                policy::PolicyKind::Gnn, indist, split.eval, cfg.model, problem, nominal_n,
                cfg.trials, eval_seed, "gnn_indist", cfg.wmmse_iters, &indist_rates);
            result.records.push_back(rec_indist);
            io::write_text((fs::path(out_dir) /
                            ("hist_gnn_indist_" + std::to_string(nominal_n) + ".csv"))
                               .string(),
                           histogram_csv(indist_rates, 20));
            row.indist = rec_indist;
        }

        if (cfg.with_wmmse) {
            auto rec_wmmse = policy::evaluate_policy(
                policy::PolicyKind::Wmmse, result.transferred, split.eval, cfg.model, problem,
                nominal_n, cfg.trials, eval_seed, "wmmse", cfg.wmmse_iters, nullptr);
            result.records.push_back(rec_wmmse);
        }
        curve.push_back(row);
    }

    io::write_text((fs::path(out_dir) / "metrics.csv").string(), io::metrics_csv(result.records));

    if (cfg.in_distribution) {
        std::ostringstream out;
        out << "# rggnn-transfer-curve v1\n"
            << "scale,transfer_sum_rate_mean,transfer_sum_rate_std,indist_sum_rate_mean,"
               "indist_sum_rate_std,transfer_violation_mean,indist_violation_mean\n";
        for (const auto& row : curve) {
            out << row.nominal_n << "," << io::format_double(row.transfer.sum_rate_mean) << ","
                << io::format_double(row.transfer.sum_rate_std) << ","
                << io::format_double(row.indist.sum_rate_mean) << ","
                << io::format_double(row.indist.sum_rate_std) << ","
                << io::format_double(row.transfer.violation_mean) << ","
                << io::format_double(row.indist.violation_mean) << "\n";
        }
        io::write_text((fs::path(out_dir) / "transfer_curve.csv").string(), out.str());
    }
    return result;
}

std::string bounds_csv(const std::vector<bounds::BoundReport>& reports) {
    std::ostringstream out;
    out << io::kBoundsSchema << "\n" << io::kBoundsHeader << "\n";
    for (const auto& r : reports) {
        out << bounds::to_string(r.name) << "," << r.n << "," << r.m << ","
            << io::format_double(r.sigma) << "," << r.order << "," << io::format_double(r.lhs)
            << "," << io::format_double(r.lhs_stderr) << "," << io::format_double(r.rhs) << ","
            << (r.holds ? "true" : "false") << "\n";
    }
    return out.str();
}

std::string bounds_summary(const std::vector<bounds::BoundReport>& reports) {
    std::ostringstream out;
    char line[160];
    std::snprintf(line, sizeof(line), "%-22s %6s %6s %9s %5s %12s %12s %6s\n", "name", "n", "m",
                  "sigma", "K", "lhs", "rhs", "holds");
    out << line;
    for (const auto& r : reports) {
        std::snprintf(line, sizeof(line), "%-22s %6d %6d %9.4f %5d %12.4e %12.4e %6s\n",
                      bounds::to_string(r.name).c_str(), r.n, r.m, r.sigma, r.order, r.lhs, r.rhs,
                      r.holds ? "yes" : "NO");
        out << line;
    }
    return out.str();
}

std::string alpha_csv(const bounds::AlphaFit& fit) {
    std::ostringstream out;
    out << "# rggnn-alpha v1\nn,mean_w2\n";
    for (std::size_t i = 0; i < fit.sizes.size(); ++i)
        out << fit.sizes[i] << "," << io::format_double(fit.mean_w2[i]) << "\n";
    out << "# alpha=" << io::format_double(fit.alpha)
        << " r_squared=" << io::format_double(fit.r_squared)
        << " infinite=" << (fit.infinite_alpha ? "true" : "false") << "\n";
    return out.str();
}

namespace {

gnn::FilterTaps random_positive_taps(Rng& rng, int order) {
    std::vector<double> h(order + 1);
    for (double& v : h) v = rng.uniform(0.1, 1.0);
    return gnn::FilterTaps(std::move(h));
}

gnn::FilterTaps random_taps(Rng& rng, int order) {
    std::vector<double> h(order + 1);
    for (double& v : h) v = rng.uniform(-1.0, 1.0);
    return gnn::FilterTaps(std::move(h));
}

Eigen::VectorXd random_signal(Rng& rng, int n) {
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x(i) = rng.normal();
    return x;
}

} // namespace

std::vector<bounds::BoundReport> run_bounds_suite(const BoundsSuiteConfig& cfg,
                                                  const std::string& out_dir) {
    std::vector<bounds::BoundReport> reports;
    const bool empty_suite = cfg.instances <= 0 && cfg.grid_instances <= 0;

    geo::GridSpec torus_spec{5, cfg.spacing, cfg.radius, true};
    const Eigen::MatrixXd mask = geo::mask_matrix(geo::make_grid(torus_spec));

    if (!empty_suite) {
        // Degenerate block: every report here must hold by construction.
        Rng rng(derive_seed(cfg.master_seed, 0xDE6));
        const gnn::FilterTaps some_taps({0.4, 0.3, 0.2});
        reports.push_back(bounds::verify_prop1(8, 8, some_taps, mask, 20, rng.raw()));
        reports.push_back(
            bounds::verify_prop1(8, 10, gnn::FilterTaps({1.0, 0.0}), mask, 20, rng.raw()));

        geo::GridSpec flat_spec{8, cfg.spacing, cfg.radius, false};
        const auto grid8 = geo::make_grid(flat_spec);
        bounds::RggEnsemble frozen{grid8, 0.0, 5, rng.raw()};
        const Eigen::VectorXd x8 = random_signal(rng, grid8.n);
        reports.push_back(bounds::verify_filter_rgg_dgg(frozen, some_taps, x8));
        bounds::RggEnsemble moved{grid8, 0.05 * cfg.spacing, 5, rng.raw()};
        reports.push_back(
            bounds::verify_filter_rgg_dgg(moved, gnn::FilterTaps({0.7}), x8));

        gnn::GnnParams one_layer;
        one_layer.layers = {some_taps};
        one_layer.nonlinearity = gnn::Nonlinearity::ReLU;
        reports.push_back(bounds::verify_gnn_rgg_dgg(frozen, one_layer, x8));

        gnn::GnnParams zero_net;
        zero_net.layers = {gnn::FilterTaps({0.0, 0.0})};
        reports.push_back(bounds::verify_thm1(zero_net, zero_net, 8, 8, mask, 10, rng.raw()));
        reports.push_back(bounds::verify_thm1(zero_net, zero_net, 8, 12, mask, 10, rng.raw()));
        reports.push_back(bounds::verify_thm2_loss(frozen, one_layer, one_layer, x8));
        reports.push_back(bounds::verify_thm3(moved, moved, one_layer, one_layer, x8, x8));
    }

    for (int i = 0; i < cfg.instances; ++i) {
        Rng rng(derive_seed(cfg.master_seed, 0xB0, i));
        geo::GridSpec spec{cfg.sides[i % cfg.sides.size()], cfg.spacing, cfg.radius, false};
        const auto grid = geo::make_grid(spec);
        const double sigma = rng.uniform(0.2, 1.0) * cfg.sigma_max_ratio * cfg.spacing;
        const int order = 1 + i % cfg.max_order;
        const Eigen::VectorXd x = random_signal(rng, grid.n);
        bounds::RggEnsemble ens{grid, sigma, cfg.seeds_per_instance,
                                derive_seed(cfg.master_seed, 0xB1, i)};
        if (i % 2 == 0) {
            reports.push_back(
                bounds::verify_filter_rgg_dgg(ens, random_positive_taps(rng, order), x));
        } else {
            gnn::GnnParams params;
            const int depth = 1 + (i / 2) % 2;
            for (int l = 0; l < depth; ++l)
                params.layers.push_back(random_positive_taps(rng, order));
            params.nonlinearity =
                i % 4 == 1 ? gnn::Nonlinearity::ReLU : gnn::Nonlinearity::AbsValue;
            reports.push_back(bounds::verify_gnn_rgg_dgg(ens, params, x));
        }
    }

    for (int i = 0; i < cfg.grid_instances; ++i) {
        Rng rng(derive_seed(cfg.master_seed, 0x62D, i));
        const int b1 = 6 + 2 * (i % 3);
        const int order = 1 + i % cfg.max_order;
        // keep B1 + side*K >= B2 so every instance is in the proof's regime
        const int b2 = b1 + (order >= 2 ? 2 + 2 * (i % 2) : 2);
        reports.push_back(
            bounds::verify_prop1(b1, b2, random_taps(rng, order), mask, cfg.grid_trials,
                                 derive_seed(cfg.master_seed, 0x62E, i)));

        gnn::GnnParams teacher;
        teacher.layers = {random_taps(rng, 2), random_taps(rng, 2)};
        teacher.nonlinearity = gnn::Nonlinearity::ReLU;
        gnn::GnnParams student = teacher;
        for (auto& layer : student.layers)
            for (double& h : layer.h) h += rng.uniform(-0.1, 0.1);
        reports.push_back(bounds::verify_thm1(student, teacher, b1, b2, mask, cfg.grid_trials,
                                              derive_seed(cfg.master_seed, 0x62F, i)));
    }

    if (!out_dir.empty()) {
        std::error_code ec;
        fs::create_directories(out_dir, ec);
        if (ec) throw IoError("cannot create output directory: " + out_dir);
        io::write_text((fs::path(out_dir) / "bounds.csv").string(), bounds_csv(reports));
    }
    return reports;
}

bounds::AlphaFit run_alpha(const AlphaConfig& cfg, const std::string& out_dir) {
    geo::GridSpec base{cfg.sides.front(), cfg.spacing, cfg.radius, false};
    auto fit = bounds::estimate_alpha(cfg.sides, base, cfg.sigma * cfg.spacing,
                                      cfg.seeds_per_size, cfg.master_seed);
    if (!out_dir.empty()) {
        std::error_code ec;
        fs::create_directories(out_dir, ec);
        if (ec) throw IoError("cannot create output directory: " + out_dir);
        io::write_text((fs::path(out_dir) / "alpha.csv").string(), alpha_csv(fit));
    }
    return fit;
}

DatasetSpec dataset_from_config(const Config& cfg) {
    DatasetSpec spec;
    spec.scales = cfg.get_int_list("dataset.scales", {100, 196, 289, 400});
    spec.graphs_per_scale = cfg.get_int("dataset.graphs_per_scale", 20);
    spec.sigma = cfg.get_double("dataset.sigma", 0.05);
    spec.spacing = cfg.get_double("dataset.spacing", 1.0);
    spec.radius = cfg.get_double("dataset.radius", 1.2);
    spec.master_seed = cfg.get_u64("dataset.master_seed", 1);
    return spec;
}

channel::ChannelModel channel_from_config(const Config& cfg) {
    channel::ChannelModel model;
    model.pathloss_exponent = cfg.get_double("channel.pathloss_exponent", 2.2);
    const std::string fading = cfg.get_str("channel.fading", "rayleigh");
    if (fading == "rayleigh")
        model.fading = channel::Fading::Rayleigh;
    else if (fading == "none")
        model.fading = channel::Fading::None;
    else
        throw ConfigError("channel.fading must be rayleigh or none");
    model.noise_power = cfg.get_double("channel.noise_power", 1.0);
    model.sparsify_radius = cfg.get_double("channel.sparsify_radius", 0.0);
    model.direct_link_distance = cfg.get_double("channel.direct_link_distance", 0.5);
    return model;
}

ExperimentConfig experiment_from_config(const Config& cfg) {
    ExperimentConfig ec;
    ec.dataset = dataset_from_config(cfg);
    ec.model = channel_from_config(cfg);
    ec.problem.p0 = cfg.get_double("problem.p0", 1.0);
    ec.problem.dual_step = cfg.get_double("problem.dual_step", 1e-3);
    ec.problem.primal_step = cfg.get_double("problem.primal_step", 1e-2);
    ec.problem.batch = cfg.get_int("problem.batch", 8);
    ec.problem.iters = cfg.get_int("problem.iters", 200);
    ec.problem.grad_clip = cfg.get_double("problem.grad_clip", 0.0);
    ec.budget_fraction = cfg.get_double("problem.budget_fraction", 0.3);
    ec.gnn_layers = cfg.get_int("gnn.layers", 3);
    ec.gnn_taps = cfg.get_int("gnn.taps", 5);
    const std::string nl = cfg.get_str("gnn.nonlinearity", "leakyrelu");
    if (nl == "relu")
        ec.nonlinearity = gnn::Nonlinearity::ReLU;
    else if (nl == "leakyrelu")
        ec.nonlinearity = gnn::Nonlinearity::LeakyReLU;
    else if (nl == "absvalue")
        ec.nonlinearity = gnn::Nonlinearity::AbsValue;
    else
        throw ConfigError("gnn.nonlinearity must be relu, leakyrelu or absvalue");
    ec.leaky_slope = cfg.get_double("gnn.leaky_slope", 0.25);
    ec.train_scale_index = cfg.get_int("experiment.train_scale_index", 0);
    ec.eval_scale_indices = cfg.get_int_list("experiment.eval_scale_indices", {});
    ec.trials = cfg.get_int("experiment.trials", 3);
    ec.train_graphs = cfg.get_int("experiment.train_graphs", 10);
    ec.in_distribution = cfg.get_bool("experiment.in_distribution", true);
    ec.with_wmmse = cfg.get_bool("experiment.with_wmmse", true);
    ec.wmmse_iters = cfg.get_int("experiment.wmmse_iters", 50);
    ec.master_seed = ec.dataset.master_seed;
    return ec;
}

BoundsSuiteConfig bounds_suite_from_config(const Config& cfg) {
    BoundsSuiteConfig bc;
    bc.sides = cfg.get_int_list("bounds.sides", {8, 12, 16});
    bc.instances = cfg.get_int("bounds.instances", 100);
    bc.seeds_per_instance = cfg.get_int("bounds.seeds_per_instance", 20);
    bc.sigma_max_ratio = cfg.get_double("bounds.sigma_max_ratio", 0.1);
    bc.max_order = cfg.get_int("bounds.max_order", 3);
    bc.spacing = cfg.get_double("bounds.spacing", 1.0);
    bc.radius = cfg.get_double("bounds.radius", 1.2);
    bc.grid_instances = cfg.get_int("bounds.grid_instances", 10);
    bc.grid_trials = cfg.get_int("bounds.grid_trials", 200);
    bc.master_seed = cfg.get_u64("bounds.master_seed", 1);
    return bc;
}

AlphaConfig alpha_from_config(const Config& cfg) {
    AlphaConfig ac;
    ac.sides = cfg.get_int_list("alpha.sides", {8, 12, 16, 20});
    ac.seeds_per_size = cfg.get_int("alpha.seeds_per_size", 50);
    ac.sigma = cfg.get_double("alpha.sigma", 0.05);
    ac.spacing = cfg.get_double("alpha.spacing", 1.0);
    ac.radius = cfg.get_double("alpha.radius", 1.2);
    ac.master_seed = cfg.get_u64("alpha.master_seed", 1);
    return ac;
}

} // namespace rggnn::harness
