// rggnn: GNN power-allocation policies on random geometric graphs, with
// numeric verification of the grid/RGG transferability bounds.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "rggnn/harness.hpp"
#include "rggnn/io.hpp"
#include "rggnn/rng.hpp"

namespace fs = std::filesystem;
using namespace rggnn;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

void add_common(CLI::App* cmd, CommonArgs* args) {
    cmd->add_option("--config", args->config_path, "configuration file")->required();
    cmd->add_option("--out", args->out_dir, "output directory (default: $RGGNN_OUT or ./out)");
    cmd->add_option_function<std::uint64_t>(
        "--seed",
        [args](std::uint64_t v) {
            args->seed = v;
            args->seed_set = true;
        },
        "master seed override");
}

std::string resolve_out(const CommonArgs& args) {
    if (!args.out_dir.empty()) return args.out_dir;
    if (const char* env = std::getenv("RGGNN_OUT")) return env;
    return "out";
}

Config load_config(const CommonArgs& args) { return Config::from_file(args.config_path); }

void apply_seed(const CommonArgs& args, std::uint64_t* seed) {
    if (args.seed_set) *seed = args.seed;
}

std::string dataset_dir(const Config& cfg, const std::string& out) {
    return cfg.get_str("experiment.dataset_dir", (fs::path(out) / "dataset").string());
}

int run_generate(const CommonArgs& args) {
    const Config cfg = load_config(args);
    auto spec = harness::dataset_from_config(cfg);
    apply_seed(args, &spec.master_seed);
    const std::string out = resolve_out(args);
    const auto ds = harness::generate_dataset(spec);
    harness::save_dataset(ds, dataset_dir(cfg, out));
    std::cout << "dataset: " << ds.manifest.size() << " graphs across " << spec.scales.size()
              << " scales -> " << dataset_dir(cfg, out) << "\n";
    return 0;
}

int run_train(const CommonArgs& args) {
    const Config cfg = load_config(args);
    auto ec = harness::experiment_from_config(cfg);
    apply_seed(args, &ec.master_seed);
    const std::string out = resolve_out(args);
    const auto ds = harness::load_dataset(dataset_dir(cfg, out));

    std::error_code fs_ec;
    fs::create_directories(out, fs_ec);
    policy::TrainingTrace trace;
    const auto params = harness::train_single_scale(ec, ds, ec.train_scale_index, &trace);
    io::write_text((fs::path(out) / "trace_train.csv").string(), io::trace_csv(trace));
    io::save_params(params, (fs::path(out) / "model.gnnp").string());
    std::cout << "trained model -> " << (fs::path(out) / "model.gnnp").string() << " ("
              << trace.steps.size() << " iterations)\n";
    return 0;
}

int run_eval(const CommonArgs& args, const std::string& model_path) {
    const Config cfg = load_config(args);
    auto ec = harness::experiment_from_config(cfg);
    apply_seed(args, &ec.master_seed);
    const std::string out = resolve_out(args);
    const auto ds = harness::load_dataset(dataset_dir(cfg, out));

    const std::string path =
        model_path.empty() ? (fs::path(out) / "model.gnnp").string() : model_path;
    const auto params = io::load_params(path);

    std::vector<policy::MetricsRecord> records;
    std::vector<int> scales = ec.eval_scale_indices;
    if (scales.empty())
        for (std::size_t i = 0; i < ds.spec.scales.size(); ++i) scales.push_back(i);
    for (int scale : scales) {
        int nominal_n = 0;
        for (const auto& e : ds.manifest)
            if (e.scale_index == scale) { nominal_n = e.nominal_n; break; }
        policy::AllocationProblem problem = ec.problem;
        problem.pmax = harness::scale_budget(ec, nominal_n);
        const auto& graphs = ds.graphs[scale];
        std::vector<geo::GeometricGraph> held(graphs.begin() + ec.train_graphs, graphs.end());
        records.push_back(policy::evaluate_policy(
            policy::PolicyKind::Gnn, params, held, ec.model, problem, nominal_n, ec.trials,
            derive_seed(ec.master_seed, 0xE7A1, scale), "gnn", ec.wmmse_iters, nullptr));
        if (ec.with_wmmse)
            records.push_back(policy::evaluate_policy(
                policy::PolicyKind::Wmmse, params, held, ec.model, problem, nominal_n, ec.trials,
                derive_seed(ec.master_seed, 0xE7A1, scale), "wmmse", ec.wmmse_iters, nullptr));
    }
    io::write_text((fs::path(out) / "metrics.csv").string(), io::metrics_csv(records));
    std::cout << "metrics -> " << (fs::path(out) / "metrics.csv").string() << "\n";
    return 0;
}

int run_transfer(const CommonArgs& args) {
    const Config cfg = load_config(args);
    auto ec = harness::experiment_from_config(cfg);
    apply_seed(args, &ec.master_seed);
    const std::string out = resolve_out(args);
    const auto ds = harness::load_dataset(dataset_dir(cfg, out));
    const auto result = harness::run_transfer_experiment(ec, ds, out);
    std::cout << "transfer experiment: " << result.records.size() << " metric records -> " << out
              << "\n";
    return 0;
}

int run_bounds(const CommonArgs& args) {
    const Config cfg = load_config(args);
    auto bc = harness::bounds_suite_from_config(cfg);
    apply_seed(args, &bc.master_seed);
    const std::string out = resolve_out(args);
    const auto reports = harness::run_bounds_suite(bc, out);
    int held = 0;
    for (const auto& r : reports) held += r.holds ? 1 : 0;
    std::cout << harness::bounds_summary(reports);
    std::cout << "bounds: " << held << "/" << reports.size() << " hold -> "
              << (fs::path(out) / "bounds.csv").string() << "\n";
    return held == static_cast<int>(reports.size()) ? 0 : 1;
}

int run_alpha(const CommonArgs& args) {
    const Config cfg = load_config(args);
    auto ac = harness::alpha_from_config(cfg);
    apply_seed(args, &ac.master_seed);
    const std::string out = resolve_out(args);
    const auto fit = harness::run_alpha(ac, out);
    std::cout << "alpha=" << io::format_double(fit.alpha)
              << " r_squared=" << io::format_double(fit.r_squared) << " -> "
              << (fs::path(out) / "alpha.csv").string() << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"GNN power-allocation policies on random geometric graphs"};
    app.require_subcommand(1);

    CommonArgs generate_args, train_args, eval_args, transfer_args, bounds_args, alpha_args;
    std::string model_path;

    add_common(app.add_subcommand("generate", "generate an RGG dataset"), &generate_args);
    add_common(app.add_subcommand("train", "train the policy at the configured scale"),
               &train_args);
    auto* eval_cmd = app.add_subcommand("eval", "evaluate a checkpoint across scales");
    add_common(eval_cmd, &eval_args);
    eval_cmd->add_option("--model", model_path, "parameter checkpoint (default: <out>/model.gnnp)");
    add_common(app.add_subcommand("transfer", "full train-at-one-scale transfer experiment"),
               &transfer_args);
    add_common(app.add_subcommand("bounds", "run the theorem verification suites"), &bounds_args);
    add_common(app.add_subcommand("alpha", "fit the discrepancy scaling exponent"), &alpha_args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand("generate")) return run_generate(generate_args);
        if (app.got_subcommand("train")) return run_train(train_args);
        if (app.got_subcommand("eval")) return run_eval(eval_args, model_path);
        if (app.got_subcommand("transfer")) return run_transfer(transfer_args);
        if (app.got_subcommand("bounds")) return run_bounds(bounds_args);
        if (app.got_subcommand("alpha")) return run_alpha(alpha_args);
    } catch (const DatasetNotFound& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
