#include "rggnn/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace rggnn::io {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << content;
    if (!out) throw IoError("write failed: " + path);
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace {

std::string expect_token(std::istream& in, const std::string& want) {
    std::string tok;
    if (!(in >> tok) || tok != want)
        throw IoError("malformed file: expected '" + want + "', got '" + tok + "'");
    return tok;
}

} // namespace

void save_graph(const geo::GeometricGraph& g, const std::string& path) {
    std::ostringstream out;
    out << "rggnn-graph v1\n";
    out << "n " << g.n << "\n";
    out << "kind " << (g.kind == geo::GraphKind::Dgg ? "DGG" : "RGG") << "\n";
    out << "sigma " << format_double(g.sigma) << "\n";
    out << "seed " << g.seed << "\n";
    out << "side " << g.spec.side << "\n";
    out << "spacing " << format_double(g.spec.spacing) << "\n";
    out << "radius " << format_double(g.spec.radius) << "\n";
    out << "torus " << (g.spec.torus ? 1 : 0) << "\n";
    out << "degnorm " << g.deg_norm << "\n";
    out << "positions\n";
    for (int i = 0; i < g.n; ++i)
        out << format_double(g.positions(i, 0)) << " " << format_double(g.positions(i, 1)) << "\n";
    out << "adjacency " << g.adjacency.nonZeros() << "\n";
    for (int col = 0; col < g.adjacency.outerSize(); ++col)
        for (geo::SpMat::InnerIterator it(g.adjacency, col); it; ++it)
            out << it.row() << " " << it.col() << " " << format_double(it.value()) << "\n";
    out << "original_indices " << g.original_indices.size() << "\n";
    for (int idx : g.original_indices) out << idx << "\n";
    out << "end\n";
    write_text(path, out.str());
}

geo::GeometricGraph load_graph(const std::string& path) {
    std::istringstream in(read_text(path));
    expect_token(in, "rggnn-graph");
    expect_token(in, "v1");

    geo::GeometricGraph g;
    std::string kind;
    int torus = 0;
    expect_token(in, "n");
    in >> g.n;
    expect_token(in, "kind");
    in >> kind;
    g.kind = kind == "DGG" ? geo::GraphKind::Dgg : geo::GraphKind::Rgg;
    expect_token(in, "sigma");
    in >> g.sigma;
    expect_token(in, "seed");
    in >> g.seed;
    expect_token(in, "side");
    in >> g.spec.side;
    expect_token(in, "spacing");
    in >> g.spec.spacing;
    expect_token(in, "radius");
    in >> g.spec.radius;
    expect_token(in, "torus");
    in >> torus;
    g.spec.torus = torus != 0;
    expect_token(in, "degnorm");
    in >> g.deg_norm;

    expect_token(in, "positions");
    g.positions.resize(g.n, 2);
    for (int i = 0; i < g.n; ++i) in >> g.positions(i, 0) >> g.positions(i, 1);

    expect_token(in, "adjacency");
    long nnz = 0;
    in >> nnz;
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(nnz);
    for (long e = 0; e < nnz; ++e) {
        int i, j;
        double w;
        in >> i >> j >> w;
        trips.emplace_back(i, j, w);
    }
    g.adjacency.resize(g.n, g.n);
    g.adjacency.setFromTriplets(trips.begin(), trips.end());
    g.adjacency.makeCompressed();

    expect_token(in, "original_indices");
    std::size_t count = 0;
    in >> count;
    g.original_indices.resize(count);
    for (std::size_t i = 0; i < count; ++i) in >> g.original_indices[i];
    expect_token(in, "end");
    if (!in) throw IoError("truncated graph file: " + path);
    return g;
}

namespace {

const char* nonlinearity_name(gnn::Nonlinearity nl) {
    switch (nl) {
        case gnn::Nonlinearity::ReLU: return "relu";
        case gnn::Nonlinearity::LeakyReLU: return "leakyrelu";
        case gnn::Nonlinearity::AbsValue: return "absvalue";
    }
    return "relu";
}

gnn::Nonlinearity nonlinearity_from(const std::string& s) {
    if (s == "relu") return gnn::Nonlinearity::ReLU;
    if (s == "leakyrelu") return gnn::Nonlinearity::LeakyReLU;
    if (s == "absvalue") return gnn::Nonlinearity::AbsValue;
    throw IoError("unknown nonlinearity: " + s);
}

} // namespace

void save_params(const gnn::GnnParams& params, const std::string& path) {
    std::ostringstream out;
    out << "rggnn-params v1\n";
    out << "layers " << params.layers.size() << "\n";
    out << "nonlinearity " << nonlinearity_name(params.nonlinearity) << "\n";
    out << "leaky_slope " << format_double(params.leaky_slope) << "\n";
    out << "squash " << (params.squash == gnn::OutputSquash::Sigmoid ? "sigmoid" : "none") << "\n";
    out << "taps\n";
    for (std::size_t l = 0; l < params.layers.size(); ++l) {
        const auto& h = params.layers[l].h;
        for (std::size_t k = 0; k < h.size(); ++k)
            out << l << " " << k << " " << format_double(h[k]) << "\n";
    }
    out << "end\n";
    write_text(path, out.str());
}

gnn::GnnParams load_params(const std::string& path) {
    std::istringstream in(read_text(path));
    expect_token(in, "rggnn-params");
    expect_token(in, "v1");

    gnn::GnnParams params;
    std::size_t layers = 0;
    std::string word;
    expect_token(in, "layers");
    in >> layers;
    expect_token(in, "nonlinearity");
    in >> word;
    params.nonlinearity = nonlinearity_from(word);
    expect_token(in, "leaky_slope");
    in >> params.leaky_slope;
    expect_token(in, "squash");
    in >> word;
    params.squash = word == "sigmoid" ? gnn::OutputSquash::Sigmoid : gnn::OutputSquash::None;

    expect_token(in, "taps");
    params.layers.resize(layers);
    std::string tok;
    while (in >> tok && tok != "end") {
        const std::size_t l = std::stoul(tok);
        std::size_t k;
        double v;
        in >> k >> v;
        if (l >= layers) throw IoError("params file: layer index out of range");
        auto& h = params.layers[l].h;
        if (h.size() <= k) h.resize(k + 1, 0.0);
        h[k] = v;
    }
    if (tok != "end") throw IoError("truncated params file: " + path);
    return params;
}

void save_channel_fixture(const channel::ChannelRealization& real,
                          const channel::ChannelModel& model, const std::string& path) {
    std::ostringstream out;
    out << "rggnn-channel v1\n";
    out << "n " << real.n << "\n";
    out << "seed " << real.seed << "\n";
    out << "pathloss_exponent " << format_double(model.pathloss_exponent) << "\n";
    out << "fading " << (model.fading == channel::Fading::Rayleigh ? "rayleigh" : "none") << "\n";
    out << "noise_power " << format_double(model.noise_power) << "\n";
    out << "sparsify_radius " << format_double(model.sparsify_radius) << "\n";
    out << "direct_link_distance " << format_double(model.direct_link_distance) << "\n";
    out << "direct\n";
    for (int i = 0; i < real.n; ++i) out << format_double(real.direct(i)) << "\n";
    long nnz = 0;
    for (int i = 0; i < real.n; ++i)
        for (int j = 0; j < real.n; ++j)
            if (real.gains(i, j) != 0.0) ++nnz;
    out << "gains " << nnz << "\n";
    for (int i = 0; i < real.n; ++i)
        for (int j = 0; j < real.n; ++j)
            if (real.gains(i, j) != 0.0)
                out << i << " " << j << " " << format_double(real.gains(i, j)) << "\n";
    out << "end\n";
    write_text(path, out.str());
}

std::pair<channel::ChannelRealization, channel::ChannelModel> load_channel_fixture(
    const std::string& path) {
    std::istringstream in(read_text(path));
    expect_token(in, "rggnn-channel");
    expect_token(in, "v1");

    channel::ChannelRealization real;
    channel::ChannelModel model;
    std::string word;
    expect_token(in, "n");
    in >> real.n;
    expect_token(in, "seed");
    in >> real.seed;
    expect_token(in, "pathloss_exponent");
    in >> model.pathloss_exponent;
    expect_token(in, "fading");
    in >> word;
    model.fading = word == "rayleigh" ? channel::Fading::Rayleigh : channel::Fading::None;
    expect_token(in, "noise_power");
    in >> model.noise_power;
    expect_token(in, "sparsify_radius");
    in >> model.sparsify_radius;
    expect_token(in, "direct_link_distance");
    in >> model.direct_link_distance;

    expect_token(in, "direct");
    real.direct.resize(real.n);
    for (int i = 0; i < real.n; ++i) in >> real.direct(i);

    expect_token(in, "gains");
    long nnz = 0;
    in >> nnz;
    real.gains = Eigen::MatrixXd::Zero(real.n, real.n);
    for (long e = 0; e < nnz; ++e) {
        int i, j;
        double w;
        in >> i >> j >> w;
        real.gains(i, j) = w;
    }
    expect_token(in, "end");
    if (!in) throw IoError("truncated channel fixture: " + path);

    Eigen::MatrixXd sym = 0.5 * (real.gains + real.gains.transpose());
    const double norm = channel::spectral_norm_sym(sym);
    real.gso = norm > 0.0 ? Eigen::MatrixXd(sym / (norm * (1.0 + 1e-12))) : sym;
    return {real, model};
}

const char* kMetricsSchema = "# rggnn-metrics v1";
const char* kMetricsHeader =
    "scale,policy,sum_rate_mean,sum_rate_std,violation_mean,violation_std,trials";
const char* kBoundsSchema = "# rggnn-bounds v1";
const char* kBoundsHeader = "name,n,m,sigma,K,lhs,lhs_stderr,rhs,holds";
const char* kTraceSchema = "# rggnn-trace v1";
const char* kTraceHeader = "iter,mean_sum_rate,mean_violation,lambda,grad_norm";

std::string metrics_csv(const std::vector<policy::MetricsRecord>& records) {
    std::ostringstream out;
    out << kMetricsSchema << "\n" << kMetricsHeader << "\n";
    for (const auto& r : records) {
        out << format_double(r.scale) << "," << r.policy_id << ","
            << format_double(r.sum_rate_mean) << "," << format_double(r.sum_rate_std) << ","
            << format_double(r.violation_mean) << "," << format_double(r.violation_std) << ","
            << r.trials << "\n";
    }
    return out.str();
}

std::string trace_csv(const policy::TrainingTrace& trace) {
    std::ostringstream out;
    out << kTraceSchema << "\n" << kTraceHeader << "\n";
    for (std::size_t i = 0; i < trace.steps.size(); ++i) {
        const auto& s = trace.steps[i];
        out << i << "," << format_double(s.mean_sum_rate) << ","
            << format_double(s.mean_violation) << "," << format_double(s.lambda) << ","
            << format_double(s.grad_norm) << "\n";
    }
    return out.str();
}

} // namespace rggnn::io
