#ifndef RGGNN_IO_HPP
#define RGGNN_IO_HPP

#include <string>
#include <vector>

#include "rggnn/channel.hpp"
#include "rggnn/geometry.hpp"
#include "rggnn/gnn.hpp"
#include "rggnn/policy.hpp"

namespace rggnn::io {

/// %.17g rendering; decimal round-trips IEEE doubles exactly.
std::string format_double(double v);

// Graph container: self-describing text with positions and sparse adjacency
// triples. Parent links are not serialized.
void save_graph(const geo::GeometricGraph& g, const std::string& path);
geo::GeometricGraph load_graph(const std::string& path);

// Parameter checkpoint: architecture descriptor plus (l, k, h_lk) rows.
void save_params(const gnn::GnnParams& params, const std::string& path);
gnn::GnnParams load_params(const std::string& path);

// Channel fixture: model parameters, dense direct vector, sparse gain triples.
void save_channel_fixture(const channel::ChannelRealization& real,
                          const channel::ChannelModel& model, const std::string& path);
std::pair<channel::ChannelRealization, channel::ChannelModel> load_channel_fixture(
    const std::string& path);

// CSV schemas are versioned; the first line is a schema comment, the second
// the column header. Tests pin both against golden strings.
extern const char* kMetricsSchema;
extern const char* kMetricsHeader;
extern const char* kBoundsSchema;
extern const char* kBoundsHeader;
extern const char* kTraceSchema;
extern const char* kTraceHeader;

void write_text(const std::string& path, const std::string& content);
std::string read_text(const std::string& path);

std::string metrics_csv(const std::vector<policy::MetricsRecord>& records);
std::string trace_csv(const policy::TrainingTrace& trace);

} // namespace rggnn::io

#endif // RGGNN_IO_HPP
