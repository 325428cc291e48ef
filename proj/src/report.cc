// Copyright 2026 The Augclust Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "augclust/report.h"

#include <charconv>
#include <fstream>
#include <mutex>
#include <sstream>

#include "json.hpp"

namespace augclust {
namespace {

using nlohmann::ordered_json;

ordered_json MetricsJson(const MetricReport& m) {
  return ordered_json{{"acc", m.acc}, {"nmi", m.nmi}, {"ari", m.ari},
                      {"f1", m.f1}};
}

std::ofstream OpenForWrite(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

// Several runs may finish at once; file output goes through one lock.
std::mutex& WriterMutex() {
  static std::mutex mu;
  return mu;
}

}  // namespace

Graph LoadRunGraph(const RunConfig& config) {
  Graph graph = LoadGraph(config.attr_path, config.edge_path,
                          config.label_path, config.train.num_clusters);
  NormalizeFeatures(graph.features, config.feature_norm);
  return graph;
}

std::string FormatReport(const RunConfig& config, const Graph& graph,
                         const TrainReport& report) {
  ordered_json root;
  root["dataset"] = ordered_json{
      {"name", config.dataset_name},
      {"num_nodes", graph.num_nodes()},
      {"num_edges", graph.edges.size()},
      {"dim", graph.dim()},
      {"num_clusters", report.clusters.centroids.rows()},
  };
  root["seed"] = config.train.seed;
  root["metrics"] =
      report.metrics ? MetricsJson(*report.metrics) : ordered_json(nullptr);

  std::vector<int> sizes(report.clusters.centroids.rows(), 0);
  for (int a : report.clusters.assignments) ++sizes[a];
  root["clustering"] = ordered_json{
      {"inertia", report.clusters.inertia},
      {"iterations", report.clusters.iterations},
      {"cluster_sizes", sizes},
  };

  ordered_json epochs = ordered_json::array();
  for (const EpochRecord& r : report.epochs) {
    ordered_json e{
        {"epoch", r.epoch},       {"loss", r.loss_total},
        {"loss_a", r.loss_a},     {"loss_c", r.loss_c},
        {"grad_norm", r.grad_norm}, {"refined", r.refined},
        {"masked", r.masked},
    };
    if (r.metrics) e["metrics"] = MetricsJson(*r.metrics);
    epochs.push_back(std::move(e));
  }
  if (!report.epochs.empty()) {
    const EpochRecord& last = report.epochs.back();
    root["final_loss"] = ordered_json{{"loss", last.loss_total},
                                      {"loss_a", last.loss_a},
                                      {"loss_c", last.loss_c}};
  }
  root["epochs"] = std::move(epochs);
  return root.dump(2) + "\n";
}

void WriteEmbeddings(const std::filesystem::path& path,
                     const Matrix& embeddings) {
  std::ofstream out = OpenForWrite(path);
  for (Index i = 0; i < embeddings.rows(); ++i) {
    for (Index j = 0; j < embeddings.cols(); ++j) {
      if (j > 0) out << ',';
      out << FormatDouble(embeddings(i, j));
    }
    out << '\n';
  }
}

void WriteAssignments(const std::filesystem::path& path,
                      const std::vector<int>& assignments) {
  std::ofstream out = OpenForWrite(path);
  out << "node,cluster\n";
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    out << i << ',' << assignments[i] << '\n';
  }
}

void WriteRunDirectory(const std::filesystem::path& dir,
                       const RunConfig& config, const Graph& graph,
                       const TrainReport& report) {
  const std::string text = FormatReport(config, graph, report);
  std::lock_guard<std::mutex> lock(WriterMutex());
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw DataError("cannot create " + dir.string() + ": " + ec.message());
  {
    std::ofstream out = OpenForWrite(dir / "manifest.txt");
    out << FormatManifest(config)
        << "# output_dir = " << std::filesystem::absolute(dir).string()
        << '\n';
  }
  {
    std::ofstream out = OpenForWrite(dir / "report.json");
    out << text;
  }
  WriteEmbeddings(dir / "embeddings.csv", report.embeddings);
  WriteAssignments(dir / "assignments.csv", report.clusters.assignments);
  {
    std::ofstream out = OpenForWrite(dir / "timing.txt");
    out << "seconds = " << report.seconds << '\n';
  }
}

std::vector<int> ReadLabelColumn(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path.string());
  std::vector<int> labels;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) {
      line.pop_back();
    }
    if (line.empty()) continue;
    const auto comma = line.rfind(',');
    const std::string field =
        comma == std::string::npos ? line : line.substr(comma + 1);
    int value = 0;
    const char* end = field.data() + field.size();
    auto [ptr, err] = std::from_chars(field.data(), end, value);
    if (err != std::errc() || ptr != end) {
      if (line_no == 1) continue;  // header
      throw DataError(path.string() + ":" + std::to_string(line_no) +
                      ": expected an integer label");
    }
    labels.push_back(value);
  }
  return labels;
}

}  // namespace augclust
