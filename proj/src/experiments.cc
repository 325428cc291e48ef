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

#include "augclust/experiments.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include "augclust/report.h"

namespace augclust {
namespace {

struct RunResult {
  std::optional<MetricReport> metrics;
  double initial_loss_c = 0.0;
  double final_loss = 0.0;
};

RunResult RunOne(const RunConfig& config, const Graph& graph,
                 const SecondViewSpec& view,
                 const std::optional<std::filesystem::path>& dir) {
  const TrainReport report = Train(config.train, graph, view);
  if (dir) WriteRunDirectory(*dir, config, graph, report);
  RunResult result;
  result.metrics = report.metrics;
  if (!report.epochs.empty()) {
    result.initial_loss_c = report.epochs.front().loss_c;
    result.final_loss = report.epochs.back().loss_total;
  }
  return result;
}

// Averages `seeds` consecutive results starting at `first`.
ExperimentRow Average(std::string label, const std::vector<RunResult>& results,
                      std::size_t first, int seeds) {
  ExperimentRow row;
  row.label = std::move(label);
  row.runs = seeds;
  MetricReport sum;
  bool have_metrics = true;
  for (int s = 0; s < seeds; ++s) {
    const RunResult& r = results[first + s];
    row.initial_loss_c += r.initial_loss_c / seeds;
    row.final_loss += r.final_loss / seeds;
    if (!r.metrics) {
      have_metrics = false;
      continue;
    }
    sum.acc += r.metrics->acc / seeds;
    sum.nmi += r.metrics->nmi / seeds;
    sum.ari += r.metrics->ari / seeds;
    sum.f1 += r.metrics->f1 / seeds;
  }
  if (have_metrics) row.metrics = sum;
  return row;
}

std::optional<std::filesystem::path> RunDir(
    const ExperimentOptions& options, const std::string& name, int seed_index) {
  if (!options.out_dir) return std::nullopt;
  std::filesystem::path dir = *options.out_dir / name;
  if (options.seeds > 1) dir /= "seed" + std::to_string(seed_index);
  return dir;
}

void CheckOptions(const ExperimentOptions& options) {
  if (options.seeds < 1) throw ConfigError("seeds must be at least 1");
  if (options.jobs < 1) throw ConfigError("jobs must be at least 1");
}

}  // namespace

void ParallelFor(int count, int jobs, const std::function<void(int)>& fn) {
  const int workers = std::max(1, std::min(jobs, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto work = [&] {
    for (int i = next++; i < count; i = next++) {
      {
        std::lock_guard<std::mutex> lock(error_mu);
        if (error) return;
      }
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> threads;
  for (int t = 0; t < workers; ++t) threads.emplace_back(work);
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

std::vector<AblationVariant> AblationVariants(const Graph& graph, double rate,
                                              std::uint64_t seed) {
  std::vector<AblationVariant> out;
  out.push_back({"full", "full", {true, true, std::nullopt, std::nullopt}});
  out.push_back(
      {"w/o Aug_X", "without_aug_x", {true, false, std::nullopt, std::nullopt}});
  out.push_back(
      {"w/o Aug_S", "without_aug_s", {false, true, std::nullopt, std::nullopt}});
  out.push_back({"w/o Aug_X & Aug_S",
                 "without_both",
                 {false, false, std::nullopt, std::nullopt}});
  for (BaselineKind kind :
       {BaselineKind::kMaskFeature, BaselineKind::kDropEdges,
        BaselineKind::kAddEdges, BaselineKind::kDiffusion}) {
    BaselineView view = BaselineAugment(graph, kind, rate, seed);
    out.push_back({ToString(kind),
                   ToString(kind),
                   {false, false, std::move(view.structure),
                    std::move(view.features)}});
  }
  return out;
}

std::vector<ExperimentRow> RunAblation(const RunConfig& config,
                                       const Graph& graph,
                                       const ExperimentOptions& options) {
  CheckOptions(options);
  if (!graph.has_labels()) {
    throw DataError("ablation needs ground-truth labels (dataset.labels)");
  }
  const std::vector<AblationVariant> variants =
      AblationVariants(graph, options.baseline_rate, config.train.seed);
  const int seeds = options.seeds;
  const int total = static_cast<int>(variants.size()) * seeds;
  std::vector<RunResult> results(total);
  ParallelFor(total, options.jobs, [&](int task) {
    const AblationVariant& variant = variants[task / seeds];
    RunConfig run = config;
    run.train.seed = config.train.seed + task % seeds;
    results[task] = RunOne(run, graph, variant.view,
                           RunDir(options, variant.slug, task % seeds));
  });
  std::vector<ExperimentRow> rows;
  for (std::size_t v = 0; v < variants.size(); ++v) {
    rows.push_back(Average(variants[v].name, results, v * seeds, seeds));
  }
  return rows;
}

std::vector<ExperimentRow> RunSweep(const RunConfig& config,
                                    const Graph& graph,
                                    const std::string& param,
                                    const std::vector<std::string>& values,
                                    const ExperimentOptions& options) {
  CheckOptions(options);
  static const char* const kSweepable[] = {"alpha", "tau", "temp",
                                           "filter_depth"};
  if (std::find(std::begin(kSweepable), std::end(kSweepable), param) ==
      std::end(kSweepable)) {
    throw ConfigError("unknown sweep parameter '" + param +
                      "' (expected alpha|tau|temp|filter_depth)");
  }
  if (values.empty()) throw ConfigError("sweep needs at least one value");
  // Parse and validate every value before any run starts.
  std::vector<RunConfig> configs;
  for (const std::string& value : values) {
    RunConfig run = config;
    SetConfigValue(run, param, value);
    run.train.Validate();
    configs.push_back(std::move(run));
  }
  const int seeds = options.seeds;
  const int total = static_cast<int>(configs.size()) * seeds;
  std::vector<RunResult> results(total);
  ParallelFor(total, options.jobs, [&](int task) {
    RunConfig run = configs[task / seeds];
    run.train.seed = config.train.seed + task % seeds;
    const std::string name =
        std::to_string(task / seeds) + "_" + param + "=" + values[task / seeds];
    results[task] = RunOne(run, graph, {}, RunDir(options, name, task % seeds));
  });
  std::vector<ExperimentRow> rows;
  for (std::size_t v = 0; v < values.size(); ++v) {
    rows.push_back(Average(values[v], results, v * seeds, seeds));
  }
  return rows;
}

std::string FormatExperimentCsv(const std::vector<ExperimentRow>& rows,
                                const std::string& key) {
  std::ostringstream out;
  out << key << ",acc,nmi,ari,f1,initial_loss_c,final_loss,runs\n";
  for (const ExperimentRow& row : rows) {
    out << row.label;
    if (row.metrics) {
      out << ',' << FormatDouble(row.metrics->acc) << ','
          << FormatDouble(row.metrics->nmi) << ','
          << FormatDouble(row.metrics->ari) << ','
          << FormatDouble(row.metrics->f1);
    } else {
      out << ",,,,";
    }
    out << ',' << FormatDouble(row.initial_loss_c) << ','
        << FormatDouble(row.final_loss) << ',' << row.runs << '\n';
  }
  return out.str();
}

std::string FormatExperimentTable(const std::vector<ExperimentRow>& rows,
                                  const std::string& key) {
  std::size_t width = key.size();
  for (const ExperimentRow& row : rows) width = std::max(width, row.label.size());
  std::ostringstream out;
  out << std::left << std::setw(static_cast<int>(width)) << key << std::right
      << std::setw(9) << "ACC" << std::setw(9) << "NMI" << std::setw(9)
      << "ARI" << std::setw(9) << "F1" << std::setw(14) << "L_c(epoch 0)"
      << '\n';
  out << std::fixed;
  for (const ExperimentRow& row : rows) {
    out << std::left << std::setw(static_cast<int>(width)) << row.label
        << std::right << std::setprecision(2);
    if (row.metrics) {
      out << std::setw(9) << 100.0 * row.metrics->acc << std::setw(9)
          << 100.0 * row.metrics->nmi << std::setw(9)
          << 100.0 * row.metrics->ari << std::setw(9)
          << 100.0 * row.metrics->f1;
    } else {
      out << std::setw(9) << "-" << std::setw(9) << "-" << std::setw(9) << "-"
          << std::setw(9) << "-";
    }
    out << std::setprecision(4) << std::setw(14) << row.initial_loss_c << '\n';
  }
  return out.str();
}

}  // namespace augclust
