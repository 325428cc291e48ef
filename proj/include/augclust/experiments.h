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

// Multi-run drivers: component ablations and one-parameter sweeps.

#ifndef AUGCLUST_EXPERIMENTS_H_
#define AUGCLUST_EXPERIMENTS_H_

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "augclust/config.h"
#include "augclust/graph.h"
#include "augclust/train.h"

namespace augclust {

struct AblationVariant {
  std::string name;  // table label
  std::string slug;  // subdirectory name
  SecondViewSpec view;
};

// Full model, the three learnable-view removals, and the four fixed
// baseline views at `rate`.
std::vector<AblationVariant> AblationVariants(const Graph& graph, double rate,
                                              std::uint64_t seed);

struct ExperimentOptions {
  // Runs per variant, with seeds config.seed, config.seed + 1, ...
  int seeds = 1;
  // Runs executed at once. Results do not depend on this.
  int jobs = 1;
  double baseline_rate = 0.2;
  // When set, every run writes its outputs below this directory.
  std::optional<std::filesystem::path> out_dir;
};

struct ExperimentRow {
  std::string label;
  // Seed-averaged metrics; nullopt without ground truth.
  std::optional<MetricReport> metrics;
  double initial_loss_c = 0.0;
  double final_loss = 0.0;
  int runs = 0;
};

// Throws DataError if the graph has no labels.
std::vector<ExperimentRow> RunAblation(const RunConfig& config,
                                       const Graph& graph,
                                       const ExperimentOptions& options);

// `param` is one of alpha, tau, temp, filter_depth; rows follow `values`.
// Throws ConfigError for other parameters or unparsable values.
std::vector<ExperimentRow> RunSweep(const RunConfig& config,
                                    const Graph& graph,
                                    const std::string& param,
                                    const std::vector<std::string>& values,
                                    const ExperimentOptions& options);

// Comma-separated table with a header row; `key` names the first column.
std::string FormatExperimentCsv(const std::vector<ExperimentRow>& rows,
                                const std::string& key);
// Fixed-width table for terminals.
std::string FormatExperimentTable(const std::vector<ExperimentRow>& rows,
                                  const std::string& key);

// Calls fn(0) ... fn(count - 1) on up to `jobs` threads. The first
// exception thrown is rethrown after all workers stop.
void ParallelFor(int count, int jobs, const std::function<void(int)>& fn);

}  // namespace augclust

#endif  // AUGCLUST_EXPERIMENTS_H_
