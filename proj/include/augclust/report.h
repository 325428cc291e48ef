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

// Run directories: manifest, structured report, embeddings, assignments.

#ifndef AUGCLUST_REPORT_H_
#define AUGCLUST_REPORT_H_

#include <filesystem>
#include <string>

#include "augclust/config.h"
#include "augclust/graph.h"
#include "augclust/train.h"

namespace augclust {

// Loads the dataset named by `config` and applies its feature
// normalization. Throws DataError naming the offending path.
Graph LoadRunGraph(const RunConfig& config);

// JSON text of a finished run. Contains no wall-clock values, so equal
// inputs give byte-identical output.
std::string FormatReport(const RunConfig& config, const Graph& graph,
                         const TrainReport& report);

// Writes manifest.txt, report.json, embeddings.csv, assignments.csv and
// timing.txt into `dir`, creating it if needed.
void WriteRunDirectory(const std::filesystem::path& dir,
                       const RunConfig& config, const Graph& graph,
                       const TrainReport& report);

void WriteEmbeddings(const std::filesystem::path& path,
                     const Matrix& embeddings);
void WriteAssignments(const std::filesystem::path& path,
                      const std::vector<int>& assignments);

// Reads one integer label per line. For CSV rows the last field is used;
// a non-numeric first line is treated as a header.
std::vector<int> ReadLabelColumn(const std::filesystem::path& path);

}  // namespace augclust

#endif  // AUGCLUST_REPORT_H_
