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

// Flat "key = value" run configuration.
//
// Lines starting with '#' and blank lines are ignored. Later assignments
// override earlier ones, and command-line overrides are applied last.

#ifndef AUGCLUST_CONFIG_H_
#define AUGCLUST_CONFIG_H_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "augclust/graph.h"
#include "augclust/train.h"

namespace augclust {

using KeyValues = std::vector<std::pair<std::string, std::string>>;

struct RunConfig {
  TrainConfig train;
  std::string attr_path;
  std::string edge_path;
  std::optional<std::string> label_path;
  std::string dataset_name;
  FeatureNorm feature_norm = FeatureNorm::kNone;
};

// Every recognised key, in manifest order.
const std::vector<std::string>& ConfigKeys();

// Throws ConfigError with `source` and line number on malformed lines.
KeyValues ParseConfigText(const std::string& text, const std::string& source);

// Reads a config file. Relative dataset paths are resolved against the
// file's directory. Throws ConfigError if the file cannot be read.
KeyValues ReadConfigFile(const std::string& path);

// "key=value" as given to --set.
std::pair<std::string, std::string> ParseOverride(const std::string& text);

// Applies one assignment. Throws ConfigError naming the key for unknown
// keys and unparsable values.
void SetConfigValue(RunConfig& config, const std::string& key,
                    const std::string& value);

// Applies all assignments, fills preset learning rates, validates.
RunConfig ResolveConfig(const KeyValues& values);

// All keys with resolved values; parseable by ParseConfigText.
std::string FormatManifest(const RunConfig& config);

std::string FormatDouble(double value);

}  // namespace augclust

#endif  // AUGCLUST_CONFIG_H_
