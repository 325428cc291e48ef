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

#include "augclust/config.h"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

namespace augclust {
namespace {

std::string Trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void BadValue(const std::string& key, const std::string& value,
                           const std::string& expected) {
  throw ConfigError("config key '" + key + "': invalid value '" + value +
                    "' (expected " + expected + ")");
}

double ParseReal(const std::string& key, const std::string& value) {
  double out = 0.0;
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end || !std::isfinite(out)) {
    BadValue(key, value, "a real number");
  }
  return out;
}

long long ParseInteger(const std::string& key, const std::string& value) {
  long long out = 0;
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) BadValue(key, value, "an integer");
  return out;
}

int ParseInt(const std::string& key, const std::string& value) {
  const long long out = ParseInteger(key, value);
  if (out < std::numeric_limits<int>::min() ||
      out > std::numeric_limits<int>::max()) {
    BadValue(key, value, "a 32-bit integer");
  }
  return static_cast<int>(out);
}

const char* const kDatasetPathKeys[] = {"dataset.attr", "dataset.edges",
                                        "dataset.labels"};

}  // namespace

std::string FormatDouble(double value) {
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, ptr);
}

const std::vector<std::string>& ConfigKeys() {
  static const std::vector<std::string> kKeys = {
      "dataset.name",        "dataset.attr",        "dataset.edges",
      "dataset.labels",      "k",                   "alpha",
      "tau",                 "temp",                "lr",
      "epochs",              "stage2_start",        "seed",
      "structure_augmentor", "attribute_augmentor", "hidden_dim",
      "embedding_dim",       "filter_depth",        "shared_encoder",
      "grad_clip",           "confidence_rule",     "ntxent_variant",
      "nmi_norm",            "feature_norm",        "kmeans_restarts",
  };
  return kKeys;
}

KeyValues ParseConfigText(const std::string& text, const std::string& source) {
  KeyValues out;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string trimmed = Trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    const auto eq = trimmed.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(source + ":" + std::to_string(line_no) +
                        ": expected 'key = value'");
    }
    std::string key = Trim(trimmed.substr(0, eq));
    if (key.empty()) {
      throw ConfigError(source + ":" + std::to_string(line_no) +
                        ": empty key");
    }
    out.emplace_back(std::move(key), Trim(trimmed.substr(eq + 1)));
  }
  return out;
}

KeyValues ReadConfigFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  KeyValues values = ParseConfigText(buffer.str(), path);
  const std::filesystem::path base =
      std::filesystem::absolute(path).parent_path();
  for (auto& [key, value] : values) {
    for (const char* path_key : kDatasetPathKeys) {
      if (key == path_key && !value.empty() &&
          std::filesystem::path(value).is_relative()) {
        value = (base / value).lexically_normal().string();
      }
    }
  }
  return values;
}

std::pair<std::string, std::string> ParseOverride(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || Trim(text.substr(0, eq)).empty()) {
    throw ConfigError("override '" + text + "' is not key=value");
  }
  return {Trim(text.substr(0, eq)), Trim(text.substr(eq + 1))};
}

void SetConfigValue(RunConfig& config, const std::string& key,
                    const std::string& value) {
  TrainConfig& t = config.train;
  if (key == "dataset.name") {
    config.dataset_name = value;
  } else if (key == "dataset.attr") {
    config.attr_path = value;
  } else if (key == "dataset.edges") {
    config.edge_path = value;
  } else if (key == "dataset.labels") {
    config.label_path =
        value.empty() ? std::nullopt : std::optional<std::string>(value);
  } else if (key == "k") {
    t.num_clusters = ParseInt(key, value);
  } else if (key == "alpha") {
    t.alpha = ParseReal(key, value);
  } else if (key == "tau") {
    t.tau = ParseReal(key, value);
  } else if (key == "temp") {
    t.temp = ParseReal(key, value);
  } else if (key == "lr") {
    t.lr = ParseReal(key, value);
  } else if (key == "epochs") {
    t.epochs = ParseInt(key, value);
  } else if (key == "stage2_start") {
    t.stage2_start = ParseInt(key, value);
  } else if (key == "seed") {
    const long long seed = ParseInteger(key, value);
    if (seed < 0) BadValue(key, value, "a non-negative integer");
    t.seed = static_cast<std::uint64_t>(seed);
  } else if (key == "structure_augmentor") {
    if (value == "mlp") {
      t.structure_augmentor = StructureKind::kMlp;
    } else if (value == "gcn") {
      t.structure_augmentor = StructureKind::kGcn;
    } else if (value == "attention") {
      t.structure_augmentor = StructureKind::kAttention;
    } else {
      BadValue(key, value, "mlp|gcn|attention");
    }
  } else if (key == "attribute_augmentor") {
    if (value == "mlp") {
      t.attribute_augmentor = AttributeKind::kMlp;
    } else if (value == "attention") {
      t.attribute_augmentor = AttributeKind::kAttention;
    } else {
      BadValue(key, value, "mlp|attention");
    }
  } else if (key == "hidden_dim") {
    t.hidden_dim = ParseInt(key, value);
  } else if (key == "embedding_dim") {
    t.embedding_dim = ParseInt(key, value);
  } else if (key == "filter_depth") {
    t.filter_depth = ParseInt(key, value);
  } else if (key == "shared_encoder") {
    if (value != "true") BadValue(key, value, "true");
  } else if (key == "grad_clip") {
    t.grad_clip = ParseReal(key, value);
  } else if (key == "confidence_rule") {
    if (value == "fraction") {
      t.confidence_rule = ConfidenceRule::kFraction;
    } else if (value == "absolute") {
      t.confidence_rule = ConfidenceRule::kAbsolute;
    } else {
      BadValue(key, value, "fraction|absolute");
    }
  } else if (key == "ntxent_variant") {
    if (value == "paper") {
      t.ntxent_variant = NtXentVariant::kPaper;
    } else if (value == "standard") {
      t.ntxent_variant = NtXentVariant::kStandard;
    } else {
      BadValue(key, value, "paper|standard");
    }
  } else if (key == "nmi_norm") {
    if (value == "geometric") {
      t.nmi_norm = NmiNorm::kGeometric;
    } else if (value == "arithmetic") {
      t.nmi_norm = NmiNorm::kArithmetic;
    } else {
      BadValue(key, value, "geometric|arithmetic");
    }
  } else if (key == "feature_norm") {
    if (value == "none") {
      config.feature_norm = FeatureNorm::kNone;
    } else if (value == "l1") {
      config.feature_norm = FeatureNorm::kRowL1;
    } else if (value == "l2") {
      config.feature_norm = FeatureNorm::kRowL2;
    } else {
      BadValue(key, value, "none|l1|l2");
    }
  } else if (key == "kmeans_restarts") {
    t.kmeans_restarts = ParseInt(key, value);
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

RunConfig ResolveConfig(const KeyValues& values) {
  RunConfig config;
  bool lr_set = false;
  for (const auto& [key, value] : values) {
    SetConfigValue(config, key, value);
    lr_set = lr_set || key == "lr";
  }
  if (!lr_set) {
    if (auto preset = PresetLearningRate(config.dataset_name)) {
      config.train.lr = *preset;
    }
  }
  if (config.attr_path.empty()) throw ConfigError("config key 'dataset.attr' is required");
  if (config.edge_path.empty()) throw ConfigError("config key 'dataset.edges' is required");
  config.train.Validate();
  return config;
}

std::string FormatManifest(const RunConfig& config) {
  const TrainConfig& t = config.train;
  auto feature_norm = [&] {
    switch (config.feature_norm) {
      case FeatureNorm::kNone:
        return "none";
      case FeatureNorm::kRowL1:
        return "l1";
      case FeatureNorm::kRowL2:
        return "l2";
    }
    return "none";
  };
  std::ostringstream out;
  out << "dataset.name = " << config.dataset_name << '\n'
      << "dataset.attr = " << config.attr_path << '\n'
      << "dataset.edges = " << config.edge_path << '\n'
      << "dataset.labels = " << config.label_path.value_or("") << '\n'
      << "k = " << t.num_clusters << '\n'
      << "alpha = " << FormatDouble(t.alpha) << '\n'
      << "tau = " << FormatDouble(t.tau) << '\n'
      << "temp = " << FormatDouble(t.temp) << '\n'
      << "lr = " << FormatDouble(t.lr) << '\n'
      << "epochs = " << t.epochs << '\n'
      << "stage2_start = " << t.stage2_start << '\n'
      << "seed = " << t.seed << '\n'
      << "structure_augmentor = " << ToString(t.structure_augmentor) << '\n'
      << "attribute_augmentor = " << ToString(t.attribute_augmentor) << '\n'
      << "hidden_dim = " << t.hidden_dim << '\n'
      << "embedding_dim = " << t.embedding_dim << '\n'
      << "filter_depth = " << t.filter_depth << '\n'
      << "shared_encoder = true\n"
      << "grad_clip = " << FormatDouble(t.grad_clip) << '\n'
      << "confidence_rule = "
      << (t.confidence_rule == ConfidenceRule::kFraction ? "fraction"
                                                         : "absolute")
      << '\n'
      << "ntxent_variant = "
      << (t.ntxent_variant == NtXentVariant::kPaper ? "paper" : "standard")
      << '\n'
      << "nmi_norm = "
      << (t.nmi_norm == NmiNorm::kGeometric ? "geometric" : "arithmetic")
      << '\n'
      << "feature_norm = " << feature_norm() << '\n'
      << "kmeans_restarts = " << t.kmeans_restarts << '\n';
  return out.str();
}

}  // namespace augclust
