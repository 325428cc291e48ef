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

#include "augclust/cli.h"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>

#include "CLI11.hpp"
#include "augclust/config.h"
#include "augclust/experiments.h"
#include "augclust/report.h"
#include "augclust/synth.h"
#include "augclust/train.h"

namespace augclust {
namespace {

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir = "out";
};

void AddCommon(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "Run configuration file")
      ->required();
  cmd->add_option("--set", args.overrides,
                  "Override a config key (key=value); repeatable");
  cmd->add_option("--out", args.out_dir, "Output directory")
      ->capture_default_str();
}

RunConfig LoadConfig(const CommonArgs& args) {
  KeyValues values = ReadConfigFile(args.config_path);
  for (const std::string& text : args.overrides) {
    values.push_back(ParseOverride(text));
  }
  return ResolveConfig(values);
}

void PrintMetrics(std::ostream& out, const MetricReport& m) {
  out << std::fixed << std::setprecision(4) << "ACC " << m.acc << "  NMI "
      << m.nmi << "  ARI " << m.ari << "  F1 " << m.f1 << '\n'
      << std::defaultfloat;
}

int CmdTrain(const CommonArgs& args, int log_every, std::ostream& out,
             std::ostream& err) {
  const RunConfig config = LoadConfig(args);
  const Graph graph = LoadRunGraph(config);
  const auto start = std::chrono::steady_clock::now();
  Trainer trainer(config.train, graph);
  std::vector<EpochRecord> records;
  records.reserve(config.train.epochs);
  for (int epoch = 0; epoch < config.train.epochs; ++epoch) {
    records.push_back(trainer.TrainEpoch(epoch));
    const EpochRecord& r = records.back();
    if (log_every > 0 && (epoch % log_every == 0 || epoch + 1 == config.train.epochs)) {
      err << "epoch " << epoch << "  loss " << r.loss_total << "  L_a "
          << r.loss_a << "  L_c " << r.loss_c;
      if (r.metrics) err << "  acc " << r.metrics->acc;
      err << '\n';
    }
  }
  TrainReport report = trainer.Finish(std::move(records));
  report.seconds = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  WriteRunDirectory(args.out_dir, config, graph, report);
  if (report.metrics) PrintMetrics(out, *report.metrics);
  out << "wrote " << args.out_dir << '\n';
  return kExitOk;
}

void WriteText(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw DataError("cannot write " + path.string());
  file << text;
}

int CmdAblate(const CommonArgs& args, ExperimentOptions options,
              std::ostream& out) {
  const RunConfig config = LoadConfig(args);
  const Graph graph = LoadRunGraph(config);
  options.out_dir = args.out_dir;
  const auto rows = RunAblation(config, graph, options);
  WriteText(std::filesystem::path(args.out_dir) / "ablation.csv",
            FormatExperimentCsv(rows, "variant"));
  out << FormatExperimentTable(rows, "variant");
  return kExitOk;
}

int CmdSweep(const CommonArgs& args, const std::string& param,
             const std::vector<std::string>& values, ExperimentOptions options,
             std::ostream& out) {
  const RunConfig config = LoadConfig(args);
  const Graph graph = LoadRunGraph(config);
  options.out_dir = args.out_dir;
  const auto rows = RunSweep(config, graph, param, values, options);
  WriteText(std::filesystem::path(args.out_dir) / "sweep.csv",
            FormatExperimentCsv(rows, param));
  out << FormatExperimentTable(rows, param);
  return kExitOk;
}

int CmdSynth(const SbmOptions& options, const std::string& out_dir,
             std::ostream& out) {
  const Graph graph = GenerateSbm(options);
  const std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);
  WriteGraph(graph, (dir / "attr.csv").string(), (dir / "edges.txt").string(),
             (dir / "labels.txt").string());
  std::ostringstream cfg;
  cfg << "# SBM: " << options.blocks << " blocks x " << options.n_per_block
      << " nodes, p_in " << FormatDouble(options.p_in) << ", p_out "
      << FormatDouble(options.p_out) << ", attr_sep "
      << FormatDouble(options.attr_sep) << ", seed " << options.seed << '\n'
      << "dataset.name = synth\n"
      << "dataset.attr = attr.csv\n"
      << "dataset.edges = edges.txt\n"
      << "dataset.labels = labels.txt\n"
      << "k = " << options.blocks << '\n';
  WriteText(dir / "dataset.cfg", cfg.str());
  out << "wrote " << graph.num_nodes() << " nodes, " << graph.edges.size()
      << " edges to " << out_dir << '\n';
  return kExitOk;
}

int CmdMetrics(const std::string& truth_path, const std::string& pred_path,
               NmiNorm norm, std::ostream& out) {
  const std::vector<int> truth = ReadLabelColumn(truth_path);
  const std::vector<int> pred = ReadLabelColumn(pred_path);
  if (truth.size() != pred.size()) {
    throw DataError(truth_path + " has " + std::to_string(truth.size()) +
                    " labels but " + pred_path + " has " +
                    std::to_string(pred.size()));
  }
  if (truth.empty()) throw DataError(truth_path + " has no labels");
  PrintMetrics(out, Evaluate(truth, pred, norm));
  return kExitOk;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Graph node clustering with learnable augmentors",
               "augclust"};
  app.require_subcommand(1);

  CommonArgs train_args;
  int log_every = 0;
  auto* train = app.add_subcommand("train", "Train one model and cluster");
  AddCommon(train, train_args);
  train->add_option("--log-every", log_every,
                    "Print losses every N epochs to stderr (0 = off)");

  CommonArgs ablate_args;
  ExperimentOptions ablate_options;
  auto* ablate =
      app.add_subcommand("ablate", "Compare the full model with ablations");
  AddCommon(ablate, ablate_args);
  ablate->add_option("--seeds", ablate_options.seeds, "Runs per variant")
      ->capture_default_str();
  ablate->add_option("--jobs", ablate_options.jobs, "Concurrent runs")
      ->capture_default_str();
  ablate->add_option("--rate", ablate_options.baseline_rate,
                     "Perturbation rate of the fixed baselines")
      ->capture_default_str();

  CommonArgs sweep_args;
  ExperimentOptions sweep_options;
  std::string sweep_param;
  std::vector<std::string> sweep_values;
  auto* sweep = app.add_subcommand("sweep", "Vary one hyperparameter");
  AddCommon(sweep, sweep_args);
  sweep->add_option("--param", sweep_param, "alpha|tau|temp|filter_depth")
      ->required();
  sweep->add_option("--values", sweep_values, "Values, in output order")
      ->required();
  sweep->add_option("--seeds", sweep_options.seeds, "Runs per value")
      ->capture_default_str();
  sweep->add_option("--jobs", sweep_options.jobs, "Concurrent runs")
      ->capture_default_str();

  SbmOptions sbm;
  std::string synth_out = "synth";
  auto* synth = app.add_subcommand("synth", "Write a stochastic block model");
  synth->add_option("--n-per-block", sbm.n_per_block)->capture_default_str();
  synth->add_option("--blocks", sbm.blocks)->capture_default_str();
  synth->add_option("--p-in", sbm.p_in)->capture_default_str();
  synth->add_option("--p-out", sbm.p_out)->capture_default_str();
  synth->add_option("--attr-sep", sbm.attr_sep)->capture_default_str();
  synth->add_option("--dim", sbm.dim)->capture_default_str();
  synth->add_option("--seed", sbm.seed)->capture_default_str();
  synth->add_option("--out", synth_out)->capture_default_str();

  std::string truth_path;
  std::string pred_path;
  std::string nmi_norm = "geometric";
  auto* metrics = app.add_subcommand("metrics", "Score a clustering");
  metrics->add_option("--truth", truth_path, "One label per line")->required();
  metrics->add_option("--pred", pred_path,
                      "Labels, or assignments.csv from a run")
      ->required();
  metrics->add_option("--nmi-norm", nmi_norm, "geometric|arithmetic")
      ->check(CLI::IsMember({"geometric", "arithmetic"}))
      ->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*train) return CmdTrain(train_args, log_every, out, err);
    if (*ablate) return CmdAblate(ablate_args, ablate_options, out);
    if (*sweep) {
      return CmdSweep(sweep_args, sweep_param, sweep_values, sweep_options,
                      out);
    }
    if (*synth) return CmdSynth(sbm, synth_out, out);
    if (*metrics) {
      return CmdMetrics(truth_path, pred_path,
                        nmi_norm == "arithmetic" ? NmiNorm::kArithmetic
                                                 : NmiNorm::kGeometric,
                        out);
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace augclust
