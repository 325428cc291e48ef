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

// Acceptance checks, one per criterion. Prints one PASS/FAIL/SKIP line per
// criterion run. Exit status: 0 if all pass, 1 on any failure, 77 when the
// only criterion requested was skipped.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "augclust/cli.h"
#include "augclust/config.h"
#include "augclust/experiments.h"
#include "augclust/metrics.h"
#include "augclust/refine.h"
#include "augclust/report.h"
#include "augclust/synth.h"
#include "augclust/train.h"
#include "oracles.h"
#include "pipeline_check.h"
#include "test_util.h"

namespace augclust {
namespace {

enum class Status { kPass, kFail, kSkip };

struct Outcome {
  Status status;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string Fixed(double value, int digits = 4) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(digits);
  s << value;
  return s.str();
}

std::string Scientific(double value) {
  std::ostringstream s;
  s.setf(std::ios::scientific);
  s.precision(2);
  s << value;
  return s.str();
}

Outcome Verdict(bool ok, const std::string& detail) {
  return {ok ? Status::kPass : Status::kFail, detail};
}

// The synthetic instance shared by criteria 4 and 6.
Graph SyntheticGraph() {
  SbmOptions options;
  options.blocks = 2;
  options.n_per_block = 50;
  options.p_in = 0.2;
  options.p_out = 0.01;
  options.attr_sep = 5.0;
  return GenerateSbm(options);
}

// Defaults with the schedule scaled from 400 to 100 epochs.
TrainConfig ScaledDefaults() {
  TrainConfig config;
  config.num_clusters = 2;
  config.epochs = 100;
  config.stage2_start = 50;
  return config;
}

// Each augmentor pairing, with and without refinement. Random draws whose
// loss has a kink or jump inside the difference stencil of some coordinate
// are not valid test points for central differences; they are redrawn and
// counted.
Outcome GradientCheck() {
  const auto start = Clock::now();
  double worst = 0.0;
  std::string worst_case;
  int instances = 0, redrawn = 0;
  std::uint64_t seed = 100;
  for (StructureKind s :
       {StructureKind::kMlp, StructureKind::kGcn, StructureKind::kAttention}) {
    for (AttributeKind a : {AttributeKind::kMlp, AttributeKind::kAttention}) {
      for (bool refine : {false, true}) {
        const std::string label = ToString(s) + "/" + ToString(a) +
                                  (refine ? " refined" : " plain");
        testing::GradientCheck check;
        for (int draw = 0; draw < 20; ++draw) {
          check = testing::PipelineGradientCheck(
              testing::SmallInstance(++seed, s, a), refine);
          if (check.kinked == 0) break;
          ++redrawn;
        }
        if (check.kinked > 0) {
          return {Status::kFail, "no smooth instance found for " + label};
        }
        ++instances;
        if (check.max_error >= worst) {
          worst = check.max_error;
          worst_case = label;
        }
      }
    }
  }
  const double seconds = SecondsSince(start);
  return Verdict(worst < 1e-5 && seconds < 60.0,
                 std::to_string(instances) + " instances (" +
                     std::to_string(redrawn) + " redrawn), max rel err " +
                     Scientific(worst) + " (" + worst_case + "), " +
                     Fixed(seconds, 2) + " s");
}

Outcome MetricOracles() {
  const auto start = Clock::now();
  std::mt19937_64 rng(2);
  double worst = 0.0;
  auto track = [&](double a, double b) {
    worst = std::max(worst, std::abs(a - b));
  };
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 12);
    const int kt = 1 + static_cast<int>(rng() % 4);
    const int kp = 1 + static_cast<int>(rng() % 4);
    std::vector<int> truth(n), pred(n);
    for (int i = 0; i < n; ++i) {
      truth[i] = static_cast<int>(rng() % kt);
      pred[i] = static_cast<int>(rng() % kp);
    }
    track(ClusteringAccuracy(truth, pred), oracle::Accuracy(truth, pred));
    track(Nmi(truth, pred), oracle::Nmi(truth, pred, false));
    track(Nmi(truth, pred, NmiNorm::kArithmetic), oracle::Nmi(truth, pred, true));
    track(Ari(truth, pred), oracle::Ari(truth, pred));
    const std::vector<int> mapped = MapToTruth(truth, pred);
    track(MacroF1(truth, mapped), oracle::MacroF1(truth, mapped));
  }
  const double acc = ClusteringAccuracy(std::vector<int>{0, 0, 1, 1, 2},
                                        std::vector<int>{1, 1, 0, 2, 2});
  const double ari =
      Ari(std::vector<int>{0, 0, 1, 1}, std::vector<int>{0, 1, 0, 1});
  const bool fixed = std::abs(acc - 0.8) < 1e-12 && std::abs(ari + 0.5) < 1e-12;
  const double seconds = SecondsSince(start);
  return Verdict(worst <= 1e-10 && fixed && seconds < 10.0,
                 "200 pairs, max abs diff " + Scientific(worst) +
                     ", fixed ACC " + Fixed(acc) + " ARI " + Fixed(ari) + ", " +
                     Fixed(seconds, 2) + " s");
}

Outcome RefinementInvariants() {
  const auto start = Clock::now();
  std::mt19937_64 rng(3);
  int violations = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 2 + static_cast<Index>(rng() % 15);
    const Index k = 2 + static_cast<Index>(rng() % 3);
    const Index d = 2 + static_cast<Index>(rng() % 6);
    Matrix f1 = testing::RandomMatrix(n, d, rng);
    Matrix f2 = testing::RandomMatrix(n, d, rng);
    f1.rowwise().normalize();
    f2.rowwise().normalize();
    const Matrix aug_s = testing::RandomMatrix(n, n, rng, 0.0, 1.0);
    const double tau = 0.05 + 0.95 * (rng() % 1000) / 1000.0;
    const ConfidenceRule rule =
        trial % 2 ? ConfidenceRule::kFraction : ConfidenceRule::kAbsolute;
    const PseudoLabels p = ConfidenceSelect(
        0.5 * (f1 + f2), testing::RandomMatrix(k, d, rng), tau, rule);
    const Matrix s = CrossViewSimilarity(f1, f2);
    const Matrix z = PseudoLabelMatrix(p.labels, p.mask);
    const Matrix out = Refine(aug_s, s, z);
    bool ok = z == z.transpose() && (z.diagonal().array() == 1.0).all() &&
              (z.array() == 0.0 || z.array() == 1.0).all() &&
              (out.array() >= 0.0).all() && (out.array() <= aug_s.array()).all();
    for (Index i = 0; i < n && ok; ++i) {
      for (Index j = 0; j < n && ok; ++j) {
        if (p.mask[i] && p.mask[j]) {
          ok = z(i, j) == (p.labels[i] == p.labels[j] ? 1.0 : 0.0);
        } else {
          ok = z(i, j) == 1.0 &&
               out(i, j) == aug_s(i, j) * std::clamp(s(i, j), 0.0, 1.0);
        }
      }
    }
    if (!ok) ++violations;
  }
  const double seconds = SecondsSince(start);
  return Verdict(violations == 0 && seconds < 5.0,
                 "100 states, " + std::to_string(violations) + " violations, " +
                     Fixed(seconds, 2) + " s");
}

Outcome SyntheticRecovery() {
  const auto start = Clock::now();
  testing::TempDir dir;
  std::ostringstream out, err;
  int code = RunCli({"synth", "--blocks", "2", "--n-per-block", "50", "--p-in",
                     "0.2", "--p-out", "0.01", "--attr-sep", "5", "--out",
                     dir.File("data")},
                    out, err);
  if (code != kExitOk) return {Status::kFail, "synth failed: " + err.str()};
  std::vector<double> accs;
  for (int seed = 0; seed < 5; ++seed) {
    const std::string run = dir.File("run" + std::to_string(seed));
    code = RunCli({"train", "--config", dir.File("data/dataset.cfg"), "--set",
                   "epochs=100", "--set", "stage2_start=50", "--set",
                   "seed=" + std::to_string(seed), "--out", run},
                  out, err);
    if (code != kExitOk) return {Status::kFail, "train failed: " + err.str()};
    const auto report =
        nlohmann::json::parse(testing::ReadFile(run + "/report.json"));
    accs.push_back(report["metrics"]["acc"].get<double>());
  }
  double mean = 0.0;
  for (double a : accs) mean += a / accs.size();
  const double seconds = SecondsSince(start);
  std::string per_seed;
  for (double a : accs) per_seed += " " + Fixed(a, 3);
  return Verdict(mean >= 0.95 && seconds < 120.0,
                 "mean ACC " + Fixed(mean) + " over 5 seeds (" +
                     per_seed.substr(1) + "), " + Fixed(seconds, 2) + " s");
}

// CORA is read through a config file naming dataset.attr, dataset.edges and
// dataset.labels. Looked up in AUGCLUST_CORA_CONFIG, then data/cora/cora.cfg.
Outcome CoraTarget() {
  std::filesystem::path path;
  if (const char* env = std::getenv("AUGCLUST_CORA_CONFIG")) {
    path = env;
  } else {
    path = std::filesystem::path(AUGCLUST_SOURCE_DIR) / "data/cora/cora.cfg";
  }
  if (!std::filesystem::exists(path)) {
    return {Status::kSkip, "no CORA config at " + path.string() +
                               " (set AUGCLUST_CORA_CONFIG)"};
  }
  KeyValues values = ReadConfigFile(path);
  values.insert(values.begin(), {"dataset.name", "cora"});
  const RunConfig config = ResolveConfig(values);
  const Graph graph = LoadRunGraph(config);
  if (graph.labels.empty()) return {Status::kFail, "CORA config has no labels"};
  const auto start = Clock::now();
  double two_stage = 0.0, one_stage = 0.0, slowest = 0.0;
  for (int seed = 0; seed < 5; ++seed) {
    TrainConfig train = config.train;
    train.seed = seed;
    auto t0 = Clock::now();
    two_stage += Train(train, graph).metrics->acc / 5.0;
    slowest = std::max(slowest, SecondsSince(t0));
    train.stage2_start = train.epochs;
    t0 = Clock::now();
    one_stage += Train(train, graph).metrics->acc / 5.0;
    slowest = std::max(slowest, SecondsSince(t0));
  }
  return Verdict(two_stage >= 0.55 && one_stage - two_stage <= 0.02 &&
                     slowest <= 600.0,
                 "mean ACC " + Fixed(two_stage) + ", stage-1 only " +
                     Fixed(one_stage) + ", slowest run " + Fixed(slowest, 1) +
                     " s, total " + Fixed(SecondsSince(start), 1) + " s");
}

Outcome AblationOrdering() {
  const auto start = Clock::now();
  const Graph graph = SyntheticGraph();
  RunConfig config;
  config.train = ScaledDefaults();
  ExperimentOptions options;
  options.seeds = 5;
  options.jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  const auto rows = RunAblation(config, graph, options);
  const double full = rows[0].metrics->acc;
  bool ok = true;
  std::string detail = "full " + Fixed(full);
  for (int i = 1; i <= 3; ++i) {
    const double acc = rows[i].metrics->acc;
    ok = ok && full >= acc - 0.01;
    detail += ", " + rows[i].label + " " + Fixed(acc);
  }
  return Verdict(ok, "mean ACC over 5 seeds: " + detail + ", " +
                         Fixed(SecondsSince(start), 2) + " s");
}

// Median wall time of one full loss evaluation (both views plus L).
double LossEvaluationSeconds(int nodes) {
  SbmOptions options;
  options.n_per_block = nodes / 2;
  const Graph graph = GenerateSbm(options);
  TrainConfig config;
  config.num_clusters = 2;
  Model model(config, graph);
  std::vector<double> times;
  for (int rep = 0; rep < 6; ++rep) {
    const auto t0 = Clock::now();
    Tape tape;
    const ViewOutputs views = model.Forward(tape);
    const LossOutputs loss = model.Loss(views, nullptr);
    if (!std::isfinite(loss.total.value()(0, 0))) return -1.0;
    if (rep > 0) times.push_back(SecondsSince(t0));  // first rep warms up
  }
  std::nth_element(times.begin(), times.begin() + times.size() / 2, times.end());
  return times[times.size() / 2];
}

Outcome ComplexityScaling() {
  const double small = LossEvaluationSeconds(1000);
  const double large = LossEvaluationSeconds(2000);
  const double ratio = large / small;
  return Verdict(small > 0.0 && ratio >= 2.0 && ratio <= 6.0,
                 "N=1000 " + Fixed(small, 4) + " s, N=2000 " + Fixed(large, 4) +
                     " s, ratio " + Fixed(ratio, 2));
}

Outcome Determinism() {
  testing::TempDir dir;
  std::ostringstream out, err;
  if (RunCli({"synth", "--out", dir.File("data")}, out, err) != kExitOk) {
    return {Status::kFail, "synth failed: " + err.str()};
  }
  const std::vector<std::string> common = {"--set", "epochs=40", "--set",
                                           "stage2_start=20", "--set", "seed=7"};
  std::vector<std::string> args = {"train", "--config",
                                   dir.File("data/dataset.cfg"), "--out",
                                   dir.File("a")};
  args.insert(args.end(), common.begin(), common.end());
  if (RunCli(args, out, err) != kExitOk) {
    return {Status::kFail, "train failed: " + err.str()};
  }
  // Both replays start from the written manifest.
  for (const char* name : {"b", "c"}) {
    if (RunCli({"train", "--config", dir.File("a/manifest.txt"), "--out",
                dir.File(name)},
               out, err) != kExitOk) {
      return {Status::kFail, "replay failed: " + err.str()};
    }
  }
  const std::string a = testing::ReadFile(dir.path() / "a/report.json");
  const std::string b = testing::ReadFile(dir.path() / "b/report.json");
  const std::string c = testing::ReadFile(dir.path() / "c/report.json");
  const bool same_embeddings =
      testing::ReadFile(dir.path() / "b/embeddings.csv") ==
      testing::ReadFile(dir.path() / "c/embeddings.csv");
  return Verdict(a == b && b == c && same_embeddings && !a.empty(),
                 "report.json " + std::to_string(a.size()) + " bytes, " +
                     (a == b && b == c ? "identical" : "different") +
                     " across 3 runs");
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

const std::vector<Criterion>& Criteria() {
  static const std::vector<Criterion> criteria = {
      {1, "gradient correctness", GradientCheck},
      {2, "metric oracle equivalence", MetricOracles},
      {3, "refinement invariants", RefinementInvariants},
      {4, "synthetic recovery", SyntheticRecovery},
      {5, "CORA desk-scale target", CoraTarget},
      {6, "ablation ordering", AblationOrdering},
      {7, "loss complexity scaling", ComplexityScaling},
      {8, "determinism", Determinism},
  };
  return criteria;
}

}  // namespace
}  // namespace augclust

int main(int argc, char** argv) {
  using augclust::Status;
  CLI::App app("augclust acceptance checks");
  std::vector<int> selected;
  app.add_option("--criterion", selected, "criterion ids to run (default all)")
      ->check(CLI::Range(1, 8));
  CLI11_PARSE(app, argc, argv);

  int failed = 0, skipped = 0, ran = 0;
  for (const auto& c : augclust::Criteria()) {
    if (!selected.empty() &&
        std::find(selected.begin(), selected.end(), c.id) == selected.end()) {
      continue;
    }
    augclust::Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {Status::kFail, std::string("exception: ") + e.what()};
    }
    const char* tag = outcome.status == Status::kPass   ? "PASS"
                      : outcome.status == Status::kSkip ? "SKIP"
                                                        : "FAIL";
    std::cout << "criterion " << c.id << " [" << c.name << "]: " << tag
              << " - " << outcome.detail << std::endl;
    ++ran;
    failed += outcome.status == Status::kFail;
    skipped += outcome.status == Status::kSkip;
  }
  if (failed > 0) return 1;
  if (ran > 0 && skipped == ran) return 77;
  return 0;
}
