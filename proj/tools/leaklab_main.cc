// Copyright 2026 The LeakLab Authors
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

// leaklab: command-line runner for the leakage attack lab.
//
//   leaklab attack     --attack below_distance --q 2 --n 12 --epsilon 3
//   leaklab accumulate --n 20 --epsilon 2 --alpha 1.5 --trials 2000
//   leaklab bench      --trials 200
//   leaklab bounds     --q 4 --n 10 --epsilon 2 --scope below --payload distance
//   leaklab cover      --q 2 --n 7 --epsilon 1 --method greedy --out cover.txt
//
// Exit status: 0 all bound checks passed, 1 a bound check failed, 2 bad
// arguments or configuration, 3 I/O failure, 4 internal error.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "leaklab/bounds.h"
#include "leaklab/covering.h"
#include "leaklab/errors.h"
#include "leaklab/harness.h"

namespace {

using namespace leaklab;

enum Exit { kOk = 0, kBoundFailed = 1, kBadConfig = 2, kIo = 3, kInternal = 4 };

struct SpaceFlags {
  int q = 2;
  int n = 12;
  int epsilon = 3;
};

struct ModeFlags {
  std::string scope;
  std::string payload;

  std::optional<LeakageMode> Resolve() const {
    if (scope.empty() && payload.empty()) return std::nullopt;
    return LeakageMode::Parse(scope.empty() ? "below" : scope,
                              payload.empty() ? "none" : payload);
  }
};

struct RunFlags {
  std::string attack;
  int trials = 100;
  std::uint64_t seed = 1;
  std::string format = "csv";
  std::string out;
  int workers = 1;
  double alpha = 1.0;
  std::string shape = "single";
  bool timing = false;
};

void AddSpace(CLI::App* cmd, SpaceFlags& s) {
  cmd->add_option("--q", s.q, "alphabet size")->capture_default_str();
  cmd->add_option("--n", s.n, "template length")->capture_default_str();
  cmd->add_option("--epsilon", s.epsilon, "acceptance radius")->capture_default_str();
}

void AddMode(CLI::App* cmd, ModeFlags& m) {
  cmd->add_option("--scope", m.scope, "leak scope")
      ->check(CLI::IsMember({"below", "both"}));
  cmd->add_option("--payload", m.payload, "leak payload")
      ->check(CLI::IsMember({"none", "distance", "positions", "posvalues"}));
}

void AddRun(CLI::App* cmd, RunFlags& r) {
  cmd->add_option("--trials", r.trials)->capture_default_str();
  cmd->add_option("--seed", r.seed, "master seed")->capture_default_str();
  cmd->add_option("--format", r.format)->check(CLI::IsMember({"csv", "jsonl"}))
      ->capture_default_str();
  cmd->add_option("--out", r.out, "record file (default stdout)");
  cmd->add_option("--workers", r.workers)->capture_default_str();
  cmd->add_option("--alpha", r.alpha, "rarest coordinate errs with n^-alpha")
      ->capture_default_str();
  cmd->add_option("--session-shape", r.shape)
      ->check(CLI::IsMember({"single", "multi"}))
      ->capture_default_str();
  cmd->add_flag("--timing", r.timing, "record wall time per trial");
}

void AddConfig(CLI::App* cmd) {
  // Consumed by ExpandConfig before parsing; kept here for --help.
  cmd->add_option("--config", "flat key=value file; flags on the command line win");
}

// CLI11 reads config files on the root app only, so "<sub> --config FILE"
// is spliced into plain flags ahead of the command line; with TakeLast the
// explicit flags win. Keys may be flat or sit under a [<sub>] section.
std::vector<std::string> ExpandConfig(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  if (args.empty()) return args;
  std::vector<std::string> rest{args.front()};
  std::vector<std::string> files;
  for (std::size_t i = 1; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a == "--config" && i + 1 < args.size()) {
      files.push_back(args[++i]);
    } else if (a.rfind("--config=", 0) == 0) {
      files.push_back(a.substr(9));
    } else {
      rest.push_back(a);
    }
  }
  std::vector<std::string> out{args.front()};
  for (const std::string& file : files) {
    std::ifstream in(file);
    if (!in) throw CLI::FileError::Missing(file);
    for (const CLI::ConfigItem& item : CLI::ConfigTOML().from_config(in)) {
      if (item.name == "++" || item.name == "--") continue;
      if (!item.parents.empty() &&
          !(item.parents.size() == 1 && item.parents.front() == args.front())) {
        continue;
      }
      const std::string flag = "--" + item.name;
      if (item.inputs.size() == 1 && (item.inputs[0] == "true" || item.inputs[0] == "false")) {
        if (item.inputs[0] == "true") out.push_back(flag);
        continue;
      }
      for (const std::string& v : item.inputs) {
        out.push_back(flag);
        out.push_back(v);
      }
    }
  }
  out.insert(out.end(), rest.begin() + 1, rest.end());
  return out;
}

void WriteText(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << text;
  if (!f.flush()) throw IoError("write to '" + path + "' failed");
}

int RunAttack(const SpaceFlags& s, const ModeFlags& m, const RunFlags& r) {
  ExperimentConfig c;
  c.params = {s.q, s.n, s.epsilon};
  c.mode = m.Resolve();
  c.attack = ParseAttack(r.attack);
  c.trials = r.trials;
  c.master_seed = r.seed;
  c.workers = r.workers;
  c.client.alpha = r.alpha;
  c.client.shape = r.shape == "multi" ? SessionShape::kMultiErrorUpToEpsilon
                                      : SessionShape::kSingleError;
  c.record_timing = r.timing;
  const ExperimentResult res = RunExperiment(c);
  const OutputFormat format = ParseFormat(r.format);
  if (r.out.empty() || r.out == "-") {
    WriteRecords(res.records, format, std::cout);
  } else {
    EmitRecords(res.records, format, r.out);
  }
  std::cerr << ToJson(res.summary).dump() << '\n';
  return res.summary.ok ? kOk : kBoundFailed;
}

int RunBench(const SpaceFlags& s, int trials, std::uint64_t seed, int workers,
             const std::string& format, const std::string& out) {
  BenchConfig c;
  c.params = {s.q, s.n, s.epsilon};
  c.trials = trials;
  c.master_seed = seed;
  c.workers = workers;
  const auto rows = BenchTable(c);
  std::ostringstream text;
  if (format == "table") {
    WriteBenchTable(rows, text);
  } else {
    WriteBenchRows(rows, ParseFormat(format), text);
  }
  WriteText(out, text.str());
  for (const BenchRow& row : rows) {
    if (row.applicable && !row.ok) return kBoundFailed;
  }
  return kOk;
}

int RunBounds(const SpaceFlags& s, const ModeFlags& m) {
  const LeakageMode mode = m.Resolve().value_or(kMinimalLeakage);
  std::cout << ToJson(TheoreticalBounds({s.q, s.n, s.epsilon}, mode)).dump(2) << '\n';
  return kOk;
}

int RunCover(const SpaceFlags& s, const std::string& method, const std::string& out,
             std::uint64_t budget) {
  const SpaceParams p{s.q, s.n, s.epsilon};
  p.Validate();
  if (method == "exact") {
    const ExactCoverResult r = ExactMinCoverSize(p, budget);
    nlohmann::ordered_json j;
    j["q"] = p.q;
    j["n"] = p.n;
    j["epsilon"] = p.epsilon;
    j["optimum"] = r.optimum ? nlohmann::ordered_json(*r.optimum) : nullptr;
    j["lower_bound"] = r.lower_bound;
    j["upper_bound"] = r.upper_bound;
    j["nodes"] = r.nodes;
    std::cout << j.dump() << '\n';
    return kOk;
  }
  const Cover cover = method == "fixing" ? CoordinateFixingCover(p) : GreedyCover(p);
  const bool certified = CertifyCover(cover);
  std::ostringstream text;
  ExportCover(cover, text);
  WriteText(out, text.str());
  const BoundReport report = TheoreticalBounds(p, kMinimalLeakage);
  const bool within =
      method != "greedy" || BigRational(cover.size()) <= report.greedy_cover_bound;
  nlohmann::ordered_json j;
  j["method"] = method;
  j["centers"] = cover.size();
  j["certified"] = certified;
  j["greedy_cover_bound"] = report.greedy_cover_bound.convert_to<double>();
  j["within_bound"] = within;
  std::cerr << j.dump() << '\n';
  return certified && within ? kOk : kBoundFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Information-leakage attack lab for threshold Hamming matchers"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  SpaceFlags attack_space, acc_space, bench_space, bounds_space, cover_space;
  ModeFlags attack_mode, bounds_mode;
  RunFlags attack_run, acc_run;

  CLI::App* attack = app.add_subcommand("attack", "run one attack over many trials");
  AddSpace(attack, attack_space);
  AddMode(attack, attack_mode);
  AddRun(attack, attack_run);
  attack->add_option("--attack", attack_run.attack, "attack id")->required();
  AddConfig(attack);

  CLI::App* accumulate =
      app.add_subcommand("accumulate", "passive collection from genuine sessions");
  acc_space.epsilon = 2;
  acc_space.n = 20;
  acc_run.attack = "accumulation";
  AddSpace(accumulate, acc_space);
  AddRun(accumulate, acc_run);
  accumulate->add_option("--attack", acc_run.attack)
      ->check(CLI::IsMember({"accumulation", "fault_controlled", "fault-controlled"}))
      ->capture_default_str();
  AddConfig(accumulate);

  CLI::App* bench = app.add_subcommand("bench", "one row per leakage scenario");
  int bench_trials = 200;
  std::uint64_t bench_seed = 1;
  int bench_workers = 1;
  std::string bench_format = "table";
  std::string bench_out;
  AddSpace(bench, bench_space);
  bench->add_option("--trials", bench_trials)->capture_default_str();
  bench->add_option("--seed", bench_seed)->capture_default_str();
  bench->add_option("--workers", bench_workers)->capture_default_str();
  bench->add_option("--format", bench_format)
      ->check(CLI::IsMember({"table", "csv", "jsonl"}))
      ->capture_default_str();
  bench->add_option("--out", bench_out);
  AddConfig(bench);

  CLI::App* bounds = app.add_subcommand("bounds", "print the bound report as JSON");
  AddSpace(bounds, bounds_space);
  AddMode(bounds, bounds_mode);
  AddConfig(bounds);

  CLI::App* cover = app.add_subcommand("cover", "build, certify and export a cover");
  std::string cover_method = "greedy";
  std::string cover_out;
  std::uint64_t cover_budget = 20'000'000;
  cover_space = {2, 7, 1};
  AddSpace(cover, cover_space);
  cover->add_option("--method", cover_method)
      ->check(CLI::IsMember({"fixing", "greedy", "exact"}))
      ->capture_default_str();
  cover->add_option("--out", cover_out, "center file (default stdout)");
  cover->add_option("--node-budget", cover_budget, "exact search limit")
      ->capture_default_str();
  AddConfig(cover);

  try {
    std::vector<std::string> args = ExpandConfig(argc, argv);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kBadConfig;
  }

  try {
    if (*attack) return RunAttack(attack_space, attack_mode, attack_run);
    if (*accumulate) return RunAttack(acc_space, ModeFlags{}, acc_run);
    if (*bench) {
      return RunBench(bench_space, bench_trials, bench_seed, bench_workers, bench_format,
                      bench_out);
    }
    if (*bounds) return RunBounds(bounds_space, bounds_mode);
    if (*cover) return RunCover(cover_space, cover_method, cover_out, cover_budget);
  } catch (const UsageError& e) {
    std::cerr << "leaklab: " << e.what() << '\n';
    return kBadConfig;
  } catch (const ConfigError& e) {
    std::cerr << "leaklab: " << e.what() << '\n';
    return kBadConfig;
  } catch (const CapacityError& e) {
    std::cerr << "leaklab: " << e.what() << '\n';
    return kBadConfig;
  } catch (const IoError& e) {
    std::cerr << "leaklab: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "leaklab: internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kBadConfig;
}
