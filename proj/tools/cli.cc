// tools/cli.cc

// Copyright 2026  The deplda Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "deplda/corpus-io.h"
#include "deplda/eer.h"
#include "deplda/local-train.h"
#include "deplda/model-io.h"
#include "deplda/plda.h"
#include "deplda/preprocess.h"
#include "deplda/scoring.h"
#include "deplda/synth.h"

namespace deplda::cli {

namespace {

Vector ParseEpsilon(const std::string &text, int dim) {
  std::vector<double> values;
  std::stringstream ss(text);
  for (std::string tok; std::getline(ss, tok, ',');) {
    auto v = ParseDouble(tok);
    if (!v) throw ConfigError("cannot parse epsilon value '" + tok + "'");
    values.push_back(*v);
  }
  if (values.size() == 1) return Vector::Constant(dim, values[0]);
  if (static_cast<int>(values.size()) != dim)
    throw ConfigError("--epsilon has " + std::to_string(values.size()) +
                      " values but --dim is " + std::to_string(dim));
  return Eigen::Map<const Vector>(values.data(), dim);
}

void ParseFamily(const std::string &name, SynthSpec *spec) {
  if (name == "gaussian") {
    spec->family = SynthFamily::kGaussian;
    return;
  }
  if (name.size() > 1 && name[0] == 't') {
    auto dof = ParseDouble(name.substr(1));
    if (dof) {
      spec->family = SynthFamily::kStudentT;
      spec->dof = *dof;
      return;
    }
  }
  throw ConfigError("unknown family '" + name + "' (expected gaussian or t<dof>, e.g. t5)");
}

template <typename Fn>
void WriteText(const std::string &path, Fn &&fn) {
  std::ofstream os(path);
  if (!os) throw DataError("cannot open " + path + " for writing");
  fn(os);
  os.flush();
  if (!os) throw DataError("write failed on " + path);
}

struct SynthArgs {
  int classes = 0, per_class = 0, dim = 0;
  std::string epsilon = "1", family = "gaussian", out, prefix = "spk";
  std::uint64_t seed = 0;
  int enroll_per_class = 1;
  std::size_t targets = 0, nontargets = 0;
  std::optional<std::uint64_t> trial_seed;
};

void RunSynth(const SynthArgs &a, std::ostream &out) {
  SynthSpec spec;
  spec.num_classes = a.classes;
  spec.per_class = a.per_class;
  if (a.dim < 1) throw ConfigError("--dim must be at least 1");
  spec.epsilon = ParseEpsilon(a.epsilon, a.dim);
  ParseFamily(a.family, &spec);
  spec.seed = a.seed;
  spec.class_prefix = a.prefix;
  const VectorSet set = Generate(spec);

  const std::filesystem::path dir(a.out);
  std::filesystem::create_directories(dir);
  WriteVectors(set, (dir / "vectors.txt").string());
  out << "wrote " << set.Size() << " vectors to " << (dir / "vectors.txt").string() << '\n';
  if (a.targets > 0 || a.nontargets > 0) {
    const TrialBundle b = MakeTrials(set, a.enroll_per_class, a.targets, a.nontargets,
                                     a.trial_seed.value_or(a.seed + 1));
    WriteEnrollMap(b.enroll_map, (dir / "enroll_map.txt").string());
    WriteTrials(b.trials, (dir / "trials.txt").string());
    WriteVectors(b.enroll_vectors, (dir / "enroll_vectors.txt").string());
    WriteVectors(b.test_vectors, (dir / "test_vectors.txt").string());
    out << "wrote " << b.trials.size() << " trials to " << (dir / "trials.txt").string()
        << '\n';
  }
}

struct TrainGlobalArgs {
  std::string vectors, out, ln = "none";
  int iters = 10;
  std::optional<int> lda_dim;
};

void RunTrainGlobal(const TrainGlobalArgs &a, std::ostream &out) {
  const LnMode ln = ParseLnMode(a.ln);
  if (ln == LnMode::kPartial)
    throw ConfigError("train-global accepts --ln none or full (partial is a scoring mode)");
  const VectorSet train = ReadVectors(a.vectors);
  FrontEnd fe = FitFrontEnd(train, a.lda_dim);
  VectorSet front = fe.Apply(train);
  if (ln == LnMode::kFull) {
    front = LengthNormalize(front);
    fe.length_norm = true;
  }
  const GlobalFit fit = FitGlobal(front, a.iters);
  SaveModel(fit.model, fe, a.out);
  const std::string trace_path = a.out + ".emtrace.csv";
  WriteText(trace_path, [&](std::ostream &os) {
    os << "iteration,log_likelihood\n";
    for (std::size_t i = 0; i < fit.trace.log_likelihood.size(); i++)
      os << i << ',' << FormatDouble(fit.trace.log_likelihood[i]) << '\n';
  });
  out << "global model (dim " << fit.model.Dim() << ", " << train.NumClasses()
      << " classes) written to " << a.out << '\n';
}

struct TrainLocalArgs {
  std::string vectors, global, monitor_trials, monitor_enroll, out;
  std::optional<std::string> monitor_vectors, ln;
  LocalTrainConfig config;
};

void RunTrainLocal(const TrainLocalArgs &a, std::ostream &out) {
  const GlobalModelBundle bundle = LoadGlobalModel(a.global);
  ScorerConfig base;
  base.variant = Variant::kDeplda;
  base.global = bundle.model;
  base.frontend = bundle.frontend;
  base.ln_mode = a.ln ? ParseLnMode(*a.ln)
                      : (bundle.frontend.length_norm ? LnMode::kFull : LnMode::kNone);

  const VectorSet train = ReadVectors(a.vectors);
  MonitorSet monitor;
  monitor.trials = ReadTrials(a.monitor_trials);
  monitor.enroll_map = ReadEnrollMap(a.monitor_enroll);
  monitor.enroll_vectors = a.monitor_vectors ? ReadVectors(*a.monitor_vectors) : train;
  monitor.test_vectors = monitor.enroll_vectors;

  const LocalModel model = TrainLocal(base, train, monitor, a.config);
  SaveModel(model, a.out);
  WriteText(a.out + ".history.csv", [&](std::ostream &os) { model.history.WriteCsv(os); });
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", 100.0 * model.monitor_eer_at_best);
  out << "best epoch " << model.best_epoch << ", monitor EER " << buf << "%, written to "
      << a.out << '\n';
}

struct ScoreArgs {
  std::string global, ln = "none", enroll_map, enroll_vectors, test_vectors, trials, out;
  std::optional<std::string> local;
  int threads = 1;
};

void RunScore(const ScoreArgs &a, std::ostream &out, std::ostream &err) {
  const LnMode ln = ParseLnMode(a.ln);
  if (ln == LnMode::kPartial && !a.local)
    throw ConfigError("--ln partial requires --local (partial LN is a deplda mode)");
  const GlobalModelBundle bundle = LoadGlobalModel(a.global);
  ScorerConfig config;
  config.global = bundle.model;
  config.frontend = bundle.frontend;
  config.ln_mode = ln;
  if (a.local) {
    config.variant = Variant::kDeplda;
    config.local = LoadLocalModel(*a.local);
  }
  if (bundle.frontend.length_norm != (ln != LnMode::kNone))
    err << "warning: global model was trained "
        << (bundle.frontend.length_norm ? "with" : "without")
        << " length normalization but --ln is " << ToString(ln) << '\n';
  const auto scores =
      ScoreTrialset(config, ReadEnrollMap(a.enroll_map), ReadVectors(a.enroll_vectors),
                    ReadVectors(a.test_vectors), ReadTrials(a.trials), a.threads);
  WriteScores(scores, a.out);
  out << "scored " << scores.size() << " trials (" << ToString(config.variant) << ", ln "
      << ToString(ln) << ") into " << a.out << '\n';
}

void RunEer(const std::string &scores_path, const std::string &trials_path,
            const std::optional<std::string> &roc_path, std::ostream &out) {
  auto scores = ReadScores(scores_path);
  AttachLabels(ReadTrials(trials_path), &scores);
  const EerResult res = ComputeEer(scores);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "EER %.3f", 100.0 * res.eer);
  out << buf << '\n';
  if (roc_path) {
    std::vector<double> target, nontarget;
    for (const auto &s : scores)
      (s.label == TrialLabel::kTarget ? target : nontarget).push_back(s.score);
    const auto roc = ComputeRoc(target, nontarget);
    WriteText(*roc_path, [&](std::ostream &os) { WriteRocCsv(roc, os); });
  }
}

}  // namespace

int Run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Decoupled PLDA: training, scoring and EER evaluation", "deplda"};
  app.require_subcommand(1, 1);

  SynthArgs synth;
  auto *synth_cmd = app.add_subcommand("synth", "Generate synthetic labeled vectors");
  synth_cmd->add_option("--classes", synth.classes, "Number of classes K")->required();
  synth_cmd->add_option("--per-class", synth.per_class, "Samples per class n")->required();
  synth_cmd->add_option("--dim", synth.dim, "Dimension d")->required();
  synth_cmd->add_option("--epsilon", synth.epsilon,
                        "Between-class variances: scalar or comma-separated list")
      ->capture_default_str();
  synth_cmd->add_option("--family", synth.family, "gaussian or t<dof> (e.g. t5)")
      ->capture_default_str();
  synth_cmd->add_option("--seed", synth.seed, "Random seed")->capture_default_str();
  synth_cmd->add_option("--out", synth.out, "Output directory")->required();
  synth_cmd->add_option("--prefix", synth.prefix, "Class id prefix")->capture_default_str();
  synth_cmd->add_option("--enroll-per-class", synth.enroll_per_class,
                        "Enrollment utterances per class for generated trials")
      ->capture_default_str();
  synth_cmd->add_option("--targets", synth.targets, "Target trials to generate");
  synth_cmd->add_option("--nontargets", synth.nontargets, "Nontarget trials to generate");
  synth_cmd->add_option("--trial-seed", synth.trial_seed, "Seed for trial sampling");

  TrainGlobalArgs tg;
  auto *tg_cmd = app.add_subcommand("train-global", "Fit the global PLDA model");
  tg_cmd->add_option("--vectors", tg.vectors, "Labeled training vectors")->required();
  tg_cmd->add_option("--iters", tg.iters, "EM iterations")->capture_default_str();
  tg_cmd->add_option("--lda-dim", tg.lda_dim, "Reduce to this dimension with LDA first");
  tg_cmd->add_option("--ln", tg.ln, "Length normalization: none or full")
      ->capture_default_str();
  tg_cmd->add_option("--out", tg.out, "Output model file")->required();

  TrainLocalArgs tl;
  auto *tl_cmd = app.add_subcommand("train-local", "Train the decoupled local transform");
  tl_cmd->add_option("--vectors", tl.vectors, "Labeled training vectors")->required();
  tl_cmd->add_option("--global", tl.global, "Global model file")->required();
  tl_cmd->add_option("--monitor-trials", tl.monitor_trials, "Labeled monitor trials")
      ->required();
  tl_cmd->add_option("--monitor-enroll", tl.monitor_enroll, "Monitor enrollment map")
      ->required();
  tl_cmd->add_option("--monitor-vectors", tl.monitor_vectors,
                     "Vectors for monitor trials (default: --vectors)");
  tl_cmd->add_option("--ln", tl.ln,
                     "none, full or partial (default: full if the global model used LN)");
  tl_cmd->add_option("--lr", tl.config.learning_rate, "Adam learning rate")
      ->capture_default_str();
  tl_cmd->add_option("--max-epochs", tl.config.max_epochs, "Maximum epochs")
      ->capture_default_str();
  tl_cmd->add_option("--patience", tl.config.patience,
                     "Epochs without monitor improvement before stopping")
      ->capture_default_str();
  tl_cmd->add_option("--batch-size", tl.config.batch_size, "Classes per update (0 = full)")
      ->capture_default_str();
  tl_cmd->add_option("--seed", tl.config.seed, "Seed for minibatch order")
      ->capture_default_str();
  tl_cmd->add_option("--threads", tl.config.num_threads, "Monitor scoring threads")
      ->capture_default_str();
  tl_cmd->add_option("--out", tl.out, "Output local model file")->required();

  ScoreArgs sc;
  auto *sc_cmd = app.add_subcommand("score", "Score a trial list");
  sc_cmd->add_option("--global", sc.global, "Global model file")->required();
  sc_cmd->add_option("--local", sc.local, "Local model file (selects deplda scoring)");
  sc_cmd->add_option("--ln", sc.ln, "none, full or partial")->capture_default_str();
  sc_cmd->add_option("--enroll-map", sc.enroll_map, "Enrollment map")->required();
  sc_cmd->add_option("--enroll-vectors", sc.enroll_vectors, "Enrollment vectors")
      ->required();
  sc_cmd->add_option("--test-vectors", sc.test_vectors, "Test vectors")->required();
  sc_cmd->add_option("--trials", sc.trials, "Trial list")->required();
  sc_cmd->add_option("--out", sc.out, "Output score file")->required();
  sc_cmd->add_option("--threads", sc.threads, "Scoring threads")->capture_default_str();

  std::string eer_scores, eer_trials;
  std::optional<std::string> eer_roc;
  auto *eer_cmd = app.add_subcommand("eer", "Equal error rate of a score file");
  eer_cmd->add_option("--scores", eer_scores, "Score file")->required();
  eer_cmd->add_option("--trials", eer_trials, "Labeled trial list")->required();
  eer_cmd->add_option("--roc", eer_roc, "Write ROC points as CSV");

  std::string history_model;
  auto *hist_cmd = app.add_subcommand("history", "Print the training history of a local model");
  hist_cmd->add_option("--model", history_model, "Local model file")->required();

  std::vector<const char *> argv;
  argv.push_back("deplda");
  for (const auto &a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (*synth_cmd) RunSynth(synth, out);
    else if (*tg_cmd) RunTrainGlobal(tg, out);
    else if (*tl_cmd) RunTrainLocal(tl, out);
    else if (*sc_cmd) RunScore(sc, out, err);
    else if (*eer_cmd) RunEer(eer_scores, eer_trials, eer_roc, out);
    else if (*hist_cmd) LoadLocalModel(history_model).history.WriteCsv(out);
  } catch (const ConfigError &e) {
    err << "deplda: usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const NumericError &e) {
    err << "deplda: numeric failure: " << e.what() << '\n';
    return kNumericError;
  } catch (const std::exception &e) {
    err << "deplda: " << e.what() << '\n';
    return kDataError;
  }
  return kOk;
}

}  // namespace deplda::cli
