// xlcrf/cli.hpp
//
// Copyright 2026  The xlcrf authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Command-line pipeline over the library: source training, posterior
// computation, projection, target training under any regime, scoring,
// the bootstrap test, the end-to-end pipeline, and learning-curve sweeps.
// File outputs are bit-identical across runs for a fixed config and seed;
// wall-clock timing goes to stdout only.

#ifndef XLCRF_CLI_HPP_
#define XLCRF_CLI_HPP_

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "xlcrf/core.hpp"
#include "xlcrf/eval.hpp"
#include "xlcrf/io.hpp"
#include "xlcrf/projection.hpp"
#include "xlcrf/synthetic.hpp"
#include "xlcrf/trainer.hpp"

namespace xlcrf {

namespace cli {

inline std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

/// Regime names as exposed on the command line (hyphenated alias accepted).
inline TrainRegime parse_cli_regime(const std::string& s) {
  if (s == "project-then-train") return TrainRegime::kProjectThenTrain;
  return parse_regime(s);
}

inline LabelSet parse_label_set(const std::string& csv,
                                const std::string& scheme) {
  std::vector<std::string> names;
  for (const auto& name : detail::split(csv, ',')) {
    std::string trimmed = detail::trim(name);
    if (!trimmed.empty()) names.push_back(trimmed);
  }
  return LabelSet(names, parse_scheme(scheme));
}

inline PipelineConfig load_config(const std::string& path) {
  if (!std::filesystem::exists(path))
    throw std::runtime_error("config file does not exist: " + path);
  PipelineConfig cfg = PipelineConfig::from_map(parse_config(path), path);
  cfg.check_paths(path);
  return cfg;
}

/// TrainConfig flags shared by the training subcommands.
struct TrainOverrides {
  std::optional<double> ge_weight, l2_sigma, convergence_tol;
  std::optional<int> max_iterations, patience, lbfgs_history;
  std::optional<std::string> projection_mode;
  std::optional<long> seed;

  void add_flags(CLI::App* cmd) {
    cmd->add_option("--ge-weight", ge_weight, "weight of the expectation term");
    cmd->add_option("--l2-sigma", l2_sigma, "Gaussian prior sigma");
    cmd->add_option("--max-iterations", max_iterations, "optimizer iteration cap");
    cmd->add_option("--patience", patience, "early-stopping patience");
    cmd->add_option("--lbfgs-history", lbfgs_history, "L-BFGS memory size");
    cmd->add_option("--projection-mode", projection_mode, "soft or hard");
    cmd->add_option("--seed", seed, "bootstrap seed");
    cmd->add_option("--convergence-tol", convergence_tol,
                    "relative objective change tolerance");
  }

  void apply(TrainConfig& t) const {
    if (ge_weight) t.ge_weight = *ge_weight;
    if (l2_sigma) t.l2_sigma = *l2_sigma;
    if (max_iterations) t.max_iterations = *max_iterations;
    if (patience) t.patience = *patience;
    if (lbfgs_history) t.lbfgs_history = *lbfgs_history;
    if (projection_mode) t.projection_mode = parse_projection_mode(*projection_mode);
    if (seed) t.seed = static_cast<uint64_t>(*seed);
    if (convergence_tol) t.convergence_tol = *convergence_tol;
  }
};

inline void write_train_report(const std::string& path, const TrainReport& r) {
  auto out = detail::open_for_write(path);
  out << "regime=" << to_string(r.regime) << '\n';
  out << "iterations=" << r.objective_trace.size() << '\n';
  out << "best_iteration=" << r.best_iteration << '\n';
  out << "best_dev_f1=" << fmt("%.6f", r.best_dev_f1) << '\n';
  out << "final_objective=" << fmt("%.12g", r.final_objective) << '\n';
  out << "stop_reason=" << r.stop_reason << '\n';
  out << "dev_f1_trace=";
  for (size_t i = 0; i < r.dev_f1_trace.size(); ++i)
    out << (i ? "," : "") << fmt("%.6f", r.dev_f1_trace[i]);
  out << '\n';
  out << "objective_trace=";
  for (size_t i = 0; i < r.objective_trace.size(); ++i)
    out << (i ? "," : "") << fmt("%.12g", r.objective_trace[i]);
  out << '\n';
}

/// Joins per-sentence inputs into aligned pairs with expectations.
inline std::vector<std::pair<AlignedPair, TargetExpectations>> assemble_bitext(
    std::vector<Sentence> sources, std::vector<Sentence> targets,
    std::vector<std::vector<std::pair<int, int>>> links,
    std::vector<TargetExpectations> expectations) {
  if (sources.size() != targets.size() || sources.size() != links.size() ||
      sources.size() != expectations.size())
    throw std::runtime_error(
        "bitext inputs disagree on sentence count (source/target/alignments/"
        "expectations)");
  std::vector<std::pair<AlignedPair, TargetExpectations>> out;
  out.reserve(sources.size());
  for (size_t i = 0; i < sources.size(); ++i) {
    AlignedPair pair;
    pair.source = std::move(sources[i]);
    pair.target = std::move(targets[i]);
    pair.links = std::move(links[i]);
    pair.validate();
    out.emplace_back(std::move(pair), std::move(expectations[i]));
  }
  return out;
}

inline std::vector<LabelSequence> decode_corpus(
    const CrfModel& model,
    const std::vector<std::pair<Sentence, LabelSequence>>& data) {
  std::vector<LabelSequence> pred;
  pred.reserve(data.size());
  for (const auto& [sentence, gold] : data) pred.push_back(viterbi(model, sentence));
  return pred;
}

struct PipelineOutputs {
  CrfModel model;
  TrainReport report;
  std::optional<ScoreReport> test_score;
};

/// The full flow: source model, posteriors, projection, target training,
/// test scoring. Every artifact lands in cfg.output_dir.
inline PipelineOutputs run_pipeline(PipelineConfig cfg, TrainRegime regime) {
  if (cfg.output_dir.empty())
    throw std::runtime_error("pipeline: output_dir must be set");
  std::filesystem::create_directories(cfg.output_dir);
  const std::string out_dir = cfg.output_dir + "/";
  LabelSet label_set = cfg.label_set();

  bool needs_bitext = regime != TrainRegime::kSupervised;
  std::vector<std::pair<AlignedPair, TargetExpectations>> bitext;
  if (needs_bitext) {
    if (cfg.bitext_source_path.empty() || cfg.bitext_target_path.empty() ||
        cfg.alignments_path.empty())
      throw std::runtime_error(
          "pipeline: bitext_source_path, bitext_target_path and "
          "alignments_path are required for this regime");
    auto sources = read_tokenized(cfg.bitext_source_path);
    auto targets = read_tokenized(cfg.bitext_target_path);
    auto links = read_alignments(cfg.alignments_path);

    // Source-side model: load if given, otherwise train it here.
    CrfModel source_model;
    bool have_posteriors =
        !cfg.posteriors_path.empty() && std::filesystem::exists(cfg.posteriors_path);
    std::vector<PosteriorTable> posteriors;
    if (have_posteriors) {
      std::vector<int> lengths;
      lengths.reserve(sources.size());
      for (const auto& s : sources)
        lengths.push_back(static_cast<int>(s.tokens.size()));
      posteriors = read_posteriors(cfg.posteriors_path, &lengths);
      std::cout << "posteriors: cached " << posteriors.size() << " sentences from "
                << cfg.posteriors_path << '\n';
    } else {
      if (!cfg.source_model_path.empty()) {
        source_model = load_model(cfg.source_model_path);
      } else if (!cfg.source_train_path.empty()) {
        Corpus source_corpus;
        source_corpus.label_set = label_set;
        source_corpus.labeled = read_conll(cfg.source_train_path, label_set);
        auto [trained, report] =
            train(source_corpus, cfg.train, TrainRegime::kSupervised);
        source_model = std::move(trained);
        save_model(out_dir + "source_model.txt", source_model);
        std::cout << "source model: objective "
                  << fmt("%.6f", report.final_objective) << ", "
                  << report.objective_trace.size() << " iterations\n";
      } else {
        throw std::runtime_error(
            "pipeline: need source_model_path, source_train_path, or a "
            "posteriors cache");
      }
      posteriors.reserve(sources.size());
      for (const auto& s : sources)
        posteriors.push_back(source_posteriors(source_model, s));
      std::string cache = cfg.posteriors_path.empty()
                              ? out_dir + "posteriors.tsv"
                              : cfg.posteriors_path;
      write_posteriors(cache, posteriors);
      std::cout << "posteriors: wrote " << posteriors.size() << " sentences to "
                << cache << '\n';
    }

    LabelMap map = cfg.label_map(label_set, label_set);
    std::vector<TargetExpectations> expectations;
    expectations.reserve(sources.size());
    if (sources.size() != targets.size() || sources.size() != links.size())
      throw std::runtime_error(
          "pipeline: bitext source/target/alignments sentence counts differ");
    for (size_t i = 0; i < sources.size(); ++i) {
      AlignedPair pair{sources[i], targets[i], links[i]};
      expectations.push_back(project(pair, posteriors[i], map));
    }
    write_expectations(out_dir + "expectations.tsv", expectations);
    bitext = assemble_bitext(std::move(sources), std::move(targets),
                             std::move(links), std::move(expectations));
  }

  Corpus corpus;
  corpus.label_set = label_set;
  if (!cfg.train_path.empty())
    corpus.labeled = read_conll(cfg.train_path, label_set);
  if (!cfg.dev_path.empty()) corpus.dev = read_conll(cfg.dev_path, label_set);
  if (!cfg.test_path.empty()) corpus.test = read_conll(cfg.test_path, label_set);
  corpus.bitext = std::move(bitext);

  PipelineOutputs outputs;
  auto [model, report] = train(corpus, cfg.train, regime);
  outputs.model = std::move(model);
  outputs.report = std::move(report);
  save_model(out_dir + "model.txt", outputs.model);
  write_train_report(out_dir + "train_report.txt", outputs.report);
  std::cout << "train: regime " << to_string(regime) << ", stop "
            << outputs.report.stop_reason << ", best iteration "
            << outputs.report.best_iteration << ", wall "
            << fmt("%.3f", outputs.report.wall_seconds) << "s\n";

  if (!corpus.test.empty()) {
    std::vector<LabelSequence> gold, pred;
    for (const auto& [sentence, labels] : corpus.test) gold.push_back(labels);
    pred = decode_corpus(outputs.model, corpus.test);
    ScoreReport sr = score(gold, pred, label_set);
    outputs.test_score = sr;
    {
      auto out = detail::open_for_write(out_dir + "score_report.txt");
      out << sr.conlleval_text();
    }
    std::vector<std::pair<Sentence, LabelSequence>> pred_data;
    for (size_t i = 0; i < corpus.test.size(); ++i)
      pred_data.emplace_back(corpus.test[i].first, pred[i]);
    write_conll(out_dir + "test_pred.conll", pred_data, label_set);
    std::cout << "test FB1: " << fmt("%.2f", sr.f1()) << '\n';
  }
  return outputs;
}

}  // namespace cli

/// Entry point behind the xlcrf binary; returns the process exit code.
/// Unknown subcommands or flags print usage and exit 2; contract
/// violations (missing files, malformed input) exit 1 with a diagnostic.
inline int cli_main(int argc, const char* const* argv) {
  CLI::App app{"cross-lingual weakly supervised CRF pipeline"};
  app.require_subcommand(1);

  // train-source
  auto* cmd_train_source =
      app.add_subcommand("train-source", "train a supervised source tagger");
  std::string ts_train, ts_dev, ts_out, ts_labels, ts_scheme = "bio";
  cli::TrainOverrides ts_over;
  cmd_train_source->add_option("--train", ts_train, "labeled training file")
      ->required();
  cmd_train_source->add_option("--dev", ts_dev, "labeled dev file");
  cmd_train_source->add_option("--labels", ts_labels, "comma-separated labels")
      ->required();
  cmd_train_source->add_option("--scheme", ts_scheme, "bio or io");
  cmd_train_source->add_option("--out", ts_out, "model output path")->required();
  ts_over.add_flags(cmd_train_source);

  // posteriors
  auto* cmd_posteriors =
      app.add_subcommand("posteriors", "compute source posterior tables");
  std::string po_model, po_input, po_out;
  cmd_posteriors->add_option("--model", po_model, "source model file")->required();
  cmd_posteriors->add_option("--input", po_input, "tokenized sentences")
      ->required();
  cmd_posteriors->add_option("--out", po_out, "posterior TSV output")->required();

  // project
  auto* cmd_project =
      app.add_subcommand("project", "project posteriors through alignments");
  std::string pr_posteriors, pr_source, pr_target, pr_alignments, pr_out;
  std::string pr_mode = "soft", pr_labels, pr_scheme = "bio";
  cmd_project->add_option("--posteriors", pr_posteriors, "posterior TSV")
      ->required();
  cmd_project->add_option("--source", pr_source, "tokenized source sentences")
      ->required();
  cmd_project->add_option("--target", pr_target, "tokenized target sentences")
      ->required();
  cmd_project->add_option("--alignments", pr_alignments, "Pharaoh alignments")
      ->required();
  cmd_project->add_option("--mode", pr_mode, "soft or hard");
  cmd_project->add_option("--labels", pr_labels,
                          "labels (required for hard output)");
  cmd_project->add_option("--scheme", pr_scheme, "bio or io");
  cmd_project->add_option("--out", pr_out, "output path")->required();

  // train
  auto* cmd_train = app.add_subcommand("train", "train a target model");
  std::string tr_config, tr_regime = "supervised", tr_expectations;
  std::string tr_model_out, tr_report_out;
  cli::TrainOverrides tr_over;
  cmd_train->add_option("--config", tr_config, "pipeline config file")->required();
  cmd_train->add_option("--regime", tr_regime,
                        "supervised, ge, or project-then-train");
  cmd_train->add_option("--expectations", tr_expectations,
                        "projected expectations TSV (ge / project-then-train)");
  cmd_train->add_option("--model-out", tr_model_out, "model output path")
      ->required();
  cmd_train->add_option("--report-out", tr_report_out, "train report path");
  tr_over.add_flags(cmd_train);

  // eval
  auto* cmd_eval = app.add_subcommand("eval", "entity-level scoring");
  std::string ev_gold, ev_pred, ev_labels, ev_scheme = "bio", ev_out;
  cmd_eval->add_option("--gold", ev_gold, "gold labeled file")->required();
  cmd_eval->add_option("--pred", ev_pred, "predicted labeled file")->required();
  cmd_eval->add_option("--labels", ev_labels, "comma-separated labels")
      ->required();
  cmd_eval->add_option("--scheme", ev_scheme, "bio or io");
  cmd_eval->add_option("--out", ev_out, "also write the report here");

  // bootstrap
  auto* cmd_bootstrap =
      app.add_subcommand("bootstrap", "paired bootstrap significance test");
  std::string bs_gold, bs_a, bs_b, bs_labels, bs_scheme = "bio";
  int bs_iterations = 1000;
  long bs_seed = 42;
  cmd_bootstrap->add_option("--gold", bs_gold, "gold labeled file")->required();
  cmd_bootstrap->add_option("--pred-a", bs_a, "system A predictions")->required();
  cmd_bootstrap->add_option("--pred-b", bs_b, "system B predictions")->required();
  cmd_bootstrap->add_option("--labels", bs_labels, "comma-separated labels")
      ->required();
  cmd_bootstrap->add_option("--scheme", bs_scheme, "bio or io");
  cmd_bootstrap->add_option("--iterations", bs_iterations, "resample count");
  cmd_bootstrap->add_option("--seed", bs_seed, "resampling seed");

  // pipeline
  auto* cmd_pipeline =
      app.add_subcommand("pipeline", "run the full projection workflow");
  std::string pl_config, pl_regime = "ge", pl_output_dir;
  cli::TrainOverrides pl_over;
  cmd_pipeline->add_option("--config", pl_config, "pipeline config file")
      ->required();
  cmd_pipeline->add_option("--regime", pl_regime,
                           "supervised, ge, or project-then-train");
  cmd_pipeline->add_option("--output-dir", pl_output_dir,
                           "overrides output_dir from the config");
  pl_over.add_flags(cmd_pipeline);

  // learning-curve
  auto* cmd_curve = app.add_subcommand(
      "learning-curve", "sweep labeled data sizes, emit CSV");
  std::string lc_config, lc_sizes, lc_regimes = "supervised,ge", lc_out;
  std::string lc_expectations;
  cli::TrainOverrides lc_over;
  cmd_curve->add_option("--config", lc_config, "pipeline config file")->required();
  cmd_curve->add_option("--sizes", lc_sizes, "comma-separated labeled sizes")
      ->required();
  cmd_curve->add_option("--regimes", lc_regimes, "comma-separated regimes");
  cmd_curve->add_option("--expectations", lc_expectations,
                        "projected expectations TSV (for non-supervised regimes)");
  cmd_curve->add_option("--out", lc_out, "CSV output path (default stdout)");
  lc_over.add_flags(cmd_curve);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (*cmd_train_source) {
      LabelSet labels = cli::parse_label_set(ts_labels, ts_scheme);
      Corpus corpus;
      corpus.label_set = labels;
      corpus.labeled = read_conll(ts_train, labels);
      if (!ts_dev.empty()) corpus.dev = read_conll(ts_dev, labels);
      TrainConfig tc;
      ts_over.apply(tc);
      auto [model, report] = train(corpus, tc, TrainRegime::kSupervised);
      save_model(ts_out, model);
      std::cout << "trained on " << corpus.labeled.size() << " sentences, "
                << model.feature_index.size() << " features, objective "
                << cli::fmt("%.6f", report.final_objective) << ", stop "
                << report.stop_reason << '\n';
      std::cout << "saved: " << ts_out << '\n';
    } else if (*cmd_posteriors) {
      CrfModel model = load_model(po_model);
      auto sentences = read_tokenized(po_input);
      std::vector<PosteriorTable> tables;
      tables.reserve(sentences.size());
      for (const auto& s : sentences) tables.push_back(source_posteriors(model, s));
      write_posteriors(po_out, tables);
      std::cout << "wrote posteriors for " << tables.size() << " sentences to "
                << po_out << '\n';
    } else if (*cmd_project) {
      auto sources = read_tokenized(pr_source);
      auto targets = read_tokenized(pr_target);
      auto links = read_alignments(pr_alignments);
      std::vector<int> lengths;
      for (const auto& s : sources)
        lengths.push_back(static_cast<int>(s.tokens.size()));
      auto posteriors = read_posteriors(pr_posteriors, &lengths);
      if (sources.size() != targets.size() || sources.size() != links.size())
        throw std::runtime_error(
            "project: source/target/alignments sentence counts differ");
      ProjectionMode mode = parse_projection_mode(pr_mode);
      int m = posteriors.empty() ? 0 : posteriors.front().num_labels;
      LabelMap map = LabelMap::identity(m);
      if (mode == ProjectionMode::kSoft) {
        std::vector<TargetExpectations> expectations;
        for (size_t i = 0; i < sources.size(); ++i) {
          AlignedPair pair{sources[i], targets[i], links[i]};
          expectations.push_back(project(pair, posteriors[i], map));
        }
        write_expectations(pr_out, expectations);
        std::cout << "wrote soft expectations for " << expectations.size()
                  << " sentences to " << pr_out << '\n';
      } else {
        if (pr_labels.empty())
          throw std::runtime_error("project: --labels is required for hard mode");
        LabelSet labels = cli::parse_label_set(pr_labels, pr_scheme);
        if (labels.size() != m)
          throw std::runtime_error(
              "project: label inventory does not match posterior width");
        std::vector<std::pair<Sentence, LabelSequence>> out;
        for (size_t i = 0; i < sources.size(); ++i) {
          AlignedPair pair{sources[i], targets[i], links[i]};
          out.emplace_back(targets[i],
                           project_hard_labels(pair, posteriors[i], map,
                                               labels.outside_index()));
        }
        write_conll(pr_out, out, labels);
        std::cout << "wrote hard-projected labels for " << out.size()
                  << " sentences to " << pr_out << '\n';
      }
    } else if (*cmd_train) {
      PipelineConfig cfg = cli::load_config(tr_config);
      tr_over.apply(cfg.train);
      TrainRegime regime = cli::parse_cli_regime(tr_regime);
      LabelSet labels = cfg.label_set();
      Corpus corpus;
      corpus.label_set = labels;
      if (!cfg.train_path.empty())
        corpus.labeled = read_conll(cfg.train_path, labels);
      if (!cfg.dev_path.empty()) corpus.dev = read_conll(cfg.dev_path, labels);
      if (regime != TrainRegime::kSupervised) {
        if (tr_expectations.empty())
          throw std::runtime_error(
              "train: --expectations is required for this regime");
        corpus.bitext = cli::assemble_bitext(
            read_tokenized(cfg.bitext_source_path),
            read_tokenized(cfg.bitext_target_path),
            read_alignments(cfg.alignments_path),
            read_expectations(tr_expectations));
      }
      auto [model, report] = train(corpus, cfg.train, regime);
      save_model(tr_model_out, model);
      if (!tr_report_out.empty()) cli::write_train_report(tr_report_out, report);
      std::cout << "regime " << to_string(regime) << ", stop "
                << report.stop_reason << ", best iteration "
                << report.best_iteration << ", best dev F1 "
                << cli::fmt("%.2f", report.best_dev_f1) << ", wall "
                << cli::fmt("%.3f", report.wall_seconds) << "s\n";
    } else if (*cmd_eval) {
      LabelSet labels = cli::parse_label_set(ev_labels, ev_scheme);
      auto gold_data = read_conll(ev_gold, labels);
      auto pred_data = read_conll(ev_pred, labels);
      std::vector<LabelSequence> gold, pred;
      for (auto& [s, l] : gold_data) gold.push_back(l);
      for (auto& [s, l] : pred_data) pred.push_back(l);
      ScoreReport sr = score(gold, pred, labels);
      std::cout << sr.conlleval_text();
      if (!ev_out.empty()) {
        auto out = detail::open_for_write(ev_out);
        out << sr.conlleval_text();
      }
    } else if (*cmd_bootstrap) {
      LabelSet labels = cli::parse_label_set(bs_labels, bs_scheme);
      auto gold_data = read_conll(bs_gold, labels);
      auto a_data = read_conll(bs_a, labels);
      auto b_data = read_conll(bs_b, labels);
      std::vector<LabelSequence> gold, a, b;
      for (auto& [s, l] : gold_data) gold.push_back(l);
      for (auto& [s, l] : a_data) a.push_back(l);
      for (auto& [s, l] : b_data) b.push_back(l);
      double p = paired_bootstrap(gold, a, b, labels, bs_iterations,
                                  static_cast<uint64_t>(bs_seed));
      std::cout << "p_value=" << cli::fmt("%.10g", p) << '\n';
    } else if (*cmd_pipeline) {
      PipelineConfig cfg = cli::load_config(pl_config);
      pl_over.apply(cfg.train);
      if (!pl_output_dir.empty()) cfg.output_dir = pl_output_dir;
      cli::run_pipeline(std::move(cfg), cli::parse_cli_regime(pl_regime));
    } else if (*cmd_curve) {
      PipelineConfig cfg = cli::load_config(lc_config);
      lc_over.apply(cfg.train);
      LabelSet labels = cfg.label_set();
      Corpus base;
      base.label_set = labels;
      if (!cfg.train_path.empty())
        base.labeled = read_conll(cfg.train_path, labels);
      if (!cfg.dev_path.empty()) base.dev = read_conll(cfg.dev_path, labels);
      if (cfg.test_path.empty())
        throw std::runtime_error("learning-curve: test_path must be set");
      base.test = read_conll(cfg.test_path, labels);

      std::vector<TrainRegime> regimes;
      for (const auto& r : detail::split(lc_regimes, ','))
        if (!detail::trim(r).empty())
          regimes.push_back(cli::parse_cli_regime(detail::trim(r)));
      bool needs_bitext = false;
      for (TrainRegime r : regimes)
        if (r != TrainRegime::kSupervised) needs_bitext = true;
      if (needs_bitext) {
        if (lc_expectations.empty())
          throw std::runtime_error(
              "learning-curve: --expectations is required for non-supervised "
              "regimes (produce it with `project` or `pipeline`)");
        base.bitext = cli::assemble_bitext(
            read_tokenized(cfg.bitext_source_path),
            read_tokenized(cfg.bitext_target_path),
            read_alignments(cfg.alignments_path),
            read_expectations(lc_expectations));
      }

      // Every size is validated before any training runs or the output
      // file is created, so a bad size cannot leave a truncated sweep.
      std::vector<long> sizes;
      for (const auto& tok : detail::split(lc_sizes, ',')) {
        std::string trimmed = detail::trim(tok);
        if (trimmed.empty()) continue;
        long size = detail::parse_long(trimmed, "--sizes", 0);
        if (size < 0 || size > static_cast<long>(base.labeled.size()))
          throw std::runtime_error("learning-curve: size out of range: " +
                                   trimmed);
        sizes.push_back(size);
      }

      std::ostream* out = &std::cout;
      std::ofstream file;
      if (!lc_out.empty()) {
        file = detail::open_for_write(lc_out);
        out = &file;
      }
      (*out) << "labeled_size,regime,dev_f1,test_f1\n";
      for (long size : sizes) {
        for (TrainRegime regime : regimes) {
          if (regime == TrainRegime::kSupervised && size == 0) continue;
          Corpus corpus;
          corpus.label_set = labels;
          corpus.labeled.assign(base.labeled.begin(),
                                base.labeled.begin() + size);
          if (regime != TrainRegime::kSupervised) corpus.bitext = base.bitext;
          corpus.dev = base.dev;
          corpus.test = base.test;
          auto [model, report] = train(corpus, cfg.train, regime);
          double test_f1 = evaluate_f1(model, base.test, labels);
          (*out) << size << ',' << to_string(regime) << ','
                 << cli::fmt("%.6f", report.best_dev_f1) << ','
                 << cli::fmt("%.6f", test_f1) << '\n';
        }
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace xlcrf

#endif  // XLCRF_CLI_HPP_
