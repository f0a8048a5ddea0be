// xlcrf/trainer.hpp
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
// Joint objective assembly and training loop. Three regimes share one
// optimizer: supervised conditional likelihood, the expectation criterion
// over projected bitext added to it, and project-then-train, which turns
// the bitext into ordinary labeled data via hard projection. Early
// stopping watches dev F1 once per optimizer iteration and returns the
// best-on-dev parameters.

#ifndef XLCRF_TRAINER_HPP_
#define XLCRF_TRAINER_HPP_

#include <chrono>
#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "xlcrf/core.hpp"
#include "xlcrf/eval.hpp"
#include "xlcrf/features.hpp"
#include "xlcrf/ge.hpp"
#include "xlcrf/inference.hpp"
#include "xlcrf/lbfgs.hpp"
#include "xlcrf/likelihood.hpp"
#include "xlcrf/projection.hpp"

namespace xlcrf {

enum class TrainRegime { kSupervised, kGe, kProjectThenTrain };

inline const char* to_string(TrainRegime r) {
  switch (r) {
    case TrainRegime::kSupervised: return "supervised";
    case TrainRegime::kGe: return "ge";
    case TrainRegime::kProjectThenTrain: return "project_then_train";
  }
  return "unknown";
}

inline TrainRegime parse_regime(const std::string& s) {
  if (s == "supervised") return TrainRegime::kSupervised;
  if (s == "ge") return TrainRegime::kGe;
  if (s == "project_then_train") return TrainRegime::kProjectThenTrain;
  throw std::invalid_argument("unknown training regime: " + s);
}

enum class ProjectionMode { kSoft, kHard };

inline const char* to_string(ProjectionMode m) {
  return m == ProjectionMode::kSoft ? "soft" : "hard";
}

inline ProjectionMode parse_projection_mode(const std::string& s) {
  if (s == "soft") return ProjectionMode::kSoft;
  if (s == "hard") return ProjectionMode::kHard;
  throw std::invalid_argument("unknown projection mode: " + s);
}

/// Training materials: labeled target sentences, bitext pairs with
/// projected target expectations, and held-out labeled splits.
struct Corpus {
  LabelSet label_set;
  std::vector<std::pair<Sentence, LabelSequence>> labeled;
  std::vector<std::pair<AlignedPair, TargetExpectations>> bitext;
  std::vector<std::pair<Sentence, LabelSequence>> dev;
  std::vector<std::pair<Sentence, LabelSequence>> test;

  void validate() const {
    const int m = label_set.size();
    auto check_labeled = [&](const std::vector<std::pair<Sentence, LabelSequence>>& part,
                             const char* name) {
      for (const auto& [sentence, labels] : part) {
        sentence.validate();
        labels.validate(static_cast<int>(sentence.tokens.size()), m);
        (void)name;
      }
    };
    check_labeled(labeled, "labeled");
    check_labeled(dev, "dev");
    check_labeled(test, "test");
    for (const auto& [pair, targets] : bitext) {
      pair.validate();
      if (targets.length != static_cast<int>(pair.target.tokens.size()) ||
          targets.num_labels != m)
        throw std::invalid_argument(
            "corpus: target expectations do not match their sentence");
      targets.validate();
    }
  }
};

struct TrainConfig {
  double ge_weight = 1.0;
  double l2_sigma = 1.0;
  int max_iterations = 100;
  int patience = 20;
  int lbfgs_history = 10;
  ProjectionMode projection_mode = ProjectionMode::kSoft;
  uint64_t seed = 0;              // consumed by the bootstrap scorer only
  double convergence_tol = 1e-8;  // relative objective change, 0 disables

  void validate() const {
    if (!(ge_weight >= 0.0))
      throw std::invalid_argument("train config: ge_weight must be >= 0");
    if (!(l2_sigma > 0.0))
      throw std::invalid_argument("train config: l2_sigma must be positive");
    if (max_iterations < 1)
      throw std::invalid_argument("train config: max_iterations must be >= 1");
    if (patience < 1 || patience > max_iterations)
      throw std::invalid_argument(
          "train config: need 1 <= patience <= max_iterations");
    if (lbfgs_history < 1)
      throw std::invalid_argument("train config: lbfgs_history must be >= 1");
    if (convergence_tol < 0.0)
      throw std::invalid_argument("train config: convergence_tol must be >= 0");
  }
};

struct TrainReport {
  TrainRegime regime = TrainRegime::kSupervised;
  std::vector<double> dev_f1_trace;     // one entry per iteration, 1-based
  std::vector<double> objective_trace;  // joint objective per iteration
  int best_iteration = 0;
  double best_dev_f1 = 0.0;
  double final_objective = 0.0;
  double wall_seconds = 0.0;
  std::string stop_reason;
};

/// Joint objective: supervised conditional likelihood over the labeled part
/// plus ge_weight times the expectation scores over the bitext part. The
/// Gaussian prior rides with the supervised part, so an empty bitext gives
/// exactly the supervised objective and an empty labeled part gives exactly
/// the weighted expectation score.
inline std::pair<double, std::vector<double>> joint_value_and_gradient(
    const CrfModel& model, const Corpus& corpus, const TrainConfig& config) {
  model.validate();
  config.validate();
  if (!model.feature_index.frozen())
    throw std::logic_error("joint objective: feature index must be frozen");
  if (corpus.labeled.empty() && corpus.bitext.empty())
    throw std::invalid_argument("joint objective: nothing to optimize");

  double value = 0.0;
  std::vector<double> grad(model.weights.size(), 0.0);
  for (const auto& [sentence, labels] : corpus.labeled) {
    CompiledSentence cs =
        compile_sentence(sentence, model.num_labels(), model.feature_index);
    InferenceTables tables = run_inference(model, cs);
    value += sentence_log_likelihood(model, cs, labels, tables, grad);
  }
  if (!corpus.labeled.empty() && std::isfinite(model.l2_sigma)) {
    double inv_var = 1.0 / (model.l2_sigma * model.l2_sigma);
    for (size_t j = 0; j < grad.size(); ++j) {
      value -= 0.5 * model.weights[j] * model.weights[j] * inv_var;
      grad[j] -= model.weights[j] * inv_var;
    }
  }
  if (config.ge_weight != 0.0) {
    for (const auto& [pair, targets] : corpus.bitext) {
      CompiledSentence cs = compile_sentence(pair.target, model.num_labels(),
                                             model.feature_index);
      InferenceTables tables = run_inference(model, cs);
      value += config.ge_weight * ge_value(model, cs, targets, tables);
      accumulate_ge_gradient(cs, tables, targets, grad, config.ge_weight);
    }
  }
  return {value, std::move(grad)};
}

/// Evaluates a model on the dev split; entity F1 in [0, 100].
inline double evaluate_f1(
    const CrfModel& model,
    const std::vector<std::pair<Sentence, LabelSequence>>& data,
    const LabelSet& label_set) {
  std::vector<LabelSequence> gold, pred;
  gold.reserve(data.size());
  pred.reserve(data.size());
  for (const auto& [sentence, labels] : data) {
    gold.push_back(labels);
    pred.push_back(viterbi(model, sentence));
  }
  return score(gold, pred, label_set).f1();
}

/// Hard labels straight from target expectations: argmax per aligned row
/// (ties toward the lower index), outside label when unaligned. Matches
/// project_hard_labels on expectations produced by project.
inline LabelSequence hard_labels_from_targets(const TargetExpectations& targets,
                                              int outside_label) {
  LabelSequence seq;
  seq.labels.assign(targets.length, outside_label);
  for (int i = 0; i < targets.length; ++i) {
    if (!targets.aligned[i]) continue;
    int arg = 0;
    double best = targets.at(i, 0);
    for (int j = 1; j < targets.num_labels; ++j)
      if (targets.at(i, j) > best) {
        best = targets.at(i, j);
        arg = j;
      }
    seq.labels[i] = arg;
  }
  return seq;
}

/// Hook evaluating dev F1 for one iterate; tests substitute scripted traces.
using DevEvaluator = std::function<double(const CrfModel& model, int iteration)>;

/// Trains under the given regime and returns the best-on-dev model.
///
/// Optimization maximizes the joint objective via negation. After every
/// optimizer iteration the dev set is decoded and scored; training stops
/// once `patience` iterations pass without a strict improvement, and the
/// parameters from the best iteration are returned. Without a dev set (or
/// evaluator) the final iterate wins.
inline std::pair<CrfModel, TrainReport> train(const Corpus& corpus,
                                              const TrainConfig& config,
                                              TrainRegime regime,
                                              const DevEvaluator& dev_eval) {
  corpus.validate();
  config.validate();

  // Regime-specific effective corpus. GE with zero weight must match the
  // supervised run bit for bit, so the bitext is dropped entirely there.
  Corpus effective;
  effective.label_set = corpus.label_set;
  effective.labeled = corpus.labeled;
  const bool use_bitext =
      regime == TrainRegime::kGe && config.ge_weight != 0.0 && !corpus.bitext.empty();
  switch (regime) {
    case TrainRegime::kSupervised:
      if (corpus.labeled.empty())
        throw std::invalid_argument("train: supervised regime needs labeled data");
      break;
    case TrainRegime::kGe:
      if (corpus.bitext.empty() && corpus.labeled.empty())
        throw std::invalid_argument("train: ge regime needs labeled data or bitext");
      if (!use_bitext && corpus.labeled.empty())
        throw std::invalid_argument(
            "train: ge regime with zero weight needs labeled data");
      if (use_bitext) {
        effective.bitext = corpus.bitext;
        if (config.projection_mode == ProjectionMode::kHard)
          for (auto& [pair, targets] : effective.bitext) targets = harden(targets);
      }
      break;
    case TrainRegime::kProjectThenTrain: {
      if (corpus.bitext.empty() && corpus.labeled.empty())
        throw std::invalid_argument(
            "train: project_then_train regime needs labeled data or bitext");
      int outside = corpus.label_set.outside_index();
      for (const auto& [pair, targets] : corpus.bitext)
        effective.labeled.emplace_back(pair.target,
                                       hard_labels_from_targets(targets, outside));
      break;
    }
  }

  // Feature space comes from the regime's training sentences only.
  const int m = effective.label_set.size();
  CrfModel model;
  model.label_set = effective.label_set;
  model.l2_sigma = config.l2_sigma;
  for (const auto& [sentence, labels] : effective.labeled)
    index_features(sentence, m, model.feature_index);
  for (const auto& [pair, targets] : effective.bitext)
    index_features(pair.target, m, model.feature_index);
  model.feature_index.freeze();
  model.weights.assign(model.feature_index.size(), 0.0);

  TrainReport report;
  report.regime = regime;
  auto t0 = std::chrono::steady_clock::now();

  LbfgsObjective objective = [&](std::span<const double> x,
                                 std::span<double> grad) -> double {
    std::copy(x.begin(), x.end(), model.weights.begin());
    auto [value, g] = joint_value_and_gradient(model, effective, config);
    std::copy(g.begin(), g.end(), grad.begin());
    for (auto& v : grad) v = -v;
    return -value;
  };

  std::vector<double> best_weights = model.weights;
  bool have_best = false;
  bool early_stopped = false;
  LbfgsCallback callback = [&](int iteration, std::span<const double> x,
                               double neg_value) -> bool {
    report.objective_trace.push_back(-neg_value);
    report.final_objective = -neg_value;
    if (!dev_eval) {
      best_weights.assign(x.begin(), x.end());
      report.best_iteration = iteration;
      have_best = true;
      return true;
    }
    std::copy(x.begin(), x.end(), model.weights.begin());
    double f1 = dev_eval(model, iteration);
    report.dev_f1_trace.push_back(f1);
    if (!have_best || f1 > report.best_dev_f1) {
      report.best_dev_f1 = f1;
      report.best_iteration = iteration;
      best_weights.assign(x.begin(), x.end());
      have_best = true;
    }
    if (iteration - report.best_iteration >= config.patience) {
      early_stopped = true;
      return false;
    }
    return true;
  };

  LbfgsOptions opts;
  opts.history = config.lbfgs_history;
  opts.max_iterations = config.max_iterations;
  opts.convergence_tol = config.convergence_tol;
  std::vector<double> x = model.weights;
  LbfgsResult result = lbfgs_minimize(x, objective, opts, callback);
  if (result.status == LbfgsStatus::kDiverged)
    throw std::runtime_error(
        "train: optimizer diverged (non-finite objective or gradient)");

  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  report.stop_reason = early_stopped ? "early_stopping" : to_string(result.status);
  if (report.objective_trace.empty()) {
    // Zero iterations accepted (already stationary); keep the zero init.
    report.final_objective = -result.value;
    report.best_iteration = 0;
  }
  model.weights = have_best ? best_weights : x;
  if (dev_eval && !have_best) report.best_dev_f1 = 0.0;
  return {std::move(model), std::move(report)};
}

/// Trains with the standard dev-set evaluator.
inline std::pair<CrfModel, TrainReport> train(const Corpus& corpus,
                                              const TrainConfig& config,
                                              TrainRegime regime) {
  DevEvaluator dev_eval;
  if (!corpus.dev.empty())
    dev_eval = [&corpus](const CrfModel& model, int) {
      return evaluate_f1(model, corpus.dev, corpus.label_set);
    };
  return train(corpus, config, regime, dev_eval);
}

}  // namespace xlcrf

#endif  // XLCRF_TRAINER_HPP_
