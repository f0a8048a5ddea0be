// xlcrf/likelihood.hpp
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

#ifndef XLCRF_LIKELIHOOD_HPP_
#define XLCRF_LIKELIHOOD_HPP_

#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "xlcrf/core.hpp"
#include "xlcrf/features.hpp"
#include "xlcrf/inference.hpp"

namespace xlcrf {

/// Adds scale * E_theta[f] (expected feature counts under the model) to grad.
inline void accumulate_expected_features(const CompiledSentence& cs,
                                         const InferenceTables& t,
                                         double scale,
                                         std::span<double> grad) {
  const int n = cs.length;
  const int m = cs.num_labels;
  for (int i = 0; i < n; ++i)
    for (int y = 0; y < m; ++y) {
      double w = scale * t.node(i, y);
      if (w == 0.0) continue;
      for (int id : cs.node(i, y)) grad[id] += w;
    }
  for (int y = 0; y < m; ++y) {
    int id = cs.trans(kBosLabel, y);
    if (id >= 0) grad[id] += scale * t.node(0, y);
  }
  for (int i = 0; i + 1 < n; ++i)
    for (int p = 0; p < m; ++p)
      for (int y = 0; y < m; ++y) {
        int id = cs.trans(p, y);
        if (id >= 0) grad[id] += scale * t.edge(i, p, y);
      }
}

/// Adds scale * f(x, y*) (observed feature counts) to grad.
inline void accumulate_observed_features(const CompiledSentence& cs,
                                         const LabelSequence& labels,
                                         double scale,
                                         std::span<double> grad) {
  for (int i = 0; i < cs.length; ++i) {
    int y = labels[i];
    for (int id : cs.node(i, y)) grad[id] += scale;
    int prev = i == 0 ? kBosLabel : labels[i - 1];
    int id = cs.trans(prev, y);
    if (id >= 0) grad[id] += scale;
  }
}

/// log P(y*|x) for one sentence plus its gradient contribution (observed
/// minus expected counts) into grad. Reuses a caller-supplied inference run.
inline double sentence_log_likelihood(const CrfModel& model,
                                      const CompiledSentence& cs,
                                      const LabelSequence& labels,
                                      const InferenceTables& t,
                                      std::span<double> grad) {
  labels.validate(cs.length, cs.num_labels);
  SentenceScores s = score_sentence(model, cs);
  double path = 0.0;
  for (int i = 0; i < cs.length; ++i)
    path += s.factor(i, i == 0 ? kBosLabel : labels[i - 1], labels[i]);
  accumulate_observed_features(cs, labels, 1.0, grad);
  accumulate_expected_features(cs, t, -1.0, grad);
  return path - t.log_z;
}

/// Conditional log-likelihood of a labeled collection with a Gaussian prior:
///   sum_a log P(y*_a | x_a; theta)  -  ||theta||^2 / (2 sigma^2)
/// and its exact gradient. The prior term vanishes when sigma is infinite.
inline std::pair<double, std::vector<double>> supervised_value_and_gradient(
    const CrfModel& model,
    const std::vector<std::pair<Sentence, LabelSequence>>& data) {
  model.validate();
  std::vector<double> grad(model.weights.size(), 0.0);
  double value = 0.0;
  for (const auto& [sentence, labels] : data) {
    CompiledSentence cs =
        compile_sentence(sentence, model.num_labels(), model.feature_index);
    InferenceTables t = run_inference(model, cs);
    value += sentence_log_likelihood(model, cs, labels, t, grad);
  }
  if (std::isfinite(model.l2_sigma)) {
    double inv_var = 1.0 / (model.l2_sigma * model.l2_sigma);
    for (size_t k = 0; k < grad.size(); ++k) {
      value -= 0.5 * inv_var * model.weights[k] * model.weights[k];
      grad[k] -= inv_var * model.weights[k];
    }
  }
  return {value, std::move(grad)};
}

}  // namespace xlcrf

#endif  // XLCRF_LIKELIHOOD_HPP_
