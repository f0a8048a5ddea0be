// xlcrf/inference.hpp
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

#ifndef XLCRF_INFERENCE_HPP_
#define XLCRF_INFERENCE_HPP_

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "xlcrf/core.hpp"
#include "xlcrf/features.hpp"

namespace xlcrf {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// log(sum(exp(x_i))) over a contiguous range, stable in log space.
inline double log_sum_exp(const double* x, int n) {
  double mx = kNegInf;
  for (int i = 0; i < n; ++i) mx = std::max(mx, x[i]);
  if (mx == kNegInf) return kNegInf;
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += std::exp(x[i] - mx);
  return mx + std::log(s);
}

inline double log_sum_exp(const std::vector<double>& x) {
  return log_sum_exp(x.data(), static_cast<int>(x.size()));
}

/// Log-potentials of one sentence under fixed weights. node holds the
/// label-conjoined observation scores, trans the position-independent
/// transition scores with row 0 = BOS.
struct SentenceScores {
  int length = 0;
  int num_labels = 0;
  std::vector<double> node;   // [pos * m + label]
  std::vector<double> trans;  // [(prev + 1) * m + cur]

  double node_at(int pos, int label) const {
    return node[pos * num_labels + label];
  }
  double trans_at(int prev_label, int cur_label) const {
    return trans[(prev_label + 1) * num_labels + cur_label];
  }
  /// Score of the factor at pos given its left neighbor (BOS at pos 0).
  double factor(int pos, int prev_label, int cur_label) const {
    return node_at(pos, cur_label) + trans_at(prev_label, cur_label);
  }
};

inline SentenceScores score_sentence(const CrfModel& model,
                                     const CompiledSentence& cs) {
  SentenceScores s;
  s.length = cs.length;
  s.num_labels = cs.num_labels;
  s.node.assign(cs.node_features.size(), 0.0);
  for (size_t k = 0; k < cs.node_features.size(); ++k) {
    double v = 0.0;
    for (int id : cs.node_features[k]) v += model.weights[id];
    s.node[k] = v;
  }
  s.trans.assign(cs.transition.size(), 0.0);
  for (size_t k = 0; k < cs.transition.size(); ++k)
    if (cs.transition[k] >= 0) s.trans[k] = model.weights[cs.transition[k]];
  return s;
}

/// Exact forward-backward results for one sentence, all log quantities in
/// log space. Node marginal rows sum to one; edge marginals are consistent
/// with the node marginals on both sides; log_z agrees between the forward
/// and backward recursions.
struct InferenceTables {
  int length = 0;
  int num_labels = 0;
  std::vector<double> log_alpha;       // [pos * m + label]
  std::vector<double> log_beta;        // [pos * m + label]
  double log_z = 0.0;
  std::vector<double> node_marginals;  // [pos * m + label]
  std::vector<double> edge_marginals;  // [(pos) * m * m + prev * m + cur], pos < length-1

  double alpha(int pos, int label) const {
    return log_alpha[pos * num_labels + label];
  }
  double beta(int pos, int label) const {
    return log_beta[pos * num_labels + label];
  }
  double node(int pos, int label) const {
    return node_marginals[pos * num_labels + label];
  }
  /// P(y_pos = prev, y_pos+1 = cur | x).
  double edge(int pos, int prev, int cur) const {
    return edge_marginals[(pos * num_labels + prev) * num_labels + cur];
  }
};

/// Forward-backward over precompiled features.
inline InferenceTables run_inference(const CrfModel& model,
                                     const CompiledSentence& cs) {
  if (!model.feature_index.frozen())
    throw std::invalid_argument("run_inference: feature index not frozen");
  model.validate();
  const int n = cs.length;
  const int m = cs.num_labels;
  if (n < 1 || m < 1)
    throw std::invalid_argument("run_inference: empty sentence or label set");

  SentenceScores s = score_sentence(model, cs);
  InferenceTables t;
  t.length = n;
  t.num_labels = m;
  t.log_alpha.assign(static_cast<size_t>(n) * m, kNegInf);
  t.log_beta.assign(static_cast<size_t>(n) * m, 0.0);

  // Forward.
  for (int y = 0; y < m; ++y) t.log_alpha[y] = s.factor(0, kBosLabel, y);
  std::vector<double> buf(m);
  for (int i = 1; i < n; ++i) {
    for (int y = 0; y < m; ++y) {
      for (int p = 0; p < m; ++p)
        buf[p] = t.log_alpha[(i - 1) * m + p] + s.factor(i, p, y);
      t.log_alpha[i * m + y] = log_sum_exp(buf.data(), m);
    }
  }
  t.log_z = log_sum_exp(t.log_alpha.data() + (n - 1) * m, m);

  // Backward.
  for (int i = n - 2; i >= 0; --i) {
    for (int p = 0; p < m; ++p) {
      for (int y = 0; y < m; ++y)
        buf[y] = s.factor(i + 1, p, y) + t.log_beta[(i + 1) * m + y];
      t.log_beta[i * m + p] = log_sum_exp(buf.data(), m);
    }
  }
  for (int y = 0; y < m; ++y) buf[y] = s.factor(0, kBosLabel, y) + t.log_beta[y];
  double log_z_backward = log_sum_exp(buf.data(), m);
  if (!(std::abs(log_z_backward - t.log_z) <=
        1e-8 * std::max(1.0, std::abs(t.log_z))))
    throw std::runtime_error("run_inference: forward/backward partition "
                             "functions disagree");

  // Marginals.
  t.node_marginals.assign(static_cast<size_t>(n) * m, 0.0);
  for (int i = 0; i < n; ++i)
    for (int y = 0; y < m; ++y)
      t.node_marginals[i * m + y] =
          std::exp(t.log_alpha[i * m + y] + t.log_beta[i * m + y] - t.log_z);
  if (n > 1) {
    t.edge_marginals.assign(static_cast<size_t>(n - 1) * m * m, 0.0);
    for (int i = 0; i + 1 < n; ++i)
      for (int p = 0; p < m; ++p)
        for (int y = 0; y < m; ++y)
          t.edge_marginals[(i * m + p) * m + y] =
              std::exp(t.log_alpha[i * m + p] + s.factor(i + 1, p, y) +
                       t.log_beta[(i + 1) * m + y] - t.log_z);
  }
  return t;
}

/// Convenience overload compiling the sentence on the fly.
inline InferenceTables run_inference(const CrfModel& model,
                                     const Sentence& sentence) {
  return run_inference(
      model, compile_sentence(sentence, model.num_labels(), model.feature_index));
}

/// Max-product decoding. Ties at every backpointer decision and at the final
/// argmax break toward the lower label index.
inline LabelSequence viterbi(const CrfModel& model,
                             const CompiledSentence& cs) {
  if (!model.feature_index.frozen())
    throw std::invalid_argument("viterbi: feature index not frozen");
  model.validate();
  const int n = cs.length;
  const int m = cs.num_labels;
  SentenceScores s = score_sentence(model, cs);

  std::vector<double> delta(static_cast<size_t>(n) * m, kNegInf);
  std::vector<int> back(static_cast<size_t>(n) * m, 0);
  for (int y = 0; y < m; ++y) delta[y] = s.factor(0, kBosLabel, y);
  for (int i = 1; i < n; ++i) {
    for (int y = 0; y < m; ++y) {
      double best = kNegInf;
      int arg = 0;
      for (int p = 0; p < m; ++p) {
        double v = delta[(i - 1) * m + p] + s.factor(i, p, y);
        if (v > best) {
          best = v;
          arg = p;
        }
      }
      delta[i * m + y] = best;
      back[i * m + y] = arg;
    }
  }
  int last = 0;
  double best = kNegInf;
  for (int y = 0; y < m; ++y)
    if (delta[(n - 1) * m + y] > best) {
      best = delta[(n - 1) * m + y];
      last = y;
    }
  std::vector<int> labels(n);
  labels[n - 1] = last;
  for (int i = n - 1; i > 0; --i) labels[i - 1] = back[i * m + labels[i]];
  return LabelSequence(std::move(labels));
}

inline LabelSequence viterbi(const CrfModel& model, const Sentence& sentence) {
  return viterbi(model,
                 compile_sentence(sentence, model.num_labels(), model.feature_index));
}

}  // namespace xlcrf

#endif  // XLCRF_INFERENCE_HPP_
