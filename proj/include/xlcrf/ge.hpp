// xlcrf/ge.hpp
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
// Expectation regularization for a linear-chain CRF: a squared-error score
// between projected target expectations and the model's label marginals,
// with an exact gradient. The gradient is the covariance between the
// constraint functions and the model features; collapsing the constraints
// against the penalty vector first (phi' = u^T phi) turns the covariance
// matrix into a vector, so one forward/backward-style recursion over edges
// computes it in O(n m^2).

#ifndef XLCRF_GE_HPP_
#define XLCRF_GE_HPP_

#include <cmath>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "xlcrf/core.hpp"
#include "xlcrf/features.hpp"
#include "xlcrf/inference.hpp"
#include "xlcrf/likelihood.hpp"

namespace xlcrf {

/// Target label expectations for one sentence, one row per position.
/// Aligned rows live on the probability simplex; unaligned rows are zero
/// and contribute nothing to the score.
struct TargetExpectations {
  int length = 0;
  int num_labels = 0;
  std::vector<bool> aligned;  // per position
  std::vector<double> table;  // [pos * m + label]

  TargetExpectations() = default;
  TargetExpectations(int n, int m)
      : length(n),
        num_labels(m),
        aligned(n, false),
        table(static_cast<size_t>(n) * m, 0.0) {}

  double at(int pos, int label) const { return table[pos * num_labels + label]; }
  double& at(int pos, int label) { return table[pos * num_labels + label]; }

  void validate() const {
    if (static_cast<int>(aligned.size()) != length ||
        static_cast<int>(table.size()) != length * num_labels)
      throw std::invalid_argument("target expectations: bad dimensions");
    for (int i = 0; i < length; ++i) {
      double sum = 0.0;
      for (int j = 0; j < num_labels; ++j) {
        double v = at(i, j);
        if (aligned[i]) {
          if (v < -1e-9 || v > 1.0 + 1e-9)
            throw std::invalid_argument(
                "target expectations: entry outside [0,1]");
          sum += v;
        } else if (v != 0.0) {
          throw std::invalid_argument(
              "target expectations: nonzero entry on unaligned position");
        }
      }
      if (aligned[i] && std::abs(sum - 1.0) > 1e-8)
        throw std::invalid_argument(
            "target expectations: aligned row off the simplex");
    }
  }
};

/// Replaces every aligned row by the one-hot vector at its argmax, ties
/// toward the lower label index. Unaligned rows stay zero. Idempotent.
inline TargetExpectations harden(const TargetExpectations& targets) {
  targets.validate();
  TargetExpectations out(targets.length, targets.num_labels);
  out.aligned = targets.aligned;
  for (int i = 0; i < targets.length; ++i) {
    if (!targets.aligned[i]) continue;
    int arg = 0;
    double best = targets.at(i, 0);
    for (int j = 1; j < targets.num_labels; ++j)
      if (targets.at(i, j) > best) {
        best = targets.at(i, j);
        arg = j;
      }
    out.at(i, arg) = 1.0;
  }
  return out;
}

/// Negative squared error between target and model expectations:
///   -sum_{i aligned} sum_j (target_ij - P(y_i = l_j | x))^2
/// Zero iff the marginals match the targets exactly on aligned positions.
inline double ge_value(const CrfModel& model, const CompiledSentence& cs,
                       const TargetExpectations& targets,
                       const InferenceTables& tables) {
  if (targets.length != cs.length || targets.num_labels != cs.num_labels)
    throw std::invalid_argument("ge_value: target dimensions do not match");
  targets.validate();
  double value = 0.0;
  for (int i = 0; i < cs.length; ++i) {
    if (!targets.aligned[i]) continue;
    for (int j = 0; j < cs.num_labels; ++j) {
      double d = targets.at(i, j) - tables.node(i, j);
      value -= d * d;
    }
  }
  return value;
}

inline double ge_value(const CrfModel& model, const Sentence& sentence,
                       const TargetExpectations& targets) {
  CompiledSentence cs =
      compile_sentence(sentence, model.num_labels(), model.feature_index);
  return ge_value(model, cs, targets, run_inference(model, cs));
}

/// Intermediates of one gradient evaluation, exposed for verification.
///
/// penalty is u = 2(target - E[phi]); the collapsed constraint phi' maps
/// (position, label) to exactly u at that cell, so phi_prime() reads the
/// same table. dp_alpha[e] accumulates sum_{j<=e} over joint probabilities
/// with phi', dp_beta[e] the mirror image from the right; their sum at edge
/// e is sum_j sum_{y_j} P(y_e, y_{e+1}, y_j | x) phi'(y_j).
struct GeWorkspace {
  int length = 0;
  int num_labels = 0;
  std::vector<double> model_expectation;  // [pos * m + label], zero when unaligned
  std::vector<double> penalty;            // [pos * m + label]
  std::vector<double> dp_alpha;           // [(edge * m + prev) * m + cur]
  std::vector<double> dp_beta;            // same layout
  double expected_phi_prime = 0.0;        // E[phi']

  double expectation(int pos, int label) const {
    return model_expectation[pos * num_labels + label];
  }
  double u(int pos, int label) const { return penalty[pos * num_labels + label]; }
  double phi_prime(int pos, int label) const { return u(pos, label); }
  double alpha(int edge, int prev, int cur) const {
    return dp_alpha[(edge * num_labels + prev) * num_labels + cur];
  }
  double beta(int edge, int prev, int cur) const {
    return dp_beta[(edge * num_labels + prev) * num_labels + cur];
  }
};

namespace detail {
inline double safe_ratio(double num, double den) {
  return den > 1e-300 ? num / den : 0.0;
}
}  // namespace detail

/// Runs the covariance recursions for one sentence.
inline GeWorkspace build_ge_workspace(const InferenceTables& t,
                                      const TargetExpectations& targets) {
  if (targets.length != t.length || targets.num_labels != t.num_labels)
    throw std::invalid_argument("ge workspace: target dimensions do not match");
  targets.validate();
  const int n = t.length;
  const int m = t.num_labels;
  GeWorkspace w;
  w.length = n;
  w.num_labels = m;
  w.model_expectation.assign(static_cast<size_t>(n) * m, 0.0);
  w.penalty.assign(static_cast<size_t>(n) * m, 0.0);
  for (int i = 0; i < n; ++i) {
    if (!targets.aligned[i]) continue;
    for (int j = 0; j < m; ++j) {
      double e = t.node(i, j);
      w.model_expectation[i * m + j] = e;
      w.penalty[i * m + j] = 2.0 * (targets.at(i, j) - e);
      w.expected_phi_prime += e * w.penalty[i * m + j];
    }
  }
  if (n < 2) return w;

  w.dp_alpha.assign(static_cast<size_t>(n - 1) * m * m, 0.0);
  w.dp_beta.assign(static_cast<size_t>(n - 1) * m * m, 0.0);
  // Left recursion: alpha(e, p, y) carries the phi' mass of positions <= e.
  std::vector<double> in_sum(m, 0.0);   // sum_w alpha(e-1, w, p)
  std::vector<double> next_sum(m, 0.0);
  for (int e = 0; e + 1 < n; ++e) {
    std::fill(next_sum.begin(), next_sum.end(), 0.0);
    for (int p = 0; p < m; ++p) {
      double up = w.penalty[e * m + p];
      double node_p = t.node(e, p);
      for (int y = 0; y < m; ++y) {
        double edge = t.edge(e, p, y);
        double v = edge * up;
        if (e > 0) v += detail::safe_ratio(edge, node_p) * in_sum[p];
        w.dp_alpha[(e * m + p) * m + y] = v;
        next_sum[y] += v;
      }
    }
    in_sum.swap(next_sum);
  }
  // Right recursion: beta(e, p, y) carries the phi' mass of positions > e.
  std::fill(in_sum.begin(), in_sum.end(), 0.0);  // sum_w beta(e+1, y, w)
  for (int e = n - 2; e >= 0; --e) {
    std::fill(next_sum.begin(), next_sum.end(), 0.0);
    for (int y = 0; y < m; ++y) {
      double uy = w.penalty[(e + 1) * m + y];
      double node_y = t.node(e + 1, y);
      for (int p = 0; p < m; ++p) {
        double edge = t.edge(e, p, y);
        double v = edge * uy;
        if (e + 1 < n - 1) v += detail::safe_ratio(edge, node_y) * in_sum[y];
        w.dp_beta[(e * m + p) * m + y] = v;
        next_sum[p] += v;
      }
    }
    in_sum.swap(next_sum);
  }
  return w;
}

/// Adds scale * d(ge_value)/d(theta) to grad, assembled as the covariance
/// E[phi' f^T] - E[phi'] E[f^T] from the workspace recursions.
inline void accumulate_ge_gradient(const CompiledSentence& cs,
                                   const InferenceTables& t,
                                   const TargetExpectations& targets,
                                   std::span<double> grad,
                                   double scale = 1.0,
                                   GeWorkspace* workspace_out = nullptr) {
  const int n = cs.length;
  const int m = cs.num_labels;
  GeWorkspace w = build_ge_workspace(t, targets);

  // E[phi' f^T]: factor at position 0 depends on y_0 alone.
  std::vector<double> w0(m, 0.0);
  for (int y = 0; y < m; ++y) {
    w0[y] = t.node(0, y) * w.u(0, y);
    if (n > 1)
      for (int y1 = 0; y1 < m; ++y1) w0[y] += w.beta(0, y, y1);
  }
  for (int y = 0; y < m; ++y) {
    double v = scale * w0[y];
    if (v == 0.0) continue;
    for (int id : cs.node(0, y)) grad[id] += v;
    int id = cs.trans(kBosLabel, y);
    if (id >= 0) grad[id] += v;
  }
  // Factors at positions >= 1 ride on edge e = pos - 1.
  std::vector<double> node_weight(m);
  for (int e = 0; e + 1 < n; ++e) {
    std::fill(node_weight.begin(), node_weight.end(), 0.0);
    for (int p = 0; p < m; ++p)
      for (int y = 0; y < m; ++y) {
        double v = w.alpha(e, p, y) + w.beta(e, p, y);
        node_weight[y] += v;
        int id = cs.trans(p, y);
        if (id >= 0) grad[id] += scale * v;
      }
    for (int y = 0; y < m; ++y) {
      double v = scale * node_weight[y];
      if (v == 0.0) continue;
      for (int id : cs.node(e + 1, y)) grad[id] += v;
    }
  }
  // - E[phi'] E[f^T].
  if (w.expected_phi_prime != 0.0)
    accumulate_expected_features(cs, t, -scale * w.expected_phi_prime, grad);
  if (workspace_out) *workspace_out = std::move(w);
}

/// Exact gradient of ge_value as a dense vector.
inline std::vector<double> ge_gradient(const CrfModel& model,
                                       const Sentence& sentence,
                                       const TargetExpectations& targets) {
  model.validate();
  CompiledSentence cs =
      compile_sentence(sentence, model.num_labels(), model.feature_index);
  InferenceTables t = run_inference(model, cs);
  std::vector<double> grad(model.weights.size(), 0.0);
  accumulate_ge_gradient(cs, t, targets, grad);
  return grad;
}

}  // namespace xlcrf

#endif  // XLCRF_GE_HPP_
