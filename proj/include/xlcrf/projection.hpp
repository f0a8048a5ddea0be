// xlcrf/projection.hpp
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
// Cross-lingual expectation projection: posterior marginals from a trained
// source-side tagger are carried through word alignments onto target-side
// positions. A target position aligned to several source words receives the
// mean of their posterior rows; an unaligned position receives no
// constraint at all (soft path) or the outside label (hard path).

#ifndef XLCRF_PROJECTION_HPP_
#define XLCRF_PROJECTION_HPP_

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "xlcrf/core.hpp"
#include "xlcrf/ge.hpp"
#include "xlcrf/inference.hpp"

namespace xlcrf {

/// One bitext pair with word alignment links (source index, target index).
/// Links form a set; many-to-many alignments are permitted.
struct AlignedPair {
  Sentence source;
  Sentence target;
  std::vector<std::pair<int, int>> links;

  void validate() const {
    source.validate();
    target.validate();
    const int ns = static_cast<int>(source.tokens.size());
    const int nt = static_cast<int>(target.tokens.size());
    for (const auto& [s, t] : links)
      if (s < 0 || s >= ns || t < 0 || t >= nt)
        throw std::invalid_argument("aligned pair: link index out of range");
  }
};

/// Per-token label posteriors of a source sentence, row i = P(y_i = . | x).
struct PosteriorTable {
  int length = 0;
  int num_labels = 0;
  std::vector<double> table;  // [pos * m + label]

  PosteriorTable() = default;
  PosteriorTable(int n, int m)
      : length(n), num_labels(m), table(static_cast<size_t>(n) * m, 0.0) {}

  double at(int pos, int label) const { return table[pos * num_labels + label]; }
  double& at(int pos, int label) { return table[pos * num_labels + label]; }

  void validate() const {
    if (static_cast<int>(table.size()) != length * num_labels)
      throw std::invalid_argument("posterior table: bad dimensions");
    for (int i = 0; i < length; ++i) {
      double sum = 0.0;
      for (int j = 0; j < num_labels; ++j) {
        double v = at(i, j);
        if (!(v >= -1e-9) || v > 1.0 + 1e-9)
          throw std::invalid_argument("posterior table: entry outside [0,1]");
        sum += v;
      }
      if (std::abs(sum - 1.0) > 1e-8)
        throw std::invalid_argument("posterior table: row off the simplex");
    }
  }
};

/// Bijection from source label indices onto target label indices.
struct LabelMap {
  std::vector<int> to_target;  // [source label] -> target label

  int size() const { return static_cast<int>(to_target.size()); }

  /// Identity map over m labels, for shared inventories.
  static LabelMap identity(int m) {
    LabelMap map;
    map.to_target.resize(m);
    for (int i = 0; i < m; ++i) map.to_target[i] = i;
    return map;
  }

  /// Rejects anything that is not a permutation onto [0, m).
  void validate(int num_source_labels, int num_target_labels) const {
    if (size() != num_source_labels || num_source_labels != num_target_labels)
      throw std::invalid_argument("label map: inventories differ in size");
    std::vector<bool> seen(num_target_labels, false);
    for (int t : to_target) {
      if (t < 0 || t >= num_target_labels || seen[t])
        throw std::invalid_argument("label map: not a bijection");
      seen[t] = true;
    }
  }

  /// Matches names across two label sets; every source name must appear in
  /// the target set.
  static LabelMap by_name(const LabelSet& source, const LabelSet& target) {
    if (source.size() != target.size())
      throw std::invalid_argument("label map: inventories differ in size");
    LabelMap map;
    map.to_target.reserve(source.size());
    for (int i = 0; i < source.size(); ++i) {
      int t = target.find(source.name(i));
      if (t < 0)
        throw std::invalid_argument("label map: source label \"" +
                                    source.name(i) +
                                    "\" missing from target set");
      map.to_target.push_back(t);
    }
    return map;
  }
};

/// Tags a source sentence with the source model and returns the node
/// marginals as a posterior table.
inline PosteriorTable source_posteriors(const CrfModel& model,
                                        const Sentence& sentence) {
  InferenceTables t = run_inference(model, sentence);
  PosteriorTable out(t.length, t.num_labels);
  for (int i = 0; i < t.length; ++i)
    for (int j = 0; j < t.num_labels; ++j) out.at(i, j) = t.node(i, j);
  return out;
}

namespace detail {
/// Distinct source indices aligned to each target position.
inline std::vector<std::vector<int>> links_by_target(const AlignedPair& pair) {
  std::vector<std::vector<int>> by_target(pair.target.tokens.size());
  for (const auto& [s, t] : pair.links) by_target[t].push_back(s);
  for (auto& v : by_target) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  return by_target;
}
}  // namespace detail

/// Projects source posteriors onto the target sentence. Aligned target
/// positions get the mean of their linked rows (label indices mapped
/// through label_map); unaligned positions get an all-zero masked row.
inline TargetExpectations project(const AlignedPair& pair,
                                  const PosteriorTable& posteriors,
                                  const LabelMap& label_map) {
  pair.validate();
  posteriors.validate();
  if (posteriors.length != static_cast<int>(pair.source.tokens.size()))
    throw std::invalid_argument("project: posterior rows do not match source");
  const int m = posteriors.num_labels;
  label_map.validate(m, m);

  const int nt = static_cast<int>(pair.target.tokens.size());
  TargetExpectations out(nt, m);
  auto by_target = detail::links_by_target(pair);
  for (int i = 0; i < nt; ++i) {
    const auto& srcs = by_target[i];
    if (srcs.empty()) continue;
    out.aligned[i] = true;
    double inv = 1.0 / static_cast<double>(srcs.size());
    for (int s : srcs)
      for (int j = 0; j < m; ++j)
        out.at(i, label_map.to_target[j]) += inv * posteriors.at(s, j);
    // Averaging simplex rows stays on the simplex; renormalize only if the
    // inputs were already out of tolerance.
    double sum = 0.0;
    for (int j = 0; j < m; ++j) sum += out.at(i, j);
    if (std::abs(sum - 1.0) > 1e-8 && sum > 0.0)
      for (int j = 0; j < m; ++j) out.at(i, j) /= sum;
  }
  out.validate();
  return out;
}

/// Hard projection for the project-then-train baseline: argmax of each
/// projected row (ties toward the lower index), the outside label where no
/// link exists. Every position ends up labeled.
inline LabelSequence project_hard_labels(const AlignedPair& pair,
                                         const PosteriorTable& posteriors,
                                         const LabelMap& label_map,
                                         int outside_label) {
  TargetExpectations soft = project(pair, posteriors, label_map);
  if (outside_label < 0 || outside_label >= soft.num_labels)
    throw std::invalid_argument("project_hard_labels: bad outside label");
  LabelSequence seq;
  seq.labels.resize(soft.length, outside_label);
  for (int i = 0; i < soft.length; ++i) {
    if (!soft.aligned[i]) continue;
    int arg = 0;
    double best = soft.at(i, 0);
    for (int j = 1; j < soft.num_labels; ++j)
      if (soft.at(i, j) > best) {
        best = soft.at(i, j);
        arg = j;
      }
    seq.labels[i] = arg;
  }
  return seq;
}

}  // namespace xlcrf

#endif  // XLCRF_PROJECTION_HPP_
