// xlcrf/synthetic.hpp
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
// Deterministic synthetic parallel NER corpus. Target sentences carry gold
// BIO labels over type-specific lexicons; the "source" side mirrors them
// word for word with identity alignments thinned to a coverage rate, and
// source posteriors are the gold labels smoothed with uniform noise. The
// boundary-entropy variant blurs a fraction of entity-initial posteriors
// toward the outside label, which hard projection then commits to.

#ifndef XLCRF_SYNTHETIC_HPP_
#define XLCRF_SYNTHETIC_HPP_

#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "xlcrf/core.hpp"
#include "xlcrf/projection.hpp"
#include "xlcrf/rng.hpp"

namespace xlcrf {

struct SyntheticOptions {
  int num_pairs = 500;
  int context_vocab = 140;     // shared non-entity words
  int entity_vocab = 30;       // words per entity type lexicon
  std::vector<std::string> types = {"PER", "LOC"};
  int min_len = 8;
  int max_len = 14;
  double entity_prob = 0.25;   // chance an entity starts at a free position
  int min_entity_len = 1;
  int max_entity_len = 3;
  double alignment_coverage = 0.9;  // per-position link retention
  double posterior_noise = 0.1;     // uniform smoothing mass
  double boundary_entropy = 0.0;    // outside-label mass at blurred starts
  double boundary_flip_prob = 0.0;  // fraction of entity starts blurred
  uint64_t seed = 1;
};

struct SyntheticCorpus {
  LabelSet label_set;
  // labeled[i].first is the same sentence as bitext[i].first.target.
  std::vector<std::pair<Sentence, LabelSequence>> labeled;
  std::vector<std::pair<AlignedPair, TargetExpectations>> bitext;
  std::vector<PosteriorTable> posteriors;  // source side, one per pair
};

namespace detail {
inline std::string numbered_word(const std::string& stem, int i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%03d", stem.c_str(), i);
  return buf;
}
}  // namespace detail

/// Generates the corpus. Everything is a pure function of the options.
inline SyntheticCorpus generate_synthetic(const SyntheticOptions& opt) {
  if (opt.num_pairs < 1 || opt.context_vocab < 1 || opt.entity_vocab < 1 ||
      opt.types.empty() || opt.min_len < 1 || opt.max_len < opt.min_len ||
      opt.min_entity_len < 1 || opt.max_entity_len < opt.min_entity_len)
    throw std::invalid_argument("synthetic options: bad sizes");

  std::vector<std::string> names = {"O"};
  for (const auto& t : opt.types) {
    names.push_back("B-" + t);
    names.push_back("I-" + t);
  }
  SyntheticCorpus out;
  out.label_set = LabelSet(names, TaggingScheme::kBio);
  const int m = out.label_set.size();
  const int outside = out.label_set.outside_index();

  SplitMix64 rng(opt.seed);
  for (int s = 0; s < opt.num_pairs; ++s) {
    int len = opt.min_len +
              static_cast<int>(rng.bounded(
                  static_cast<uint64_t>(opt.max_len - opt.min_len + 1)));
    Sentence target;
    LabelSequence gold;
    std::vector<bool> entity_start(len, false);
    int i = 0;
    while (i < len) {
      bool start = rng.uniform() < opt.entity_prob;
      if (start) {
        int type = static_cast<int>(rng.bounded(opt.types.size()));
        int elen = opt.min_entity_len +
                   static_cast<int>(rng.bounded(static_cast<uint64_t>(
                       opt.max_entity_len - opt.min_entity_len + 1)));
        if (elen > len - i) elen = len - i;
        const std::string& tname = opt.types[type];
        entity_start[i] = true;
        for (int k = 0; k < elen; ++k) {
          int word = static_cast<int>(rng.bounded(opt.entity_vocab));
          target.tokens.push_back(
              detail::numbered_word("e" + tname + "_", word));
          gold.labels.push_back(out.label_set.index_of(
              (k == 0 ? "B-" : "I-") + tname));
        }
        i += elen;
      } else {
        int word = static_cast<int>(rng.bounded(opt.context_vocab));
        target.tokens.push_back(detail::numbered_word("c", word));
        gold.labels.push_back(outside);
        ++i;
      }
    }

    // Word-for-word source with identity links, thinned per position.
    AlignedPair pair;
    pair.target = target;
    pair.source.tokens.reserve(target.tokens.size());
    for (const auto& tok : target.tokens) pair.source.tokens.push_back("s_" + tok);
    for (int p = 0; p < len; ++p)
      if (rng.uniform() < opt.alignment_coverage) pair.links.emplace_back(p, p);

    // Source posteriors: smoothed gold, with optional boundary blur.
    PosteriorTable post(len, m);
    for (int p = 0; p < len; ++p) {
      int truth = gold.labels[p];
      bool blur = opt.boundary_entropy > 0.0 && entity_start[p] &&
                  rng.uniform() < opt.boundary_flip_prob;
      for (int j = 0; j < m; ++j) {
        double core;
        if (blur)
          core = (j == outside ? opt.boundary_entropy : 0.0) +
                 (j == truth ? 1.0 - opt.boundary_entropy : 0.0);
        else
          core = (j == truth ? 1.0 : 0.0);
        post.at(p, j) =
            (1.0 - opt.posterior_noise) * core + opt.posterior_noise / m;
      }
    }
    post.validate();

    TargetExpectations targets =
        project(pair, post, LabelMap::identity(m));
    out.labeled.emplace_back(std::move(target), std::move(gold));
    out.bitext.emplace_back(std::move(pair), std::move(targets));
    out.posteriors.push_back(std::move(post));
  }
  return out;
}

}  // namespace xlcrf

#endif  // XLCRF_SYNTHETIC_HPP_
