// xlcrf/eval.hpp
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
// Entity-level scoring with conlleval semantics: spans are exact
// (type, start, end) matches, orphan continuation tags open a new span,
// and the text report reproduces the reference layout field for field.
// Also the paired bootstrap test over whole-sentence resamples.

#ifndef XLCRF_EVAL_HPP_
#define XLCRF_EVAL_HPP_

#include <cstdio>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "xlcrf/core.hpp"
#include "xlcrf/rng.hpp"

namespace xlcrf {

/// One labeled entity, end exclusive. Spans from one sequence never overlap.
struct EntitySpan {
  std::string type;
  int start = 0;
  int end = 0;

  friend bool operator==(const EntitySpan&, const EntitySpan&) = default;
  friend auto operator<=>(const EntitySpan&, const EntitySpan&) = default;
};

/// Segments a label sequence into entity spans.
///
/// Begin/inside schemes: a begin tag opens a span, an inside tag of the
/// same type extends it, anything else closes it. An inside tag with no
/// open span of its type starts one (conlleval repair convention).
/// Bare-type schemes: maximal same-type runs.
inline std::vector<EntitySpan> decode_spans(const LabelSequence& labels,
                                            const LabelSet& label_set) {
  labels.validate(static_cast<int>(labels.labels.size()), label_set.size());
  std::vector<EntitySpan> spans;
  int open_start = -1;
  std::string open_type;
  auto close = [&](int end) {
    if (open_start >= 0) spans.push_back({open_type, open_start, end});
    open_start = -1;
  };
  for (int i = 0; i < static_cast<int>(labels.labels.size()); ++i) {
    LabelParts p = label_set.parts(labels.labels[i]);
    switch (p.kind) {
      case LabelKind::kOutside:
        close(i);
        break;
      case LabelKind::kBegin:
        close(i);
        open_start = i;
        open_type = p.type;
        break;
      case LabelKind::kInside:
      case LabelKind::kBare:
        if (open_start >= 0 && open_type == p.type) break;
        close(i);
        open_start = i;
        open_type = p.type;
        break;
    }
  }
  close(static_cast<int>(labels.labels.size()));
  return spans;
}

/// Writes spans back to labels; everything uncovered is the outside label.
/// Spans must be in range, non-overlapping, with known entity types.
inline LabelSequence encode_spans(const std::vector<EntitySpan>& spans,
                                  int length, const LabelSet& label_set) {
  LabelSequence seq;
  seq.labels.assign(length, label_set.outside_index());
  std::vector<bool> used(length, false);
  for (const auto& span : spans) {
    if (span.start < 0 || span.end > length || span.start >= span.end)
      throw std::invalid_argument("encode_spans: span out of range");
    for (int i = span.start; i < span.end; ++i) {
      if (used[i]) throw std::invalid_argument("encode_spans: spans overlap");
      used[i] = true;
    }
    if (label_set.scheme() == TaggingScheme::kBio) {
      seq.labels[span.start] = label_set.index_of("B-" + span.type);
      for (int i = span.start + 1; i < span.end; ++i)
        seq.labels[i] = label_set.index_of("I-" + span.type);
    } else {
      int id = label_set.index_of(span.type);
      for (int i = span.start; i < span.end; ++i) seq.labels[i] = id;
    }
  }
  return seq;
}

/// Entity-level precision/recall/F1 plus token accuracy, all in [0, 100].
struct ScoreReport {
  struct TypeCounts {
    long gold = 0;
    long predicted = 0;
    long correct = 0;
  };

  long tokens = 0;
  long tokens_correct = 0;
  long gold = 0;
  long predicted = 0;
  long correct = 0;
  std::map<std::string, TypeCounts> per_type;  // sorted by type name

  static double pct(long num, long den) {
    return den > 0 ? 100.0 * static_cast<double>(num) / den : 0.0;
  }
  static double fb1(double p, double r) {
    return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
  }

  double accuracy() const { return pct(tokens_correct, tokens); }
  double precision() const { return pct(correct, predicted); }
  double recall() const { return pct(correct, gold); }
  double f1() const { return fb1(precision(), recall()); }

  /// Reference conlleval layout: overall header, accuracy line, then one
  /// line per entity type seen in gold or prediction.
  std::string conlleval_text() const {
    char buf[256];
    std::string out;
    std::snprintf(buf, sizeof(buf),
                  "processed %ld tokens with %ld phrases; found: %ld phrases;"
                  " correct: %ld.\n",
                  tokens, gold, predicted, correct);
    out += buf;
    std::snprintf(buf, sizeof(buf),
                  "accuracy: %6.2f%%; precision: %6.2f%%; recall: %6.2f%%;"
                  " FB1: %6.2f\n",
                  accuracy(), precision(), recall(), f1());
    out += buf;
    for (const auto& [type, c] : per_type) {
      double p = pct(c.correct, c.predicted);
      double r = pct(c.correct, c.gold);
      std::snprintf(buf, sizeof(buf),
                    "%17s: precision: %6.2f%%; recall: %6.2f%%; FB1: %6.2f"
                    "  %ld\n",
                    type.c_str(), p, r, fb1(p, r), c.predicted);
      out += buf;
    }
    return out;
  }
};

/// Scores predictions against gold at the entity level. Lists must align
/// sentence by sentence and token by token.
inline ScoreReport score(const std::vector<LabelSequence>& gold,
                         const std::vector<LabelSequence>& pred,
                         const LabelSet& label_set) {
  if (gold.size() != pred.size())
    throw std::invalid_argument("score: corpus sizes differ");
  ScoreReport r;
  for (size_t s = 0; s < gold.size(); ++s) {
    if (gold[s].labels.size() != pred[s].labels.size())
      throw std::invalid_argument("score: sentence lengths differ");
    r.tokens += static_cast<long>(gold[s].labels.size());
    for (size_t i = 0; i < gold[s].labels.size(); ++i)
      if (gold[s].labels[i] == pred[s].labels[i]) ++r.tokens_correct;
    auto gold_spans = decode_spans(gold[s], label_set);
    auto pred_spans = decode_spans(pred[s], label_set);
    r.gold += static_cast<long>(gold_spans.size());
    r.predicted += static_cast<long>(pred_spans.size());
    for (const auto& span : gold_spans) ++r.per_type[span.type].gold;
    for (const auto& span : pred_spans) ++r.per_type[span.type].predicted;
    for (const auto& span : pred_spans)
      for (const auto& g : gold_spans)
        if (span == g) {
          ++r.correct;
          ++r.per_type[span.type].correct;
          break;
        }
  }
  return r;
}

namespace detail {
/// Per-sentence sufficient statistics for corpus F1 under resampling.
struct SentenceCounts {
  long gold = 0;
  long predicted = 0;
  long correct = 0;
};

inline SentenceCounts count_sentence(const LabelSequence& gold,
                                     const LabelSequence& pred,
                                     const LabelSet& label_set) {
  SentenceCounts c;
  auto gs = decode_spans(gold, label_set);
  auto ps = decode_spans(pred, label_set);
  c.gold = static_cast<long>(gs.size());
  c.predicted = static_cast<long>(ps.size());
  for (const auto& span : ps)
    for (const auto& g : gs)
      if (span == g) {
        ++c.correct;
        break;
      }
  return c;
}

inline double counts_f1(long gold, long predicted, long correct) {
  double p = ScoreReport::pct(correct, predicted);
  double r = ScoreReport::pct(correct, gold);
  return ScoreReport::fb1(p, r);
}
}  // namespace detail

/// Paired bootstrap over whole sentences, testing whether system A beats
/// system B: p = fraction of resamples where F1_B >= F1_A. Ties count
/// toward the null, so identical systems give p = 1. Deterministic per
/// seed; each iteration draws from its own forked substream.
inline double paired_bootstrap(const std::vector<LabelSequence>& gold,
                               const std::vector<LabelSequence>& pred_a,
                               const std::vector<LabelSequence>& pred_b,
                               const LabelSet& label_set, int iterations,
                               uint64_t seed) {
  if (gold.empty()) throw std::invalid_argument("paired_bootstrap: empty corpus");
  if (gold.size() != pred_a.size() || gold.size() != pred_b.size())
    throw std::invalid_argument("paired_bootstrap: corpus sizes differ");
  if (iterations < 1)
    throw std::invalid_argument("paired_bootstrap: iterations must be >= 1");

  const size_t n = gold.size();
  std::vector<detail::SentenceCounts> a(n), b(n);
  for (size_t i = 0; i < n; ++i) {
    a[i] = detail::count_sentence(gold[i], pred_a[i], label_set);
    b[i] = detail::count_sentence(gold[i], pred_b[i], label_set);
  }

  SplitMix64 root(seed);
  long hits = 0;
  for (int it = 0; it < iterations; ++it) {
    SplitMix64 rng = root.fork(static_cast<uint64_t>(it));
    long ga = 0, pa = 0, ca = 0, gb = 0, pb = 0, cb = 0;
    for (size_t k = 0; k < n; ++k) {
      size_t idx = static_cast<size_t>(rng.bounded(n));
      ga += a[idx].gold;
      pa += a[idx].predicted;
      ca += a[idx].correct;
      gb += b[idx].gold;
      pb += b[idx].predicted;
      cb += b[idx].correct;
    }
    if (detail::counts_f1(gb, pb, cb) >= detail::counts_f1(ga, pa, ca))
      ++hits;
  }
  return static_cast<double>(hits) / iterations;
}

}  // namespace xlcrf

#endif  // XLCRF_EVAL_HPP_
