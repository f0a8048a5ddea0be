// tests/support/conll_fixture.hpp
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

#ifndef XLCRF_TESTS_SUPPORT_CONLL_FIXTURE_HPP_
#define XLCRF_TESTS_SUPPORT_CONLL_FIXTURE_HPP_

// Ten-sentence scoring fixture covering boundary misses, merged and split
// spans, sequences starting with I- tags, entities flush against sentence
// ends, and false positives. The expected report text was produced by an
// independent reimplementation of the reference scoring algorithm and the
// counts were verified by hand: 14 gold spans, 12 predicted, 6 correct,
// 26 of 36 tokens labeled correctly.

#include <string>
#include <utility>
#include <vector>

#include "xlcrf/core.hpp"
#include "xlcrf/eval.hpp"

namespace xlcrf::testing {

inline LabelSet scoring_fixture_label_set() {
  return LabelSet({"O", "B-PER", "I-PER", "B-LOC", "I-LOC", "B-ORG", "I-ORG"},
                  TaggingScheme::kBio);
}

/// Gold and predicted label names, one inner vector per sentence.
inline std::pair<std::vector<std::vector<std::string>>,
                 std::vector<std::vector<std::string>>>
scoring_fixture_names() {
  std::vector<std::vector<std::string>> gold = {
      {"B-PER", "I-PER", "O", "B-LOC"},
      {"O", "B-PER", "I-PER", "I-PER", "O"},
      {"B-LOC", "B-LOC", "O"},
      {"I-PER", "I-PER", "O"},
      {"O", "O", "B-ORG"},
      {"B-PER", "O", "B-LOC", "I-LOC"},
      {"B-ORG", "I-ORG", "I-ORG"},
      {"O", "B-LOC", "O", "B-PER"},
      {"B-PER", "I-PER", "B-PER", "O"},
      {"O", "O", "O"},
  };
  std::vector<std::vector<std::string>> pred = {
      {"B-PER", "I-PER", "O", "B-LOC"},
      {"O", "B-PER", "I-PER", "O", "O"},
      {"B-LOC", "I-LOC", "O"},
      {"B-PER", "I-PER", "O"},
      {"O", "B-ORG", "I-ORG"},
      {"O", "O", "B-LOC", "I-LOC"},
      {"B-ORG", "I-ORG", "I-ORG"},
      {"B-LOC", "I-LOC", "O", "B-PER"},
      {"B-PER", "I-PER", "I-PER", "O"},
      {"O", "B-LOC", "O"},
  };
  return {std::move(gold), std::move(pred)};
}

inline std::vector<LabelSequence> to_sequences(
    const std::vector<std::vector<std::string>>& names, const LabelSet& ls) {
  std::vector<LabelSequence> out;
  out.reserve(names.size());
  for (const auto& sent : names) {
    LabelSequence seq;
    seq.labels.reserve(sent.size());
    for (const std::string& name : sent) seq.labels.push_back(ls.find(name));
    out.push_back(std::move(seq));
  }
  return out;
}

inline const char* scoring_fixture_expected_report() {
  return
      "processed 36 tokens with 14 phrases; found: 12 phrases; correct: 6.\n"
      "accuracy:  72.22%; precision:  50.00%; recall:  42.86%; FB1:  46.15\n"
      "              LOC: precision:  40.00%; recall:  40.00%; FB1:  40.00  5\n"
      "              ORG: precision:  50.00%; recall:  50.00%; FB1:  50.00  2\n"
      "              PER: precision:  60.00%; recall:  42.86%; FB1:  50.00  5\n";
}

}  // namespace xlcrf::testing

#endif  // XLCRF_TESTS_SUPPORT_CONLL_FIXTURE_HPP_
