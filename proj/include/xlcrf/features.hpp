// xlcrf/features.hpp
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

#ifndef XLCRF_FEATURES_HPP_
#define XLCRF_FEATURES_HPP_

#include <cctype>
#include <stdexcept>
#include <string>
#include <vector>

#include "xlcrf/core.hpp"

namespace xlcrf {

// Template set, all indicator-valued:
//   w    current word            lw   lowercased word
//   p1-4 prefixes               s1-4  suffixes
//   sh   shape signature         pw   previous word ("<s>" at BOS)
//   nw   next word ("</s>" at EOS)
// Each is conjoined with the current label: "y<cur>:<template>".
// One transition template "T:<prev>><cur>" with prev "B" at sentence start.

namespace detail {

inline std::string word_shape(const std::string& w) {
  std::string shape;
  char prev = 0;
  int run = 0;
  auto flush = [&] {
    if (prev == 0) return;
    shape.push_back(prev);
    if (run > 1) shape.push_back('+');
  };
  for (unsigned char c : w) {
    char cls;
    if (std::isupper(c)) cls = 'X';
    else if (std::islower(c)) cls = 'x';
    else if (std::isdigit(c)) cls = 'd';
    else cls = 'p';
    if (cls == prev) {
      ++run;
    } else {
      flush();
      prev = cls;
      run = 1;
    }
  }
  flush();
  return shape;
}

inline std::string lowercased(const std::string& w) {
  std::string out = w;
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

/// Label-independent template strings for one position, without the label
/// conjunction prefix.
inline std::vector<std::string> node_template_values(const Sentence& sentence,
                                                     int position) {
  const std::string& w = sentence.tokens[position];
  std::vector<std::string> out;
  out.reserve(12);
  out.push_back("w=" + w);
  out.push_back("lw=" + lowercased(w));
  int len = static_cast<int>(w.size());
  for (int k = 1; k <= 4 && k <= len; ++k)
    out.push_back("p" + std::to_string(k) + "=" + w.substr(0, k));
  for (int k = 1; k <= 4 && k <= len; ++k)
    out.push_back("s" + std::to_string(k) + "=" + w.substr(len - k));
  out.push_back("sh=" + word_shape(w));
  out.push_back("pw=" + (position > 0 ? sentence.tokens[position - 1]
                                      : std::string("<s>")));
  out.push_back("nw=" + (position + 1 < sentence.size()
                             ? sentence.tokens[position + 1]
                             : std::string("</s>")));
  return out;
}

inline std::string conjoin(int cur_label, const std::string& value) {
  return "y" + std::to_string(cur_label) + ":" + value;
}

inline std::string transition_name(int prev_label, int cur_label) {
  std::string prev =
      prev_label == kBosLabel ? std::string("B") : std::to_string(prev_label);
  return "T:" + prev + ">" + std::to_string(cur_label);
}

}  // namespace detail

/// Extracts the sparse feature vector for a (position, prev label, current
/// label) factor. On an unfrozen index new features are allocated; on a
/// frozen index unseen features are silently dropped.
inline FeatureVector extract_features(const Sentence& sentence, int position,
                                      int prev_label, int cur_label,
                                      FeatureIndex& index) {
  if (position < 0 || position >= sentence.size())
    throw std::out_of_range("extract_features: position out of range");
  if (cur_label < 0 || prev_label < kBosLabel)
    throw std::invalid_argument("extract_features: bad label index");
  FeatureVector fv;
  for (const std::string& v : detail::node_template_values(sentence, position))
    fv.add(index.lookup(detail::conjoin(cur_label, v)), 1.0);
  fv.add(index.lookup(detail::transition_name(prev_label, cur_label)), 1.0);
  fv.compact();
  return fv;
}

/// Per-sentence feature ids resolved against one index: node features per
/// (position, label) and the shared transition table with row 0 = BOS.
struct CompiledSentence {
  int length = 0;
  int num_labels = 0;
  std::vector<std::vector<int>> node_features;  // [pos * m + label]
  std::vector<int> transition;                  // [(prev + 1) * m + cur], -1 if absent

  const std::vector<int>& node(int pos, int label) const {
    return node_features[pos * num_labels + label];
  }
  int trans(int prev_label, int cur_label) const {
    return transition[(prev_label + 1) * num_labels + cur_label];
  }
};

/// Registers every feature of the sentence (all labels at all positions,
/// all transitions) in an unfrozen index.
inline void index_features(const Sentence& sentence, int num_labels,
                           FeatureIndex& index) {
  if (index.frozen())
    throw std::logic_error("index_features: index already frozen");
  sentence.validate();
  for (int i = 0; i < sentence.size(); ++i) {
    auto values = detail::node_template_values(sentence, i);
    for (int y = 0; y < num_labels; ++y)
      for (const std::string& v : values) index.lookup(detail::conjoin(y, v));
  }
  for (int prev = kBosLabel; prev < num_labels; ++prev)
    for (int cur = 0; cur < num_labels; ++cur)
      index.lookup(detail::transition_name(prev, cur));
}

/// Resolves a sentence against a (typically frozen) index once, so training
/// loops never repeat string work. Unseen features come out dropped.
inline CompiledSentence compile_sentence(const Sentence& sentence,
                                         int num_labels,
                                         const FeatureIndex& index) {
  sentence.validate();
  CompiledSentence cs;
  cs.length = sentence.size();
  cs.num_labels = num_labels;
  cs.node_features.resize(static_cast<size_t>(cs.length) * num_labels);
  for (int i = 0; i < cs.length; ++i) {
    auto values = detail::node_template_values(sentence, i);
    for (int y = 0; y < num_labels; ++y) {
      std::vector<int>& ids = cs.node_features[i * num_labels + y];
      ids.reserve(values.size());
      for (const std::string& v : values) {
        int id = index.find(detail::conjoin(y, v));
        if (id >= 0) ids.push_back(id);
      }
    }
  }
  cs.transition.assign(static_cast<size_t>(num_labels + 1) * num_labels, -1);
  for (int prev = kBosLabel; prev < num_labels; ++prev)
    for (int cur = 0; cur < num_labels; ++cur)
      cs.transition[(prev + 1) * num_labels + cur] =
          index.find(detail::transition_name(prev, cur));
  return cs;
}

}  // namespace xlcrf

#endif  // XLCRF_FEATURES_HPP_
