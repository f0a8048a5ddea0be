// xlcrf/core.hpp
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

#ifndef XLCRF_CORE_HPP_
#define XLCRF_CORE_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace xlcrf {

/// Distinguished previous-label value marking the virtual begin-of-sentence
/// state. Never a valid output label.
inline constexpr int kBosLabel = -1;

/// Segmentation scheme of a label inventory.
///   kBio: begin/inside prefixes; "B-X" opens an entity, "I-X" of the same
///         type extends it, anything else closes it.
///   kIo:  no begin marker; a maximal run of labels with the same entity
///         type forms one entity. Covers plain "X"-vs-"O" inventories as
///         well as begin/other inventories read as runs.
enum class TaggingScheme { kBio, kIo };

inline const char* to_string(TaggingScheme s) {
  return s == TaggingScheme::kBio ? "bio" : "io";
}

inline TaggingScheme parse_scheme(const std::string& s) {
  if (s == "bio") return TaggingScheme::kBio;
  if (s == "io") return TaggingScheme::kIo;
  throw std::invalid_argument("unknown tagging scheme: '" + s + "'");
}

/// How a single label participates in segmentation.
enum class LabelKind { kOutside, kBegin, kInside, kBare };

struct LabelParts {
  LabelKind kind;
  std::string type;  // empty for the outside label
};

/// The m output labels plus tagging-scheme metadata.
///
/// Exactly one label must be the outside label "O". Every other label must
/// decompose under the scheme: "B-X"/"I-X" for bio, and "X", "B-X" or "I-X"
/// for io, with X among the declared entity types.
class LabelSet {
 public:
  /// Empty sentinel; every real set comes from the validating constructors.
  LabelSet() = default;

  /// Entity types derived from the label names, in first-appearance order.
  LabelSet(const std::vector<std::string>& labels, TaggingScheme scheme)
      : LabelSet(labels, scheme, derived_entity_types(labels)) {}

  LabelSet(std::vector<std::string> labels, TaggingScheme scheme,
           std::vector<std::string> entity_types)
      : labels_(std::move(labels)),
        scheme_(scheme),
        entity_types_(std::move(entity_types)) {
    if (labels_.size() < 2)
      throw std::invalid_argument("label set needs at least 2 labels");
    outside_ = -1;
    for (int i = 0; i < static_cast<int>(labels_.size()); ++i) {
      const std::string& name = labels_[i];
      if (name.empty()) throw std::invalid_argument("empty label name");
      if (index_by_name_.count(name))
        throw std::invalid_argument("duplicate label: '" + name + "'");
      index_by_name_[name] = i;
      LabelParts p = decompose(name);
      if (p.kind == LabelKind::kOutside) {
        outside_ = i;
      } else {
        bool known = std::find(entity_types_.begin(), entity_types_.end(),
                               p.type) != entity_types_.end();
        if (!known)
          throw std::invalid_argument("label '" + name +
                                      "' has unknown entity type '" + p.type +
                                      "'");
        if (scheme_ == TaggingScheme::kBio && p.kind == LabelKind::kBare)
          throw std::invalid_argument("label '" + name +
                                      "' lacks a B-/I- prefix required by "
                                      "the bio scheme");
      }
      parts_.push_back(std::move(p));
    }
    if (outside_ < 0)
      throw std::invalid_argument("label set has no outside label 'O'");
  }

  int size() const { return static_cast<int>(labels_.size()); }
  const std::string& name(int label) const { return labels_.at(label); }
  const std::vector<std::string>& names() const { return labels_; }
  TaggingScheme scheme() const { return scheme_; }
  const std::vector<std::string>& entity_types() const {
    return entity_types_;
  }
  int outside_index() const { return outside_; }

  /// Index of a label name, or -1 if absent.
  int find(const std::string& name) const {
    auto it = index_by_name_.find(name);
    return it == index_by_name_.end() ? -1 : it->second;
  }

  /// Index of a label name; throws on unknown names.
  int index_of(const std::string& name) const {
    int found = find(name);
    if (found < 0)
      throw std::invalid_argument("unknown label: '" + name + "'");
    return found;
  }

  const LabelParts& parts(int label) const { return parts_.at(label); }

  /// Splits a raw label name into kind and entity type. "O" is outside,
  /// "B-X"/"I-X" carry prefixes, anything else is a bare type name.
  static LabelParts decompose(const std::string& name) {
    if (name == "O") return {LabelKind::kOutside, ""};
    if (name.size() > 2 && name[1] == '-') {
      if (name[0] == 'B') return {LabelKind::kBegin, name.substr(2)};
      if (name[0] == 'I') return {LabelKind::kInside, name.substr(2)};
    }
    return {LabelKind::kBare, name};
  }

  static std::vector<std::string> derived_entity_types(
      const std::vector<std::string>& labels) {
    std::vector<std::string> types;
    for (const std::string& name : labels) {
      LabelParts p = decompose(name);
      if (p.kind == LabelKind::kOutside) continue;
      if (std::find(types.begin(), types.end(), p.type) == types.end())
        types.push_back(p.type);
    }
    return types;
  }

 private:
  std::vector<std::string> labels_;
  TaggingScheme scheme_ = TaggingScheme::kBio;
  std::vector<std::string> entity_types_;
  std::vector<LabelParts> parts_;
  std::unordered_map<std::string, int> index_by_name_;
  int outside_ = -1;
};

/// A tokenized sentence. Tokens are opaque surface strings; extra_columns,
/// when present, carries pass-through per-token attributes from column
/// formats (one row per token).
struct Sentence {
  std::vector<std::string> tokens;
  std::vector<std::vector<std::string>> extra_columns;

  Sentence() = default;
  explicit Sentence(std::vector<std::string> toks) : tokens(std::move(toks)) {
    validate();
  }

  int size() const { return static_cast<int>(tokens.size()); }

  void validate() const {
    if (tokens.empty()) throw std::invalid_argument("empty sentence");
    for (const std::string& t : tokens)
      if (t.empty()) throw std::invalid_argument("empty token in sentence");
    if (!extra_columns.empty() && extra_columns.size() != tokens.size())
      throw std::invalid_argument("extra_columns/token count mismatch");
  }
};

/// Per-token label indices for one sentence.
struct LabelSequence {
  std::vector<int> labels;

  LabelSequence() = default;
  explicit LabelSequence(std::vector<int> l) : labels(std::move(l)) {}

  int size() const { return static_cast<int>(labels.size()); }
  int operator[](int i) const { return labels.at(i); }

  void validate(int sentence_length, int num_labels) const {
    if (static_cast<int>(labels.size()) != sentence_length)
      throw std::invalid_argument("label sequence length does not match "
                                  "sentence length");
    for (int l : labels)
      if (l < 0 || l >= num_labels)
        throw std::invalid_argument("label index out of range");
  }
};

/// Dense feature-name interning. Ids are contiguous from 0 in insertion
/// order. Once frozen, lookups of unseen names return absent instead of
/// allocating.
class FeatureIndex {
 public:
  FeatureIndex() = default;

  /// Returns the id for name, allocating on an unfrozen index. On a frozen
  /// index, unseen names yield -1.
  int lookup(const std::string& name) {
    auto it = ids_.find(name);
    if (it != ids_.end()) return it->second;
    if (frozen_) return -1;
    int id = static_cast<int>(names_.size());
    names_.push_back(name);
    ids_.emplace(name, id);
    return id;
  }

  /// Read-only lookup; -1 when absent.
  int find(const std::string& name) const {
    auto it = ids_.find(name);
    return it == ids_.end() ? -1 : it->second;
  }

  void freeze() { frozen_ = true; }
  bool frozen() const { return frozen_; }
  int size() const { return static_cast<int>(names_.size()); }
  const std::string& name(int id) const { return names_.at(id); }
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::unordered_map<std::string, int> ids_;
  std::vector<std::string> names_;
  bool frozen_ = false;
};

/// Sparse feature vector. Entries are kept with strictly increasing ids and
/// never hold zero values.
class FeatureVector {
 public:
  struct Entry {
    int id;
    double value;
  };

  FeatureVector() = default;

  /// Stages one (id, value) pair; ignored when id < 0 or value == 0.
  void add(int id, double value) {
    if (id < 0 || value == 0.0) return;
    entries_.push_back({id, value});
    sorted_ = false;
  }

  /// Sorts by id and merges duplicates; drops entries that cancel to zero.
  void compact() {
    if (sorted_) return;
    std::sort(entries_.begin(), entries_.end(),
              [](const Entry& a, const Entry& b) { return a.id < b.id; });
    std::vector<Entry> merged;
    merged.reserve(entries_.size());
    for (const Entry& e : entries_) {
      if (!merged.empty() && merged.back().id == e.id)
        merged.back().value += e.value;
      else
        merged.push_back(e);
    }
    merged.erase(std::remove_if(merged.begin(), merged.end(),
                                [](const Entry& e) { return e.value == 0.0; }),
                 merged.end());
    entries_ = std::move(merged);
    sorted_ = true;
  }

  const std::vector<Entry>& entries() const {
    if (!sorted_)
      throw std::logic_error("FeatureVector read before compact()");
    return entries_;
  }

  int size() const { return static_cast<int>(entries_.size()); }

  double dot(const std::vector<double>& weights) const {
    double s = 0.0;
    for (const Entry& e : entries()) s += weights[e.id] * e.value;
    return s;
  }

 private:
  std::vector<Entry> entries_;
  bool sorted_ = true;
};

/// Linear-chain CRF: a label set, a frozen feature index and the matching
/// weight vector. l2_sigma is the Gaussian-prior scale of the L2 penalty
/// ||theta||^2 / (2 sigma^2); +infinity disables the penalty.
struct CrfModel {
  LabelSet label_set;
  FeatureIndex feature_index;
  std::vector<double> weights;
  double l2_sigma = 1.0;

  CrfModel() = default;

  CrfModel(LabelSet ls, FeatureIndex fi, double sigma = 1.0)
      : label_set(std::move(ls)),
        feature_index(std::move(fi)),
        weights(feature_index.size(), 0.0),
        l2_sigma(sigma) {
    if (!(l2_sigma > 0.0))
      throw std::invalid_argument("l2_sigma must be positive");
  }

  int num_labels() const { return label_set.size(); }

  void validate() const {
    if (static_cast<int>(weights.size()) != feature_index.size())
      throw std::invalid_argument("weight vector length does not match "
                                  "feature index size");
    for (double w : weights)
      if (!std::isfinite(w))
        throw std::invalid_argument("non-finite weight in model");
  }
};

}  // namespace xlcrf

#endif  // XLCRF_CORE_HPP_
