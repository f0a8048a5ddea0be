// xlcrf/io.hpp
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
// File formats: CoNLL-style labeled text, whitespace-tokenized bitext,
// Pharaoh alignments, posterior and expectation tables, model files, and
// the flat key=value pipeline configuration. Readers reject structural
// corruption with line numbers instead of repairing it; CRLF input parses
// like LF.

#ifndef XLCRF_IO_HPP_
#define XLCRF_IO_HPP_

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "xlcrf/core.hpp"
#include "xlcrf/ge.hpp"
#include "xlcrf/projection.hpp"
#include "xlcrf/trainer.hpp"

namespace xlcrf {

namespace detail {

inline std::runtime_error file_error(const std::string& path, int line,
                                     const std::string& what) {
  return std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

inline std::ifstream open_for_read(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  return in;
}

inline std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  return out;
}

/// getline with trailing CR stripped, so CRLF files parse like LF.
inline bool read_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  for (size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

inline std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream iss(s);
  std::string tok;
  while (iss >> tok) out.push_back(tok);
  return out;
}

inline std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& s, const std::string& path,
                           int line) {
  try {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw file_error(path, line, "not a number: \"" + s + "\"");
  }
}

inline long parse_long(const std::string& s, const std::string& path, int line) {
  try {
    size_t pos = 0;
    long v = std::stol(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw file_error(path, line, "not an integer: \"" + s + "\"");
  }
}

}  // namespace detail

/// Reads CoNLL-style labeled sentences: one "token<TAB>...<TAB>label" line
/// per token, the last column the label, middle columns kept as opaque
/// attributes; blank lines separate sentences.
inline std::vector<std::pair<Sentence, LabelSequence>> read_conll(
    const std::string& path, const LabelSet& label_set) {
  auto in = detail::open_for_read(path);
  std::vector<std::pair<Sentence, LabelSequence>> out;
  Sentence sentence;
  LabelSequence labels;
  auto flush = [&] {
    if (sentence.tokens.empty()) return;
    out.emplace_back(std::move(sentence), std::move(labels));
    sentence = Sentence();
    labels = LabelSequence();
  };
  std::string line;
  int line_no = 0;
  while (detail::read_line(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) {
      flush();
      continue;
    }
    auto cols = detail::split(line, '\t');
    if (cols.size() < 2)
      throw detail::file_error(path, line_no, "expected token<TAB>label");
    if (cols.front().empty())
      throw detail::file_error(path, line_no, "empty token");
    int label = label_set.find(cols.back());
    if (label < 0)
      throw detail::file_error(path, line_no,
                               "unknown label \"" + cols.back() + "\"");
    sentence.tokens.push_back(cols.front());
    sentence.extra_columns.emplace_back(cols.begin() + 1, cols.end() - 1);
    labels.labels.push_back(label);
  }
  flush();
  return out;
}

/// Inverse of read_conll; columns are token, preserved attributes, label.
inline void write_conll(
    const std::string& path,
    const std::vector<std::pair<Sentence, LabelSequence>>& data,
    const LabelSet& label_set) {
  auto out = detail::open_for_write(path);
  for (size_t s = 0; s < data.size(); ++s) {
    const auto& [sentence, labels] = data[s];
    labels.validate(static_cast<int>(sentence.tokens.size()), label_set.size());
    for (size_t i = 0; i < sentence.tokens.size(); ++i) {
      out << sentence.tokens[i];
      if (i < sentence.extra_columns.size())
        for (const auto& col : sentence.extra_columns[i]) out << '\t' << col;
      out << '\t' << label_set.name(labels.labels[i]) << '\n';
    }
    if (s + 1 < data.size()) out << '\n';
  }
}

/// Reads whitespace-tokenized text, one sentence per line. Blank interior
/// lines are an error (a sentence cannot be empty); trailing blank lines
/// are ignored.
inline std::vector<Sentence> read_tokenized(const std::string& path) {
  auto in = detail::open_for_read(path);
  std::vector<Sentence> out;
  std::string line;
  int line_no = 0;
  int pending_blank_at = 0;
  while (detail::read_line(in, line)) {
    ++line_no;
    auto tokens = detail::split_ws(line);
    if (tokens.empty()) {
      if (pending_blank_at == 0) pending_blank_at = line_no;
      continue;
    }
    if (pending_blank_at != 0)
      throw detail::file_error(path, pending_blank_at, "empty sentence line");
    Sentence s;
    s.tokens = std::move(tokens);
    out.push_back(std::move(s));
  }
  return out;
}

/// Reads Pharaoh alignments: per line, space-separated "i-j" links with the
/// source index first, zero-based; an empty line is an empty link set.
inline std::vector<std::vector<std::pair<int, int>>> read_alignments(
    const std::string& path) {
  auto in = detail::open_for_read(path);
  std::vector<std::vector<std::pair<int, int>>> out;
  std::string line;
  int line_no = 0;
  while (detail::read_line(in, line)) {
    ++line_no;
    std::vector<std::pair<int, int>> links;
    for (const auto& tok : detail::split_ws(line)) {
      size_t dash = tok.find('-');
      if (dash == std::string::npos || dash == 0 || dash + 1 == tok.size())
        throw detail::file_error(path, line_no,
                                 "malformed alignment link \"" + tok + "\"");
      long s = detail::parse_long(tok.substr(0, dash), path, line_no);
      long t = detail::parse_long(tok.substr(dash + 1), path, line_no);
      if (s < 0 || t < 0)
        throw detail::file_error(path, line_no, "negative alignment index");
      links.emplace_back(static_cast<int>(s), static_cast<int>(t));
    }
    out.push_back(std::move(links));
  }
  return out;
}

namespace detail {
inline std::string format_prob(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}
}  // namespace detail

/// Writes posterior tables as TSV: a header, then one row per token as
/// "sentence_idx<TAB>token_idx<TAB>p_1..p_m" with 12 significant digits.
inline void write_posteriors(const std::string& path,
                             const std::vector<PosteriorTable>& tables) {
  int m = tables.empty() ? 0 : tables.front().num_labels;
  for (const auto& t : tables)
    if (t.num_labels != m)
      throw std::invalid_argument("write_posteriors: mixed label counts");
  auto out = detail::open_for_write(path);
  out << "sentence_idx\ttoken_idx";
  for (int j = 0; j < m; ++j) out << "\tp_" << (j + 1);
  out << '\n';
  for (size_t s = 0; s < tables.size(); ++s)
    for (int i = 0; i < tables[s].length; ++i) {
      out << s << '\t' << i;
      for (int j = 0; j < m; ++j)
        out << '\t' << detail::format_prob(tables[s].at(i, j));
      out << '\n';
    }
}

/// Reads posterior tables back. Token rows must be contiguous per sentence
/// and sentences contiguous from zero; rows must sit on the simplex within
/// 1e-6 (renormalized only when off by more than the storage tolerance).
/// If expected_lengths is given, the per-sentence row counts must match it.
inline std::vector<PosteriorTable> read_posteriors(
    const std::string& path,
    const std::vector<int>* expected_lengths = nullptr) {
  auto in = detail::open_for_read(path);
  std::string line;
  int line_no = 0;
  if (!detail::read_line(in, line))
    throw detail::file_error(path, 1, "missing header");
  ++line_no;
  auto header = detail::split(line, '\t');
  if (header.size() < 3 || header[0] != "sentence_idx" || header[1] != "token_idx")
    throw detail::file_error(path, line_no, "bad header");
  const int m = static_cast<int>(header.size()) - 2;

  std::vector<std::vector<double>> rows_by_sentence;
  while (detail::read_line(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    auto cols = detail::split(line, '\t');
    if (static_cast<int>(cols.size()) != m + 2)
      throw detail::file_error(path, line_no, "wrong column count");
    long s = detail::parse_long(cols[0], path, line_no);
    long i = detail::parse_long(cols[1], path, line_no);
    if (s < 0 || s > static_cast<long>(rows_by_sentence.size()))
      throw detail::file_error(path, line_no, "sentence index out of order");
    if (s == static_cast<long>(rows_by_sentence.size()))
      rows_by_sentence.emplace_back();
    if (s + 1 != static_cast<long>(rows_by_sentence.size()))
      throw detail::file_error(path, line_no, "sentence index out of order");
    auto& rows = rows_by_sentence[s];
    if (i != static_cast<long>(rows.size()) / m)
      throw detail::file_error(path, line_no, "token index out of order");
    double sum = 0.0;
    for (int j = 0; j < m; ++j) {
      double v = detail::parse_double(cols[2 + j], path, line_no);
      rows.push_back(v);
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-6)
      throw detail::file_error(path, line_no, "posterior row off the simplex");
    if (std::abs(sum - 1.0) > 1e-8)
      for (int j = 0; j < m; ++j) rows[rows.size() - m + j] /= sum;
  }
  if (expected_lengths) {
    if (rows_by_sentence.size() != expected_lengths->size())
      throw std::runtime_error(path + ": sentence count mismatch");
    for (size_t s = 0; s < rows_by_sentence.size(); ++s)
      if (static_cast<long>(rows_by_sentence[s].size()) !=
          static_cast<long>((*expected_lengths)[s]) * m)
        throw std::runtime_error(path + ": sentence " + std::to_string(s) +
                                 " row count does not match its length");
  }
  std::vector<PosteriorTable> out;
  out.reserve(rows_by_sentence.size());
  for (auto& rows : rows_by_sentence) {
    PosteriorTable t(static_cast<int>(rows.size()) / m, m);
    t.table = std::move(rows);
    t.validate();
    out.push_back(std::move(t));
  }
  return out;
}

/// Writes target expectation tables: like posteriors plus an aligned flag,
/// rows "sentence_idx<TAB>token_idx<TAB>aligned<TAB>p_1..p_m".
inline void write_expectations(const std::string& path,
                               const std::vector<TargetExpectations>& tables) {
  int m = tables.empty() ? 0 : tables.front().num_labels;
  for (const auto& t : tables)
    if (t.num_labels != m)
      throw std::invalid_argument("write_expectations: mixed label counts");
  auto out = detail::open_for_write(path);
  out << "sentence_idx\ttoken_idx\taligned";
  for (int j = 0; j < m; ++j) out << "\tp_" << (j + 1);
  out << '\n';
  for (size_t s = 0; s < tables.size(); ++s)
    for (int i = 0; i < tables[s].length; ++i) {
      out << s << '\t' << i << '\t' << (tables[s].aligned[i] ? 1 : 0);
      for (int j = 0; j < m; ++j)
        out << '\t' << detail::format_prob(tables[s].at(i, j));
      out << '\n';
    }
}

/// Reads target expectation tables written by write_expectations.
inline std::vector<TargetExpectations> read_expectations(
    const std::string& path) {
  auto in = detail::open_for_read(path);
  std::string line;
  int line_no = 0;
  if (!detail::read_line(in, line))
    throw detail::file_error(path, 1, "missing header");
  ++line_no;
  auto header = detail::split(line, '\t');
  if (header.size() < 4 || header[0] != "sentence_idx" ||
      header[1] != "token_idx" || header[2] != "aligned")
    throw detail::file_error(path, line_no, "bad header");
  const int m = static_cast<int>(header.size()) - 3;

  std::vector<TargetExpectations> out;
  std::vector<std::vector<double>> rows_by_sentence;
  std::vector<std::vector<bool>> mask_by_sentence;
  while (detail::read_line(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    auto cols = detail::split(line, '\t');
    if (static_cast<int>(cols.size()) != m + 3)
      throw detail::file_error(path, line_no, "wrong column count");
    long s = detail::parse_long(cols[0], path, line_no);
    long i = detail::parse_long(cols[1], path, line_no);
    long aligned = detail::parse_long(cols[2], path, line_no);
    if (aligned != 0 && aligned != 1)
      throw detail::file_error(path, line_no, "aligned flag must be 0 or 1");
    if (s < 0 || s > static_cast<long>(rows_by_sentence.size()))
      throw detail::file_error(path, line_no, "sentence index out of order");
    if (s == static_cast<long>(rows_by_sentence.size())) {
      rows_by_sentence.emplace_back();
      mask_by_sentence.emplace_back();
    }
    if (s + 1 != static_cast<long>(rows_by_sentence.size()))
      throw detail::file_error(path, line_no, "sentence index out of order");
    if (i != static_cast<long>(mask_by_sentence[s].size()))
      throw detail::file_error(path, line_no, "token index out of order");
    mask_by_sentence[s].push_back(aligned == 1);
    for (int j = 0; j < m; ++j)
      rows_by_sentence[s].push_back(
          detail::parse_double(cols[3 + j], path, line_no));
  }
  for (size_t s = 0; s < rows_by_sentence.size(); ++s) {
    TargetExpectations t(static_cast<int>(mask_by_sentence[s].size()), m);
    t.aligned = mask_by_sentence[s];
    t.table = std::move(rows_by_sentence[s]);
    t.validate();
    out.push_back(std::move(t));
  }
  return out;
}

/// Versioned plain-text model file: label inventory, prior, then one
/// "feature name<TAB>weight" line per feature in index order, weights
/// round-tripping exactly via %.17g.
inline void save_model(const std::string& path, const CrfModel& model) {
  model.validate();
  if (!model.feature_index.frozen())
    throw std::logic_error("save_model: feature index must be frozen");
  auto out = detail::open_for_write(path);
  out << "xlcrf-model 1\n";
  out << "scheme " << to_string(model.label_set.scheme()) << '\n';
  out << "labels " << model.label_set.size() << '\n';
  for (int i = 0; i < model.label_set.size(); ++i)
    out << model.label_set.name(i) << '\n';
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", model.l2_sigma);
  out << "l2_sigma " << buf << '\n';
  out << "features " << model.feature_index.size() << '\n';
  for (int f = 0; f < model.feature_index.size(); ++f) {
    std::snprintf(buf, sizeof(buf), "%.17g", model.weights[f]);
    out << model.feature_index.name(f) << '\t' << buf << '\n';
  }
}

inline CrfModel load_model(const std::string& path) {
  auto in = detail::open_for_read(path);
  std::string line;
  int line_no = 0;
  auto next = [&]() -> std::string {
    if (!detail::read_line(in, line))
      throw detail::file_error(path, line_no + 1, "unexpected end of file");
    ++line_no;
    return line;
  };
  if (next() != "xlcrf-model 1")
    throw detail::file_error(path, line_no, "not an xlcrf model file");
  auto scheme_line = detail::split_ws(next());
  if (scheme_line.size() != 2 || scheme_line[0] != "scheme")
    throw detail::file_error(path, line_no, "expected scheme line");
  TaggingScheme scheme = parse_scheme(scheme_line[1]);
  auto labels_line = detail::split_ws(next());
  if (labels_line.size() != 2 || labels_line[0] != "labels")
    throw detail::file_error(path, line_no, "expected labels line");
  long m = detail::parse_long(labels_line[1], path, line_no);
  std::vector<std::string> names;
  for (long i = 0; i < m; ++i) names.push_back(next());
  CrfModel model;
  model.label_set = LabelSet(names, scheme);
  auto sigma_line = detail::split_ws(next());
  if (sigma_line.size() != 2 || sigma_line[0] != "l2_sigma")
    throw detail::file_error(path, line_no, "expected l2_sigma line");
  model.l2_sigma = detail::parse_double(sigma_line[1], path, line_no);
  auto features_line = detail::split_ws(next());
  if (features_line.size() != 2 || features_line[0] != "features")
    throw detail::file_error(path, line_no, "expected features line");
  long count = detail::parse_long(features_line[1], path, line_no);
  for (long f = 0; f < count; ++f) {
    auto cols = detail::split(next(), '\t');
    if (cols.size() != 2)
      throw detail::file_error(path, line_no, "expected name<TAB>weight");
    int id = model.feature_index.lookup(cols[0]);
    if (id != static_cast<int>(f))
      throw detail::file_error(path, line_no, "duplicate feature name");
    model.weights.push_back(detail::parse_double(cols[1], path, line_no));
  }
  model.feature_index.freeze();
  model.validate();
  return model;
}

/// Flat key=value configuration with '#' comments. Duplicate keys are
/// rejected; unknown keys are rejected by the consumer.
inline std::map<std::string, std::string> parse_config_text(
    const std::string& text, const std::string& path = "<config>") {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (detail::read_line(in, line)) {
    ++line_no;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw detail::file_error(path, line_no, "expected key=value");
    std::string key = detail::trim(line.substr(0, eq));
    std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty()) throw detail::file_error(path, line_no, "empty key");
    if (!out.emplace(key, value).second)
      throw detail::file_error(path, line_no, "duplicate key \"" + key + "\"");
  }
  return out;
}

inline std::map<std::string, std::string> parse_config(const std::string& path) {
  auto in = detail::open_for_read(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), path);
}

/// Everything the pipeline needs, resolved from a config file plus flag
/// overrides. Path fields are optional per subcommand; set ones must exist.
struct PipelineConfig {
  std::string train_path, dev_path, test_path;
  std::string source_train_path, source_model_path;
  std::string bitext_source_path, bitext_target_path, alignments_path;
  std::string posteriors_path;
  std::string output_dir;
  std::vector<std::string> labels;
  TaggingScheme scheme = TaggingScheme::kBio;
  std::vector<std::pair<std::string, std::string>> label_map_names;  // src>dst
  TrainConfig train;

  static PipelineConfig from_map(const std::map<std::string, std::string>& kv,
                                 const std::string& origin = "<config>") {
    PipelineConfig cfg;
    for (const auto& [key, value] : kv) {
      if (key == "train_path") cfg.train_path = value;
      else if (key == "dev_path") cfg.dev_path = value;
      else if (key == "test_path") cfg.test_path = value;
      else if (key == "source_train_path") cfg.source_train_path = value;
      else if (key == "source_model_path") cfg.source_model_path = value;
      else if (key == "bitext_source_path") cfg.bitext_source_path = value;
      else if (key == "bitext_target_path") cfg.bitext_target_path = value;
      else if (key == "alignments_path") cfg.alignments_path = value;
      else if (key == "posteriors_path") cfg.posteriors_path = value;
      else if (key == "output_dir") cfg.output_dir = value;
      else if (key == "labels") {
        for (auto& name : detail::split(value, ',')) {
          std::string trimmed = detail::trim(name);
          if (!trimmed.empty()) cfg.labels.push_back(trimmed);
        }
      } else if (key == "scheme") cfg.scheme = parse_scheme(value);
      else if (key == "label_map") {
        for (auto& pair : detail::split(value, ',')) {
          std::string trimmed = detail::trim(pair);
          if (trimmed.empty()) continue;
          size_t gt = trimmed.find('>');
          if (gt == std::string::npos)
            throw std::runtime_error(origin + ": label_map entries are SRC>DST");
          cfg.label_map_names.emplace_back(detail::trim(trimmed.substr(0, gt)),
                                           detail::trim(trimmed.substr(gt + 1)));
        }
      } else if (key == "ge_weight")
        cfg.train.ge_weight = detail::parse_double(value, origin, 0);
      else if (key == "l2_sigma")
        cfg.train.l2_sigma = detail::parse_double(value, origin, 0);
      else if (key == "max_iterations")
        cfg.train.max_iterations =
            static_cast<int>(detail::parse_long(value, origin, 0));
      else if (key == "patience")
        cfg.train.patience = static_cast<int>(detail::parse_long(value, origin, 0));
      else if (key == "lbfgs_history")
        cfg.train.lbfgs_history =
            static_cast<int>(detail::parse_long(value, origin, 0));
      else if (key == "projection_mode")
        cfg.train.projection_mode = parse_projection_mode(value);
      else if (key == "seed")
        cfg.train.seed = static_cast<uint64_t>(detail::parse_long(value, origin, 0));
      else if (key == "convergence_tol")
        cfg.train.convergence_tol = detail::parse_double(value, origin, 0);
      else
        throw std::runtime_error(origin + ": unknown config key \"" + key + "\"");
    }
    return cfg;
  }

  /// Every set path (output_dir aside) must point at an existing file.
  void check_paths(const std::string& origin = "<config>") const {
    auto check = [&](const std::string& p, const char* key) {
      if (!p.empty() && !std::filesystem::exists(p))
        throw std::runtime_error(origin + ": " + key + " does not exist: " + p);
    };
    check(train_path, "train_path");
    check(dev_path, "dev_path");
    check(test_path, "test_path");
    check(source_train_path, "source_train_path");
    check(source_model_path, "source_model_path");
    check(bitext_source_path, "bitext_source_path");
    check(bitext_target_path, "bitext_target_path");
    check(alignments_path, "alignments_path");
  }

  LabelSet label_set() const {
    if (labels.empty())
      throw std::runtime_error("config: labels must be specified");
    return LabelSet(labels, scheme);
  }

  LabelMap label_map(const LabelSet& source, const LabelSet& target) const {
    if (label_map_names.empty()) return LabelMap::by_name(source, target);
    if (static_cast<int>(label_map_names.size()) != source.size())
      throw std::runtime_error("config: label_map must cover every label");
    LabelMap map;
    map.to_target.assign(source.size(), -1);
    for (const auto& [src, dst] : label_map_names) {
      int s = source.find(src);
      int t = target.find(dst);
      if (s < 0 || t < 0)
        throw std::runtime_error("config: label_map names unknown label \"" +
                                 src + ">" + dst + "\"");
      map.to_target[s] = t;
    }
    map.validate(source.size(), target.size());
    return map;
  }
};

}  // namespace xlcrf

#endif  // XLCRF_IO_HPP_
