// tools/gen_fixture.cpp
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
// Regenerates the bundled pipeline fixture under a given directory. The
// fixture is committed; rerunning this tool with no argument changes must
// reproduce it byte for byte.

#include <filesystem>
#include <iostream>
#include <string>

#include "xlcrf/io.hpp"
#include "xlcrf/synthetic.hpp"

namespace {

xlcrf::SyntheticOptions base_options() {
  xlcrf::SyntheticOptions opt;
  opt.context_vocab = 60;
  opt.entity_vocab = 15;
  opt.min_len = 5;
  opt.max_len = 9;
  return opt;
}

std::vector<std::pair<xlcrf::Sentence, xlcrf::LabelSequence>> as_source(
    const std::vector<std::pair<xlcrf::Sentence, xlcrf::LabelSequence>>& data) {
  auto out = data;
  for (auto& [sentence, labels] : out)
    for (auto& tok : sentence.tokens) tok = "s_" + tok;
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: gen_fixture <output-dir>\n";
    return 2;
  }
  const std::string dir = std::string(argv[1]) + "/";
  std::filesystem::create_directories(dir);

  auto opt = base_options();
  opt.num_pairs = 80;
  opt.seed = 11;
  auto bitext = xlcrf::generate_synthetic(opt);
  opt.num_pairs = 120;
  opt.seed = 12;
  auto source_train = xlcrf::generate_synthetic(opt);
  opt.num_pairs = 20;
  opt.seed = 13;
  auto train = xlcrf::generate_synthetic(opt);
  opt.num_pairs = 30;
  opt.seed = 14;
  auto dev = xlcrf::generate_synthetic(opt);
  opt.num_pairs = 40;
  opt.seed = 15;
  auto test = xlcrf::generate_synthetic(opt);

  const auto& labels = bitext.label_set;
  xlcrf::write_conll(dir + "train.conll", train.labeled, labels);
  xlcrf::write_conll(dir + "dev.conll", dev.labeled, labels);
  xlcrf::write_conll(dir + "test.conll", test.labeled, labels);
  xlcrf::write_conll(dir + "source_train.conll", as_source(source_train.labeled),
                     labels);

  {
    auto src = xlcrf::detail::open_for_write(dir + "bitext_source.txt");
    auto tgt = xlcrf::detail::open_for_write(dir + "bitext_target.txt");
    auto aln = xlcrf::detail::open_for_write(dir + "alignments.txt");
    for (const auto& [pair, targets] : bitext.bitext) {
      for (size_t i = 0; i < pair.source.tokens.size(); ++i)
        src << (i ? " " : "") << pair.source.tokens[i];
      src << '\n';
      for (size_t i = 0; i < pair.target.tokens.size(); ++i)
        tgt << (i ? " " : "") << pair.target.tokens[i];
      tgt << '\n';
      for (size_t i = 0; i < pair.links.size(); ++i)
        aln << (i ? " " : "") << pair.links[i].first << '-'
            << pair.links[i].second;
      aln << '\n';
    }
  }

  {
    auto cfg = xlcrf::detail::open_for_write(dir + "config.ini");
    cfg << "# pipeline fixture configuration\n";
    cfg << "labels = O,B-PER,I-PER,B-LOC,I-LOC\n";
    cfg << "scheme = bio\n";
    cfg << "train_path = train.conll\n";
    cfg << "dev_path = dev.conll\n";
    cfg << "test_path = test.conll\n";
    cfg << "source_train_path = source_train.conll\n";
    cfg << "bitext_source_path = bitext_source.txt\n";
    cfg << "bitext_target_path = bitext_target.txt\n";
    cfg << "alignments_path = alignments.txt\n";
    cfg << "output_dir = out\n";
    cfg << "ge_weight = 1.0\n";
    cfg << "l2_sigma = 10.0\n";
    cfg << "max_iterations = 40\n";
    cfg << "patience = 10\n";
    cfg << "lbfgs_history = 10\n";
    cfg << "projection_mode = soft\n";
    cfg << "seed = 42\n";
    cfg << "convergence_tol = 1e-8\n";
  }

  std::cout << "fixture written to " << dir << '\n';
  return 0;
}
