// tests/test_features.cpp
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

#include <algorithm>
#include <set>
#include <string>

#include <catch2/catch_amalgamated.hpp>

#include "xlcrf/core.hpp"
#include "xlcrf/features.hpp"

using namespace xlcrf;

TEST_CASE("word shape collapses character-class runs") {
  CHECK(detail::word_shape("Geneva") == "Xx+");
  CHECK(detail::word_shape("NASA") == "X+");
  CHECK(detail::word_shape("a") == "x");
  CHECK(detail::word_shape("1984") == "d+");
  CHECK(detail::word_shape("B-52s") == "Xpd+x");
  CHECK(detail::word_shape("re-elect") == "x+px+");
  CHECK(detail::word_shape("...") == "p+");
  CHECK(detail::word_shape("McADAM") == "XxX+");
}

TEST_CASE("node templates cover word, affixes, shape and neighbors") {
  Sentence s({"The", "river", "Rhine"});
  auto mid = detail::node_template_values(s, 1);
  std::set<std::string> values(mid.begin(), mid.end());
  CHECK(values.count("w=river"));
  CHECK(values.count("lw=river"));
  CHECK(values.count("p1=r"));
  CHECK(values.count("p4=rive"));
  CHECK(values.count("s1=r"));
  CHECK(values.count("s4=iver"));
  CHECK(values.count("sh=x+"));
  CHECK(values.count("pw=The"));
  CHECK(values.count("nw=Rhine"));

  auto first = detail::node_template_values(s, 0);
  CHECK(std::count(first.begin(), first.end(), "pw=<s>") == 1);
  auto last = detail::node_template_values(s, 2);
  CHECK(std::count(last.begin(), last.end(), "nw=</s>") == 1);
}

TEST_CASE("short words emit only the affixes they have") {
  Sentence s({"ab"});
  auto values = detail::node_template_values(s, 0);
  std::set<std::string> set(values.begin(), values.end());
  CHECK(set.count("p1=a"));
  CHECK(set.count("p2=ab"));
  CHECK(!set.count("p3=ab"));
  CHECK(set.count("s1=b"));
  CHECK(set.count("s2=ab"));
}

TEST_CASE("extracted features conjoin the current label") {
  Sentence s({"Rhine", "valley"});
  FeatureIndex index;
  FeatureVector fv = extract_features(s, 0, kBosLabel, 1, index);
  for (const auto& e : fv.entries()) {
    const std::string& name = index.name(e.id);
    bool node = name.rfind("y1:", 0) == 0;
    bool trans = name == "T:B>1";
    CHECK((node || trans));
    CHECK(e.value == 1.0);
  }
  // Same position under a different label shares no features.
  FeatureVector other = extract_features(s, 0, kBosLabel, 0, index);
  std::set<int> ids;
  for (const auto& e : fv.entries()) ids.insert(e.id);
  for (const auto& e : other.entries()) CHECK(!ids.count(e.id));
}

TEST_CASE("interior transitions name both labels") {
  Sentence s({"Rhine", "valley"});
  FeatureIndex index;
  extract_features(s, 1, 2, 0, index);
  CHECK(index.find("T:2>0") >= 0);
  CHECK(index.find("T:B>0") == -1);
}

TEST_CASE("extraction rejects bad positions and labels") {
  Sentence s({"one"});
  FeatureIndex index;
  CHECK_THROWS_AS(extract_features(s, 1, kBosLabel, 0, index),
                  std::out_of_range);
  CHECK_THROWS_AS(extract_features(s, -1, kBosLabel, 0, index),
                  std::out_of_range);
  CHECK_THROWS_AS(extract_features(s, 0, kBosLabel, -1, index),
                  std::invalid_argument);
  CHECK_THROWS_AS(extract_features(s, 0, -2, 0, index), std::invalid_argument);
}

TEST_CASE("frozen index drops unseen features instead of allocating") {
  Sentence seen({"alpha"});
  FeatureIndex index;
  index_features(seen, 2, index);
  index.freeze();
  int before = index.size();

  Sentence unseen({"omega"});
  FeatureVector fv = extract_features(unseen, 0, kBosLabel, 0, index);
  CHECK(index.size() == before);
  // Only the templates shared with "alpha" survive: boundary neighbors,
  // the all-lowercase shape, the final-letter suffix and the transition.
  std::set<std::string> names;
  for (const auto& e : fv.entries()) names.insert(index.name(e.id));
  CHECK(names == std::set<std::string>{"y0:pw=<s>", "y0:nw=</s>", "y0:sh=x+",
                                       "y0:s1=a", "T:B>0"});
}

TEST_CASE("compile resolves the same ids extraction would") {
  Sentence s({"Bonn", "am", "Rhein"});
  const int m = 3;
  FeatureIndex index;
  index_features(s, m, index);
  index.freeze();
  CompiledSentence cs = compile_sentence(s, m, index);
  REQUIRE(cs.length == 3);
  REQUIRE(cs.num_labels == m);

  for (int i = 0; i < cs.length; ++i)
    for (int prev = (i == 0 ? kBosLabel : 0); prev < (i == 0 ? 0 : m); ++prev)
      for (int cur = 0; cur < m; ++cur) {
        FeatureIndex scratch = index;
        FeatureVector fv = extract_features(s, i, prev, cur, scratch);
        std::set<int> expected;
        for (const auto& e : fv.entries()) expected.insert(e.id);
        std::set<int> got(cs.node(i, cur).begin(), cs.node(i, cur).end());
        int t = cs.trans(prev, cur);
        REQUIRE(t >= 0);
        got.insert(t);
        CHECK(got == expected);
      }
}

TEST_CASE("indexing a second sentence reuses shared features") {
  Sentence a({"Bonn"});
  Sentence b({"Bonn", "Bonn"});
  FeatureIndex index;
  index_features(a, 2, index);
  int after_first = index.size();
  index_features(b, 2, index);
  // Every template of the single-token sentence already existed except the
  // neighbor templates that change with context.
  CHECK(index.size() > after_first);
  CHECK(index.find("y0:w=Bonn") >= 0);
  CHECK_THROWS_AS(
      [&] {
        index.freeze();
        index_features(a, 2, index);
      }(),
      std::logic_error);
}
