// tests/test_projection.cpp
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

#include <cmath>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "support/oracles.hpp"
#include "xlcrf/ge.hpp"
#include "xlcrf/projection.hpp"
#include "xlcrf/rng.hpp"
#include "xlcrf/trainer.hpp"

using namespace xlcrf;
using namespace xlcrf::testing;

namespace {

PosteriorTable random_posteriors(SplitMix64& rng, int n, int m) {
  PosteriorTable p(n, m);
  for (int i = 0; i < n; ++i) {
    double sum = 0.0;
    for (int j = 0; j < m; ++j) {
      double g = 1e-9 - std::log(1.0 - rng.uniform());
      p.at(i, j) = g;
      sum += g;
    }
    for (int j = 0; j < m; ++j) p.at(i, j) /= sum;
  }
  return p;
}

AlignedPair make_pair_tokens(int ns, int nt,
                             std::vector<std::pair<int, int>> links) {
  AlignedPair pair;
  for (int i = 0; i < ns; ++i) pair.source.tokens.push_back("s" + std::to_string(i));
  for (int i = 0; i < nt; ++i) pair.target.tokens.push_back("t" + std::to_string(i));
  pair.links = std::move(links);
  return pair;
}

}  // namespace

TEST_CASE("posterior rows from a model live on the simplex") {
  SplitMix64 rng(401);
  Sentence s = random_sentence(rng, 6);
  const int m = 3;
  CrfModel model = random_model(rng, s, m, 4.0);
  PosteriorTable p = source_posteriors(model, s);
  REQUIRE(p.length == 6);
  REQUIRE(p.num_labels == m);
  CHECK_NOTHROW(p.validate());
  // Zero weights give uniform rows.
  for (double& w : model.weights) w = 0.0;
  PosteriorTable u = source_posteriors(model, s);
  for (int i = 0; i < u.length; ++i)
    for (int j = 0; j < m; ++j)
      CHECK(u.at(i, j) == Catch::Approx(1.0 / m));
}

TEST_CASE("a single link copies the source row") {
  SplitMix64 rng(402);
  const int m = 3;
  PosteriorTable post = random_posteriors(rng, 4, m);
  AlignedPair pair = make_pair_tokens(4, 3, {{2, 1}});

  TargetExpectations te = project(pair, post, LabelMap::identity(m));
  REQUIRE(te.length == 3);
  CHECK(!te.aligned[0]);
  CHECK(te.aligned[1]);
  CHECK(!te.aligned[2]);
  for (int j = 0; j < m; ++j) {
    CHECK(te.at(1, j) == Catch::Approx(post.at(2, j)));
    CHECK(te.at(0, j) == 0.0);
    CHECK(te.at(2, j) == 0.0);
  }
  CHECK_NOTHROW(te.validate());
}

TEST_CASE("many-to-one links average their source rows") {
  SplitMix64 rng(403);
  const int m = 3;
  PosteriorTable post = random_posteriors(rng, 5, m);
  AlignedPair pair = make_pair_tokens(5, 2, {{0, 0}, {3, 0}, {4, 0}});

  TargetExpectations te = project(pair, post, LabelMap::identity(m));
  for (int j = 0; j < m; ++j)
    CHECK(te.at(0, j) ==
          Catch::Approx((post.at(0, j) + post.at(3, j) + post.at(4, j)) / 3.0));
  CHECK(!te.aligned[1]);
}

TEST_CASE("duplicate links count once") {
  SplitMix64 rng(404);
  const int m = 2;
  PosteriorTable post = random_posteriors(rng, 3, m);
  AlignedPair once = make_pair_tokens(3, 1, {{0, 0}, {2, 0}});
  AlignedPair twice = make_pair_tokens(3, 1, {{0, 0}, {2, 0}, {0, 0}, {0, 0}});

  TargetExpectations a = project(once, post, LabelMap::identity(m));
  TargetExpectations b = project(twice, post, LabelMap::identity(m));
  CHECK(a.table == b.table);
}

TEST_CASE("link order never matters") {
  SplitMix64 rng(405);
  const int m = 3;
  PosteriorTable post = random_posteriors(rng, 6, m);
  std::vector<std::pair<int, int>> links = {{0, 0}, {1, 0}, {2, 1}, {5, 3}, {4, 3}};
  AlignedPair fwd = make_pair_tokens(6, 4, links);
  std::reverse(links.begin(), links.end());
  AlignedPair rev = make_pair_tokens(6, 4, links);

  TargetExpectations a = project(fwd, post, LabelMap::identity(m));
  TargetExpectations b = project(rev, post, LabelMap::identity(m));
  CHECK(a.table == b.table);
  CHECK(a.aligned == b.aligned);
}

TEST_CASE("removing the links of one position only changes that row") {
  SplitMix64 rng(406);
  const int m = 3;
  PosteriorTable post = random_posteriors(rng, 6, m);
  AlignedPair full = make_pair_tokens(6, 3, {{0, 0}, {1, 1}, {2, 1}, {3, 2}});
  AlignedPair cut = make_pair_tokens(6, 3, {{0, 0}, {3, 2}});

  TargetExpectations a = project(full, post, LabelMap::identity(m));
  TargetExpectations b = project(cut, post, LabelMap::identity(m));
  CHECK(b.aligned[0]);
  CHECK(!b.aligned[1]);
  CHECK(b.aligned[2]);
  for (int j = 0; j < m; ++j) {
    CHECK(b.at(0, j) == a.at(0, j));
    CHECK(b.at(1, j) == 0.0);
    CHECK(b.at(2, j) == a.at(2, j));
  }
}

TEST_CASE("label maps permute projected columns") {
  SplitMix64 rng(407);
  const int m = 3;
  PosteriorTable post = random_posteriors(rng, 4, m);
  AlignedPair pair = make_pair_tokens(4, 4, {{0, 0}, {1, 1}, {2, 2}, {3, 3}});

  LabelMap rot;
  rot.to_target = {1, 2, 0};
  TargetExpectations plain = project(pair, post, LabelMap::identity(m));
  TargetExpectations mapped = project(pair, post, rot);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < m; ++j)
      CHECK(mapped.at(i, rot.to_target[j]) == Catch::Approx(plain.at(i, j)));
}

TEST_CASE("label map validation rejects non-bijections") {
  LabelMap map;
  map.to_target = {0, 1, 1};
  CHECK_THROWS_AS(map.validate(3, 3), std::invalid_argument);
  map.to_target = {0, 1, 3};
  CHECK_THROWS_AS(map.validate(3, 3), std::invalid_argument);
  map.to_target = {0, 1};
  CHECK_THROWS_AS(map.validate(3, 3), std::invalid_argument);
  map.to_target = {2, 0, 1};
  CHECK_NOTHROW(map.validate(3, 3));
}

TEST_CASE("label maps match names across inventories") {
  LabelSet src({"O", "B-PER", "I-PER"}, TaggingScheme::kBio);
  LabelSet dst({"B-PER", "I-PER", "O"}, TaggingScheme::kBio);
  LabelMap map = LabelMap::by_name(src, dst);
  CHECK(map.to_target == std::vector<int>{2, 0, 1});

  LabelSet other({"O", "B-LOC", "I-LOC"}, TaggingScheme::kBio);
  CHECK_THROWS_AS(LabelMap::by_name(src, other), std::invalid_argument);
}

TEST_CASE("hard projection is the argmax of the soft projection") {
  SplitMix64 rng(408);
  const int m = 4;
  PosteriorTable post = random_posteriors(rng, 7, m);
  AlignedPair pair =
      make_pair_tokens(7, 5, {{0, 0}, {1, 0}, {2, 2}, {4, 3}, {6, 3}});
  LabelMap map = LabelMap::identity(m);
  const int outside = 0;

  TargetExpectations soft = project(pair, post, map);
  LabelSequence hard = project_hard_labels(pair, post, map, outside);
  LabelSequence from_soft = hard_labels_from_targets(soft, outside);
  CHECK(hard.labels == from_soft.labels);

  // Unaligned positions carry the outside label.
  CHECK(hard.labels[1] == outside);
  CHECK(hard.labels[4] == outside);

  // And hardening the soft table one-hots exactly those argmax labels.
  TargetExpectations hardened = harden(soft);
  for (int i = 0; i < soft.length; ++i) {
    if (!soft.aligned[i]) continue;
    CHECK(hardened.at(i, hard.labels[i]) == 1.0);
  }
}

TEST_CASE("projection validates inputs") {
  SplitMix64 rng(409);
  const int m = 2;
  PosteriorTable post = random_posteriors(rng, 3, m);

  AlignedPair bad_link = make_pair_tokens(3, 2, {{3, 0}});
  CHECK_THROWS_AS(project(bad_link, post, LabelMap::identity(m)),
                  std::invalid_argument);
  AlignedPair bad_target_link = make_pair_tokens(3, 2, {{0, 2}});
  CHECK_THROWS_AS(project(bad_target_link, post, LabelMap::identity(m)),
                  std::invalid_argument);

  AlignedPair wrong_rows = make_pair_tokens(4, 2, {{0, 0}});
  CHECK_THROWS_AS(project(wrong_rows, post, LabelMap::identity(m)),
                  std::invalid_argument);

  PosteriorTable broken = post;
  broken.at(0, 0) += 0.5;
  AlignedPair ok = make_pair_tokens(3, 2, {{0, 0}});
  CHECK_THROWS_AS(project(ok, broken, LabelMap::identity(m)),
                  std::invalid_argument);

  CHECK_THROWS_AS(project_hard_labels(ok, post, LabelMap::identity(m), m),
                  std::invalid_argument);
}
