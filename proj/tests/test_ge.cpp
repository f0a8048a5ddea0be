// tests/test_ge.cpp
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
#include "xlcrf/core.hpp"
#include "xlcrf/ge.hpp"
#include "xlcrf/inference.hpp"
#include "xlcrf/rng.hpp"

using namespace xlcrf;
using namespace xlcrf::testing;

TEST_CASE("target expectations validate the simplex and the mask") {
  TargetExpectations t(2, 3);
  CHECK_NOTHROW(t.validate());  // all rows unaligned and zero

  t.aligned[0] = true;
  t.at(0, 0) = 0.5;
  t.at(0, 1) = 0.5;
  CHECK_NOTHROW(t.validate());

  t.at(0, 1) = 0.6;
  CHECK_THROWS_AS(t.validate(), std::invalid_argument);
  t.at(0, 1) = 0.5;

  // Unaligned rows must be exactly zero.
  t.at(1, 2) = 1.0;
  CHECK_THROWS_AS(t.validate(), std::invalid_argument);
  t.aligned[1] = true;
  CHECK_NOTHROW(t.validate());

  t.at(1, 2) = -0.1;
  t.at(1, 0) = 1.1;
  CHECK_THROWS_AS(t.validate(), std::invalid_argument);
}

TEST_CASE("harden snaps aligned rows to one-hot and is idempotent") {
  TargetExpectations t(3, 3);
  t.aligned[0] = true;
  t.at(0, 0) = 0.2;
  t.at(0, 1) = 0.5;
  t.at(0, 2) = 0.3;
  // Exact tie between labels 0 and 2: the lower index wins.
  t.aligned[2] = true;
  t.at(2, 0) = 0.4;
  t.at(2, 1) = 0.2;
  t.at(2, 2) = 0.4;

  TargetExpectations h = harden(t);
  CHECK(h.aligned == t.aligned);
  CHECK(h.at(0, 0) == 0.0);
  CHECK(h.at(0, 1) == 1.0);
  CHECK(h.at(0, 2) == 0.0);
  CHECK(h.at(1, 0) == 0.0);
  CHECK(h.at(1, 1) == 0.0);
  CHECK(h.at(1, 2) == 0.0);
  CHECK(h.at(2, 0) == 1.0);
  CHECK(h.at(2, 2) == 0.0);

  TargetExpectations hh = harden(h);
  CHECK(hh.table == h.table);
  CHECK(hh.aligned == h.aligned);
}

TEST_CASE("ge value is zero when targets equal the marginals") {
  SplitMix64 rng(301);
  Sentence s = random_sentence(rng, 5);
  const int m = 3;
  CrfModel model = random_model(rng, s, m, 3.0);
  InferenceTables t = run_inference(model, s);

  TargetExpectations targets(s.size(), m);
  for (int i = 0; i < s.size(); ++i) {
    targets.aligned[i] = true;
    for (int j = 0; j < m; ++j) targets.at(i, j) = t.node(i, j);
  }
  CHECK(ge_value(model, s, targets) == Catch::Approx(0.0).margin(1e-18));
  // And the gradient vanishes with it: u is identically zero.
  std::vector<double> grad = ge_gradient(model, s, targets);
  for (double g : grad) CHECK(std::abs(g) < 1e-12);
}

TEST_CASE("ge value recomputes the negative squared error") {
  SplitMix64 rng(302);
  Sentence s = random_sentence(rng, 6);
  const int m = 3;
  CrfModel model = random_model(rng, s, m, 2.0);
  TargetExpectations targets = random_targets(rng, s.size(), m);
  InferenceTables t = run_inference(model, s);

  double expected = 0.0;
  for (int i = 0; i < s.size(); ++i) {
    if (!targets.aligned[i]) continue;
    for (int j = 0; j < m; ++j) {
      double d = targets.at(i, j) - t.node(i, j);
      expected -= d * d;
    }
  }
  CHECK(expected < 0.0);  // random targets never match exactly
  CHECK(ge_value(model, s, targets) == Catch::Approx(expected).epsilon(1e-12));
}

TEST_CASE("fully unaligned targets contribute nothing") {
  SplitMix64 rng(303);
  Sentence s = random_sentence(rng, 4);
  const int m = 3;
  CrfModel model = random_model(rng, s, m, 3.0);
  TargetExpectations targets(s.size(), m);  // no aligned rows

  CHECK(ge_value(model, s, targets) == 0.0);
  std::vector<double> grad = ge_gradient(model, s, targets);
  for (double g : grad) CHECK(g == 0.0);
}

TEST_CASE("ge gradient matches finite differences") {
  SplitMix64 rng(304);
  for (int trial = 0; trial < 8; ++trial) {
    int n = 1 + static_cast<int>(rng.bounded(5));
    int m = 2 + static_cast<int>(rng.bounded(2));
    Sentence s = random_sentence(rng, n);
    CrfModel model = random_model(rng, s, m, 3.0);
    TargetExpectations targets = random_targets(rng, n, m);

    std::vector<double> grad = ge_gradient(model, s, targets);
    auto fd = finite_difference(model.weights, [&](const std::vector<double>& w) {
      CrfModel probe = model;
      probe.weights = w;
      return ge_value(probe, s, targets);
    });
    INFO("trial " << trial << " n=" << n << " m=" << m);
    CHECK(max_rel_diff(grad, fd) < 1e-6);
  }
}

TEST_CASE("ge gradient matches the enumeration covariance") {
  SplitMix64 rng(305);
  for (int trial = 0; trial < 10; ++trial) {
    int n = 1 + static_cast<int>(rng.bounded(5));
    int m = 2 + static_cast<int>(rng.bounded(2));
    Sentence s = random_sentence(rng, n);
    CrfModel model = random_model(rng, s, m, 4.0);
    TargetExpectations targets = random_targets(rng, n, m);

    std::vector<double> grad = ge_gradient(model, s, targets);
    std::vector<double> oracle = ge_gradient_by_enumeration(model, s, targets);
    INFO("trial " << trial << " n=" << n << " m=" << m);
    CHECK(max_abs_diff(grad, oracle) < 1e-9);
  }
}

TEST_CASE("workspace intermediates expose the penalty structure") {
  SplitMix64 rng(306);
  Sentence s = random_sentence(rng, 5);
  const int m = 3;
  CrfModel model = random_model(rng, s, m, 2.0);
  TargetExpectations targets = random_targets(rng, s.size(), m, 0.7);
  CompiledSentence cs = compile_sentence(s, m, model.feature_index);
  InferenceTables t = run_inference(model, cs);

  std::vector<double> grad(model.weights.size(), 0.0);
  GeWorkspace w;
  accumulate_ge_gradient(cs, t, targets, grad, 1.0, &w);

  REQUIRE(w.length == s.size());
  REQUIRE(w.num_labels == m);
  double e_phi = 0.0;
  for (int i = 0; i < w.length; ++i)
    for (int j = 0; j < m; ++j) {
      if (targets.aligned[i]) {
        CHECK(w.expectation(i, j) == Catch::Approx(t.node(i, j)));
        CHECK(w.u(i, j) ==
              Catch::Approx(2.0 * (targets.at(i, j) - t.node(i, j))));
        e_phi += t.node(i, j) * w.u(i, j);
      } else {
        CHECK(w.expectation(i, j) == 0.0);
        CHECK(w.u(i, j) == 0.0);
      }
      CHECK(w.phi_prime(i, j) == w.u(i, j));
    }
  CHECK(w.expected_phi_prime == Catch::Approx(e_phi).margin(1e-12));
  for (double v : w.dp_alpha) CHECK(std::isfinite(v));
  for (double v : w.dp_beta) CHECK(std::isfinite(v));
}

TEST_CASE("gradient accumulation is linear in the scale") {
  SplitMix64 rng(307);
  Sentence s = random_sentence(rng, 4);
  const int m = 3;
  CrfModel model = random_model(rng, s, m, 2.0);
  TargetExpectations targets = random_targets(rng, s.size(), m);
  CompiledSentence cs = compile_sentence(s, m, model.feature_index);
  InferenceTables t = run_inference(model, cs);

  std::vector<double> base(model.weights.size(), 0.0);
  std::vector<double> scaled(model.weights.size(), 0.0);
  accumulate_ge_gradient(cs, t, targets, base, 1.0);
  accumulate_ge_gradient(cs, t, targets, scaled, -2.5);
  for (size_t k = 0; k < base.size(); ++k)
    CHECK(scaled[k] == Catch::Approx(-2.5 * base[k]).margin(1e-12));
}

TEST_CASE("safe ratio clamps vanishing denominators") {
  CHECK(detail::safe_ratio(1.0, 2.0) == 0.5);
  CHECK(detail::safe_ratio(1.0, 0.0) == 0.0);
  CHECK(detail::safe_ratio(1.0, 1e-301) == 0.0);
  CHECK(detail::safe_ratio(0.0, 1.0) == 0.0);
}

TEST_CASE("dimension mismatches are rejected") {
  SplitMix64 rng(308);
  Sentence s = random_sentence(rng, 3);
  const int m = 2;
  CrfModel model = random_model(rng, s, m, 1.0);
  TargetExpectations wrong_len(4, m);
  CHECK_THROWS_AS(ge_value(model, s, wrong_len), std::invalid_argument);
  TargetExpectations wrong_m(3, m + 1);
  CHECK_THROWS_AS(ge_value(model, s, wrong_m), std::invalid_argument);
}
