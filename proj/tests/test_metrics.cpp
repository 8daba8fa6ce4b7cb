/* Copyright 2026 The segcrf Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "segcrf/metrics.hpp"

using namespace segcrf;

TEST_CASE("f1_at_k") {
  CHECK(f1_at_k({3, 7, 12}, {3, 12}) == doctest::Approx(0.8));
  CHECK(f1_at_k({5}, {5}) == 1.0);
  CHECK(f1_at_k({2, 9, 40}, {2, 9, 40}) == 1.0);
  CHECK(f1_at_k({1, 2, 3}, {10, 20}) == 0.0);
  CHECK(f1_at_k({}, {}) == 1.0);
  CHECK(f1_at_k({}, {4}) == 0.0);
  CHECK_THROWS_AS(f1_at_k({1, 2, 3, 4}, {1}), DataError);

  SUBCASE("tolerance window") {
    CHECK(f1_at_k({10}, {12}) == 0.0);
    CHECK(f1_at_k({10}, {12}, 3, 2) == 1.0);
    // One gold boundary cannot absorb two predictions.
    CHECK(f1_at_k({10, 11}, {12}, 3, 2) == doctest::Approx(2.0 / 3.0));
  }
  SUBCASE("symmetric, bounded, monotone in correct additions") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 300; ++trial) {
      BoundarySet a, b;
      for (std::size_t i = 0, n = rng() % 5; i < n; ++i) a.push_back(rng() % 15);
      for (std::size_t i = 0, n = 1 + rng() % 5; i < n; ++i) b.push_back(rng() % 15);
      std::sort(a.begin(), a.end());
      a.erase(std::unique(a.begin(), a.end()), a.end());
      std::sort(b.begin(), b.end());
      b.erase(std::unique(b.begin(), b.end()), b.end());
      const double f = f1_at_k(a, b, 10);
      CHECK(f == f1_at_k(b, a, 10));
      CHECK(f >= 0.0);
      CHECK(f <= 1.0);
      for (std::size_t g : b) {
        if (std::find(a.begin(), a.end(), g) != a.end()) continue;
        BoundarySet more = a;
        more.push_back(g);
        CHECK(f1_at_k(more, b, 10) >= f);
      }
    }
  }
}

TEST_CASE("boundary_mae") {
  CHECK(boundary_mae({108}, {100}) == 8.0);
  CHECK(boundary_mae({42}, {42}) == 0.0);
  CHECK(boundary_mae({10, 50}, {12, 47}) == 2.5);
  CHECK(boundary_mae({50, 10}, {47, 12}) == 2.5);
  SUBCASE("surplus entries use the nearest boundary on the other side") {
    CHECK(boundary_mae({10, 20, 60}, {12}) == doctest::Approx((2.0 + 8.0 + 48.0) / 3.0));
    CHECK(boundary_mae({12}, {10, 20, 60}) == doctest::Approx((2.0 + 8.0 + 48.0) / 3.0));
  }
  SUBCASE("empty side") {
    CHECK(boundary_mae({}, {30}, 100.0) == 70.0);
    CHECK_THROWS_AS(boundary_mae({}, {30}), DataError);
    CHECK_THROWS_AS(boundary_mae({}, {}, 5.0), DataError);
  }
  SUBCASE("translation invariance and identity") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
      BoundarySet p, g;
      for (std::size_t i = 0, n = 1 + rng() % 4; i < n; ++i) p.push_back(rng() % 100);
      for (std::size_t i = 0, n = 1 + rng() % 4; i < n; ++i) g.push_back(rng() % 100);
      const std::size_t c = rng() % 50;
      BoundarySet ps = p, gs = g;
      for (auto& v : ps) v += c;
      for (auto& v : gs) v += c;
      CHECK(boundary_mae(ps, gs) == boundary_mae(p, g));
      CHECK(boundary_mae(p, p) == 0.0);
      std::sort(p.begin(), p.end());
      std::sort(g.begin(), g.end());
      if (p != g) CHECK(boundary_mae(p, g) > 0.0);
    }
  }
}

TEST_CASE("top_k_boundaries") {
  SUBCASE("hard labels") {
    auto top = top_k_boundaries(LabelSequence{0, 0, 1, 1, 1, 0, 0}, 3);
    REQUIRE(top.size() == 2);
    CHECK(boundary_indices(top) == BoundarySet{2, 5});
    auto four = top_k_boundaries(LabelSequence{0, 1, 0, 1, 0}, 3);
    CHECK(boundary_indices(four) == BoundarySet{1, 2, 3});
  }
  SUBCASE("uniform marginals tie and resolve by index") {
    auto m = crf::posterior_marginals(crf::EmissionScores(Matrix(6, 2)), crf::CrfParams(2));
    auto all = top_k_boundaries(m, 6, 3, 0.0);
    REQUIRE(all.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(all[i].index == i + 1);
      CHECK(all[i].confidence == doctest::Approx(0.5));
    }
    CHECK(top_k_boundaries(m, 6, 3, 0.6).empty());
  }
  SUBCASE("agrees with exhaustive ranking") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
      const std::size_t n = 2 + rng() % 5;
      crf::EmissionScores em(oracle::random_matrix(n, 2, rng, 2.0));
      auto params = oracle::random_crf(2, rng, 2.0);
      auto truth = oracle::marginals(em.scores, params, n);
      std::vector<std::pair<double, std::size_t>> ranked;
      for (std::size_t t = 1; t < n; ++t) {
        const double mass = truth.pairwise[t - 1](0, 1) + truth.pairwise[t - 1](1, 0);
        ranked.push_back({-mass, t});
      }
      std::sort(ranked.begin(), ranked.end());
      auto got = top_k_boundaries(crf::posterior_marginals(em, params), n, 3, 0.0);
      REQUIRE(got.size() == std::min<std::size_t>(3, n - 1));
      for (std::size_t i = 0; i < got.size(); ++i) {
        CHECK(got[i].index == ranked[i].second);
        CHECK(got[i].confidence == doctest::Approx(-ranked[i].first).epsilon(1e-10));
      }
    }
  }
}

namespace {

// Straight from the textbook definitions.
struct Reference {
  double accuracy, precision, recall, f1, mcc, kappa;
};

Reference reference_metrics(const LabelSequence& pred, const LabelSequence& gold) {
  double tp = 0, fp = 0, tn = 0, fn = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (pred[i] == 1 && gold[i] == 1) tp += 1;
    if (pred[i] == 1 && gold[i] == 0) fp += 1;
    if (pred[i] == 0 && gold[i] == 0) tn += 1;
    if (pred[i] == 0 && gold[i] == 1) fn += 1;
  }
  const double n = tp + fp + tn + fn;
  Reference r;
  r.accuracy = (tp + tn) / n;
  r.precision = tp / (tp + fp);
  r.recall = tp / (tp + fn);
  r.f1 = 2 * r.precision * r.recall / (r.precision + r.recall);
  r.mcc = (tp * tn - fp * fn) / std::sqrt((tp + fp) * (tp + fn) * (tn + fp) * (tn + fn));
  const double p_yes = ((tp + fp) / n) * ((tp + fn) / n);
  const double p_no = ((tn + fn) / n) * ((tn + fp) / n);
  r.kappa = (r.accuracy - (p_yes + p_no)) / (1 - (p_yes + p_no));
  return r;
}

}  // namespace

TEST_CASE("token_metrics") {
  SUBCASE("perfect prediction") {
    const LabelSequence y{0, 1, 1, 0, 1, 0, 0};
    auto m = token_metrics(y, y);
    CHECK(m.accuracy == 1.0);
    CHECK(m.precision == 1.0);
    CHECK(m.recall == 1.0);
    CHECK(m.f1 == 1.0);
    CHECK(m.macro_f1 == 1.0);
    CHECK(m.mcc == doctest::Approx(1.0));
    CHECK(m.kappa == doctest::Approx(1.0));
    CHECK(m.degenerate.empty());
  }
  SUBCASE("all-zero prediction on balanced gold") {
    const LabelSequence gold{0, 1, 0, 1, 0, 1, 0, 1};
    auto m = token_metrics(LabelSequence(8, 0), gold);
    CHECK(m.accuracy == 0.5);
    CHECK(m.kappa == 0.0);
    CHECK(m.precision == 0.0);
    CHECK(std::find(m.degenerate.begin(), m.degenerate.end(), "precision") != m.degenerate.end());
    CHECK(std::find(m.degenerate.begin(), m.degenerate.end(), "mcc") != m.degenerate.end());
  }
  SUBCASE("inverted prediction") {
    const LabelSequence gold{0, 1, 1, 0, 0, 1};
    LabelSequence inv = gold;
    for (int& v : inv) v = 1 - v;
    auto m = token_metrics(inv, gold);
    CHECK(m.mcc <= 0.0);
    CHECK(m.kappa <= 0.0);
  }
  SUBCASE("random pairs match the reference calculator") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
      LabelSequence p(50), g(50);
      for (int& v : p) v = static_cast<int>(rng() % 2);
      for (int& v : g) v = static_cast<int>(rng() % 2);
      auto got = token_metrics(p, g);
      auto want = reference_metrics(p, g);
      CHECK(got.accuracy == doctest::Approx(want.accuracy).epsilon(1e-12));
      CHECK(got.precision == doctest::Approx(want.precision).epsilon(1e-12));
      CHECK(got.recall == doctest::Approx(want.recall).epsilon(1e-12));
      CHECK(got.f1 == doctest::Approx(want.f1).epsilon(1e-12));
      CHECK(got.mcc == doctest::Approx(want.mcc).epsilon(1e-12));
      CHECK(got.kappa == doctest::Approx(want.kappa).epsilon(1e-12));
    }
  }
  SUBCASE("symmetric confusion gives MCC equal to kappa") {
    Confusion c;
    c.tp = 30;
    c.tn = 50;
    c.fp = 7;
    c.fn = 7;
    auto m = token_metrics(c);
    CHECK(m.mcc == doctest::Approx(m.kappa).epsilon(1e-12));
  }
}

namespace {

MixedTextRecord gold_record(std::string id, LabelSequence labels, Pattern pattern) {
  MixedTextRecord r;
  r.id = std::move(id);
  r.tokens.assign(labels.size(), "w");
  r.gold_labels = std::move(labels);
  r.pattern = pattern;
  return r;
}

PredictedRecord predicted(const std::string& id, LabelSequence labels) {
  return {id, labels, boundary_indices(top_k_boundaries(labels, 3))};
}

}  // namespace

TEST_CASE("evaluate") {
  const std::vector<MixedTextRecord> gold = {
      gold_record("a", {0, 0, 0, 1, 1, 1, 1, 1, 1, 1}, Pattern::kHM),
      gold_record("b", {1, 1, 0, 0, 0, 0, 1, 1, 1, 1}, Pattern::kMHM),
      gold_record("c", {0, 0, 0, 0, 0, 0, 0, 1, 1, 1}, Pattern::kHM),
  };
  SUBCASE("perfect predictions") {
    std::vector<PredictedRecord> preds;
    for (const auto& g : gold) preds.push_back(predicted(g.id, g.gold_labels));
    auto r = evaluate(preds, gold);
    CHECK(r.mae == 0.0);
    CHECK(r.f1_at_k == 1.0);
    CHECK(r.token.accuracy == 1.0);
    CHECK(r.token.mcc == doctest::Approx(1.0));
    CHECK(r.buckets.at(1).records == 2);
    CHECK(r.buckets.at(2).records == 1);
  }
  SUBCASE("aggregate is the mean of per-record values") {
    std::vector<PredictedRecord> preds = {
        predicted("a", {0, 0, 0, 0, 0, 1, 1, 1, 1, 1}),  // boundary 5 vs 3
        predicted("b", {1, 1, 0, 0, 0, 0, 1, 1, 1, 1}),  // exact
        predicted("c", {0, 0, 0, 0, 0, 0, 0, 0, 0, 0}),  // none, gold at 7
    };
    auto r = evaluate(preds, gold);
    CHECK(r.mae == doctest::Approx((2.0 + 0.0 + 3.0) / 3.0));
    CHECK(r.f1_at_k == doctest::Approx((0.0 + 1.0 + 0.0) / 3.0));
    CHECK(r.buckets.at(1).mae() == doctest::Approx(2.5));
    CHECK(r.token.confusion.total() == 30);
    CHECK(r.token.accuracy == doctest::Approx(25.0 / 30.0));
  }
  SUBCASE("partition linearity") {
    std::mt19937_64 rng(13);
    std::vector<PredictedRecord> preds;
    for (const auto& g : gold) {
      LabelSequence noisy = g.gold_labels;
      for (int& v : noisy) if (rng() % 5 == 0) v = 1 - v;
      preds.push_back(predicted(g.id, noisy));
    }
    auto whole = evaluate(preds, gold);
    auto head = evaluate({preds[0]}, {gold[0]});
    auto tail = evaluate({preds[1], preds[2]}, {gold[1], gold[2]});
    CHECK(whole.mae == doctest::Approx((head.mae + 2 * tail.mae) / 3.0));
    CHECK(whole.f1_at_k == doctest::Approx((head.f1_at_k + 2 * tail.f1_at_k) / 3.0));
    Confusion sum = head.token.confusion;
    sum += tail.token.confusion;
    CHECK(whole.token.confusion == sum);
  }
  SUBCASE("shifted single boundaries") {
    std::vector<MixedTextRecord> g;
    std::vector<PredictedRecord> p;
    for (int i = 0; i < 4; ++i) {
      LabelSequence gl(200, 0), pl(200, 0);
      std::fill(gl.begin() + 100, gl.end(), 1);
      std::fill(pl.begin() + 108, pl.end(), 1);
      g.push_back(gold_record("r" + std::to_string(i), gl, Pattern::kHM));
      p.push_back(predicted("r" + std::to_string(i), pl));
    }
    CHECK(evaluate(p, g).mae == 8.0);
  }
  SUBCASE("mismatches") {
    CHECK_THROWS_AS(evaluate({predicted("x", gold[0].gold_labels)}, {gold[0]}), DataError);
    CHECK_THROWS_AS(evaluate({}, gold), DataError);
  }
}

TEST_CASE("report formatting") {
  std::vector<MixedTextRecord> gold = {gold_record("a", {0, 0, 1, 1}, Pattern::kHM)};
  auto r = evaluate({predicted("a", {0, 0, 1, 1})}, gold);
  const std::string text = format_report_text(r);
  CHECK(text.find("Bry=1") != std::string::npos);
  CHECK(text.find("unit: token") != std::string::npos);
  const std::string kv = format_report_kv(r);
  CHECK(kv.find("mae=0\n") != std::string::npos);
  CHECK(kv.find("f1_at_k.all=1\n") != std::string::npos);
}
