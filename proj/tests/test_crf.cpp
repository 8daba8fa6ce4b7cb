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

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "segcrf/crf.hpp"

using namespace segcrf;
using namespace segcrf::crf;

namespace {

EmissionScores random_em(std::size_t n, std::size_t L, std::mt19937_64& rng) {
  return EmissionScores(oracle::random_matrix(n, L, rng));
}

LabelSequence random_labels(std::size_t n, std::size_t L, std::mt19937_64& rng) {
  LabelSequence y(n);
  for (int& v : y) v = static_cast<int>(rng() % L);
  return y;
}

EmissionScores padded(const EmissionScores& em, std::size_t extra, double junk) {
  Matrix s(em.num_positions() + extra, em.num_labels(), junk);
  std::vector<bool> mask(s.rows(), false);
  for (std::size_t t = 0; t < em.num_positions(); ++t) {
    for (std::size_t y = 0; y < em.num_labels(); ++y) s(t, y) = em.scores(t, y);
    mask[t] = true;
  }
  return EmissionScores(std::move(s), std::move(mask));
}

}  // namespace

TEST_CASE("score_sequence") {
  SUBCASE("zero scores") {
    EmissionScores em(Matrix(4, 2));
    CHECK(score_sequence(em, CrfParams(2), {0, 1, 1, 0}) == 0.0);
  }
  SUBCASE("single term") {
    Matrix s(1, 2);
    s(0, 0) = 2.0;
    s(0, 1) = -1.0;
    CHECK(score_sequence(EmissionScores(s), CrfParams(2), {0}) == 2.0);
  }
  SUBCASE("random instance equals the term-by-term sum") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
      auto em = random_em(4, 3, rng);
      auto crf = oracle::random_crf(3, rng);
      auto y = random_labels(4, 3, rng);
      CHECK(score_sequence(em, crf, y) ==
            doctest::Approx(oracle::path_score(em.scores, crf, y)).epsilon(1e-14));
    }
  }
  SUBCASE("bad labels") {
    EmissionScores em(Matrix(2, 2));
    CHECK_THROWS_AS(score_sequence(em, CrfParams(2), {0}), DataError);
    CHECK_THROWS_AS(score_sequence(em, CrfParams(2), {0, 2}), DataError);
    CHECK_THROWS_AS(score_sequence(em, CrfParams(3), {0, 1}), DataError);
  }
}

TEST_CASE("log_partition") {
  CHECK(log_partition(EmissionScores(Matrix(2, 2)), CrfParams(2)) ==
        doctest::Approx(std::log(4.0)).epsilon(1e-15));
  Matrix one(1, 2);
  one(0, 0) = 0.3;
  one(0, 1) = -1.7;
  CHECK(log_partition(EmissionScores(one), CrfParams(2)) ==
        doctest::Approx(std::log(std::exp(0.3) + std::exp(-1.7))).epsilon(1e-15));

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    auto em = random_em(5, 3, rng);
    auto crf = oracle::random_crf(3, rng);
    const double want = oracle::log_z(em.scores, crf, 5);
    CHECK(oracle::rel_error(log_partition(em, crf), want) < 1e-10);
  }
  SUBCASE("stable for long sequences with large scores") {
    auto em = EmissionScores(oracle::random_matrix(512, 2, rng, 50.0));
    auto crf = oracle::random_crf(2, rng, 20.0);
    CHECK(std::isfinite(log_partition(em, crf)));
  }
  SUBCASE("empty mask is rejected") {
    EmissionScores em(Matrix(2, 2), {false, false});
    CHECK_THROWS_AS(log_partition(em, CrfParams(2)), DataError);
  }
  SUBCASE("mid-sequence mask is rejected") {
    EmissionScores em(Matrix(3, 2), {true, false, true});
    CHECK_THROWS_AS(log_partition(em, CrfParams(2)), DataError);
  }
}

TEST_CASE("nll_loss") {
  CHECK(nll_loss(EmissionScores(Matrix(2, 2)), CrfParams(2), {1, 0}) ==
        doctest::Approx(std::log(4.0)));
  Matrix big(3, 2);
  const LabelSequence gold{0, 1, 1};
  for (std::size_t t = 0; t < 3; ++t) big(t, gold[t]) = 60.0;
  CHECK(nll_loss(EmissionScores(big), CrfParams(2), gold) == doctest::Approx(0.0).epsilon(1e-12));

  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    auto em = random_em(4, 2, rng);
    auto crf = oracle::random_crf(2, rng);
    auto y = random_labels(4, 2, rng);
    const double p = std::exp(oracle::path_score(em.scores, crf, y) -
                              oracle::log_z(em.scores, crf, 4));
    CHECK(nll_loss(em, crf, y) == doctest::Approx(-std::log(p)).epsilon(1e-10));
  }
}

TEST_CASE("posterior_marginals") {
  SUBCASE("uniform scores") {
    auto m = posterior_marginals(EmissionScores(Matrix(4, 2)), CrfParams(2));
    for (double v : m.unary.data()) CHECK(v == doctest::Approx(0.5).epsilon(1e-14));
    for (const auto& pw : m.pairwise)
      for (double v : pw.data()) CHECK(v == doctest::Approx(0.25).epsilon(1e-14));
  }
  SUBCASE("single position is a softmax") {
    Matrix s(1, 3);
    s(0, 0) = 1.0;
    s(0, 1) = 2.0;
    s(0, 2) = -0.5;
    auto m = posterior_marginals(EmissionScores(s), CrfParams(3));
    const double z = std::exp(1.0) + std::exp(2.0) + std::exp(-0.5);
    CHECK(m.unary(0, 0) == doctest::Approx(std::exp(1.0) / z));
    CHECK(m.unary(0, 1) == doctest::Approx(std::exp(2.0) / z));
    CHECK(m.pairwise.empty());
  }
  SUBCASE("random instances match enumeration") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 30; ++trial) {
      auto em = random_em(5, 3, rng);
      auto crf = oracle::random_crf(3, rng);
      auto got = posterior_marginals(em, crf);
      auto want = oracle::marginals(em.scores, crf, 5);
      for (std::size_t i = 0; i < got.unary.size(); ++i)
        CHECK(got.unary.data()[i] == doctest::Approx(want.unary.data()[i]).epsilon(1e-10));
      for (std::size_t t = 0; t < 4; ++t)
        for (std::size_t i = 0; i < 9; ++i)
          CHECK(got.pairwise[t].data()[i] ==
                doctest::Approx(want.pairwise[t].data()[i]).epsilon(1e-10));
      for (std::size_t t = 0; t < 5; ++t) {
        double sum = 0.0;
        for (double v : got.unary.row(t)) sum += v;
        CHECK(std::abs(sum - 1.0) < 1e-9);
      }
    }
  }
}

TEST_CASE("normalization over all labelings") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + rng() % 6, L = 2 + rng() % 2;
    auto em = random_em(n, L, rng);
    auto crf = oracle::random_crf(L, rng);
    const double lz = log_partition(em, crf);
    double total = 0.0;
    oracle::for_each_path(n, L, [&](const LabelSequence& y) {
      const double p = std::exp(score_sequence(em, crf, y) - lz);
      CHECK(p > 0.0);
      CHECK(p <= 1.0 + 1e-12);
      total += p;
    });
    CHECK(std::abs(total - 1.0) < 1e-9);
  }
}

TEST_CASE("grad_nll") {
  SUBCASE("uniform scores") {
    auto g = grad_nll(EmissionScores(Matrix(3, 2)), CrfParams(2), {0, 1, 1});
    CHECK(g.emissions(0, 0) == doctest::Approx(-0.5));
    CHECK(g.emissions(0, 1) == doctest::Approx(0.5));
    CHECK(g.emissions(1, 0) == doctest::Approx(0.5));
    CHECK(g.emissions(1, 1) == doctest::Approx(-0.5));
  }
  SUBCASE("emission gradient rows sum to zero") {
    std::mt19937_64 rng(19);
    auto em = random_em(7, 3, rng);
    auto g = grad_nll(em, oracle::random_crf(3, rng), random_labels(7, 3, rng));
    for (std::size_t t = 0; t < 7; ++t) {
      double sum = 0.0;
      for (double v : g.emissions.row(t)) sum += v;
      CHECK(std::abs(sum) < 1e-12);
    }
  }
  SUBCASE("matches central finite differences") {
    std::mt19937_64 rng(23);
    const std::size_t lengths[] = {1, 2, 5, 12};
    int instances = 0;
    for (std::size_t n : lengths) {
      for (std::size_t L = 2; L <= 3; ++L) {
        for (int rep = 0; rep < 7; ++rep, ++instances) {
          auto em = random_em(n, L, rng);
          auto crf = oracle::random_crf(L, rng);
          auto y = random_labels(n, L, rng);
          auto g = grad_nll(em, crf, y);
          auto loss = [&] { return nll_loss(em, crf, y); };
          for (std::size_t i = 0; i < em.scores.size(); ++i) {
            double fd = oracle::central_difference(&em.scores.data()[i], 1e-5, loss);
            CHECK(oracle::rel_error(g.emissions.data()[i], fd, 1e-6) < 1e-5);
          }
          for (std::size_t i = 0; i < L * L; ++i) {
            double fd = oracle::central_difference(&crf.transitions.data()[i], 1e-5, loss);
            CHECK(oracle::rel_error(g.transitions.data()[i], fd, 1e-6) < 1e-5);
          }
          for (std::size_t i = 0; i < L; ++i) {
            double fs = oracle::central_difference(&crf.start_scores[i], 1e-5, loss);
            double fe = oracle::central_difference(&crf.end_scores[i], 1e-5, loss);
            CHECK(oracle::rel_error(g.start_scores[i], fs, 1e-6) < 1e-5);
            CHECK(oracle::rel_error(g.end_scores[i], fe, 1e-6) < 1e-5);
          }
        }
      }
    }
    CHECK(instances >= 50);
  }
}

TEST_CASE("viterbi_decode") {
  Matrix s(2, 2);
  s(0, 0) = 1.0;
  s(1, 1) = 1.0;
  CHECK(viterbi_decode(EmissionScores(s), CrfParams(2)).labels == LabelSequence{0, 1});
  CHECK(viterbi_decode(EmissionScores(Matrix(5, 3)), CrfParams(3)).labels ==
        LabelSequence(5, 0));

  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 50; ++trial) {
    auto em = random_em(6, 3, rng);
    auto crf = oracle::random_crf(3, rng);
    auto got = viterbi_decode(em, crf);
    double best = -1e300;
    LabelSequence best_path;
    oracle::for_each_path(6, 3, [&](const LabelSequence& y) {
      const double sc = oracle::path_score(em.scores, crf, y);
      if (sc > best) {
        best = sc;
        best_path = y;
      }
    });
    CHECK(got.labels == best_path);
    CHECK(got.score == doctest::Approx(best).epsilon(1e-12));
    CHECK(got.score == score_sequence(em, crf, got.labels));
    for (int r = 0; r < 100; ++r) {
      CHECK(got.score >= score_sequence(em, crf, random_labels(6, 3, rng)));
    }
  }
}

TEST_CASE("brute force helpers") {
  Matrix s(1, 3);
  s(0, 0) = 0.5;
  s(0, 1) = 1.5;
  s(0, 2) = -2.0;
  const CrfParams crf(3);
  CHECK(brute_force_log_partition(EmissionScores(s), crf) ==
        doctest::Approx(log_sum_exp({0.5, 1.5, -2.0})));
  CHECK(brute_force_best_path(EmissionScores(s), crf).labels == LabelSequence{1});
  auto zero = brute_force_best_path(EmissionScores(Matrix(4, 2)), CrfParams(2));
  CHECK(zero.labels == LabelSequence(4, 0));
  CHECK(brute_force_log_partition(EmissionScores(Matrix(4, 2)), CrfParams(2)) ==
        doctest::Approx(4 * std::log(2.0)));
  CHECK_THROWS_AS(brute_force_log_partition(EmissionScores(Matrix(25, 2)), CrfParams(2)),
                  DataError);
}

TEST_CASE("ties resolve to the lower label in both decoders") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    // Small integer scores make ties common.
    const std::size_t n = 1 + rng() % 5, L = 2 + rng() % 2;
    Matrix s(n, L);
    for (double& v : s.data()) v = static_cast<double>(rng() % 3);
    CrfParams crf(L);
    for (double& v : crf.transitions.data()) v = static_cast<double>(rng() % 2);
    EmissionScores em(s);
    auto fast = viterbi_decode(em, crf);
    auto slow = brute_force_best_path(em, crf);
    CHECK(fast.labels == slow.labels);
    CHECK(fast.score == slow.score);
  }
}

TEST_CASE("shift invariance of a single position") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 20; ++trial) {
    auto em = random_em(6, 3, rng);
    auto crf = oracle::random_crf(3, rng);
    auto shifted = em;
    const std::size_t t = rng() % 6;
    const double c = 4.25;
    for (double& v : shifted.scores.row(t)) v += c;
    CHECK(viterbi_decode(shifted, crf).labels == viterbi_decode(em, crf).labels);
    CHECK(log_partition(shifted, crf) == doctest::Approx(log_partition(em, crf) + c).epsilon(1e-12));
    auto a = posterior_marginals(em, crf), b = posterior_marginals(shifted, crf);
    for (std::size_t i = 0; i < a.unary.size(); ++i)
      CHECK(a.unary.data()[i] == doctest::Approx(b.unary.data()[i]).epsilon(1e-10));
  }
}

TEST_CASE("right padding does not change anything on the prefix") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + rng() % 6;
    auto em = random_em(n, 2, rng);
    auto crf = oracle::random_crf(2, rng);
    auto y = random_labels(n, 2, rng);
    auto pad = padded(em, 1 + rng() % 4, 1e3);
    CHECK(pad.length() == n);
    CHECK(log_partition(pad, crf) == log_partition(em, crf));
    CHECK(nll_loss(pad, crf, y) == nll_loss(em, crf, y));
    CHECK(viterbi_decode(pad, crf).labels == viterbi_decode(em, crf).labels);
    auto g0 = grad_nll(em, crf, y), g1 = grad_nll(pad, crf, y);
    CHECK(g0.transitions == g1.transitions);
    CHECK(g0.start_scores == g1.start_scores);
    CHECK(g0.end_scores == g1.end_scores);
    for (std::size_t t = 0; t < pad.num_positions(); ++t) {
      for (std::size_t l = 0; l < 2; ++l) {
        CHECK(g1.emissions(t, l) == (t < n ? g0.emissions(t, l) : 0.0));
      }
    }
    auto m1 = posterior_marginals(pad, crf);
    for (std::size_t t = n; t < pad.num_positions(); ++t)
      for (double v : m1.unary.row(t)) CHECK(v == 0.0);
  }
}
