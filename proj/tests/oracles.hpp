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

// Independent reference implementations used only by the tests. Nothing here
// calls the dynamic programs under test.
#ifndef SEGCRF_TESTS_ORACLES_HPP_
#define SEGCRF_TESTS_ORACLES_HPP_

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "segcrf/crf.hpp"
#include "segcrf/matrix.hpp"

namespace oracle {

using segcrf::LabelSequence;
using segcrf::Matrix;
using segcrf::crf::CrfParams;
using segcrf::crf::EmissionScores;

inline Matrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng,
                            double scale = 1.0) {
  std::normal_distribution<double> dist(0.0, scale);
  Matrix m(rows, cols);
  for (double& v : m.data()) v = dist(rng);
  return m;
}

inline CrfParams random_crf(std::size_t L, std::mt19937_64& rng, double scale = 1.0) {
  CrfParams p(L);
  p.transitions = random_matrix(L, L, rng, scale);
  std::normal_distribution<double> dist(0.0, scale);
  for (double& v : p.start_scores) v = dist(rng);
  for (double& v : p.end_scores) v = dist(rng);
  return p;
}

// Calls f on every label sequence of length n over L labels.
inline void for_each_path(std::size_t n, std::size_t L,
                          const std::function<void(const LabelSequence&)>& f) {
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= L;
  LabelSequence y(n);
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = static_cast<int>(c % L);
      c /= L;
    }
    f(y);
  }
}

// Term-by-term sequence score over the first n positions.
inline double path_score(const Matrix& em, const CrfParams& crf, const LabelSequence& y) {
  double s = crf.start_scores[y[0]] + crf.end_scores[y.back()];
  for (std::size_t t = 0; t < y.size(); ++t) s += em(t, y[t]);
  for (std::size_t t = 1; t < y.size(); ++t) s += crf.transitions(y[t - 1], y[t]);
  return s;
}

inline double log_z(const Matrix& em, const CrfParams& crf, std::size_t n) {
  std::vector<double> scores;
  for_each_path(n, crf.num_labels(),
                [&](const LabelSequence& y) { scores.push_back(path_score(em, crf, y)); });
  double m = scores[0];
  for (double s : scores) m = std::max(m, s);
  long double sum = 0.0L;
  for (double s : scores) sum += std::exp(static_cast<long double>(s - m));
  return m + static_cast<double>(std::log(sum));
}

struct PathMarginals {
  Matrix unary;
  std::vector<Matrix> pairwise;
};

inline PathMarginals marginals(const Matrix& em, const CrfParams& crf, std::size_t n) {
  const std::size_t L = crf.num_labels();
  const double lz = log_z(em, crf, n);
  PathMarginals out{Matrix(n, L), std::vector<Matrix>(n > 0 ? n - 1 : 0, Matrix(L, L))};
  for_each_path(n, L, [&](const LabelSequence& y) {
    const double p = std::exp(path_score(em, crf, y) - lz);
    for (std::size_t t = 0; t < n; ++t) out.unary(t, y[t]) += p;
    for (std::size_t t = 1; t < n; ++t) out.pairwise[t - 1](y[t - 1], y[t]) += p;
  });
  return out;
}

// Central difference of f with respect to *x.
inline double central_difference(double* x, double h, const std::function<double()>& f) {
  const double saved = *x;
  *x = saved + h;
  const double up = f();
  *x = saved - h;
  const double down = f();
  *x = saved;
  return (up - down) / (2.0 * h);
}

inline double rel_error(double a, double b, double floor = 1e-8) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

}  // namespace oracle

#endif  // SEGCRF_TESTS_ORACLES_HPP_
