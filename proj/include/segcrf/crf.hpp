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

#ifndef SEGCRF_CRF_HPP_
#define SEGCRF_CRF_HPP_

#include <cstddef>
#include <vector>

#include "segcrf/core.hpp"
#include "segcrf/matrix.hpp"

namespace segcrf::crf {

// Position-independent transition scores plus start/end scores.
// transitions(a, b) scores label a followed by label b.
struct CrfParams {
  Matrix transitions;
  std::vector<double> start_scores;
  std::vector<double> end_scores;

  CrfParams() = default;
  explicit CrfParams(std::size_t num_labels)
      : transitions(num_labels, num_labels),
        start_scores(num_labels, 0.0),
        end_scores(num_labels, 0.0) {}

  std::size_t num_labels() const { return start_scores.size(); }
  friend bool operator==(const CrfParams&, const CrfParams&) = default;
};

// n x L per-token label scores. mask[t] is true for real tokens; padding is
// only allowed at the right end.
struct EmissionScores {
  Matrix scores;
  std::vector<bool> mask;

  EmissionScores() = default;
  explicit EmissionScores(Matrix s)
      : scores(std::move(s)), mask(scores.rows(), true) {}
  EmissionScores(Matrix s, std::vector<bool> m)
      : scores(std::move(s)), mask(std::move(m)) {}

  std::size_t num_positions() const { return scores.rows(); }
  std::size_t num_labels() const { return scores.cols(); }
  // Number of unmasked positions. Throws DataError for a non-prefix mask.
  std::size_t length() const;
};

struct Marginals {
  Matrix unary;                 // n x L, zero rows at masked positions
  std::vector<Matrix> pairwise;  // n-1 entries of L x L, edge (t, t+1)
};

struct CrfGradients {
  Matrix emissions;  // n x L
  Matrix transitions;
  std::vector<double> start_scores;
  std::vector<double> end_scores;
};

struct DecodeResult {
  LabelSequence labels;
  double score = 0.0;
};

double score_sequence(const EmissionScores& em, const CrfParams& crf,
                      const LabelSequence& labels);

// log Z(x) via the forward algorithm in log space.
double log_partition(const EmissionScores& em, const CrfParams& crf);

// -log P(labels | x) = log Z(x) - S(x, labels).
double nll_loss(const EmissionScores& em, const CrfParams& crf,
                const LabelSequence& labels);

Marginals posterior_marginals(const EmissionScores& em, const CrfParams& crf);

// Gradient of nll_loss: expected feature counts minus gold counts.
CrfGradients grad_nll(const EmissionScores& em, const CrfParams& crf,
                      const LabelSequence& labels);

// Highest scoring path. Ties go to the lower label id at every backtrack step.
DecodeResult viterbi_decode(const EmissionScores& em, const CrfParams& crf);

// Exhaustive enumeration over all L^n label sequences. Throws DataError when
// L^n exceeds kMaxEnumeration.
inline constexpr double kMaxEnumeration = 1e6;
double brute_force_log_partition(const EmissionScores& em,
                                 const CrfParams& crf);
// Ties resolved the same way as viterbi_decode: comparing paths from the last
// position backwards, the lower label wins.
DecodeResult brute_force_best_path(const EmissionScores& em,
                                   const CrfParams& crf);

// Numerically stable log(sum(exp(values))).
double log_sum_exp(const std::vector<double>& values);

}  // namespace segcrf::crf

#endif  // SEGCRF_CRF_HPP_
