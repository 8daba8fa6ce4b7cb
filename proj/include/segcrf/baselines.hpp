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

#ifndef SEGCRF_BASELINES_HPP_
#define SEGCRF_BASELINES_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "segcrf/core.hpp"
#include "segcrf/crf.hpp"
#include "segcrf/matrix.hpp"

namespace segcrf::baselines {

// A feature matrix (n x F) with its gold labels.
struct LabeledSequence {
  Matrix features;
  LabelSequence labels;
};

enum class ObservationModel { kGaussian, kCategorical };

// Supervised HMM. Gaussian mode keeps a diagonal Gaussian per label over the
// feature vector; categorical mode quantizes each feature by sign into a
// symbol of F bits.
struct HmmParams {
  ObservationModel mode = ObservationModel::kGaussian;
  std::size_t num_labels = 0;
  std::size_t feature_dim = 0;
  std::vector<double> initial;  // L
  Matrix transition;            // L x L, row-stochastic
  Matrix means;                 // L x F (gaussian)
  Matrix variances;             // L x F (gaussian)
  Matrix symbol_probs;          // L x 2^F (categorical)

  bool fitted() const { return num_labels > 0; }
  friend bool operator==(const HmmParams&, const HmmParams&) = default;
};

inline constexpr double kVarianceFloor = 1e-6;
inline constexpr std::size_t kMaxCategoricalFeatures = 16;

std::size_t quantize_sign(std::span<const double> features);

// Counts with add-k smoothing:
//   transition[a][b] = (count(a->b) + k) / (count(a->.) + k L)
// and likewise for the initial distribution and categorical emissions.
// Gaussian emissions use the per-label MLE with a variance floor.
HmmParams hmm_fit(const std::vector<LabeledSequence>& data, double k = 1.0,
                  ObservationModel mode = ObservationModel::kGaussian,
                  std::size_t num_labels = 2);

// log P(x_t | y) for every position and label.
Matrix hmm_log_emissions(const HmmParams& params, const Matrix& features);
double hmm_log_joint(const HmmParams& params, const Matrix& features,
                     const LabelSequence& labels);
// Most probable state path, log-space Viterbi with the CRF tie-break.
LabelSequence hmm_decode(const HmmParams& params, const Matrix& features);

// Locally normalized maximum-entropy Markov model. weights[p] scores each
// target label given previous label p; index L is the sequence start. Each is
// L x (F + 1), the last column being the bias.
struct MemmParams {
  std::size_t num_labels = 0;
  std::size_t feature_dim = 0;
  std::vector<Matrix> weights;

  bool fitted() const { return num_labels > 0; }
  std::size_t start_state() const { return num_labels; }
  friend bool operator==(const MemmParams&, const MemmParams&) = default;
};

MemmParams memm_zeros(std::size_t num_labels, std::size_t feature_dim);

// P(y_t = . | y_{t-1} = prev, x_t).
std::vector<double> memm_local_distribution(const MemmParams& params,
                                            std::size_t prev,
                                            std::span<const double> x);

struct MemmFitOptions {
  std::size_t iterations = 200;
  double learning_rate = 0.5;
  double l2 = 0.0;
};

// Full-batch gradient descent on the mean local log loss, conditioning on the
// previous gold label. Throws NumericalError when the loss diverges.
MemmParams memm_fit(const std::vector<LabeledSequence>& data,
                    const MemmFitOptions& options, std::size_t num_labels = 2);

double memm_log_prob(const MemmParams& params, const Matrix& features,
                     const LabelSequence& labels);
// Viterbi over the local distributions, feeding back the predicted label.
LabelSequence memm_decode(const MemmParams& params, const Matrix& features);

// Globally normalized counterpart on identical features: emissions are
// x W + b and transitions/start/end are learned jointly by CRF NLL.
struct LinearCrfParams {
  Matrix weights;  // F x L
  Matrix bias;     // 1 x L
  crf::CrfParams crf;
};

struct LinearCrfFitOptions {
  std::size_t iterations = 200;
  double learning_rate = 0.5;
};

crf::EmissionScores linear_crf_emissions(const LinearCrfParams& params,
                                         const Matrix& features);
LinearCrfParams linear_crf_fit(const std::vector<LabeledSequence>& data,
                               const LinearCrfFitOptions& options,
                               std::size_t num_labels = 2);
LabelSequence linear_crf_decode(const LinearCrfParams& params,
                                const Matrix& features);

}  // namespace segcrf::baselines

#endif  // SEGCRF_BASELINES_HPP_
