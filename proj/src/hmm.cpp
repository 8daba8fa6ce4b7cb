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

#include <cmath>
#include <numbers>
#include <string>

#include "segcrf/baselines.hpp"

namespace segcrf::baselines {

namespace {

void check_data(const std::vector<LabeledSequence>& data, std::size_t L,
                std::size_t* feature_dim) {
  if (data.empty()) throw DataError("cannot fit on an empty dataset");
  *feature_dim = data.front().features.cols();
  for (const auto& seq : data) {
    if (seq.labels.empty() || seq.labels.size() != seq.features.rows()) {
      throw DataError("labeled sequence has mismatched or empty labels");
    }
    if (seq.features.cols() != *feature_dim) {
      throw DataError("feature dims differ across sequences");
    }
    for (int y : seq.labels) {
      if (y < 0 || static_cast<std::size_t>(y) >= L) {
        throw DataError("label id out of range");
      }
    }
  }
}

}  // namespace

std::size_t quantize_sign(std::span<const double> features) {
  std::size_t symbol = 0;
  for (std::size_t d = 0; d < features.size(); ++d) {
    if (features[d] > 0.0) symbol |= std::size_t{1} << d;
  }
  return symbol;
}

HmmParams hmm_fit(const std::vector<LabeledSequence>& data, double k,
                  ObservationModel mode, std::size_t num_labels) {
  if (!(k > 0.0)) throw DataError("add-k constant must be positive");
  const std::size_t L = num_labels;
  std::size_t F = 0;
  check_data(data, L, &F);
  if (mode == ObservationModel::kCategorical && F > kMaxCategoricalFeatures) {
    throw DataError("too many features for sign quantization");
  }

  HmmParams p;
  p.mode = mode;
  p.num_labels = L;
  p.feature_dim = F;

  std::vector<double> first(L, 0.0);
  Matrix trans(L, L);
  std::vector<double> label_count(L, 0.0);
  for (const auto& seq : data) {
    first[seq.labels.front()] += 1.0;
    for (std::size_t t = 0; t + 1 < seq.labels.size(); ++t) {
      trans(seq.labels[t], seq.labels[t + 1]) += 1.0;
    }
    for (int y : seq.labels) label_count[y] += 1.0;
  }
  const double kL = k * static_cast<double>(L);
  p.initial.assign(L, 0.0);
  for (std::size_t a = 0; a < L; ++a) {
    p.initial[a] = (first[a] + k) / (static_cast<double>(data.size()) + kL);
  }
  p.transition = Matrix(L, L);
  for (std::size_t a = 0; a < L; ++a) {
    double out = 0.0;
    for (std::size_t b = 0; b < L; ++b) out += trans(a, b);
    for (std::size_t b = 0; b < L; ++b) {
      p.transition(a, b) = (trans(a, b) + k) / (out + kL);
    }
  }

  if (mode == ObservationModel::kGaussian) {
    p.means = Matrix(L, F);
    p.variances = Matrix(L, F);
    for (const auto& seq : data) {
      for (std::size_t t = 0; t < seq.labels.size(); ++t) {
        for (std::size_t d = 0; d < F; ++d) {
          p.means(seq.labels[t], d) += seq.features(t, d);
        }
      }
    }
    for (std::size_t y = 0; y < L; ++y) {
      for (std::size_t d = 0; d < F; ++d) {
        p.means(y, d) = label_count[y] > 0 ? p.means(y, d) / label_count[y] : 0.0;
      }
    }
    for (const auto& seq : data) {
      for (std::size_t t = 0; t < seq.labels.size(); ++t) {
        for (std::size_t d = 0; d < F; ++d) {
          const double diff = seq.features(t, d) - p.means(seq.labels[t], d);
          p.variances(seq.labels[t], d) += diff * diff;
        }
      }
    }
    for (std::size_t y = 0; y < L; ++y) {
      for (std::size_t d = 0; d < F; ++d) {
        const double v =
            label_count[y] > 0 ? p.variances(y, d) / label_count[y] : 1.0;
        p.variances(y, d) = std::max(v, kVarianceFloor);
      }
    }
  } else {
    const std::size_t symbols = std::size_t{1} << F;
    p.symbol_probs = Matrix(L, symbols);
    for (const auto& seq : data) {
      for (std::size_t t = 0; t < seq.labels.size(); ++t) {
        p.symbol_probs(seq.labels[t], quantize_sign(seq.features.row(t))) += 1.0;
      }
    }
    const double kS = k * static_cast<double>(symbols);
    for (std::size_t y = 0; y < L; ++y) {
      for (std::size_t s = 0; s < symbols; ++s) {
        p.symbol_probs(y, s) = (p.symbol_probs(y, s) + k) / (label_count[y] + kS);
      }
    }
  }
  return p;
}

Matrix hmm_log_emissions(const HmmParams& params, const Matrix& features) {
  if (!params.fitted()) throw DataError("HMM parameters are not fitted");
  if (features.cols() != params.feature_dim) {
    throw DataError("HMM feature dim mismatch");
  }
  const std::size_t L = params.num_labels;
  Matrix out(features.rows(), L);
  for (std::size_t t = 0; t < features.rows(); ++t) {
    for (std::size_t y = 0; y < L; ++y) {
      if (params.mode == ObservationModel::kGaussian) {
        double lp = 0.0;
        for (std::size_t d = 0; d < params.feature_dim; ++d) {
          const double var = params.variances(y, d);
          const double diff = features(t, d) - params.means(y, d);
          lp += -0.5 * (std::log(2.0 * std::numbers::pi * var) + diff * diff / var);
        }
        out(t, y) = lp;
      } else {
        out(t, y) = std::log(params.symbol_probs(y, quantize_sign(features.row(t))));
      }
    }
  }
  return out;
}

namespace {

crf::CrfParams hmm_as_chain(const HmmParams& params) {
  const std::size_t L = params.num_labels;
  crf::CrfParams chain(L);
  for (std::size_t a = 0; a < L; ++a) {
    chain.start_scores[a] = std::log(params.initial[a]);
    for (std::size_t b = 0; b < L; ++b) {
      chain.transitions(a, b) = std::log(params.transition(a, b));
    }
  }
  return chain;
}

}  // namespace

double hmm_log_joint(const HmmParams& params, const Matrix& features,
                     const LabelSequence& labels) {
  crf::EmissionScores em(hmm_log_emissions(params, features));
  return crf::score_sequence(em, hmm_as_chain(params), labels);
}

LabelSequence hmm_decode(const HmmParams& params, const Matrix& features) {
  // log P(x, y) is a chain score with log-probability potentials, so the CRF
  // Viterbi (and its tie-break) applies unchanged.
  crf::EmissionScores em(hmm_log_emissions(params, features));
  return crf::viterbi_decode(em, hmm_as_chain(params)).labels;
}

}  // namespace segcrf::baselines
