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
#include <string>

#include "segcrf/baselines.hpp"

namespace segcrf::baselines {

namespace {

void check_sequences(const std::vector<LabeledSequence>& data, std::size_t L) {
  if (data.empty()) throw DataError("cannot fit on an empty dataset");
  const std::size_t F = data.front().features.cols();
  for (const auto& seq : data) {
    if (seq.labels.empty() || seq.labels.size() != seq.features.rows() ||
        seq.features.cols() != F) {
      throw DataError("labeled sequence has inconsistent shapes");
    }
    for (int y : seq.labels) {
      if (y < 0 || static_cast<std::size_t>(y) >= L) {
        throw DataError("label id out of range");
      }
    }
  }
}

void softmax_in_place(std::vector<double>& v) {
  const double lse = crf::log_sum_exp(v);
  for (double& x : v) x = std::exp(x - lse);
}

}  // namespace

MemmParams memm_zeros(std::size_t num_labels, std::size_t feature_dim) {
  MemmParams p;
  p.num_labels = num_labels;
  p.feature_dim = feature_dim;
  p.weights.assign(num_labels + 1, Matrix(num_labels, feature_dim + 1));
  return p;
}

std::vector<double> memm_local_distribution(const MemmParams& params,
                                            std::size_t prev,
                                            std::span<const double> x) {
  if (!params.fitted()) throw DataError("MEMM parameters are not fitted");
  if (x.size() != params.feature_dim || prev > params.num_labels) {
    throw DataError("MEMM feature dim or previous state mismatch");
  }
  const Matrix& w = params.weights[prev];
  std::vector<double> logits(params.num_labels);
  for (std::size_t c = 0; c < params.num_labels; ++c) {
    double s = w(c, params.feature_dim);
    for (std::size_t d = 0; d < params.feature_dim; ++d) s += w(c, d) * x[d];
    logits[c] = s;
  }
  softmax_in_place(logits);
  return logits;
}

MemmParams memm_fit(const std::vector<LabeledSequence>& data,
                    const MemmFitOptions& options, std::size_t num_labels) {
  check_sequences(data, num_labels);
  const std::size_t L = num_labels;
  const std::size_t F = data.front().features.cols();
  MemmParams p = memm_zeros(L, F);
  double positions = 0.0;
  for (const auto& seq : data) positions += static_cast<double>(seq.labels.size());

  double initial_loss = -1.0;
  std::vector<Matrix> grads(L + 1, Matrix(L, F + 1));
  for (std::size_t it = 0; it < options.iterations; ++it) {
    for (Matrix& g : grads) g.fill(0.0);
    double loss = 0.0;
    for (const auto& seq : data) {
      for (std::size_t t = 0; t < seq.labels.size(); ++t) {
        const std::size_t prev =
            t == 0 ? p.start_state() : static_cast<std::size_t>(seq.labels[t - 1]);
        auto x = seq.features.row(t);
        std::vector<double> dist = memm_local_distribution(p, prev, x);
        const int y = seq.labels[t];
        loss -= std::log(dist[y]);
        Matrix& g = grads[prev];
        for (std::size_t c = 0; c < L; ++c) {
          const double coef = dist[c] - (static_cast<int>(c) == y ? 1.0 : 0.0);
          for (std::size_t d = 0; d < F; ++d) g(c, d) += coef * x[d];
          g(c, F) += coef;
        }
      }
    }
    loss /= positions;
    if (initial_loss < 0.0) initial_loss = loss;
    if (!std::isfinite(loss) || loss > 10.0 * initial_loss + 10.0) {
      throw NumericalError("memm_fit diverged at iteration " + std::to_string(it) +
                           " (loss " + std::to_string(loss) +
                           "); lower the learning rate");
    }
    for (std::size_t s = 0; s <= L; ++s) {
      auto& w = p.weights[s].data();
      const auto& g = grads[s].data();
      for (std::size_t i = 0; i < w.size(); ++i) {
        w[i] -= options.learning_rate * (g[i] / positions + options.l2 * w[i]);
      }
    }
  }
  return p;
}

double memm_log_prob(const MemmParams& params, const Matrix& features,
                     const LabelSequence& labels) {
  if (labels.size() != features.rows()) throw DataError("length mismatch");
  double lp = 0.0;
  for (std::size_t t = 0; t < labels.size(); ++t) {
    const std::size_t prev =
        t == 0 ? params.start_state() : static_cast<std::size_t>(labels[t - 1]);
    lp += std::log(memm_local_distribution(params, prev, features.row(t))[labels[t]]);
  }
  return lp;
}

LabelSequence memm_decode(const MemmParams& params, const Matrix& features) {
  if (!params.fitted()) throw DataError("MEMM parameters are not fitted");
  const std::size_t n = features.rows();
  const std::size_t L = params.num_labels;
  if (n == 0) return {};
  Matrix delta(n, L);
  std::vector<std::vector<int>> back(n, std::vector<int>(L, 0));
  {
    auto dist = memm_local_distribution(params, params.start_state(), features.row(0));
    for (std::size_t y = 0; y < L; ++y) delta(0, y) = std::log(dist[y]);
  }
  Matrix local(L, L);  // local(p, y) = log P(y | p, x_t)
  for (std::size_t t = 1; t < n; ++t) {
    for (std::size_t p = 0; p < L; ++p) {
      auto dist = memm_local_distribution(params, p, features.row(t));
      for (std::size_t y = 0; y < L; ++y) local(p, y) = std::log(dist[y]);
    }
    for (std::size_t y = 0; y < L; ++y) {
      int best = 0;
      double best_score = delta(t - 1, 0) + local(0, y);
      for (std::size_t p = 1; p < L; ++p) {
        const double s = delta(t - 1, p) + local(p, y);
        if (s > best_score) {
          best_score = s;
          best = static_cast<int>(p);
        }
      }
      delta(t, y) = best_score;
      back[t][y] = best;
    }
  }
  LabelSequence out(n, 0);
  for (std::size_t y = 1; y < L; ++y) {
    if (delta(n - 1, y) > delta(n - 1, out[n - 1])) out[n - 1] = static_cast<int>(y);
  }
  for (std::size_t t = n - 1; t > 0; --t) out[t - 1] = back[t][out[t]];
  return out;
}

crf::EmissionScores linear_crf_emissions(const LinearCrfParams& params,
                                         const Matrix& features) {
  if (features.cols() != params.weights.rows()) {
    throw DataError("linear CRF feature dim mismatch");
  }
  const std::size_t L = params.weights.cols();
  Matrix scores(features.rows(), L);
  for (std::size_t t = 0; t < features.rows(); ++t) {
    for (std::size_t y = 0; y < L; ++y) {
      double s = params.bias(0, y);
      for (std::size_t d = 0; d < features.cols(); ++d) {
        s += features(t, d) * params.weights(d, y);
      }
      scores(t, y) = s;
    }
  }
  return crf::EmissionScores(std::move(scores));
}

LinearCrfParams linear_crf_fit(const std::vector<LabeledSequence>& data,
                               const LinearCrfFitOptions& options,
                               std::size_t num_labels) {
  check_sequences(data, num_labels);
  const std::size_t L = num_labels;
  const std::size_t F = data.front().features.cols();
  LinearCrfParams p{Matrix(F, L), Matrix(1, L), crf::CrfParams(L)};
  double positions = 0.0;
  for (const auto& seq : data) positions += static_cast<double>(seq.labels.size());

  for (std::size_t it = 0; it < options.iterations; ++it) {
    Matrix gw(F, L), gb(1, L), gt(L, L);
    std::vector<double> gs(L, 0.0), ge(L, 0.0);
    double loss = 0.0;
    for (const auto& seq : data) {
      crf::EmissionScores em = linear_crf_emissions(p, seq.features);
      loss += crf::nll_loss(em, p.crf, seq.labels);
      crf::CrfGradients g = crf::grad_nll(em, p.crf, seq.labels);
      for (std::size_t t = 0; t < seq.labels.size(); ++t) {
        for (std::size_t y = 0; y < L; ++y) {
          const double e = g.emissions(t, y);
          gb(0, y) += e;
          for (std::size_t d = 0; d < F; ++d) gw(d, y) += seq.features(t, d) * e;
        }
      }
      for (std::size_t i = 0; i < gt.size(); ++i) gt.data()[i] += g.transitions.data()[i];
      for (std::size_t y = 0; y < L; ++y) {
        gs[y] += g.start_scores[y];
        ge[y] += g.end_scores[y];
      }
    }
    if (!std::isfinite(loss)) throw NumericalError("linear_crf_fit: non-finite loss");
    const double scale = options.learning_rate / positions;
    for (std::size_t i = 0; i < gw.size(); ++i) p.weights.data()[i] -= scale * gw.data()[i];
    for (std::size_t y = 0; y < L; ++y) {
      p.bias(0, y) -= scale * gb(0, y);
      p.crf.start_scores[y] -= scale * gs[y];
      p.crf.end_scores[y] -= scale * ge[y];
    }
    for (std::size_t i = 0; i < gt.size(); ++i) {
      p.crf.transitions.data()[i] -= scale * gt.data()[i];
    }
  }
  return p;
}

LabelSequence linear_crf_decode(const LinearCrfParams& params,
                                const Matrix& features) {
  return crf::viterbi_decode(linear_crf_emissions(params, features), params.crf)
      .labels;
}

}  // namespace segcrf::baselines
