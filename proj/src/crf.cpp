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

#include "segcrf/crf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace segcrf::crf {

namespace {

void check_params(const EmissionScores& em, const CrfParams& crf) {
  const std::size_t L = crf.num_labels();
  if (em.num_labels() != L || crf.transitions.rows() != L ||
      crf.transitions.cols() != L || crf.end_scores.size() != L) {
    throw DataError("CRF parameter shapes do not match emission label count");
  }
  if (em.mask.size() != em.num_positions()) {
    throw DataError("mask length differs from emission rows");
  }
}

std::size_t checked_length(const EmissionScores& em, const CrfParams& crf) {
  check_params(em, crf);
  std::size_t n = em.length();
  if (n == 0) throw DataError("emission mask has no unmasked positions");
  return n;
}

void check_labels(const LabelSequence& labels, std::size_t n, std::size_t L) {
  if (labels.size() != n) {
    throw DataError("label sequence length " + std::to_string(labels.size()) +
                    " differs from unmasked length " + std::to_string(n));
  }
  for (int y : labels) {
    if (y < 0 || static_cast<std::size_t>(y) >= L) {
      throw DataError("label id out of range");
    }
  }
}

// alpha(t, y): log-sum of scores of all prefixes ending in y at t.
Matrix forward_table(const EmissionScores& em, const CrfParams& crf,
                     std::size_t n) {
  const std::size_t L = crf.num_labels();
  Matrix alpha(n, L);
  for (std::size_t y = 0; y < L; ++y) {
    alpha(0, y) = crf.start_scores[y] + em.scores(0, y);
  }
  std::vector<double> terms(L);
  for (std::size_t t = 1; t < n; ++t) {
    for (std::size_t y = 0; y < L; ++y) {
      for (std::size_t p = 0; p < L; ++p) {
        terms[p] = alpha(t - 1, p) + crf.transitions(p, y);
      }
      alpha(t, y) = log_sum_exp(terms) + em.scores(t, y);
    }
  }
  return alpha;
}

// beta(t, y): log-sum of scores of all suffixes after t given y at t,
// including the end score.
Matrix backward_table(const EmissionScores& em, const CrfParams& crf,
                      std::size_t n) {
  const std::size_t L = crf.num_labels();
  Matrix beta(n, L);
  for (std::size_t y = 0; y < L; ++y) beta(n - 1, y) = crf.end_scores[y];
  std::vector<double> terms(L);
  for (std::size_t t = n - 1; t-- > 0;) {
    for (std::size_t y = 0; y < L; ++y) {
      for (std::size_t q = 0; q < L; ++q) {
        terms[q] = crf.transitions(y, q) + em.scores(t + 1, q) + beta(t + 1, q);
      }
      beta(t, y) = log_sum_exp(terms);
    }
  }
  return beta;
}

double final_log_z(const Matrix& alpha, const CrfParams& crf, std::size_t n) {
  std::vector<double> terms(crf.num_labels());
  for (std::size_t y = 0; y < terms.size(); ++y) {
    terms[y] = alpha(n - 1, y) + crf.end_scores[y];
  }
  return log_sum_exp(terms);
}

}  // namespace

std::size_t EmissionScores::length() const {
  std::size_t n = 0;
  while (n < mask.size() && mask[n]) ++n;
  for (std::size_t t = n; t < mask.size(); ++t) {
    if (mask[t]) throw DataError("mask is not right-padded");
  }
  return n;
}

double log_sum_exp(const std::vector<double>& values) {
  double hi = -std::numeric_limits<double>::infinity();
  for (double v : values) hi = std::max(hi, v);
  if (!std::isfinite(hi)) return hi;
  double sum = 0.0;
  for (double v : values) sum += std::exp(v - hi);
  return hi + std::log(sum);
}

double score_sequence(const EmissionScores& em, const CrfParams& crf,
                      const LabelSequence& labels) {
  check_params(em, crf);
  const std::size_t n = em.length();
  check_labels(labels, n, crf.num_labels());
  if (n == 0) return 0.0;
  double s = crf.start_scores[labels[0]] + em.scores(0, labels[0]);
  // Same accumulation order as viterbi_decode, so the decoded score equals
  // the score of the decoded path bit for bit.
  for (std::size_t t = 1; t < n; ++t) {
    s += crf.transitions(labels[t - 1], labels[t]);
    s += em.scores(t, labels[t]);
  }
  return s + crf.end_scores[labels[n - 1]];
}

double log_partition(const EmissionScores& em, const CrfParams& crf) {
  const std::size_t n = checked_length(em, crf);
  return final_log_z(forward_table(em, crf, n), crf, n);
}

double nll_loss(const EmissionScores& em, const CrfParams& crf,
                const LabelSequence& labels) {
  return log_partition(em, crf) - score_sequence(em, crf, labels);
}

Marginals posterior_marginals(const EmissionScores& em, const CrfParams& crf) {
  const std::size_t n = checked_length(em, crf);
  const std::size_t L = crf.num_labels();
  const Matrix alpha = forward_table(em, crf, n);
  const Matrix beta = backward_table(em, crf, n);
  const double log_z = final_log_z(alpha, crf, n);

  Marginals out;
  out.unary = Matrix(em.num_positions(), L);
  for (std::size_t t = 0; t < n; ++t) {
    for (std::size_t y = 0; y < L; ++y) {
      out.unary(t, y) = std::exp(alpha(t, y) + beta(t, y) - log_z);
    }
  }
  const std::size_t edges = em.num_positions() > 0 ? em.num_positions() - 1 : 0;
  out.pairwise.assign(edges, Matrix(L, L));
  for (std::size_t t = 0; t + 1 < n; ++t) {
    Matrix& edge = out.pairwise[t];
    for (std::size_t a = 0; a < L; ++a) {
      for (std::size_t b = 0; b < L; ++b) {
        edge(a, b) = std::exp(alpha(t, a) + crf.transitions(a, b) +
                              em.scores(t + 1, b) + beta(t + 1, b) - log_z);
      }
    }
  }
  return out;
}

CrfGradients grad_nll(const EmissionScores& em, const CrfParams& crf,
                      const LabelSequence& labels) {
  const std::size_t n = checked_length(em, crf);
  const std::size_t L = crf.num_labels();
  check_labels(labels, n, L);
  const Marginals m = posterior_marginals(em, crf);

  CrfGradients g;
  g.emissions = Matrix(em.num_positions(), L);
  g.transitions = Matrix(L, L);
  g.start_scores.assign(L, 0.0);
  g.end_scores.assign(L, 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    for (std::size_t y = 0; y < L; ++y) g.emissions(t, y) = m.unary(t, y);
    g.emissions(t, labels[t]) -= 1.0;
  }
  for (std::size_t t = 0; t + 1 < n; ++t) {
    for (std::size_t a = 0; a < L; ++a) {
      for (std::size_t b = 0; b < L; ++b) {
        g.transitions(a, b) += m.pairwise[t](a, b);
      }
    }
    g.transitions(labels[t], labels[t + 1]) -= 1.0;
  }
  for (std::size_t y = 0; y < L; ++y) {
    g.start_scores[y] = m.unary(0, y);
    g.end_scores[y] = m.unary(n - 1, y);
  }
  g.start_scores[labels[0]] -= 1.0;
  g.end_scores[labels[n - 1]] -= 1.0;
  return g;
}

DecodeResult viterbi_decode(const EmissionScores& em, const CrfParams& crf) {
  const std::size_t n = checked_length(em, crf);
  const std::size_t L = crf.num_labels();
  Matrix delta(n, L);
  std::vector<std::vector<int>> back(n, std::vector<int>(L, 0));
  for (std::size_t y = 0; y < L; ++y) {
    delta(0, y) = crf.start_scores[y] + em.scores(0, y);
  }
  for (std::size_t t = 1; t < n; ++t) {
    for (std::size_t y = 0; y < L; ++y) {
      int best = 0;
      double best_score = delta(t - 1, 0) + crf.transitions(0, y);
      for (std::size_t p = 1; p < L; ++p) {
        double s = delta(t - 1, p) + crf.transitions(p, y);
        if (s > best_score) {
          best_score = s;
          best = static_cast<int>(p);
        }
      }
      delta(t, y) = best_score + em.scores(t, y);
      back[t][y] = best;
    }
  }
  int last = 0;
  double best_score = delta(n - 1, 0) + crf.end_scores[0];
  for (std::size_t y = 1; y < L; ++y) {
    double s = delta(n - 1, y) + crf.end_scores[y];
    if (s > best_score) {
      best_score = s;
      last = static_cast<int>(y);
    }
  }
  DecodeResult out;
  out.score = best_score;
  out.labels.assign(n, 0);
  out.labels[n - 1] = last;
  for (std::size_t t = n - 1; t > 0; --t) {
    out.labels[t - 1] = back[t][out.labels[t]];
  }
  return out;
}

}  // namespace segcrf::crf
