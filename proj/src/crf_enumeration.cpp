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

// Exhaustive enumeration over label sequences. Used as the reference that the
// dynamic programs in crf.cpp are checked against, so nothing here shares code
// with them beyond score_sequence.

#include <cmath>
#include <limits>

#include "segcrf/crf.hpp"

namespace segcrf::crf {

namespace {

std::size_t enumeration_length(const EmissionScores& em, const CrfParams& crf) {
  const std::size_t n = em.length();
  if (n == 0) throw DataError("emission mask has no unmasked positions");
  if (em.num_labels() != crf.num_labels()) {
    throw DataError("CRF parameter shapes do not match emission label count");
  }
  if (static_cast<double>(n) * std::log(static_cast<double>(crf.num_labels())) >
      std::log(kMaxEnumeration)) {
    throw DataError("instance too large to enumerate");
  }
  return n;
}

// Advances labels as a base-L odometer; false once every sequence was seen.
bool next_sequence(LabelSequence& labels, int num_labels) {
  for (std::size_t t = 0; t < labels.size(); ++t) {
    if (++labels[t] < num_labels) return true;
    labels[t] = 0;
  }
  return false;
}

// True when a precedes b comparing from the last position backwards.
bool reverse_lex_less(const LabelSequence& a, const LabelSequence& b) {
  for (std::size_t t = a.size(); t-- > 0;) {
    if (a[t] != b[t]) return a[t] < b[t];
  }
  return false;
}

}  // namespace

double brute_force_log_partition(const EmissionScores& em,
                                 const CrfParams& crf) {
  const std::size_t n = enumeration_length(em, crf);
  const int L = static_cast<int>(crf.num_labels());
  LabelSequence labels(n, 0);
  std::vector<double> scores;
  do {
    scores.push_back(score_sequence(em, crf, labels));
  } while (next_sequence(labels, L));
  double hi = -std::numeric_limits<double>::infinity();
  for (double s : scores) hi = std::max(hi, s);
  long double sum = 0.0L;
  for (double s : scores) sum += std::exp(static_cast<long double>(s - hi));
  return hi + static_cast<double>(std::log(sum));
}

DecodeResult brute_force_best_path(const EmissionScores& em,
                                   const CrfParams& crf) {
  const std::size_t n = enumeration_length(em, crf);
  const int L = static_cast<int>(crf.num_labels());
  LabelSequence labels(n, 0);
  DecodeResult best{labels, score_sequence(em, crf, labels)};
  while (next_sequence(labels, L)) {
    double s = score_sequence(em, crf, labels);
    if (s > best.score || (s == best.score && reverse_lex_less(labels, best.labels))) {
      best = {labels, s};
    }
  }
  return best;
}

}  // namespace segcrf::crf
