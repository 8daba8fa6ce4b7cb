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

#ifndef SEGCRF_METRICS_HPP_
#define SEGCRF_METRICS_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "segcrf/core.hpp"
#include "segcrf/crf.hpp"

namespace segcrf {

struct ScoredBoundary {
  std::size_t index = 0;
  double confidence = 0.0;

  friend bool operator==(const ScoredBoundary&, const ScoredBoundary&) = default;
};

// Ranks positions t in [1, length) by P(y_t != y_{t-1}) from the pairwise
// marginals, keeps those above min_confidence, and returns at most k of them
// ordered by confidence (ties to the lower index).
std::vector<ScoredBoundary> top_k_boundaries(const crf::Marginals& marginals,
                                             std::size_t length, std::size_t k,
                                             double min_confidence = 0.5);
// Same ranking for hard labels: every transition has confidence 1.
std::vector<ScoredBoundary> top_k_boundaries(const LabelSequence& labels,
                                             std::size_t k);
BoundarySet boundary_indices(const std::vector<ScoredBoundary>& scored);

// 2 |top_k & gt| / (|top_k| + |gt|); 1.0 when both are empty. With a positive
// tolerance, predictions match the nearest unmatched gold boundary within
// +-tolerance tokens. Throws DataError if |top_k| > k.
double f1_at_k(const BoundarySet& top_k, const BoundarySet& ground_truth,
               std::size_t k = 3, std::size_t tolerance = 0);

// Mean absolute error between boundary lists paired in sorted order; surplus
// entries on the longer side contribute their distance to the nearest entry
// of the other side. If one side is empty, `missing_position` stands in for
// it. Throws DataError when both are empty or when one is empty without a
// stand-in.
double boundary_mae(const BoundarySet& predicted, const BoundarySet& gold,
                    std::optional<double> missing_position = std::nullopt);

struct Confusion {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  std::size_t total() const { return tp + fp + tn + fn; }
  Confusion& operator+=(const Confusion& o) {
    tp += o.tp;
    fp += o.fp;
    tn += o.tn;
    fn += o.fn;
    return *this;
  }
  friend bool operator==(const Confusion&, const Confusion&) = default;
};

// Positive class is 1 (machine). Degenerate denominators yield 0 and are
// listed in `degenerate`.
struct TokenMetrics {
  Confusion confusion;
  double accuracy = 0, precision = 0, recall = 0, f1 = 0;
  double macro_precision = 0, macro_recall = 0, macro_f1 = 0;
  double mcc = 0, kappa = 0;
  std::vector<std::string> degenerate;
};

Confusion confusion_matrix(const LabelSequence& pred, const LabelSequence& gold);
TokenMetrics token_metrics(const Confusion& confusion);
TokenMetrics token_metrics(const LabelSequence& pred, const LabelSequence& gold);

struct BucketSummary {
  std::size_t records = 0;
  double f1_sum = 0.0;
  double mae_sum = 0.0;
  double f1() const { return records ? f1_sum / records : 0.0; }
  double mae() const { return records ? mae_sum / records : 0.0; }
};

struct MetricsReport {
  std::size_t k = 3;
  std::size_t tolerance = 0;
  std::string unit = "token";
  std::size_t records = 0;
  double mae = 0.0;
  double f1_at_k = 0.0;
  // Keyed by the gold boundary count of each record.
  std::map<std::size_t, BucketSummary> buckets;
  TokenMetrics token;
};

struct PredictedRecord {
  std::string id;
  LabelSequence labels;
  BoundarySet top_k;
};

// Averages MAE and F1@K over records (also per boundary-count bucket) and
// micro-aggregates token metrics. Predictions pair with gold records by
// position and must carry the same ids. A prediction without any boundary is
// scored as if it placed one at the end of the sequence.
MetricsReport evaluate(const std::vector<PredictedRecord>& predictions,
                       const std::vector<MixedTextRecord>& gold,
                       std::size_t k = 3, std::size_t tolerance = 0);

std::string format_report_text(const MetricsReport& report);
// One key=value pair per line, values printed with round-trip precision.
std::string format_report_kv(const MetricsReport& report);

}  // namespace segcrf

#endif  // SEGCRF_METRICS_HPP_
