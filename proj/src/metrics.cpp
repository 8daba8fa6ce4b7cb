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

#include "segcrf/metrics.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace segcrf {

namespace {

std::vector<ScoredBoundary> rank(std::vector<ScoredBoundary> candidates,
                                 std::size_t k) {
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const ScoredBoundary& a, const ScoredBoundary& b) {
                     if (a.confidence != b.confidence) {
                       return a.confidence > b.confidence;
                     }
                     return a.index < b.index;
                   });
  if (candidates.size() > k) candidates.resize(k);
  return candidates;
}

double safe_ratio(double num, double den, const char* name,
                  std::vector<std::string>& degenerate) {
  if (den == 0.0) {
    degenerate.emplace_back(name);
    return 0.0;
  }
  return num / den;
}

double distance(std::size_t a, std::size_t b) {
  return a > b ? static_cast<double>(a - b) : static_cast<double>(b - a);
}

double nearest_distance(std::size_t index, const BoundarySet& others) {
  double best = distance(index, others.front());
  for (std::size_t o : others) best = std::min(best, distance(index, o));
  return best;
}

}  // namespace

std::vector<ScoredBoundary> top_k_boundaries(const crf::Marginals& marginals,
                                             std::size_t length, std::size_t k,
                                             double min_confidence) {
  std::vector<ScoredBoundary> candidates;
  for (std::size_t t = 1; t < length && t - 1 < marginals.pairwise.size(); ++t) {
    const Matrix& edge = marginals.pairwise[t - 1];
    double change = 0.0;
    for (std::size_t a = 0; a < edge.rows(); ++a) {
      for (std::size_t b = 0; b < edge.cols(); ++b) {
        if (a != b) change += edge(a, b);
      }
    }
    if (change > min_confidence) candidates.push_back({t, change});
  }
  return rank(std::move(candidates), k);
}

std::vector<ScoredBoundary> top_k_boundaries(const LabelSequence& labels,
                                             std::size_t k) {
  std::vector<ScoredBoundary> candidates;
  for (std::size_t j : extract_boundaries(labels)) candidates.push_back({j, 1.0});
  return rank(std::move(candidates), k);
}

BoundarySet boundary_indices(const std::vector<ScoredBoundary>& scored) {
  BoundarySet out;
  for (const auto& s : scored) out.push_back(s.index);
  std::sort(out.begin(), out.end());
  return out;
}

double f1_at_k(const BoundarySet& top_k, const BoundarySet& ground_truth,
               std::size_t k, std::size_t tolerance) {
  if (top_k.size() > k) {
    throw DataError("f1_at_k: more than k predicted boundaries");
  }
  if (top_k.empty() && ground_truth.empty()) return 1.0;
  std::size_t hits = 0;
  std::vector<bool> used(ground_truth.size(), false);
  for (std::size_t p : top_k) {
    std::size_t best = ground_truth.size();
    double best_dist = static_cast<double>(tolerance) + 1.0;
    for (std::size_t g = 0; g < ground_truth.size(); ++g) {
      const double d = distance(p, ground_truth[g]);
      if (!used[g] && d <= static_cast<double>(tolerance) && d < best_dist) {
        best = g;
        best_dist = d;
      }
    }
    if (best < ground_truth.size()) {
      used[best] = true;
      ++hits;
    }
  }
  return 2.0 * static_cast<double>(hits) /
         static_cast<double>(top_k.size() + ground_truth.size());
}

double boundary_mae(const BoundarySet& predicted, const BoundarySet& gold,
                    std::optional<double> missing_position) {
  if (predicted.empty() && gold.empty()) {
    throw DataError("boundary_mae: undefined for two empty boundary lists");
  }
  if (predicted.empty() || gold.empty()) {
    if (!missing_position) {
      throw DataError("boundary_mae: one side has no boundaries");
    }
    const BoundarySet& present = predicted.empty() ? gold : predicted;
    double sum = 0.0;
    for (std::size_t j : present) {
      sum += std::abs(static_cast<double>(j) - *missing_position);
    }
    return sum / static_cast<double>(present.size());
  }
  BoundarySet pred = predicted, ref = gold;
  std::sort(pred.begin(), pred.end());
  std::sort(ref.begin(), ref.end());
  const std::size_t paired = std::min(pred.size(), ref.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < paired; ++i) sum += distance(pred[i], ref[i]);
  const BoundarySet& longer = pred.size() > ref.size() ? pred : ref;
  const BoundarySet& shorter = pred.size() > ref.size() ? ref : pred;
  for (std::size_t i = paired; i < longer.size(); ++i) {
    sum += nearest_distance(longer[i], shorter);
  }
  return sum / static_cast<double>(longer.size());
}

Confusion confusion_matrix(const LabelSequence& pred, const LabelSequence& gold) {
  if (pred.size() != gold.size()) {
    throw DataError("token_metrics: prediction and gold lengths differ");
  }
  Confusion c;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const bool p = pred[i] == kMachine, g = gold[i] == kMachine;
    if (p && g) ++c.tp;
    else if (p) ++c.fp;
    else if (g) ++c.fn;
    else ++c.tn;
  }
  return c;
}

TokenMetrics token_metrics(const Confusion& c) {
  TokenMetrics m;
  m.confusion = c;
  const double tp = static_cast<double>(c.tp), fp = static_cast<double>(c.fp);
  const double tn = static_cast<double>(c.tn), fn = static_cast<double>(c.fn);
  const double n = tp + fp + tn + fn;
  auto& deg = m.degenerate;
  m.accuracy = safe_ratio(tp + tn, n, "accuracy", deg);
  m.precision = safe_ratio(tp, tp + fp, "precision", deg);
  m.recall = safe_ratio(tp, tp + fn, "recall", deg);
  m.f1 = safe_ratio(2 * tp, 2 * tp + fp + fn, "f1", deg);
  std::vector<std::string> ignored;
  const double p0 = safe_ratio(tn, tn + fn, "", ignored);
  const double r0 = safe_ratio(tn, tn + fp, "", ignored);
  const double f0 = safe_ratio(2 * tn, 2 * tn + fp + fn, "", ignored);
  m.macro_precision = 0.5 * (m.precision + p0);
  m.macro_recall = 0.5 * (m.recall + r0);
  m.macro_f1 = 0.5 * (m.f1 + f0);
  const double denom = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
  m.mcc = safe_ratio(tp * tn - fp * fn, std::sqrt(denom), "mcc", deg);
  if (n > 0) {
    const double po = (tp + tn) / n;
    const double pe = ((tp + fp) * (tp + fn) + (tn + fn) * (tn + fp)) / (n * n);
    m.kappa = safe_ratio(po - pe, 1.0 - pe, "kappa", deg);
  } else {
    deg.emplace_back("kappa");
  }
  return m;
}

TokenMetrics token_metrics(const LabelSequence& pred, const LabelSequence& gold) {
  return token_metrics(confusion_matrix(pred, gold));
}

MetricsReport evaluate(const std::vector<PredictedRecord>& predictions,
                       const std::vector<MixedTextRecord>& gold, std::size_t k,
                       std::size_t tolerance) {
  if (gold.empty()) throw DataError("evaluate: empty dataset");
  if (predictions.size() != gold.size()) {
    throw DataError("evaluate: " + std::to_string(predictions.size()) +
                    " predictions for " + std::to_string(gold.size()) +
                    " gold records");
  }
  MetricsReport report;
  report.k = k;
  report.tolerance = tolerance;
  report.records = gold.size();
  Confusion total;
  double mae_sum = 0.0, f1_sum = 0.0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const PredictedRecord& p = predictions[i];
    const MixedTextRecord& g = gold[i];
    if (p.id != g.id) {
      throw DataError("evaluate: prediction '" + p.id + "' paired with gold '" +
                      g.id + "'");
    }
    total += confusion_matrix(p.labels, g.gold_labels);
    const BoundarySet gt = extract_boundaries(g.gold_labels);
    BoundarySet top = p.top_k;
    if (top.size() > k) top.resize(k);
    const double f1 = f1_at_k(top, gt, k, tolerance);
    const double mae = boundary_mae(extract_boundaries(p.labels), gt,
                                    static_cast<double>(g.gold_labels.size()));
    BucketSummary& b = report.buckets[gt.size()];
    ++b.records;
    b.f1_sum += f1;
    b.mae_sum += mae;
    f1_sum += f1;
    mae_sum += mae;
  }
  report.mae = mae_sum / static_cast<double>(gold.size());
  report.f1_at_k = f1_sum / static_cast<double>(gold.size());
  report.token = token_metrics(total);
  return report;
}

std::string format_report_text(const MetricsReport& r) {
  std::string out;
  out += fmt::format("records: {}  unit: {}  K: {}  tolerance: {}\n", r.records,
                     r.unit, r.k, r.tolerance);
  out += fmt::format("boundary MAE: {:.4f}\n", r.mae);
  out += fmt::format("{:<10}", "F1@K");
  for (const auto& [count, b] : r.buckets) {
    out += fmt::format("{:>10}", fmt::format("Bry={}", count));
  }
  out += fmt::format("{:>10}\n", "All");
  out += fmt::format("{:<10}", "");
  for (const auto& [count, b] : r.buckets) out += fmt::format("{:>10.4f}", b.f1());
  out += fmt::format("{:>10.4f}\n", r.f1_at_k);
  out += fmt::format("{:<10}", "MAE");
  for (const auto& [count, b] : r.buckets) out += fmt::format("{:>10.4f}", b.mae());
  out += fmt::format("{:>10.4f}\n", r.mae);
  const TokenMetrics& t = r.token;
  out += fmt::format(
      "token accuracy {:.4f}  precision {:.4f}  recall {:.4f}  f1 {:.4f}\n",
      t.accuracy, t.precision, t.recall, t.f1);
  out += fmt::format("macro precision {:.4f}  recall {:.4f}  f1 {:.4f}\n",
                     t.macro_precision, t.macro_recall, t.macro_f1);
  out += fmt::format("mcc {:.4f}  kappa {:.4f}\n", t.mcc, t.kappa);
  out += fmt::format("confusion tp={} fp={} tn={} fn={}\n", t.confusion.tp,
                     t.confusion.fp, t.confusion.tn, t.confusion.fn);
  if (!t.degenerate.empty()) {
    out += "degenerate:";
    for (const auto& d : t.degenerate) out += " " + d;
    out += "\n";
  }
  return out;
}

std::string format_report_kv(const MetricsReport& r) {
  std::string out;
  auto put = [&out](const std::string& key, double v) {
    out += fmt::format("{}={}\n", key, v);
  };
  out += fmt::format("records={}\nunit={}\nk={}\ntolerance={}\n", r.records,
                     r.unit, r.k, r.tolerance);
  put("mae", r.mae);
  put("f1_at_k.all", r.f1_at_k);
  for (const auto& [count, b] : r.buckets) {
    out += fmt::format("bucket.{}.records={}\n", count, b.records);
    put(fmt::format("f1_at_k.{}", count), b.f1());
    put(fmt::format("mae.{}", count), b.mae());
  }
  const TokenMetrics& t = r.token;
  put("token.accuracy", t.accuracy);
  put("token.precision", t.precision);
  put("token.recall", t.recall);
  put("token.f1", t.f1);
  put("token.macro_precision", t.macro_precision);
  put("token.macro_recall", t.macro_recall);
  put("token.macro_f1", t.macro_f1);
  put("token.mcc", t.mcc);
  put("token.kappa", t.kappa);
  out += fmt::format("token.tp={}\ntoken.fp={}\ntoken.tn={}\ntoken.fn={}\n",
                     t.confusion.tp, t.confusion.fp, t.confusion.tn,
                     t.confusion.fn);
  std::string deg;
  for (const auto& d : t.degenerate) deg += (deg.empty() ? "" : ",") + d;
  out += "token.degenerate=" + deg + "\n";
  return out;
}

}  // namespace segcrf
