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

#include "segcrf/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace segcrf {

std::string_view pattern_name(Pattern pattern) {
  switch (pattern) {
    case Pattern::kHM:
      return "HM";
    case Pattern::kMH:
      return "MH";
    case Pattern::kHMH:
      return "HMH";
    case Pattern::kMHM:
      return "MHM";
    case Pattern::kHMHMH:
      return "HMHMH";
    case Pattern::kMHMHM:
      return "MHMHM";
  }
  return "?";
}

std::optional<Pattern> parse_pattern(std::string_view name) {
  for (Pattern p : kAllPatterns) {
    if (pattern_name(p) == name) return p;
  }
  return std::nullopt;
}

std::vector<int> pattern_segment_labels(Pattern pattern) {
  std::vector<int> out;
  for (char c : pattern_name(pattern)) out.push_back(c == 'M' ? kMachine : kHuman);
  return out;
}

std::vector<std::string> validate_hyperparameters(const Hyperparameters& hp) {
  std::vector<std::string> out;
  if (hp.batch_size == 0) out.push_back("batch_size: must be positive");
  if (hp.hidden_dim == 0) out.push_back("hidden_dim: must be positive");
  if (hp.num_layers == 0) out.push_back("num_layers: must be positive");
  if (hp.num_labels < 2) out.push_back("num_labels: must be at least 2");
  if (hp.max_len == 0) out.push_back("max_len: must be positive");
  if (!(hp.gradient_clip > 0)) out.push_back("gradient_clip: must be positive");
  if (!(hp.weight_decay >= 0) || !std::isfinite(hp.weight_decay))
    out.push_back("weight_decay: must be finite and non-negative");
  if (hp.llrd_rates.size() != 4) {
    out.push_back("llrd_rates: expected 4 rates");
  } else {
    for (std::size_t i = 0; i < hp.llrd_rates.size(); ++i) {
      if (!(hp.llrd_rates[i] > 0)) out.push_back("llrd_rates: must be positive");
      if (i > 0 && !(hp.llrd_rates[i] > hp.llrd_rates[i - 1]))
        out.push_back("llrd_rates: must be strictly increasing");
    }
  }
  return out;
}

BoundarySet extract_boundaries(const LabelSequence& labels) {
  BoundarySet out;
  for (std::size_t j = 1; j < labels.size(); ++j) {
    if (labels[j] != labels[j - 1]) out.push_back(j);
  }
  return out;
}

LabelSequence labels_from_boundaries(int first_label, const BoundarySet& bounds,
                                     std::size_t length) {
  LabelSequence out(length, first_label);
  int current = first_label;
  std::size_t next = 0;
  for (std::size_t j = 0; j < length; ++j) {
    if (next < bounds.size() && bounds[next] == j) {
      current = 1 - current;
      ++next;
    }
    out[j] = current;
  }
  return out;
}

LabelSequence segment_labels_to_token_labels(
    const std::vector<int>& segment_labels,
    const std::vector<std::size_t>& segment_token_counts) {
  if (segment_labels.size() != segment_token_counts.size()) {
    throw DataError("segment labels and counts differ in length");
  }
  LabelSequence out;
  for (std::size_t s = 0; s < segment_labels.size(); ++s) {
    if (segment_token_counts[s] == 0) {
      throw DataError("segment " + std::to_string(s) + " has zero tokens");
    }
    if (segment_labels[s] != kHuman && segment_labels[s] != kMachine) {
      throw DataError("segment " + std::to_string(s) + " label outside {0,1}");
    }
    out.insert(out.end(), segment_token_counts[s], segment_labels[s]);
  }
  return out;
}

std::size_t count_runs(const LabelSequence& labels) {
  if (labels.empty()) return 0;
  return extract_boundaries(labels).size() + 1;
}

std::vector<std::string> validate_record(const MixedTextRecord& record,
                                         std::size_t max_len) {
  std::vector<std::string> out;
  if (record.id.empty()) out.push_back("id empty");
  if (record.tokens.empty()) out.push_back("tokens empty");
  if (record.tokens.size() > max_len) {
    out.push_back("tokens: length " + std::to_string(record.tokens.size()) +
                  " exceeds max_len " + std::to_string(max_len));
  }
  if (record.gold_labels.size() != record.tokens.size()) {
    out.push_back("gold_labels: length differs from tokens");
  }
  bool labels_binary = std::all_of(
      record.gold_labels.begin(), record.gold_labels.end(),
      [](int y) { return y == kHuman || y == kMachine; });
  if (!labels_binary) out.push_back("gold_labels: element outside {0,1}");
  if (labels_binary && !record.gold_labels.empty()) {
    std::vector<int> segs = pattern_segment_labels(record.pattern);
    if (count_runs(record.gold_labels) != segs.size() ||
        record.gold_labels.front() != segs.front()) {
      out.push_back("pattern/label run mismatch");
    }
  }
  return out;
}

}  // namespace segcrf
